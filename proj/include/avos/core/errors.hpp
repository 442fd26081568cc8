#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace avos {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class InfeasibleActionError : public Error {
 public:
  using Error::Error;
};

class DeadEndError : public Error {
 public:
  using Error::Error;
};

class OracleFailure : public Error {
 public:
  using Error::Error;
};

struct Violation {
  std::string path;
  std::string message;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error(summarize(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& vs) {
    std::string s = "validation failed:";
    for (const auto& v : vs) s += " [" + v.path + ": " + v.message + "]";
    return s;
  }
  std::vector<Violation> violations_;
};

}  // namespace avos
