#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace avos {

using LabelId = uint16_t;

inline constexpr std::string_view kUnknownLabel = "unknown";
inline constexpr std::string_view kIgnoredLabel = "ignored";
inline constexpr LabelId kUnknownId = 0;
inline constexpr LabelId kIgnoredId = 1;

/// Interns semantic label strings as small integers. Ids 0 and 1 are always
/// "unknown" and "ignored".
class LabelIndex {
 public:
  LabelIndex() {
    intern(kUnknownLabel);
    intern(kIgnoredLabel);
  }

  LabelId intern(std::string_view label) {
    auto it = ids_.find(std::string(label));
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<LabelId>(names_.size());
    names_.emplace_back(label);
    ids_.emplace(std::string(label), id);
    return id;
  }

  /// Returns kUnknownId for labels never interned.
  LabelId find(std::string_view label) const {
    auto it = ids_.find(std::string(label));
    return it == ids_.end() ? kUnknownId : it->second;
  }

  const std::string& name(LabelId id) const { return names_.at(id); }
  size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, LabelId, std::less<>> ids_;
};

}  // namespace avos
