#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace avos {

/// 8-bit RGB, row-major, 3 bytes per pixel.
void write_png_rgb8(const std::filesystem::path& path, int width, int height,
                    std::span<const uint8_t> rgb);

/// 16-bit single channel, row-major.
void write_png_gray16(const std::filesystem::path& path, int width, int height,
                      std::span<const uint16_t> values);

struct Gray16Image {
  int width = 0;
  int height = 0;
  std::vector<uint16_t> values;
};

struct Rgb8Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> rgb;
};

Gray16Image read_png_gray16(const std::filesystem::path& path);
Rgb8Image read_png_rgb8(const std::filesystem::path& path);

}  // namespace avos
