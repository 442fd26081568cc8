#include "avos/core/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

#include "avos/core/errors.hpp"

namespace avos {
namespace {

struct FileCloser {
  void operator()(FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error("cannot open " + path.string());
  return f;
}

void write_png(const std::filesystem::path& path, int width, int height, int color_type,
               int bit_depth, const std::vector<png_bytep>& rows) {
  FilePtr f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("png write failed for " + path.string());
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);  // host order is little-endian, PNG is big-endian
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

template <typename Fn>
void read_png(const std::filesystem::path& path, Fn&& on_header) {
  FilePtr f = open_file(path, "rb");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("png read failed for " + path.string());
  }
  png_init_io(png, f.get());
  png_read_info(png, info);
  on_header(png, info);
  png_destroy_read_struct(&png, &info, nullptr);
}

}  // namespace

void write_png_rgb8(const std::filesystem::path& path, int width, int height,
                    std::span<const uint8_t> rgb) {
  if (rgb.size() != static_cast<size_t>(width) * height * 3) throw Error("rgb size mismatch");
  std::vector<png_bytep> rows(static_cast<size_t>(height));
  for (int r = 0; r < height; ++r)
    rows[static_cast<size_t>(r)] = const_cast<png_bytep>(rgb.data() + static_cast<size_t>(r) * width * 3);
  write_png(path, width, height, PNG_COLOR_TYPE_RGB, 8, rows);
}

void write_png_gray16(const std::filesystem::path& path, int width, int height,
                      std::span<const uint16_t> values) {
  if (values.size() != static_cast<size_t>(width) * height) throw Error("gray16 size mismatch");
  std::vector<png_bytep> rows(static_cast<size_t>(height));
  for (int r = 0; r < height; ++r)
    rows[static_cast<size_t>(r)] = reinterpret_cast<png_bytep>(
        const_cast<uint16_t*>(values.data() + static_cast<size_t>(r) * width));
  write_png(path, width, height, PNG_COLOR_TYPE_GRAY, 16, rows);
}

Gray16Image read_png_gray16(const std::filesystem::path& path) {
  Gray16Image img;
  read_png(path, [&](png_structp png, png_infop info) {
    if (png_get_bit_depth(png, info) != 16 || png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY)
      throw ParseError("not a 16-bit gray png");
    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    png_set_swap(png);
    img.values.resize(static_cast<size_t>(img.width) * img.height);
    std::vector<png_bytep> rows(static_cast<size_t>(img.height));
    for (int r = 0; r < img.height; ++r)
      rows[static_cast<size_t>(r)] =
          reinterpret_cast<png_bytep>(img.values.data() + static_cast<size_t>(r) * img.width);
    png_read_image(png, rows.data());
  });
  return img;
}

Rgb8Image read_png_rgb8(const std::filesystem::path& path) {
  Rgb8Image img;
  read_png(path, [&](png_structp png, png_infop info) {
    if (png_get_bit_depth(png, info) != 8 || png_get_color_type(png, info) != PNG_COLOR_TYPE_RGB)
      throw ParseError("not an 8-bit rgb png");
    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    img.rgb.resize(static_cast<size_t>(img.width) * img.height * 3);
    std::vector<png_bytep> rows(static_cast<size_t>(img.height));
    for (int r = 0; r < img.height; ++r)
      rows[static_cast<size_t>(r)] = img.rgb.data() + static_cast<size_t>(r) * img.width * 3;
    png_read_image(png, rows.data());
  });
  return img;
}

}  // namespace avos
