#pragma once

// PNG file I/O: 8-bit RGB for color images, 16-bit grayscale for masks and
// depth previews. Values are [0,1] floats in memory and quantized only here.

#include <png.h>

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pano4d/image.hpp"

namespace pano4d {

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

template <typename Img>
inline void write_png_impl(const Img& img, const std::string& path, bool gray16) {
  if (!gray16 && img.channels != 3)
    throw std::invalid_argument("8-bit PNG writer expects 3 channels: " + path);
  if (gray16 && img.channels != 1)
    throw std::invalid_argument("16-bit PNG writer expects 1 channel: " + path);

  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot open for writing: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng write failure: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.width, img.height, gray16 ? 16 : 8,
               gray16 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  if (gray16) {
    std::vector<std::uint16_t> row(img.width);
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        double v = clamp01(img.at(x, y)[0]);
        std::uint16_t q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
        row[x] = static_cast<std::uint16_t>((q >> 8) | (q << 8));  // PNG is big-endian
      }
      png_write_row(png, reinterpret_cast<png_bytep>(row.data()));
    }
  } else {
    std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x)
        for (int c = 0; c < 3; ++c)
          row[x * 3 + c] =
              static_cast<std::uint8_t>(std::lround(clamp01(img.at(x, y)[c]) * 255.0));
      png_write_row(png, row.data());
    }
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

template <typename Img>
inline Img read_png_impl(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open for reading: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("libpng read failure: " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_uint_32 w = png_get_image_width(png, info);
  png_uint_32 h = png_get_image_height(png, info);
  int depth = png_get_bit_depth(png, info);
  int color = png_get_color_type(png, info);

  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  color = png_get_color_type(png, info);
  depth = png_get_bit_depth(png, info);
  int channels = (color == PNG_COLOR_TYPE_GRAY) ? 1 : 3;

  Img img(static_cast<int>(w), static_cast<int>(h), channels);
  std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * channels * (depth / 8));
  for (png_uint_32 y = 0; y < h; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < w; ++x)
      for (int c = 0; c < channels; ++c) {
        double v;
        if (depth == 16) {
          std::size_t i = (x * channels + c) * 2;
          v = ((row[i] << 8) | row[i + 1]) / 65535.0;
        } else {
          v = row[x * channels + c] / 255.0;
        }
        img.at(static_cast<int>(x), static_cast<int>(y))[c] = static_cast<float>(v);
      }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

}  // namespace detail

inline void write_png_rgb(const EquirectImage& img, const std::string& path) {
  detail::write_png_impl(img, path, false);
}
inline void write_png_rgb(const PerspectiveImage& img, const std::string& path) {
  detail::write_png_impl(img, path, false);
}
inline void write_png_gray16(const EquirectImage& img, const std::string& path) {
  detail::write_png_impl(img, path, true);
}
inline void write_png_gray16(const PerspectiveImage& img, const std::string& path) {
  detail::write_png_impl(img, path, true);
}

inline EquirectImage read_png_equirect(const std::string& path) {
  return detail::read_png_impl<EquirectImage>(path);
}
inline PerspectiveImage read_png_perspective(const std::string& path) {
  return detail::read_png_impl<PerspectiveImage>(path);
}

}  // namespace pano4d
