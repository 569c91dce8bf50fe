// Copyright (c) 2026 The tfa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TFA_IMAGE_HPP
#define TFA_IMAGE_HPP

#include <png.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "tfa/errors.hpp"
#include "tfa/tensor.hpp"

namespace tfa {

/// An RGB image with pixels stored channel-first ([3,H,W]) as doubles in
/// [0,255]. Values need not be integral: adversarial examples stay in
/// continuous pixel space until they are exported.
struct Image {
  Tensor pixels;   // [3,H,W]
  std::string id;

  std::size_t height() const { return pixels.dim(1); }
  std::size_t width() const { return pixels.dim(2); }
};

inline Image make_image(std::size_t height, std::size_t width, double fill = 0.0,
                        std::string id = "") {
  if (height < 1 || width < 1) throw DimensionError("make_image: empty image");
  Image img{Tensor({3, height, width}, fill), std::move(id)};
  return img;
}

inline void validate_image(const Image& img, const char* what = "image") {
  if (img.pixels.rank() != 3 || img.pixels.dim(0) != 3)
    throw DimensionError(std::string(what) + ": expected [3,H,W] pixels");
  for (double v : img.pixels)
    if (!(v >= 0.0 && v <= 255.0))
      throw NumericalError(std::string(what) + ": pixel outside [0,255]");
}

/// Round to the nearest 8-bit level and clamp. This is the only place the
/// toolkit quantizes; everything upstream works on continuous pixels.
inline std::uint8_t quantize_u8(double v) {
  double r = std::llround(clip(v, 0.0, 255.0));
  return static_cast<std::uint8_t>(r);
}

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace detail

/// Writes an image as 8-bit RGB PNG. PNG is lossless, which the attack
/// pipeline relies on: a lossy format would silently break the L-inf budget.
inline void write_png(const Image& img, const std::string& path) {
  validate_image(img, "write_png");
  const std::size_t h = img.height(), w = img.width();

  detail::FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("write_png: cannot open " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("write_png: png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("write_png: png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("write_png: libpng error writing " + path);
  }

  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<std::uint8_t> row(w * 3);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x)
      for (std::size_t c = 0; c < 3; ++c)
        row[x * 3 + c] = quantize_u8(img.pixels.at(c, y, x));
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

/// Reads an 8-bit PNG as RGB. Grayscale and palette images are expanded,
/// alpha is stripped.
inline Image read_png(const std::string& path, std::string id = "") {
  detail::FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("read_png: cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("read_png: png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("read_png: png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("read_png: libpng error reading " + path);
  }

  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  const std::size_t h = png_get_image_height(png, info);
  const std::size_t w = png_get_image_width(png, info);
  if (png_get_channels(png, info) != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("read_png: could not normalize " + path + " to RGB");
  }

  Image img = make_image(h, w, 0.0, id.empty() ? path : std::move(id));
  std::vector<std::uint8_t> row(w * 3);
  for (std::size_t y = 0; y < h; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (std::size_t x = 0; x < w; ++x)
      for (std::size_t c = 0; c < 3; ++c)
        img.pixels.at(c, y, x) = static_cast<double>(row[x * 3 + c]);
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

/// Nearest-neighbor resize. Used to bring heterogeneous sources to a
/// detector's canonical input size before an attack; it is not part of any
/// differentiable path.
inline Image resize_nearest(const Image& img, std::size_t height, std::size_t width) {
  if (img.height() == height && img.width() == width) return img;
  Image out = make_image(height, width, 0.0, img.id);
  for (std::size_t y = 0; y < height; ++y) {
    const std::size_t sy =
        std::min(img.height() - 1, static_cast<std::size_t>(y * img.height() / height));
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t sx =
          std::min(img.width() - 1, static_cast<std::size_t>(x * img.width() / width));
      for (std::size_t c = 0; c < 3; ++c) out.pixels.at(c, y, x) = img.pixels.at(c, sy, sx);
    }
  }
  return out;
}

}  // namespace tfa

#endif  // TFA_IMAGE_HPP
