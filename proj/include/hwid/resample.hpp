#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "hwid/image.hpp"

namespace hwid {

namespace detail {

struct Tap {
  int i0;
  int i1;
  double frac;
};

// Pixel-center aligned source coordinate, clamped to the source extent.
inline Tap source_tap(int dst, int src_len, int dst_len) {
  double s = (dst + 0.5) * static_cast<double>(src_len) / dst_len - 0.5;
  s = std::clamp(s, 0.0, static_cast<double>(src_len - 1));
  const int i0 = static_cast<int>(std::floor(s));
  const int i1 = std::min(i0 + 1, src_len - 1);
  return {i0, i1, s - i0};
}

}  // namespace detail

/// Bilinear resize with pixel-center alignment. Same-size resize is the identity.
inline GrayImage resize_bilinear(const GrayImage& img, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) {
    throw std::invalid_argument("resize_bilinear: output size must be >= 1");
  }
  GrayImage out(out_w, out_h);
  std::vector<detail::Tap> xs(out_w);
  for (int x = 0; x < out_w; ++x) xs[x] = detail::source_tap(x, img.width(), out_w);
  for (int y = 0; y < out_h; ++y) {
    const auto ty = detail::source_tap(y, img.height(), out_h);
    for (int x = 0; x < out_w; ++x) {
      const auto& tx = xs[x];
      const double top = img(tx.i0, ty.i0) * (1.0 - tx.frac) + img(tx.i1, ty.i0) * tx.frac;
      const double bottom = img(tx.i0, ty.i1) * (1.0 - tx.frac) + img(tx.i1, ty.i1) * tx.frac;
      const double v = top * (1.0 - ty.frac) + bottom * ty.frac;
      out(x, y) = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
    }
  }
  return out;
}

/// Exact sub-rectangle copy. Works for any raster kind.
template <typename Image>
Image crop(const Image& img, const BoundingBox& box) {
  if (box.x_min < 0 || box.y_min < 0 || box.x_max >= img.width() ||
      box.y_max >= img.height() || box.x_min > box.x_max || box.y_min > box.y_max) {
    throw std::out_of_range("crop: box (" + std::to_string(box.x_min) + "," +
                            std::to_string(box.y_min) + ")-(" + std::to_string(box.x_max) +
                            "," + std::to_string(box.y_max) + ") outside " +
                            std::to_string(img.width()) + "x" + std::to_string(img.height()));
  }
  Image out = [&] {
    if constexpr (std::is_same_v<Image, BinaryImage>) {
      BinaryImage b(box.width(), box.height());
      b.otsu_threshold = img.otsu_threshold;
      return b;
    } else {
      return Image(box.width(), box.height());
    }
  }();
  for (int y = 0; y < box.height(); ++y) {
    auto src = img.row(box.y_min + y).subspan(box.x_min, box.width());
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

/// Places img centered on a canvas of the given size; excess is cropped centrally.
inline GrayImage center_on_canvas(const GrayImage& img, int canvas_w, int canvas_h,
                                  std::uint8_t fill = 255) {
  GrayImage out(canvas_w, canvas_h, fill);
  const int off_x = (canvas_w - img.width()) / 2;
  const int off_y = (canvas_h - img.height()) / 2;
  for (int y = 0; y < canvas_h; ++y) {
    const int sy = y - off_y;
    if (sy < 0 || sy >= img.height()) continue;
    for (int x = 0; x < canvas_w; ++x) {
      const int sx = x - off_x;
      if (sx < 0 || sx >= img.width()) continue;
      out(x, y) = img(sx, sy);
    }
  }
  return out;
}

inline GrayImage pad_to_square(const GrayImage& img, std::uint8_t fill = 255) {
  const int side = std::max(img.width(), img.height());
  return center_on_canvas(img, side, side, fill);
}

}  // namespace hwid
