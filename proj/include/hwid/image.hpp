#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hwid {

/// Inclusive pixel rectangle in image coordinates.
struct BoundingBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  int width() const { return x_max - x_min + 1; }
  int height() const { return y_max - y_min + 1; }

  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }

  BoundingBox united(const BoundingBox& o) const {
    return {std::min(x_min, o.x_min), std::min(y_min, o.y_min),
            std::max(x_max, o.x_max), std::max(y_max, o.y_max)};
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/**
 * Row-major 8-bit raster. The tag parameter keeps grayscale and mask images
 * distinct types while sharing storage and accessors.
 */
template <typename Tag>
class Raster {
 public:
  using value_type = std::uint8_t;

  Raster(int width, int height, value_type fill = 0)
      : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw std::invalid_argument("raster dimensions must be >= 1, got " +
                                  std::to_string(width) + "x" +
                                  std::to_string(height));
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  Raster(int width, int height, std::vector<value_type> data)
      : Raster(width, height) {
    if (data.size() != data_.size()) {
      throw std::invalid_argument("raster data length does not match dimensions");
    }
    data_ = std::move(data);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  bool in_bounds(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  BoundingBox bounds() const { return {0, 0, width_ - 1, height_ - 1}; }

  value_type& operator()(int x, int y) {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  value_type operator()(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<value_type> row(int y) {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<const value_type> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }

  std::span<value_type> pixels() { return data_; }
  std::span<const value_type> pixels() const { return data_; }
  const std::vector<value_type>& data() const { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int width_;
  int height_;
  std::vector<value_type> data_;
};

struct GrayTag {};
struct MaskTag {};

/// 8-bit intensities, 0 = black, 255 = white.
using GrayImage = Raster<GrayTag>;

/**
 * Foreground/background mask. Pixels hold 1 for foreground (ink) and 0 for
 * background. Images produced by binarization carry the threshold used.
 */
class BinaryImage : public Raster<MaskTag> {
 public:
  using Raster<MaskTag>::Raster;

  BinaryImage(Raster<MaskTag> raster, std::optional<std::uint8_t> threshold = {})
      : Raster<MaskTag>(std::move(raster)), otsu_threshold(threshold) {}

  bool foreground(int x, int y) const { return (*this)(x, y) != 0; }

  std::size_t count_foreground() const {
    std::size_t n = 0;
    for (auto v : pixels()) n += v != 0;
    return n;
  }

  std::optional<std::uint8_t> otsu_threshold;

  friend bool operator==(const BinaryImage& a, const BinaryImage& b) {
    return static_cast<const Raster<MaskTag>&>(a) ==
           static_cast<const Raster<MaskTag>&>(b);
  }
};

/// Pixelwise complement of a mask.
inline BinaryImage invert(const BinaryImage& img) {
  BinaryImage out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 0 : 1;
  return out;
}

/// Renders a mask as a grayscale page: foreground black on white.
inline GrayImage to_gray(const BinaryImage& img) {
  GrayImage out(img.width(), img.height(), 255);
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 0 : 255;
  return out;
}

}  // namespace hwid
