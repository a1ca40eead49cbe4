#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hwid/image.hpp"

namespace hwid {

struct CannyParams {
  double sigma = 1.0;
  double low = 50.0;
  double high = 150.0;
};

namespace detail {

class FloatImage {
 public:
  FloatImage(int w, int h) : w_(w), h_(h), data_(static_cast<std::size_t>(w) * h, 0.0f) {}
  int width() const { return w_; }
  int height() const { return h_; }
  float& operator()(int x, int y) { return data_[static_cast<std::size_t>(y) * w_ + x]; }
  float operator()(int x, int y) const { return data_[static_cast<std::size_t>(y) * w_ + x]; }
  // Replicated border.
  float clamped(int x, int y) const {
    return (*this)(std::clamp(x, 0, w_ - 1), std::clamp(y, 0, h_ - 1));
  }

 private:
  int w_;
  int h_;
  std::vector<float> data_;
};

inline std::array<float, 5> gaussian_taps(double sigma) {
  std::array<double, 5> k{};
  double sum = 0.0;
  for (int i = -2; i <= 2; ++i) {
    k[i + 2] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += k[i + 2];
  }
  std::array<float, 5> out{};
  for (int i = 0; i < 5; ++i) out[i] = static_cast<float>(k[i] / sum);
  return out;
}

inline FloatImage gaussian_5x5(const GrayImage& img, double sigma) {
  const auto taps = gaussian_taps(sigma);
  const int w = img.width();
  const int h = img.height();
  FloatImage src(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) src(x, y) = img(x, y);
  FloatImage tmp(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int i = -2; i <= 2; ++i) acc += taps[i + 2] * src.clamped(x + i, y);
      tmp(x, y) = acc;
    }
  FloatImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int i = -2; i <= 2; ++i) acc += taps[i + 2] * tmp.clamped(x, y + i);
      out(x, y) = acc;
    }
  return out;
}

}  // namespace detail

/**
 * Canny detector: 5x5 Gaussian smoothing, Sobel gradients, non-maximum
 * suppression over 4 quantized directions, hysteresis with 8-connected weak
 * edges. Thresholds apply to the L2 Sobel magnitude of 8-bit intensities.
 */
inline BinaryImage canny_edges(const GrayImage& img, const CannyParams& params = {}) {
  if (params.low < 0.0 || params.low > params.high) {
    throw std::invalid_argument("canny_edges: require 0 <= low <= high");
  }
  const int w = img.width();
  const int h = img.height();
  const detail::FloatImage s = detail::gaussian_5x5(img, params.sigma);

  detail::FloatImage gx(w, h), gy(w, h), mag(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float dx = (s.clamped(x + 1, y - 1) + 2 * s.clamped(x + 1, y) + s.clamped(x + 1, y + 1)) -
                       (s.clamped(x - 1, y - 1) + 2 * s.clamped(x - 1, y) + s.clamped(x - 1, y + 1));
      const float dy = (s.clamped(x - 1, y + 1) + 2 * s.clamped(x, y + 1) + s.clamped(x + 1, y + 1)) -
                       (s.clamped(x - 1, y - 1) + 2 * s.clamped(x, y - 1) + s.clamped(x + 1, y - 1));
      gx(x, y) = dx;
      gy(x, y) = dy;
      mag(x, y) = std::sqrt(dx * dx + dy * dy);
    }
  }

  // tan(22.5 deg) and tan(67.5 deg) split the half-plane into 4 sectors.
  constexpr float tan22 = 0.41421356f;
  constexpr float tan67 = 2.41421356f;
  auto mag_at = [&](int x, int y) { return mag.clamped(x, y); };

  enum : std::uint8_t { None = 0, Weak = 1, Strong = 2 };
  std::vector<std::uint8_t> cls(static_cast<std::size_t>(w) * h, None);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float m = mag(x, y);
      if (m <= 0.0f || m < params.low) continue;
      const float ax = std::abs(gx(x, y));
      const float ay = std::abs(gy(x, y));
      int ox = 0, oy = 0;
      if (ay <= tan22 * ax) {
        ox = 1;
      } else if (ay >= tan67 * ax) {
        oy = 1;
      } else {
        ox = 1;
        oy = (gx(x, y) > 0) == (gy(x, y) > 0) ? 1 : -1;
      }
      // Strict on the trailing side, inclusive on the leading side keeps
      // plateaus one pixel wide.
      if (m > mag_at(x - ox, y - oy) && m >= mag_at(x + ox, y + oy)) {
        cls[static_cast<std::size_t>(y) * w + x] = m >= params.high ? Strong : Weak;
      }
    }
  }

  BinaryImage out(w, h);
  std::vector<int> stack;
  for (int i = 0; i < w * h; ++i) {
    if (cls[i] == Strong) stack.push_back(i);
  }
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    const int x = i % w;
    const int y = i / w;
    if (out(x, y)) continue;
    out(x, y) = 1;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (!out.in_bounds(nx, ny) || out(nx, ny)) continue;
        const int j = ny * w + nx;
        if (cls[j] != None) stack.push_back(j);
      }
    }
  }
  return out;
}

}  // namespace hwid
