#pragma once

#include <array>
#include <cstdint>

#include "hwid/image.hpp"

namespace hwid {

using Histogram = std::array<std::uint64_t, 256>;

inline Histogram histogram(const GrayImage& img) {
  Histogram h{};
  for (auto v : img.pixels()) ++h[v];
  return h;
}

namespace detail {

using u128 = unsigned __int128;

// Exact comparison of a/b against c/d for b, d > 0 by continued-fraction
// expansion. Returns <0, 0, >0.
inline int compare_fractions(u128 a, u128 b, u128 c, u128 d) {
  bool flipped = false;
  for (;;) {
    const u128 qa = a / b;
    const u128 qc = c / d;
    if (qa != qc) {
      const int r = qa < qc ? -1 : 1;
      return flipped ? -r : r;
    }
    a -= qa * b;
    c -= qc * d;
    if (a == 0 || c == 0) {
      if (a == 0 && c == 0) return 0;
      const int r = a == 0 ? -1 : 1;
      return flipped ? -r : r;
    }
    // a/b < c/d  <=>  b/a > d/c
    const u128 next_a = b, next_b = a, next_c = d, next_d = c;
    a = next_a;
    b = next_b;
    c = next_c;
    d = next_d;
    flipped = !flipped;
  }
}

}  // namespace detail

/**
 * Otsu threshold over a 256-bin histogram.
 *
 * Class 0 holds intensities <= t. The between-class variance
 * w0 w1 (mu0 - mu1)^2 equals (N S0 - S n0)^2 / (N^2 n0 n1), so candidates are
 * ranked by the exact rational (N S0 - S n0)^2 / (n0 n1). The smallest
 * maximizing t wins. When every candidate scores zero (a single occupied bin)
 * the occupied intensity is returned.
 */
inline std::uint8_t otsu_threshold(const Histogram& h) {
  std::uint64_t total = 0;
  std::uint64_t sum = 0;
  int lowest = -1;
  for (int i = 0; i < 256; ++i) {
    total += h[i];
    sum += h[i] * static_cast<std::uint64_t>(i);
    if (lowest < 0 && h[i] != 0) lowest = i;
  }
  if (total == 0) return 0;
  // Keeps (N S0 - S n0)^2 inside 128 bits.
  if (total >= (std::uint64_t{1} << 28)) {
    throw std::invalid_argument("otsu_threshold: image exceeds 2^28 pixels");
  }

  int best = -1;
  detail::u128 best_num = 0;
  detail::u128 best_den = 1;
  std::uint64_t n0 = 0;
  std::uint64_t s0 = 0;
  for (int t = 0; t < 256; ++t) {
    n0 += h[t];
    s0 += h[t] * static_cast<std::uint64_t>(t);
    const std::uint64_t n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const detail::u128 lhs = static_cast<detail::u128>(total) * s0;
    const detail::u128 rhs = static_cast<detail::u128>(sum) * n0;
    const detail::u128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
    if (diff == 0) continue;
    const detail::u128 num = diff * diff;
    const detail::u128 den = static_cast<detail::u128>(n0) * n1;
    if (best < 0 || detail::compare_fractions(num, den, best_num, best_den) > 0) {
      best = t;
      best_num = num;
      best_den = den;
    }
  }
  return static_cast<std::uint8_t>(best < 0 ? lowest : best);
}

inline std::uint8_t otsu_threshold(const GrayImage& img) {
  return otsu_threshold(histogram(img));
}

/// Mean intensity above the threshold minus mean at or below it (0 if either class is empty).
inline double class_separation(const Histogram& h, std::uint8_t t) {
  double n0 = 0, s0 = 0, n1 = 0, s1 = 0;
  for (int i = 0; i < 256; ++i) {
    (i <= t ? n0 : n1) += static_cast<double>(h[i]);
    (i <= t ? s0 : s1) += static_cast<double>(h[i]) * i;
  }
  return n0 == 0 || n1 == 0 ? 0.0 : s1 / n1 - s0 / n0;
}

/**
 * Foreground is intensity <= Otsu threshold (dark ink on light paper). An
 * image with a single intensity has no contrast and yields no foreground, as
 * does one whose two Otsu classes differ in mean by less than min_contrast.
 */
inline BinaryImage binarize(const GrayImage& img, double min_contrast = 0.0) {
  const Histogram h = histogram(img);
  const std::uint8_t t = otsu_threshold(h);
  BinaryImage out(img.width(), img.height());
  out.otsu_threshold = t;
  if (h[t] == img.size()) return out;
  if (min_contrast > 0.0 && class_separation(h, t) < min_contrast) return out;
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] <= t ? 1 : 0;
  return out;
}

}  // namespace hwid
