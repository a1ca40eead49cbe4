#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hwid/image.hpp"

namespace hwid {

enum class SeShape { Rect, Cross };

/// Centered structuring element with odd extents.
struct StructuringElement {
  SeShape shape = SeShape::Rect;
  int width = 3;
  int height = 3;

  static StructuringElement rect(int w, int h) { return make(SeShape::Rect, w, h); }
  static StructuringElement cross(int w, int h) { return make(SeShape::Cross, w, h); }

  static StructuringElement make(SeShape shape, int w, int h) {
    StructuringElement se{shape, w, h};
    se.validate();
    return se;
  }

  void validate() const {
    if (width < 1 || height < 1 || width % 2 == 0 || height % 2 == 0) {
      throw std::invalid_argument("structuring element extents must be odd and >= 1, got " +
                                  std::to_string(width) + "x" + std::to_string(height));
    }
  }

  /// True when offset (dx, dy) from the anchor belongs to the element.
  bool covers(int dx, int dy) const {
    const int rx = width / 2;
    const int ry = height / 2;
    if (dx < -rx || dx > rx || dy < -ry || dy > ry) return false;
    return shape == SeShape::Rect || dx == 0 || dy == 0;
  }

  friend bool operator==(const StructuringElement&, const StructuringElement&) = default;
};

/// Value assumed for pixels outside the image.
enum class Outside { Background, Foreground };

namespace detail {

enum class LineOp { Any, All };

// 1-D window pass along rows (horizontal) or columns (vertical) using a
// running prefix count. Out-of-image window positions count as foreground
// only when outside == Foreground.
inline BinaryImage line_pass(const BinaryImage& img, int radius, bool horizontal,
                             LineOp op, Outside outside) {
  const int w = img.width();
  const int h = img.height();
  BinaryImage out(w, h);
  const int len = horizontal ? w : h;
  const int lanes = horizontal ? h : w;
  const int window = 2 * radius + 1;
  std::vector<int> prefix(static_cast<std::size_t>(len) + 1);
  for (int lane = 0; lane < lanes; ++lane) {
    prefix[0] = 0;
    for (int i = 0; i < len; ++i) {
      const bool fg = horizontal ? img.foreground(i, lane) : img.foreground(lane, i);
      prefix[i + 1] = prefix[i] + (fg ? 1 : 0);
    }
    for (int i = 0; i < len; ++i) {
      const int lo = i - radius;
      const int hi = i + radius;
      const int clo = std::max(lo, 0);
      const int chi = std::min(hi, len - 1);
      int count = prefix[chi + 1] - prefix[clo];
      if (outside == Outside::Foreground) count += (clo - lo) + (hi - chi);
      const bool v = op == LineOp::Any ? count > 0 : count == window;
      if (horizontal) {
        out(i, lane) = v;
      } else {
        out(lane, i) = v;
      }
    }
  }
  return out;
}

inline BinaryImage combine(const BinaryImage& a, const BinaryImage& b, LineOp op) {
  BinaryImage out(a.width(), a.height());
  auto pa = a.pixels();
  auto pb = b.pixels();
  auto po = out.pixels();
  for (std::size_t i = 0; i < po.size(); ++i) {
    po[i] = op == LineOp::Any ? (pa[i] | pb[i]) : (pa[i] & pb[i]);
  }
  return out;
}

inline BinaryImage morph(const BinaryImage& img, const StructuringElement& se, LineOp op,
                         Outside outside) {
  se.validate();
  const int rx = se.width / 2;
  const int ry = se.height / 2;
  if (se.shape == SeShape::Rect) {
    // Rect = horizontal segment (+) vertical segment; the vertical pass sees
    // out-of-image rows with the same convention, so separation is exact.
    return line_pass(line_pass(img, rx, true, op, outside), ry, false, op, outside);
  }
  return combine(line_pass(img, rx, true, op, outside),
                 line_pass(img, ry, false, op, outside), op);
}

}  // namespace detail

/// out[p] is foreground iff any foreground pixel lies under the element at p.
inline BinaryImage dilate(const BinaryImage& img, const StructuringElement& se,
                          Outside outside = Outside::Background) {
  return detail::morph(img, se, detail::LineOp::Any, outside);
}

/// out[p] is foreground iff every pixel under the element at p is foreground.
inline BinaryImage erode(const BinaryImage& img, const StructuringElement& se,
                         Outside outside = Outside::Background) {
  return detail::morph(img, se, detail::LineOp::All, outside);
}

}  // namespace hwid
