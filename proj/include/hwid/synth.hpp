#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hwid/error.hpp"
#include "hwid/image.hpp"
#include "hwid/random.hpp"

// Synthetic handwriting pages: cursive-like polylines drawn right to left,
// with writer-specific stroke thickness, slant, baseline wobble, spacing and
// glyph repertoire. Ground truth (ink mask, line boxes, specks) is exact.

namespace hwid {

struct SynthStyle {
  std::string writer_id;
  int stroke_thickness = 3;    // px
  double slant = 0.0;          // degrees, positive leans right
  double baseline_wobble = 1.0;  // px amplitude
  int glyph_spacing = 6;       // px between words, scaled
  double letter_size = 0.24;   // body height as a fraction of line pitch
  std::uint64_t seed = 0;      // page-level randomness

  friend bool operator==(const SynthStyle&, const SynthStyle&) = default;
};

/// Deterministic, pairwise-distinct style for writer number `index`. Writers
/// sharing a stroke thickness differ in slant among the first 25.
inline SynthStyle style_for_writer(int index, const std::string& writer_id) {
  static constexpr int thickness[] = {2, 4, 6, 8, 10};
  static constexpr double slant[] = {-24.0, -8.0, 8.0, 24.0, 0.0};
  static constexpr double size[] = {0.24, 0.18, 0.30, 0.21, 0.27};
  SynthStyle s;
  s.writer_id = writer_id;
  const int r = index % 5;
  const int q = index / 5;
  s.stroke_thickness = thickness[r];
  s.slant = slant[(2 * r + q) % 5];
  s.letter_size = size[(r + 3 * q) % 5];
  s.baseline_wobble = 0.5 + 0.9 * ((index * 7) % 5);
  s.glyph_spacing = 4 + 3 * ((index / 25) % 5) + (index * 5) % 3;
  return s;
}

struct SynthPage {
  GrayImage image;
  BinaryImage ink;
  std::vector<BoundingBox> line_boxes;
  std::vector<BoundingBox> specks;
};

namespace detail {

struct Point {
  double x;
  double y;
};

// A glyph prototype: control points in body-height units, x growing leftward
// from the glyph's right edge, y up from the baseline. Starts and ends on the
// baseline so glyphs join.
struct Glyph {
  std::vector<Point> points;
  double advance = 1.0;
  bool dotted = false;
};

inline std::vector<Glyph> glyph_repertoire(const std::string& writer_id) {
  RandomStream rng(mix64(fnv1a(writer_id), 0x5eed));
  std::vector<Glyph> glyphs;
  const int count = 7;
  for (int g = 0; g < count; ++g) {
    Glyph glyph;
    glyph.advance = rng.uniform(0.6, 1.4);
    const int inner = rng.between(2, 4);
    // The first prototype is a tall stroke so every word reaches the ascender zone.
    glyph.points.push_back({0.0, 0.0});
    for (int i = 1; i <= inner; ++i) {
      const double x = glyph.advance * i / (inner + 1);
      double y = rng.uniform(-0.3, 1.1);
      if (g == 0 && i == 1) y = rng.uniform(1.4, 1.7);
      glyph.points.push_back({x, y});
    }
    glyph.points.push_back({glyph.advance, 0.0});
    glyph.dotted = g != 0 && rng.chance(0.35);
    glyphs.push_back(std::move(glyph));
  }
  return glyphs;
}

class InkCanvas {
 public:
  InkCanvas(int w, int h) : mask_(w, h) {}

  void stamp(double cx, double cy, double radius) {
    const int x0 = static_cast<int>(std::floor(cx - radius));
    const int x1 = static_cast<int>(std::ceil(cx + radius));
    const int y0 = static_cast<int>(std::floor(cy - radius));
    const int y1 = static_cast<int>(std::ceil(cy + radius));
    const double r2 = radius * radius + 0.25;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (!mask_.in_bounds(x, y)) continue;
        const double dx = x - cx;
        const double dy = y - cy;
        if (dx * dx + dy * dy <= r2) mark(x, y);
      }
    }
  }

  void segment(Point a, Point b, double radius) {
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const int steps = std::max(1, static_cast<int>(std::ceil(len / 0.5)));
    for (int i = 0; i <= steps; ++i) {
      const double t = static_cast<double>(i) / steps;
      stamp(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, radius);
    }
  }

  void mark(int x, int y) {
    mask_(x, y) = 1;
    if (!box_) {
      box_ = BoundingBox{x, y, x, y};
    } else {
      box_ = box_->united({x, y, x, y});
    }
  }

  void begin_line() { box_.reset(); }
  std::optional<BoundingBox> line_box() const { return box_; }
  BinaryImage& mask() { return mask_; }

 private:
  BinaryImage mask_;
  std::optional<BoundingBox> box_;
};

// Catmull-Rom through the control points, sampled densely.
inline std::vector<Point> smooth(const std::vector<Point>& pts) {
  if (pts.size() < 3) return pts;
  std::vector<Point> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Point p0 = pts[i == 0 ? 0 : i - 1];
    const Point p1 = pts[i];
    const Point p2 = pts[i + 1];
    const Point p3 = pts[std::min(i + 2, pts.size() - 1)];
    for (int s = 0; s < 8; ++s) {
      const double t = s / 8.0;
      const double t2 = t * t;
      const double t3 = t2 * t;
      auto blend = [&](double a, double b, double c, double d) {
        return 0.5 * (2 * b + (-a + c) * t + (2 * a - 5 * b + 4 * c - d) * t2 + (-a + 3 * b - 3 * c + d) * t3);
      };
      out.push_back({blend(p0.x, p1.x, p2.x, p3.x), blend(p0.y, p1.y, p2.y, p3.y)});
    }
  }
  out.push_back(pts.back());
  return out;
}

}  // namespace detail

/**
 * Renders `lines` lines of pseudo-text on a width x height page, plus
 * `specks` isolated 1-2 px specks away from the ink.
 */
inline SynthPage synthesize_page(const SynthStyle& style, int lines, int width, int height,
                                 int specks = 0) {
  if (lines < 0 || specks < 0) throw Error("synthesize_page: negative count");
  const double pitch = static_cast<double>(height) / (lines + 1);
  const double radius = style.stroke_thickness / 2.0;
  if (width < 120 || height < 40 || (lines > 0 && pitch < 24.0 + 2.0 * style.stroke_thickness)) {
    throw Error("synthesize_page: canvas " + std::to_string(width) + "x" + std::to_string(height) +
                " too small for " + std::to_string(lines) + " lines");
  }

  RandomStream rng(mix64(style.seed, fnv1a(style.writer_id)));
  const auto glyphs = detail::glyph_repertoire(style.writer_id);
  const double body = pitch * style.letter_size;  // body height in px
  const double shear = std::tan(style.slant * std::numbers::pi / 180.0);
  const double margin = 0.06 * width + body * 0.5;

  detail::InkCanvas canvas(width, height);
  SynthPage page{GrayImage(width, height, 255), BinaryImage(width, height), {}, {}};

  for (int line = 0; line < lines; ++line) {
    canvas.begin_line();
    const double baseline = pitch * (line + 1) + body * 0.4;
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double period = rng.uniform(120.0, 220.0);
    auto to_page = [&](double x_right, const detail::Point& p) {
      const double px = x_right - p.x * body;
      const double wobble = style.baseline_wobble * std::sin(2.0 * std::numbers::pi * px / period + phase);
      const double lift = p.y * body;
      return detail::Point{px + lift * shear, baseline + wobble - lift};
    };

    double x = width - margin;
    bool first_word = true;
    while (true) {
      const int glyph_count = rng.between(2, 5);
      std::vector<int> word;
      double advance = 0.0;
      for (int g = 0; g < glyph_count; ++g) {
        const int id = g == 0 ? 0 : rng.between(1, static_cast<int>(glyphs.size()) - 1);
        word.push_back(id);
        advance += glyphs[id].advance;
      }
      if (x - advance * body < margin) {
        if (!first_word) break;
        word.resize(1);
        advance = glyphs[0].advance;
      }
      first_word = false;
      std::vector<detail::Point> stroke;
      std::vector<detail::Point> dots;
      double offset = 0.0;
      for (int id : word) {
        const auto& gl = glyphs[id];
        for (std::size_t i = (stroke.empty() ? 0 : 1); i < gl.points.size(); ++i) {
          stroke.push_back({gl.points[i].x + offset, gl.points[i].y});
        }
        if (gl.dotted) dots.push_back({offset + gl.advance * 0.5, rng.uniform(1.1, 1.3)});
        offset += gl.advance;
      }
      const auto curve = detail::smooth(stroke);
      for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        canvas.segment(to_page(x, curve[i]), to_page(x, curve[i + 1]), radius);
      }
      for (const auto& d : dots) {
        const auto p = to_page(x, d);
        canvas.stamp(p.x, p.y, std::max(1.0, radius));
      }
      x -= offset * body + style.glyph_spacing * 2.0 + rng.uniform(4.0, 14.0);
      if (x < margin + body) break;
    }
    if (auto box = canvas.line_box()) page.line_boxes.push_back(*box);
  }

  // Specks: isolated, at least 12 px from any ink.
  int placed = 0;
  int attempts = 0;
  while (placed < specks && attempts < specks * 200) {
    ++attempts;
    const int size = rng.between(1, 2);
    const int sx = rng.between(0, width - size);
    const int sy = rng.between(0, height - size);
    bool clear = true;
    for (int y = std::max(0, sy - 12); clear && y <= std::min(height - 1, sy + size + 11); ++y) {
      for (int xx = std::max(0, sx - 12); xx <= std::min(width - 1, sx + size + 11); ++xx) {
        if (canvas.mask()(xx, y)) {
          clear = false;
          break;
        }
      }
    }
    if (!clear) continue;
    for (int y = sy; y < sy + size; ++y)
      for (int xx = sx; xx < sx + size; ++xx) canvas.mask()(xx, y) = 1;
    page.specks.push_back({sx, sy, sx + size - 1, sy + size - 1});
    ++placed;
  }

  page.ink = canvas.mask();
  // Paper tone drifts slowly in [228, 250]; ink darkness is fixed per page in
  // [15, 60]. Both stay well separated for any threshold rule.
  const double paper = rng.uniform(233.0, 245.0);
  const double ink_level = rng.uniform(15.0, 60.0);
  const double fx = rng.uniform(0.5, 2.0) * 2.0 * std::numbers::pi / width;
  const double fy = rng.uniform(0.5, 2.0) * 2.0 * std::numbers::pi / height;
  const double px0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double py0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  std::vector<double> col(width), row(height);
  for (int x = 0; x < width; ++x) col[x] = 2.5 * std::sin(fx * x + px0);
  for (int y = 0; y < height; ++y) row[y] = 2.5 * std::sin(fy * y + py0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      page.image(x, y) = static_cast<std::uint8_t>(page.ink(x, y) ? std::lround(ink_level)
                                                                 : std::lround(paper + col[x] + row[y]));
    }
  }
  return page;
}

}  // namespace hwid
