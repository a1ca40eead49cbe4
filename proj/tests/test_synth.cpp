#include <gtest/gtest.h>

#include <set>

#include "hwid/synth.hpp"

using namespace hwid;

TEST(Synth, StylesArePairwiseDistinct) {
  std::set<std::tuple<int, double, double, int, double>> seen;
  for (int i = 0; i < 125; ++i) {
    const SynthStyle s = style_for_writer(i, "w");
    EXPECT_TRUE(seen.insert({s.stroke_thickness, s.slant, s.baseline_wobble, s.glyph_spacing, s.letter_size}).second)
        << "writer " << i;
  }
}

TEST(Synth, SameSeedSamePage) {
  SynthStyle style = style_for_writer(3, "w03");
  style.seed = 17;
  const SynthPage a = synthesize_page(style, 5, 800, 600, 10);
  const SynthPage b = synthesize_page(style, 5, 800, 600, 10);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.line_boxes, b.line_boxes);
  style.seed = 18;
  EXPECT_FALSE(synthesize_page(style, 5, 800, 600, 10).image == a.image);
}

TEST(Synth, GroundTruthIsConsistent) {
  for (int w = 0; w < 10; ++w) {
    SynthStyle style = style_for_writer(w, "w" + std::to_string(w));
    style.seed = w;
    const SynthPage page = synthesize_page(style, 5, 1000, 800, 40);
    ASSERT_EQ(page.line_boxes.size(), 5u);
    ASSERT_EQ(page.specks.size(), 40u);
    for (std::size_t i = 1; i < page.line_boxes.size(); ++i) {
      EXPECT_LT(page.line_boxes[i - 1].y_max, page.line_boxes[i].y_min) << "lines touch, writer " << w;
    }
    for (int y = 0; y < page.image.height(); ++y) {
      for (int x = 0; x < page.image.width(); ++x) {
        const auto v = page.image(x, y);
        if (page.ink.foreground(x, y)) {
          ASSERT_GE(v, 15);
          ASSERT_LE(v, 60);
        } else {
          ASSERT_GE(v, 228);
          ASSERT_LE(v, 250);
        }
      }
    }
    // Every speck keeps a 12 px clearance from all other ink.
    for (const auto& s : page.specks) {
      for (int y = std::max(0, s.y_min - 12); y <= std::min(799, s.y_max + 12); ++y)
        for (int x = std::max(0, s.x_min - 12); x <= std::min(999, s.x_max + 12); ++x)
          if (!s.contains(x, y)) {
            ASSERT_FALSE(page.ink.foreground(x, y)) << x << "," << y;
          }
    }
  }
}

TEST(Synth, RejectsCanvasTooSmall) {
  const SynthStyle style = style_for_writer(4, "w04");
  EXPECT_THROW(synthesize_page(style, 10, 400, 200), Error);
  EXPECT_THROW(synthesize_page(style, 1, 50, 50), Error);
  EXPECT_NO_THROW(synthesize_page(style, 0, 200, 100));
}
