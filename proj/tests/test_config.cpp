#include <gtest/gtest.h>

#include "hwid/config.hpp"

using namespace hwid;

TEST(Config, DefaultsRoundTripThroughText) {
  const ToolConfig defaults;
  EXPECT_EQ(parse_config(to_config_text(defaults)), defaults);
  EXPECT_EQ(parse_config(""), defaults);
}

TEST(Config, EveryKeyRoundTrips) {
  const std::string text = R"(
# custom pipeline
pipeline.dilation_shape = cross
pipeline.dilation_width = 21
pipeline.dilation_height = 7
pipeline.min_component_area = absolute:200
pipeline.line_overlap_threshold = 0.35
pipeline.target_size = 128   # smaller ROIs
pipeline.pad_to_square = false
pipeline.region_source = canny
pipeline.connectivity = four
pipeline.canny_low = 20.5
pipeline.canny_high = 80
pipeline.min_contrast = 12.5
augment.seed = 18446744073709551615
augment.thickness_iterations = 2
augment.thickness_shape = rect
augment.thickness_width = 5
augment.thickness_height = 3
augment.thickness_floor = 0.1
augment.noise_kind = gaussian
augment.noise_density = 0.05
augment.gaussian_sigma = 4.5
augment.stretch_min = -0.1
augment.stretch_max = 0.1
augment.min_width = 4
)";
  const ToolConfig cfg = parse_config(text);
  EXPECT_EQ(cfg.pipeline.dilation_se, StructuringElement::cross(21, 7));
  EXPECT_EQ(cfg.pipeline.min_component_area, MinComponentArea::absolute(200));
  EXPECT_EQ(cfg.pipeline.target_size, 128);
  EXPECT_DOUBLE_EQ(cfg.pipeline.min_contrast, 12.5);
  EXPECT_EQ(cfg.pipeline.region_source, RegionSource::CannyRegions);
  EXPECT_EQ(cfg.augment.seed, 18446744073709551615ull);
  EXPECT_EQ(cfg.augment.noise_kind, NoiseKind::Gaussian);
  EXPECT_DOUBLE_EQ(cfg.augment.stretch_min, -0.1);
  EXPECT_EQ(parse_config(to_config_text(cfg)), cfg);
  EXPECT_NE(config_fingerprint(cfg), config_fingerprint(ToolConfig{}));
}

TEST(Config, ErrorsNameTheLine) {
  auto line_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("pipeline.target_size = 64\n\npipeline.bogus = 1\n"), 3);
  EXPECT_EQ(line_of("pipeline.target_size = big\n"), 1);
  EXPECT_EQ(line_of("# ok\njust words\n"), 2);
  EXPECT_EQ(line_of("pipeline.min_component_area = 0.05\n"), 1);
  // Semantic validation runs after parsing and has no single line.
  EXPECT_EQ(line_of("pipeline.dilation_width = 4\n"), 0);
  EXPECT_EQ(line_of("augment.stretch_min = 0.5\n"), 0);
  try {
    parse_config("pipeline.bogus = 1\n");
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("'pipeline.bogus'"), std::string::npos);
  }
}

TEST(Config, OverridesApplyOnTop) {
  ToolConfig cfg;
  apply_override(cfg, "pipeline.target_size=96");
  apply_override(cfg, " augment.noise_density = 0.1 ");
  EXPECT_EQ(cfg.pipeline.target_size, 96);
  EXPECT_DOUBLE_EQ(cfg.augment.noise_density, 0.1);
  EXPECT_THROW(apply_override(cfg, "pipeline.target_size"), ConfigError);
  EXPECT_THROW(apply_override(cfg, "nope=1"), ConfigError);
}

TEST(Config, FingerprintIsStableAndSensitive) {
  const ToolConfig a;
  EXPECT_EQ(config_fingerprint(a), config_fingerprint(ToolConfig{}));
  EXPECT_EQ(config_fingerprint(a).size(), 16u);
  ToolConfig b;
  b.augment.seed = 1;
  EXPECT_NE(config_fingerprint(a), config_fingerprint(b));
}
