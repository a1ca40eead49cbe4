#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hwid/morphology.hpp"
#include "hwid/random.hpp"
#include "hwid/resample.hpp"
#include "hwid/segmentation.hpp"
#include "hwid/threshold.hpp"

namespace hwid {

enum class NoiseKind { SaltPepper, Gaussian };

struct AugmentConfig {
  std::uint64_t seed = 0;
  int thickness_iterations = 1;
  StructuringElement thickness_se = StructuringElement::cross(3, 3);
  double thickness_floor = 0.2;
  NoiseKind noise_kind = NoiseKind::SaltPepper;
  double noise_density = 0.02;
  double gaussian_sigma = 10.0;
  double stretch_min = -0.9;
  double stretch_max = 0.1;
  int min_width = 8;

  void validate() const {
    thickness_se.validate();
    if (thickness_iterations < 0) throw std::invalid_argument("thickness_iterations must be >= 0");
    if (!(thickness_floor >= 0.0 && thickness_floor <= 1.0)) {
      throw std::invalid_argument("thickness_floor must lie in [0, 1]");
    }
    if (!(noise_density >= 0.0 && noise_density <= 1.0)) {
      throw std::invalid_argument("noise_density must lie in [0, 1]");
    }
    if (!(gaussian_sigma >= 0.0)) throw std::invalid_argument("gaussian_sigma must be >= 0");
    if (!(stretch_min > -1.0 && stretch_min <= stretch_max)) {
      throw std::invalid_argument("stretch bounds require -1 < stretch_min <= stretch_max");
    }
    if (min_width < 1) throw std::invalid_argument("min_width must be >= 1");
  }

  friend bool operator==(const AugmentConfig&, const AugmentConfig&) = default;
};

/// Subset of {thickness, noise, stretch}. Each enabled technique adds one
/// variant per sample, so the output is (1 + count()) times the input.
class TechniqueSet {
 public:
  static constexpr unsigned kThickness = 1, kNoise = 2, kStretch = 4;

  constexpr TechniqueSet() = default;
  constexpr explicit TechniqueSet(unsigned bits) : bits_(bits & 7u) {}

  static constexpr TechniqueSet none() { return TechniqueSet(0); }
  static constexpr TechniqueSet all() { return TechniqueSet(7); }

  constexpr bool thickness() const { return bits_ & kThickness; }
  constexpr bool noise() const { return bits_ & kNoise; }
  constexpr bool stretch() const { return bits_ & kStretch; }
  constexpr int count() const { return thickness() + noise() + stretch(); }
  constexpr unsigned bits() const { return bits_; }

  /// "none", "all", or a '+'-joined list in canonical order.
  std::string to_string() const {
    if (bits_ == 0) return "none";
    if (bits_ == 7) return "all";
    std::string s;
    auto add = [&](bool on, const char* name) {
      if (!on) return;
      if (!s.empty()) s += '+';
      s += name;
    };
    add(thickness(), "thickness");
    add(noise(), "noise");
    add(stretch(), "stretch");
    return s;
  }

  /// Accepts "none", "all", or names joined by '+' or ','.
  static TechniqueSet parse(std::string_view text) {
    if (text == "none") return none();
    if (text == "all") return all();
    unsigned bits = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find_first_of("+,", start);
      if (end == std::string_view::npos) end = text.size();
      const std::string_view name = text.substr(start, end - start);
      if (name == "thickness") {
        bits |= kThickness;
      } else if (name == "noise") {
        bits |= kNoise;
      } else if (name == "stretch") {
        bits |= kStretch;
      } else {
        throw std::invalid_argument("unknown augmentation technique '" + std::string(name) + "'");
      }
      start = end + 1;
    }
    return TechniqueSet(bits);
  }

  friend bool operator==(TechniqueSet, TechniqueSet) = default;

 private:
  unsigned bits_ = 0;
};

struct AugmentationTag {
  enum class Kind { Original, Thinned, Noised, Stretched };
  Kind kind = Kind::Original;
  bool floored = false;                   // Thinned only
  std::optional<std::uint64_t> noise_seed;  // Noised only
  std::optional<double> stretch_factor;   // Stretched only

  static AugmentationTag original() { return {}; }

  std::string to_string() const {
    switch (kind) {
      case Kind::Original:
        return "original";
      case Kind::Thinned:
        return floored ? "thinned:floored" : "thinned";
      case Kind::Noised:
        return "noised:seed=" + std::to_string(noise_seed.value_or(0));
      case Kind::Stretched: {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, stretch_factor.value_or(0.0));
        return "stretched:factor=" + std::string(buf, res.ptr);
      }
    }
    return "original";
  }

  static AugmentationTag parse(std::string_view text) {
    AugmentationTag tag;
    auto bad = [&] { return std::invalid_argument("malformed augmentation tag '" + std::string(text) + "'"); };
    if (text == "original") return tag;
    if (text == "thinned" || text == "thinned:floored") {
      tag.kind = Kind::Thinned;
      tag.floored = text == "thinned:floored";
      return tag;
    }
    constexpr std::string_view noised = "noised:seed=";
    constexpr std::string_view stretched = "stretched:factor=";
    if (text.starts_with(noised)) {
      const auto rest = text.substr(noised.size());
      std::uint64_t v = 0;
      auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
      if (ec != std::errc{} || p != rest.data() + rest.size() || rest.empty()) throw bad();
      tag.kind = Kind::Noised;
      tag.noise_seed = v;
      return tag;
    }
    if (text.starts_with(stretched)) {
      const auto rest = text.substr(stretched.size());
      double v = 0;
      auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
      if (ec != std::errc{} || p != rest.data() + rest.size() || rest.empty()) throw bad();
      tag.kind = Kind::Stretched;
      tag.stretch_factor = v;
      return tag;
    }
    throw bad();
  }

  /// File-name suffix for materialized variants ("" for originals).
  std::string suffix() const {
    switch (kind) {
      case Kind::Thinned: return "_thinned";
      case Kind::Noised: return "_noised";
      case Kind::Stretched: return "_stretched";
      default: return "";
    }
  }

  friend bool operator==(const AugmentationTag&, const AugmentationTag&) = default;
};

struct ThinningResult {
  GrayImage image;
  bool floored = false;
};

/**
 * Thins strokes by eroding the binarized ink. Surviving ink keeps its original
 * intensity; removed ink turns white. If less than thickness_floor of the ink
 * would survive, the input is returned unchanged and marked floored.
 */
inline ThinningResult reduce_thickness(const GrayImage& img, const AugmentConfig& cfg) {
  const BinaryImage ink = binarize(img);
  BinaryImage thin = ink;
  for (int i = 0; i < cfg.thickness_iterations; ++i) thin = erode(thin, cfg.thickness_se);
  const std::size_t before = ink.count_foreground();
  const std::size_t after = thin.count_foreground();
  if (static_cast<double>(after) < cfg.thickness_floor * static_cast<double>(before)) {
    return {img, true};
  }
  GrayImage out = img;
  auto px = out.pixels();
  auto src_ink = ink.pixels();
  auto kept = thin.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (src_ink[i] && !kept[i]) px[i] = 255;
  }
  return {std::move(out), false};
}

inline GrayImage add_noise(const GrayImage& img, const AugmentConfig& cfg, RandomStream& stream) {
  GrayImage out = img;
  auto px = out.pixels();
  if (cfg.noise_kind == NoiseKind::SaltPepper) {
    for (auto& v : px) {
      if (stream.chance(cfg.noise_density)) v = (stream.next() & 1) ? 255 : 0;
    }
  } else {
    for (auto& v : px) {
      const double noisy = v + cfg.gaussian_sigma * stream.normal();
      v = static_cast<std::uint8_t>(std::clamp(std::floor(noisy + 0.5), 0.0, 255.0));
    }
  }
  return out;
}

/**
 * Horizontal stretch by (1 + factor), then back onto the original canvas
 * width: narrower content is centered on white, wider content center-cropped.
 */
inline GrayImage stretch_horizontal(const GrayImage& img, double factor, int min_width) {
  const int new_w = std::max(min_width, static_cast<int>(std::lround(img.width() * (1.0 + factor))));
  if (new_w == img.width()) return img;
  const GrayImage scaled = resize_bilinear(img, new_w, img.height());
  return center_on_canvas(scaled, img.width(), img.height(), 255);
}

struct StretchResult {
  GrayImage image;
  double factor = 0.0;
};

inline StretchResult random_stretch(const GrayImage& img, const AugmentConfig& cfg,
                                    RandomStream& stream) {
  const double f = stream.uniform(cfg.stretch_min, cfg.stretch_max);
  return {stretch_horizontal(img, f, cfg.min_width), f};
}

/// Stable per-sample key; sub-streams derive from (seed, key) only.
inline std::uint64_t sample_key(std::string_view source_page, int line_index) {
  return mix64(fnv1a(source_page), static_cast<std::uint64_t>(static_cast<std::int64_t>(line_index)));
}

struct Variant {
  GrayImage image;
  AugmentationTag tag;
};

/// The enabled variants of one sample, in technique order (original excluded).
inline std::vector<Variant> augment_sample(const GrayImage& img, std::uint64_t key,
                                           const AugmentConfig& cfg, TechniqueSet techniques) {
  cfg.validate();
  std::vector<Variant> out;
  if (techniques.thickness()) {
    auto thin = reduce_thickness(img, cfg);
    AugmentationTag tag;
    tag.kind = AugmentationTag::Kind::Thinned;
    tag.floored = thin.floored;
    out.push_back({std::move(thin.image), tag});
  }
  if (techniques.noise()) {
    const std::uint64_t seed = mix64(cfg.seed, mix64(key, 1));
    RandomStream stream(seed);
    AugmentationTag tag;
    tag.kind = AugmentationTag::Kind::Noised;
    tag.noise_seed = seed;
    out.push_back({add_noise(img, cfg, stream), tag});
  }
  if (techniques.stretch()) {
    RandomStream stream(mix64(cfg.seed, mix64(key, 2)));
    auto stretched = random_stretch(img, cfg, stream);
    AugmentationTag tag;
    tag.kind = AugmentationTag::Kind::Stretched;
    tag.stretch_factor = stretched.factor;
    out.push_back({std::move(stretched.image), tag});
  }
  return out;
}

struct AugmentedSample {
  LineRoi roi;
  AugmentationTag tag;
};

/// Each sample followed by its enabled variants: (1 + techniques.count()) x input.
inline std::vector<AugmentedSample> augment_all(std::span<const LineRoi> samples,
                                                const AugmentConfig& cfg,
                                                TechniqueSet techniques = TechniqueSet::all()) {
  std::vector<AugmentedSample> out;
  out.reserve(samples.size() * (1 + techniques.count()));
  for (const auto& s : samples) {
    out.push_back({s, AugmentationTag::original()});
    for (auto& v : augment_sample(s.image, sample_key(s.source_page, s.line_index), cfg, techniques)) {
      LineRoi roi{std::move(v.image), s.source_page, s.line_index, s.source_bbox};
      out.push_back({std::move(roi), v.tag});
    }
  }
  return out;
}

}  // namespace hwid
