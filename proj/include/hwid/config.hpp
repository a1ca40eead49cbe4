#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hwid/augmentation.hpp"
#include "hwid/error.hpp"
#include "hwid/segmentation.hpp"

// Config file format: one "key = value" per line; '#' starts a comment; blank
// lines ignored. Every key is optional and unknown keys are rejected. See
// docs/config.md for the key list.

namespace hwid {

struct ToolConfig {
  PipelineConfig pipeline;
  AugmentConfig augment;

  friend bool operator==(const ToolConfig&, const ToolConfig&) = default;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& msg, int line = 0)
      : Error(line > 0 ? "config line " + std::to_string(line) + ": " + msg : "config: " + msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  }
  return v;
}

inline bool parse_bool(const std::string& s) {
  if (s == "true" || s == "on" || s == "1") return true;
  if (s == "false" || s == "off" || s == "0") return false;
  throw std::invalid_argument("expected true/false, got '" + s + "'");
}

inline SeShape parse_shape(const std::string& s) {
  if (s == "rect") return SeShape::Rect;
  if (s == "cross") return SeShape::Cross;
  throw std::invalid_argument("expected rect/cross, got '" + s + "'");
}

inline std::string shape_name(SeShape s) { return s == SeShape::Rect ? "rect" : "cross"; }

struct Field {
  std::string key;
  std::function<std::string(const ToolConfig&)> get;
  std::function<void(ToolConfig&, const std::string&)> set;
};

inline const std::vector<Field>& config_fields() {
  static const std::vector<Field> fields = {
      {"pipeline.dilation_shape", [](const ToolConfig& c) { return shape_name(c.pipeline.dilation_se.shape); },
       [](ToolConfig& c, const std::string& v) { c.pipeline.dilation_se.shape = parse_shape(v); }},
      {"pipeline.dilation_width", [](const ToolConfig& c) { return std::to_string(c.pipeline.dilation_se.width); },
       [](ToolConfig& c, const std::string& v) { c.pipeline.dilation_se.width = parse_int<int>(v); }},
      {"pipeline.dilation_height", [](const ToolConfig& c) { return std::to_string(c.pipeline.dilation_se.height); },
       [](ToolConfig& c, const std::string& v) { c.pipeline.dilation_se.height = parse_int<int>(v); }},
      {"pipeline.min_component_area",
       [](const ToolConfig& c) {
         const auto& a = c.pipeline.min_component_area;
         return std::string(a.mode == MinComponentArea::Mode::Absolute ? "absolute:" : "relative:") +
                format_double(a.value);
       },
       [](ToolConfig& c, const std::string& v) {
         const auto colon = v.find(':');
         const std::string mode = colon == std::string::npos ? "" : v.substr(0, colon);
         const std::string num = colon == std::string::npos ? v : v.substr(colon + 1);
         if (mode == "absolute") {
           c.pipeline.min_component_area = MinComponentArea::absolute(parse_double(num));
         } else if (mode == "relative") {
           c.pipeline.min_component_area = MinComponentArea::relative(parse_double(num));
         } else {
           throw std::invalid_argument("expected absolute:<px> or relative:<fraction>, got '" + v + "'");
         }
       }},
      {"pipeline.line_overlap_threshold",
       [](const ToolConfig& c) { return format_double(c.pipeline.line_overlap_threshold); },
       [](ToolConfig& c, const std::string& v) { c.pipeline.line_overlap_threshold = parse_double(v); }},
      {"pipeline.target_size", [](const ToolConfig& c) { return std::to_string(c.pipeline.target_size); },
       [](ToolConfig& c, const std::string& v) { c.pipeline.target_size = parse_int<int>(v); }},
      {"pipeline.pad_to_square", [](const ToolConfig& c) { return std::string(c.pipeline.pad_to_square ? "true" : "false"); },
       [](ToolConfig& c, const std::string& v) { c.pipeline.pad_to_square = parse_bool(v); }},
      {"pipeline.region_source",
       [](const ToolConfig& c) {
         return std::string(c.pipeline.region_source == RegionSource::Components ? "components" : "canny");
       },
       [](ToolConfig& c, const std::string& v) {
         if (v == "components") {
           c.pipeline.region_source = RegionSource::Components;
         } else if (v == "canny") {
           c.pipeline.region_source = RegionSource::CannyRegions;
         } else {
           throw std::invalid_argument("expected components/canny, got '" + v + "'");
         }
       }},
      {"pipeline.connectivity",
       [](const ToolConfig& c) { return std::string(c.pipeline.connectivity == Connectivity::Eight ? "eight" : "four"); },
       [](ToolConfig& c, const std::string& v) {
         if (v == "eight") {
           c.pipeline.connectivity = Connectivity::Eight;
         } else if (v == "four") {
           c.pipeline.connectivity = Connectivity::Four;
         } else {
           throw std::invalid_argument("expected eight/four, got '" + v + "'");
         }
       }},
      {"pipeline.canny_low", [](const ToolConfig& c) { return format_double(c.pipeline.canny_low); },
       [](ToolConfig& c, const std::string& v) { c.pipeline.canny_low = parse_double(v); }},
      {"pipeline.canny_high", [](const ToolConfig& c) { return format_double(c.pipeline.canny_high); },
       [](ToolConfig& c, const std::string& v) { c.pipeline.canny_high = parse_double(v); }},
      {"pipeline.min_contrast", [](const ToolConfig& c) { return format_double(c.pipeline.min_contrast); },
       [](ToolConfig& c, const std::string& v) { c.pipeline.min_contrast = parse_double(v); }},
      {"augment.seed", [](const ToolConfig& c) { return std::to_string(c.augment.seed); },
       [](ToolConfig& c, const std::string& v) { c.augment.seed = parse_int<std::uint64_t>(v); }},
      {"augment.thickness_iterations", [](const ToolConfig& c) { return std::to_string(c.augment.thickness_iterations); },
       [](ToolConfig& c, const std::string& v) { c.augment.thickness_iterations = parse_int<int>(v); }},
      {"augment.thickness_shape", [](const ToolConfig& c) { return shape_name(c.augment.thickness_se.shape); },
       [](ToolConfig& c, const std::string& v) { c.augment.thickness_se.shape = parse_shape(v); }},
      {"augment.thickness_width", [](const ToolConfig& c) { return std::to_string(c.augment.thickness_se.width); },
       [](ToolConfig& c, const std::string& v) { c.augment.thickness_se.width = parse_int<int>(v); }},
      {"augment.thickness_height", [](const ToolConfig& c) { return std::to_string(c.augment.thickness_se.height); },
       [](ToolConfig& c, const std::string& v) { c.augment.thickness_se.height = parse_int<int>(v); }},
      {"augment.thickness_floor", [](const ToolConfig& c) { return format_double(c.augment.thickness_floor); },
       [](ToolConfig& c, const std::string& v) { c.augment.thickness_floor = parse_double(v); }},
      {"augment.noise_kind",
       [](const ToolConfig& c) { return std::string(c.augment.noise_kind == NoiseKind::SaltPepper ? "salt_pepper" : "gaussian"); },
       [](ToolConfig& c, const std::string& v) {
         if (v == "salt_pepper") {
           c.augment.noise_kind = NoiseKind::SaltPepper;
         } else if (v == "gaussian") {
           c.augment.noise_kind = NoiseKind::Gaussian;
         } else {
           throw std::invalid_argument("expected salt_pepper/gaussian, got '" + v + "'");
         }
       }},
      {"augment.noise_density", [](const ToolConfig& c) { return format_double(c.augment.noise_density); },
       [](ToolConfig& c, const std::string& v) { c.augment.noise_density = parse_double(v); }},
      {"augment.gaussian_sigma", [](const ToolConfig& c) { return format_double(c.augment.gaussian_sigma); },
       [](ToolConfig& c, const std::string& v) { c.augment.gaussian_sigma = parse_double(v); }},
      {"augment.stretch_min", [](const ToolConfig& c) { return format_double(c.augment.stretch_min); },
       [](ToolConfig& c, const std::string& v) { c.augment.stretch_min = parse_double(v); }},
      {"augment.stretch_max", [](const ToolConfig& c) { return format_double(c.augment.stretch_max); },
       [](ToolConfig& c, const std::string& v) { c.augment.stretch_max = parse_double(v); }},
      {"augment.min_width", [](const ToolConfig& c) { return std::to_string(c.augment.min_width); },
       [](ToolConfig& c, const std::string& v) { c.augment.min_width = parse_int<int>(v); }},
  };
  return fields;
}

inline void validate(const ToolConfig& cfg) {
  cfg.pipeline.validate();
  cfg.augment.validate();
}

}  // namespace detail

/// Applies one "key=value" assignment.
inline void set_config_value(ToolConfig& cfg, const std::string& key, const std::string& value,
                             int line = 0) {
  for (const auto& f : detail::config_fields()) {
    if (f.key != key) continue;
    try {
      f.set(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key + ": " + e.what(), line);
    }
    return;
  }
  throw ConfigError("unknown key '" + key + "'", line);
}

inline void apply_override(ToolConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override must be key=value, got '" + assignment + "'");
  set_config_value(cfg, detail::trim(assignment.substr(0, eq)), detail::trim(assignment.substr(eq + 1)));
}

inline void validate_config(const ToolConfig& cfg) {
  try {
    detail::validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

/// Parses config text on top of `base` (defaults when omitted).
inline ToolConfig parse_config(std::string_view text, ToolConfig base = {}) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    set_config_value(base, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)), line_no);
  }
  validate_config(base);
  return base;
}

inline ToolConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Canonical text form; parse_config(to_config_text(c)) == c.
inline std::string to_config_text(const ToolConfig& cfg) {
  std::string out;
  for (const auto& f : detail::config_fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

/// 16 hex digits of FNV-1a over the canonical text.
inline std::string config_fingerprint(const ToolConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_config_text(cfg))));
  return buf;
}

}  // namespace hwid
