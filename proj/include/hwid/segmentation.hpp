#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hwid/canny.hpp"
#include "hwid/components.hpp"
#include "hwid/morphology.hpp"
#include "hwid/resample.hpp"
#include "hwid/threshold.hpp"

namespace hwid {

/// Area filter threshold: a pixel count, or a fraction of the median area.
struct MinComponentArea {
  enum class Mode { Absolute, Relative };
  Mode mode = Mode::Relative;
  double value = 0.05;

  static MinComponentArea absolute(double pixels) { return {Mode::Absolute, pixels}; }
  static MinComponentArea relative(double fraction) { return {Mode::Relative, fraction}; }

  friend bool operator==(const MinComponentArea&, const MinComponentArea&) = default;
};

enum class RegionSource { Components, CannyRegions };

struct PipelineConfig {
  // Wide and short so the gaps between words on one line are bridged.
  StructuringElement dilation_se = StructuringElement::rect(15, 5);
  MinComponentArea min_component_area = MinComponentArea::relative(0.05);
  double line_overlap_threshold = 0.4;
  int target_size = 224;
  bool pad_to_square = true;
  RegionSource region_source = RegionSource::Components;
  Connectivity connectivity = Connectivity::Eight;
  double canny_low = 50.0;
  double canny_high = 150.0;
  // Pages whose Otsu classes differ by fewer gray levels than this are blank.
  double min_contrast = 32.0;

  void validate() const {
    dilation_se.validate();
    if (target_size < 8) throw std::invalid_argument("target_size must be >= 8");
    if (!(line_overlap_threshold >= 0.0 && line_overlap_threshold <= 1.0)) {
      throw std::invalid_argument("line_overlap_threshold must lie in [0, 1]");
    }
    if (!(min_component_area.value >= 0.0)) {
      throw std::invalid_argument("min_component_area must be >= 0");
    }
    if (min_component_area.mode == MinComponentArea::Mode::Relative &&
        min_component_area.value > 1.0) {
      throw std::invalid_argument("relative min_component_area must lie in [0, 1]");
    }
    if (canny_low < 0.0 || canny_low > canny_high) {
      throw std::invalid_argument("canny thresholds require 0 <= low <= high");
    }
    if (!(min_contrast >= 0.0 && min_contrast <= 255.0)) {
      throw std::invalid_argument("min_contrast must lie in [0, 255]");
    }
  }

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

struct LineBand {
  int y_top = 0;
  int y_bottom = 0;
  std::vector<int> members;  // component labels, right-to-left
  BoundingBox bbox;
};

struct LineRoi {
  GrayImage image;
  std::string source_page;
  int line_index = 0;
  BoundingBox source_bbox;
};

inline double median_area(std::span<const Component> components) {
  std::vector<std::size_t> areas;
  areas.reserve(components.size());
  for (const auto& c : components) areas.push_back(c.area);
  std::sort(areas.begin(), areas.end());
  const std::size_t n = areas.size();
  if (n == 0) return 0.0;
  if (n % 2 == 1) return static_cast<double>(areas[n / 2]);
  return 0.5 * (static_cast<double>(areas[n / 2 - 1]) + static_cast<double>(areas[n / 2]));
}

inline double area_threshold(std::span<const Component> components, const MinComponentArea& rule) {
  if (rule.mode == MinComponentArea::Mode::Absolute) return rule.value;
  return rule.value * median_area(components);
}

/// Keeps components whose area reaches the configured threshold.
inline std::vector<Component> filter_small(std::span<const Component> components,
                                           const PipelineConfig& cfg) {
  const double threshold = area_threshold(components, cfg.min_component_area);
  std::vector<Component> kept;
  for (const auto& c : components) {
    if (static_cast<double>(c.area) >= threshold) kept.push_back(c);
  }
  return kept;
}

/// Vertical overlap of two boxes in rows (0 when disjoint).
inline int vertical_overlap(const BoundingBox& a, const BoundingBox& b) {
  return std::max(0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min) + 1);
}

inline bool same_line(const BoundingBox& a, const BoundingBox& b, double threshold) {
  const int overlap = vertical_overlap(a, b);
  if (overlap == 0) return false;
  const int extent = std::min(a.height(), b.height());
  return overlap >= threshold * extent;
}

namespace detail {

inline std::vector<LineBand> bands_from_groups(std::span<const Component> components,
                                               std::vector<std::vector<std::size_t>> groups) {
  std::vector<LineBand> bands;
  for (auto& group : groups) {
    std::sort(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
      const auto& ca = components[a];
      const auto& cb = components[b];
      if (ca.bbox.x_max != cb.bbox.x_max) return ca.bbox.x_max > cb.bbox.x_max;
      return ca.label < cb.label;
    });
    LineBand band;
    band.bbox = components[group.front()].bbox;
    for (std::size_t i : group) {
      band.members.push_back(components[i].label);
      band.bbox = band.bbox.united(components[i].bbox);
    }
    band.y_top = band.bbox.y_min;
    band.y_bottom = band.bbox.y_max;
    bands.push_back(std::move(band));
  }
  std::sort(bands.begin(), bands.end(), [](const LineBand& a, const LineBand& b) {
    if (a.y_top != b.y_top) return a.y_top < b.y_top;
    if (a.bbox.x_max != b.bbox.x_max) return a.bbox.x_max > b.bbox.x_max;
    return a.members.front() < b.members.front();
  });
  return bands;
}

}  // namespace detail

/**
 * Groups components into text lines. Two components share a line when their
 * row ranges overlap by at least line_overlap_threshold of the shorter one;
 * the relation is closed transitively. Bands come out top to bottom, members
 * right to left.
 */
inline std::vector<LineBand> cluster_lines(std::span<const Component> components,
                                           const PipelineConfig& cfg) {
  const std::size_t n = components.size();
  if (n == 0) return {};
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return components[a].bbox.y_min < components[b].bbox.y_min;
  });

  detail::DisjointSet sets;
  for (std::size_t i = 0; i < n; ++i) sets.add();
  // Sweep in y_min order: only later components starting above this one's
  // bottom row can overlap it.
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = components[order[i]].bbox;
    for (std::size_t j = i + 1; j < n && components[order[j]].bbox.y_min <= a.y_max; ++j) {
      if (same_line(a, components[order[j]].bbox, cfg.line_overlap_threshold)) {
        sets.unite(static_cast<int>(order[i]), static_cast<int>(order[j]));
      }
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<int> group_of(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const int root = sets.find(static_cast<int>(i));
    if (group_of[root] < 0) {
      group_of[root] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[group_of[root]].push_back(i);
  }
  return detail::bands_from_groups(components, std::move(groups));
}

/// Stages 1-4: binarize, dilate, extract regions, cluster, filter.
inline std::vector<LineBand> detect_lines(const GrayImage& page, const PipelineConfig& cfg) {
  cfg.validate();
  const BinaryImage ink = binarize(page, cfg.min_contrast);
  if (ink.count_foreground() == 0) return {};
  const BinaryImage dilated = dilate(ink, cfg.dilation_se);

  std::vector<Component> regions;
  if (cfg.region_source == RegionSource::Components) {
    regions = label_components(dilated, cfg.connectivity);
  } else {
    const BinaryImage edges =
        canny_edges(to_gray(dilated), {1.0, cfg.canny_low, cfg.canny_high});
    regions = label_components(edges, cfg.connectivity);
  }

  const std::vector<LineBand> bands = cluster_lines(regions, cfg);
  const std::vector<Component> kept = filter_small(regions, cfg);
  std::vector<char> keep(regions.size() + 1, 0);
  for (const auto& c : kept) keep[c.label] = 1;

  // Regions are labeled 1..K, so label - 1 indexes the table.
  std::vector<std::vector<std::size_t>> groups;
  for (const auto& band : bands) {
    std::vector<std::size_t> survivors;
    for (int label : band.members) {
      if (keep[label]) survivors.push_back(static_cast<std::size_t>(label - 1));
    }
    if (!survivors.empty()) groups.push_back(std::move(survivors));
  }
  return detail::bands_from_groups(regions, std::move(groups));
}

/// Pads (optionally) and resizes a crop to target_size x target_size.
inline GrayImage normalize_roi(const GrayImage& crop_img, const PipelineConfig& cfg) {
  const GrayImage framed = cfg.pad_to_square ? pad_to_square(crop_img, 255) : crop_img;
  return resize_bilinear(framed, cfg.target_size, cfg.target_size);
}

/**
 * Full page pipeline. Each surviving band is cut from the original grayscale
 * page, normalized, and returned top to bottom. A blank page yields nothing.
 */
inline std::vector<LineRoi> segment_page(const GrayImage& page, const PipelineConfig& cfg,
                                         const std::string& page_id = {}) {
  std::vector<LineRoi> rois;
  int index = 0;
  for (const auto& band : detect_lines(page, cfg)) {
    rois.push_back({normalize_roi(crop(page, band.bbox), cfg), page_id, index++, band.bbox});
  }
  return rois;
}

}  // namespace hwid
