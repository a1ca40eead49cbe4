#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hwid/error.hpp"
#include "hwid/image.hpp"

namespace hwid {

inline constexpr int kLbpBins = 59;

/// Uniform-LBP histogram, L1-normalized (all-zero only when flagged blank).
struct FeatureVector {
  std::array<double, kLbpBins> values{};
  bool blank = false;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

namespace detail {

constexpr int circular_transitions(unsigned code) {
  const unsigned rotated = ((code << 1) | (code >> 7)) & 0xffu;
  return std::popcount(code ^ rotated);
}

// Uniform codes (<= 2 circular transitions) take bins 0..57 in ascending
// code order; everything else shares bin 58.
constexpr std::array<std::uint8_t, 256> make_uniform_table() {
  std::array<std::uint8_t, 256> table{};
  int next = 0;
  for (unsigned code = 0; code < 256; ++code) {
    table[code] = circular_transitions(code) <= 2 ? static_cast<std::uint8_t>(next++) : 58;
  }
  return table;
}

inline constexpr auto kUniformBin = make_uniform_table();

// Neighbor offsets starting east, counter-clockwise (y grows downward).
inline constexpr std::array<std::array<int, 2>, 8> kNeighbors = {{
    {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1},
}};

}  // namespace detail

inline int lbp_bin(std::uint8_t code) { return detail::kUniformBin[code]; }

/// 8-neighbor LBP code at an interior pixel: bit i set when neighbor i >= center.
inline std::uint8_t lbp_code(const GrayImage& img, int x, int y) {
  const auto center = img(x, y);
  unsigned code = 0;
  for (int i = 0; i < 8; ++i) {
    const auto [dx, dy] = detail::kNeighbors[i];
    if (img(x + dx, y + dy) >= center) code |= 1u << i;
  }
  return static_cast<std::uint8_t>(code);
}

inline FeatureVector lbp_features(const GrayImage& img) {
  if (img.width() < 3 || img.height() < 3) {
    throw std::invalid_argument("lbp_features: image must be at least 3x3");
  }
  std::array<std::uint64_t, kLbpBins> counts{};
  for (int y = 1; y + 1 < img.height(); ++y) {
    for (int x = 1; x + 1 < img.width(); ++x) ++counts[lbp_bin(lbp_code(img, x, y))];
  }
  const double total = static_cast<double>(img.width() - 2) * (img.height() - 2);
  FeatureVector f;
  for (int i = 0; i < kLbpBins; ++i) f.values[i] = counts[i] / total;
  return f;
}

inline double l1_norm(const FeatureVector& f) {
  double s = 0.0;
  for (double v : f.values) s += std::abs(v);
  return s;
}

inline double cosine_similarity(const FeatureVector& a, const FeatureVector& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int i = 0; i < kLbpBins; ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

struct WriterTemplate {
  std::string writer_id;
  FeatureVector centroid;
  std::size_t sample_count = 0;
};

struct LabeledFeature {
  std::string writer_id;
  FeatureVector features;
};

/**
 * One template per writer in `writers`: the L1-renormalized mean of that
 * writer's training vectors. Every writer needs at least one sample.
 */
inline std::vector<WriterTemplate> enroll(std::span<const LabeledFeature> training,
                                          std::span<const std::string> writers) {
  std::map<std::string, WriterTemplate> acc;
  for (const auto& w : writers) acc[w].writer_id = w;
  for (const auto& s : training) {
    auto it = acc.find(s.writer_id);
    if (it == acc.end()) throw Error("enroll: sample for unknown writer '" + s.writer_id + "'");
    auto& t = it->second;
    for (int i = 0; i < kLbpBins; ++i) t.centroid.values[i] += s.features.values[i];
    ++t.sample_count;
  }
  std::vector<WriterTemplate> out;
  for (auto& [id, t] : acc) {
    if (t.sample_count == 0) throw Error("enroll: writer '" + id + "' has no training samples");
    for (auto& v : t.centroid.values) v /= static_cast<double>(t.sample_count);
    const double norm = l1_norm(t.centroid);
    if (norm > 0.0) {
      for (auto& v : t.centroid.values) v /= norm;
    } else {
      t.centroid.blank = true;
    }
    out.push_back(std::move(t));
  }
  return out;
}

struct RankedWriter {
  std::string writer_id;
  double score = 0.0;

  friend bool operator==(const RankedWriter&, const RankedWriter&) = default;
};

struct Ranking {
  std::vector<RankedWriter> writers;  // best first
  bool degenerate = false;            // zero query: scores uniform, order by id
};

/// Cosine-similarity ranking over all templates; ties broken by writer_id.
inline Ranking identify(const FeatureVector& query, std::span<const WriterTemplate> templates) {
  if (templates.empty()) throw std::invalid_argument("identify: no templates");
  Ranking r;
  r.degenerate = l1_norm(query) == 0.0;
  for (const auto& t : templates) {
    r.writers.push_back({t.writer_id, r.degenerate ? 0.0 : cosine_similarity(query, t.centroid)});
  }
  std::sort(r.writers.begin(), r.writers.end(), [](const RankedWriter& a, const RankedWriter& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.writer_id < b.writer_id;
  });
  return r;
}

}  // namespace hwid
