#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hwid/augmentation.hpp"
#include "hwid/baseline.hpp"
#include "hwid/dataset.hpp"
#include "hwid/error.hpp"

namespace hwid {

/// ranks[k-1] is the rank-k identification rate.
struct CmcCurve {
  std::vector<double> ranks;

  double at(std::size_t k) const { return ranks.at(k - 1); }
  friend bool operator==(const CmcCurve&, const CmcCurve&) = default;
};

struct SampleCounts {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
  friend bool operator==(const SampleCounts&, const SampleCounts&) = default;
};

/// One row of a results table, plus the test-split CMC curve.
struct EvalReport {
  std::string model_name;
  TechniqueSet augmentation_mode;
  double train_acc = 0.0;
  double val_acc = 0.0;
  double test_acc = 0.0;
  CmcCurve cmc;
  std::size_t writer_count = 0;
  SampleCounts sample_counts;
  // Extra top-level fields of a metrics file (lr_trace, config echo, ...),
  // carried through unchanged.
  nlohmann::ordered_json extensions = nlohmann::ordered_json::object();

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

using Predictions = std::map<std::string, std::vector<RankedWriter>>;

/// Augmentation techniques present among the training records.
inline TechniqueSet training_augmentation(const DatasetManifest& m) {
  unsigned bits = 0;
  for (const auto& r : m.records) {
    if (r.split != Split::Train) continue;
    switch (r.augmentation.kind) {
      case AugmentationTag::Kind::Thinned: bits |= TechniqueSet::kThickness; break;
      case AugmentationTag::Kind::Noised: bits |= TechniqueSet::kNoise; break;
      case AugmentationTag::Kind::Stretched: bits |= TechniqueSet::kStretch; break;
      default: break;
    }
  }
  return TechniqueSet(bits);
}

/**
 * Scores rankings against the manifest: top-1 accuracy for every split, and
 * the CMC curve over test samples for k = 1..writer count. Every assigned
 * record needs a ranking that covers all writers.
 */
inline EvalReport evaluate(const Predictions& predictions, const DatasetManifest& manifest,
                           const std::string& model_name) {
  const std::set<std::string> writers(manifest.writers.begin(), manifest.writers.end());
  const std::size_t k_max = writers.size();
  std::array<std::size_t, 3> hits{}, totals{};
  std::vector<std::size_t> rank_hist(k_max + 1, 0);
  bool any_assigned = false;
  for (const auto& r : manifest.records) {
    if (r.split == Split::Unassigned) continue;
    any_assigned = true;
    auto it = predictions.find(r.sample_id);
    if (it == predictions.end()) throw Error("evaluate: no prediction for sample '" + r.sample_id + "'");
    const auto& ranking = it->second;
    std::set<std::string> ranked;
    std::size_t position = 0;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      if (!writers.contains(ranking[i].writer_id) || !ranked.insert(ranking[i].writer_id).second) {
        throw Error("evaluate: ranking for '" + r.sample_id + "' lists unknown or repeated writer '" +
                    ranking[i].writer_id + "'");
      }
      if (ranking[i].writer_id == r.writer_id) position = i + 1;
    }
    if (ranked.size() != k_max) {
      throw Error("evaluate: ranking for '" + r.sample_id + "' does not cover all " + std::to_string(k_max) +
                  " writers");
    }
    const int s = static_cast<int>(r.split);
    ++totals[s];
    if (position == 1) ++hits[s];
    if (r.split == Split::Test) ++rank_hist[position];
  }
  if (!any_assigned) throw Error("evaluate: manifest has no split assignments");

  EvalReport rep;
  rep.model_name = model_name;
  rep.augmentation_mode = training_augmentation(manifest);
  auto frac = [](std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / b; };
  rep.train_acc = frac(hits[0], totals[0]);
  rep.val_acc = frac(hits[1], totals[1]);
  rep.test_acc = frac(hits[2], totals[2]);
  rep.writer_count = k_max;
  rep.sample_counts = {totals[0], totals[1], totals[2]};
  std::size_t cumulative = 0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    cumulative += rank_hist[k];
    rep.cmc.ranks.push_back(frac(cumulative, totals[2]));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Metrics file: one JSON object. Documented in docs/formats.md.

inline constexpr std::string_view kMetricsSchema = "hwid-metrics";
inline constexpr int kMetricsVersion = 1;

inline std::string metrics_to_string(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = kMetricsSchema;
  j["version"] = kMetricsVersion;
  j["model_name"] = r.model_name;
  j["augmentation_mode"] = r.augmentation_mode.to_string();
  j["train_acc"] = r.train_acc;
  j["val_acc"] = r.val_acc;
  j["test_acc"] = r.test_acc;
  j["cmc"] = r.cmc.ranks;
  j["writer_count"] = r.writer_count;
  j["sample_counts"] = {{"train", r.sample_counts.train}, {"val", r.sample_counts.val}, {"test", r.sample_counts.test}};
  for (const auto& [key, value] : r.extensions.items()) {
    if (j.contains(key)) throw Error("metrics: extension field '" + key + "' shadows a schema field");
    j[key] = value;
  }
  return j.dump(2) + "\n";
}

inline EvalReport metrics_from_string(const std::string& text, const std::string& name = "<metrics>") {
  using json = nlohmann::ordered_json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(name + ": invalid JSON: " + e.what());
  }
  auto fail = [&](const std::string& msg) { return Error(name + ": " + msg); };
  if (!j.is_object()) throw fail("expected a JSON object");
  if (!j.contains("schema") || j["schema"] != kMetricsSchema) throw fail("not an hwid-metrics file");
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != kMetricsVersion) {
    throw fail("unsupported metrics version");
  }
  auto number = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) throw fail(std::string("missing numeric field '") + key + "'");
    return j[key].get<double>();
  };
  auto fraction = [&](const char* key) {
    const double v = number(key);
    if (!(v >= 0.0 && v <= 1.0)) throw fail(std::string("field '") + key + "' must lie in [0, 1]");
    return v;
  };
  auto count = [&](const json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_number_unsigned()) {
      throw fail(std::string("missing non-negative integer field '") + key + "'");
    }
    return obj[key].get<std::size_t>();
  };
  EvalReport r;
  if (!j.contains("model_name") || !j["model_name"].is_string()) throw fail("missing string field 'model_name'");
  r.model_name = j["model_name"].get<std::string>();
  if (!j.contains("augmentation_mode") || !j["augmentation_mode"].is_string()) {
    throw fail("missing string field 'augmentation_mode'");
  }
  try {
    r.augmentation_mode = TechniqueSet::parse(j["augmentation_mode"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw fail(e.what());
  }
  r.train_acc = fraction("train_acc");
  r.val_acc = fraction("val_acc");
  r.test_acc = fraction("test_acc");
  r.writer_count = count(j, "writer_count");
  if (!j.contains("cmc") || !j["cmc"].is_array()) throw fail("missing array field 'cmc'");
  for (const auto& v : j["cmc"]) {
    if (!v.is_number()) throw fail("cmc entries must be numbers");
    r.cmc.ranks.push_back(v.get<double>());
  }
  if (!r.cmc.ranks.empty() && r.cmc.ranks.size() != r.writer_count) {
    throw fail("cmc length must equal writer_count");
  }
  if (!j.contains("sample_counts") || !j["sample_counts"].is_object()) throw fail("missing object 'sample_counts'");
  r.sample_counts = {count(j["sample_counts"], "train"), count(j["sample_counts"], "val"),
                     count(j["sample_counts"], "test")};
  static const std::set<std::string> schema_keys = {"schema",    "version", "model_name", "augmentation_mode",
                                                    "train_acc", "val_acc", "test_acc",   "cmc",
                                                    "writer_count", "sample_counts"};
  for (const auto& [key, value] : j.items()) {
    if (!schema_keys.contains(key)) r.extensions[key] = value;
  }
  return r;
}

inline void write_metrics(const EvalReport& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << metrics_to_string(r);
  if (!out) throw Error("write failed for " + path.string());
}

inline EvalReport read_metrics(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return metrics_from_string(ss.str(), path.string());
}

// ---------------------------------------------------------------------------
// Predictions file: JSON Lines, {"sample_id": ..., "ranking": [{"writer_id", "score"}, ...]}

inline std::string predictions_to_string(const Predictions& p) {
  std::string out;
  for (const auto& [id, ranking] : p) {
    nlohmann::ordered_json j;
    j["sample_id"] = id;
    j["ranking"] = nlohmann::ordered_json::array();
    for (const auto& w : ranking) j["ranking"].push_back({{"writer_id", w.writer_id}, {"score", w.score}});
    out += j.dump() + "\n";
  }
  return out;
}

inline Predictions predictions_from_string(const std::string& text) {
  Predictions p;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) { return Error("predictions line " + std::to_string(line_no) + ": " + msg); };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw fail(e.what());
    }
    if (!j.contains("sample_id") || !j["sample_id"].is_string() || !j.contains("ranking") || !j["ranking"].is_array()) {
      throw fail("expected {\"sample_id\": ..., \"ranking\": [...]}");
    }
    std::vector<RankedWriter> ranking;
    for (const auto& e : j["ranking"]) {
      if (!e.is_object() || !e.contains("writer_id") || !e["writer_id"].is_string() || !e.contains("score") ||
          !e["score"].is_number()) {
        throw fail("ranking entries need writer_id and score");
      }
      ranking.push_back({e["writer_id"].get<std::string>(), e["score"].get<double>()});
    }
    if (!p.emplace(j["sample_id"].get<std::string>(), std::move(ranking)).second) {
      throw fail("duplicate sample_id");
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Table rendering

inline std::string mode_title(TechniqueSet mode) {
  if (mode == TechniqueSet::none()) return "Without Augmentation";
  if (mode == TechniqueSet::all()) return "All Augmentations";
  if (mode == TechniqueSet(TechniqueSet::kThickness)) return "Reduce Line Thickness";
  if (mode == TechniqueSet(TechniqueSet::kNoise)) return "Random Noise";
  if (mode == TechniqueSet(TechniqueSet::kStretch)) return "Random Stretch";
  return "Augmentations: " + mode.to_string();
}

inline std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", v * 100.0);
  return buf;
}

/**
 * Results tables grouped by augmentation mode ("Without Augmentation" first,
 * "All Augmentations" last), one row per report:
 *
 *     Model | Train Acc | Val Acc | Test Acc
 */
inline std::string render_table(std::span<const EvalReport> reports) {
  auto order = [](TechniqueSet m) {
    if (m == TechniqueSet::none()) return 0;
    if (m == TechniqueSet::all()) return 100;
    return 10 * m.count() + static_cast<int>(m.bits());
  };
  std::vector<const EvalReport*> sorted;
  for (const auto& r : reports) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [&](const EvalReport* a, const EvalReport* b) {
    return order(a->augmentation_mode) < order(b->augmentation_mode);
  });

  std::size_t name_w = 5;
  for (const auto* r : sorted) name_w = std::max(name_w, r->model_name.size());
  const std::string rule(name_w + 2 + 3 * 13, '-');
  auto cell = [](const std::string& s, std::size_t w, bool left) {
    if (s.size() >= w) return s;
    const std::string pad(w - s.size(), ' ');
    return left ? s + pad : pad + s;
  };

  std::string out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const TechniqueSet mode = sorted[i]->augmentation_mode;
    if (i == 0 || !(sorted[i - 1]->augmentation_mode == mode)) {
      if (i != 0) out += "\n";
      const std::string title = mode_title(mode);
      out += rule + "\n";
      out += cell("", (rule.size() - std::min(rule.size(), title.size())) / 2, true) + title + "\n";
      out += rule + "\n";
      out += cell("Model", name_w, true) + "  " + cell("Train Acc", 13, false) + cell("Val Acc", 13, false) +
             cell("Test Acc", 13, false) + "\n";
      out += rule + "\n";
    }
    const auto& r = *sorted[i];
    out += cell(r.model_name, name_w, true) + "  " + cell(percent(r.train_acc), 13, false) +
           cell(percent(r.val_acc), 13, false) + cell(percent(r.test_acc), 13, false) + "\n";
  }
  if (!sorted.empty()) out += rule + "\n";
  return out;
}

inline std::string render_cmc(const EvalReport& r) {
  std::string out = "CMC (" + r.model_name + ", test split)\n";
  for (std::size_t k = 1; k <= r.cmc.ranks.size(); ++k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "  rank %2zu  %s\n", k, percent(r.cmc.at(k)).c_str());
    out += buf;
  }
  return out;
}

}  // namespace hwid
