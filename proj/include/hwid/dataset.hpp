#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hwid/augmentation.hpp"
#include "hwid/error.hpp"
#include "hwid/image_io.hpp"
#include "hwid/random.hpp"

namespace hwid {

enum class Split { Train, Val, Test, Unassigned };

inline std::string to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
    case Split::Unassigned: return "unassigned";
  }
  return "unassigned";
}

inline std::optional<Split> parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  if (s == "unassigned") return Split::Unassigned;
  return std::nullopt;
}

struct SampleRecord {
  std::string sample_id;
  std::string writer_id;
  std::string image_path;  // relative to the manifest's directory
  Split split = Split::Unassigned;
  AugmentationTag augmentation;
  std::string source_page;
  int line_index = -1;  // -1 for page-level samples

  bool is_original() const { return augmentation.kind == AugmentationTag::Kind::Original; }

  /// Identifies the original a variant was derived from.
  std::pair<std::string, int> parent_key() const { return {source_page, line_index}; }

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;

  friend bool operator==(const SplitRatios&, const SplitRatios&) = default;
};

struct DatasetManifest {
  std::vector<SampleRecord> records;
  std::vector<std::string> writers;  // sorted, unique
  std::string config_fingerprint;
  std::uint64_t seed = 0;
  std::optional<SplitRatios> split_ratios;  // set once split() has run

  /// Rebuilds `writers` from the records.
  void sync_writers() {
    std::set<std::string> ids;
    for (const auto& r : records) ids.insert(r.writer_id);
    writers.assign(ids.begin(), ids.end());
  }

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

class ManifestError : public Error {
 public:
  enum class Kind { Io, Malformed, UnknownField, UnsupportedVersion, DuplicateId, UnknownWriter, SplitViolation };

  ManifestError(Kind kind, const std::string& msg, int line = 0)
      : Error(line > 0 ? "manifest line " + std::to_string(line) + ": " + msg : "manifest: " + msg),
        kind_(kind),
        line_(line) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

// ---------------------------------------------------------------------------
// Split arithmetic

struct SplitCounts {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;

  friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

inline void validate_ratios(const SplitRatios& r) {
  if (!(r.train > 0 && r.val > 0 && r.test > 0)) throw Error("split ratios must be positive");
  if (std::abs(r.train + r.val + r.test - 1.0) > 1e-9) throw Error("split ratios must sum to 1");
}

/**
 * floor(n * train) / floor(n * val) / remainder, then every empty split takes
 * one sample from the currently largest split (ties prefer train, then test).
 * Requires n >= 3.
 */
inline SplitCounts split_counts(std::size_t n, const SplitRatios& r) {
  // The epsilon absorbs products like 100 * 0.29 = 28.999999999999996.
  SplitCounts c;
  c.train = static_cast<std::size_t>(std::floor(n * r.train + 1e-9));
  c.val = static_cast<std::size_t>(std::floor(n * r.val + 1e-9));
  c.train = std::min(c.train, n);
  c.val = std::min(c.val, n - c.train);
  c.test = n - c.train - c.val;
  auto donate_to = [&](std::size_t& target) {
    if (target > 0) return;
    std::size_t* donor = &c.train;
    if (c.test > *donor) donor = &c.test;
    if (c.val > *donor) donor = &c.val;
    --*donor;
    ++target;
  };
  donate_to(c.val);
  donate_to(c.test);
  donate_to(c.train);
  return c;
}

// ---------------------------------------------------------------------------
// Validation shared by read, write and split

namespace detail {

inline std::map<std::pair<std::string, int>, const SampleRecord*> originals_by_key(
    const DatasetManifest& m) {
  std::map<std::pair<std::string, int>, const SampleRecord*> out;
  for (const auto& r : m.records) {
    if (r.is_original()) out.emplace(r.parent_key(), &r);
  }
  return out;
}

}  // namespace detail

/// Checks split consistency: all-or-nothing assignment, per-writer counts,
/// and variants co-located with their originals.
inline void validate_splits(const DatasetManifest& m) {
  using K = ManifestError::Kind;
  const bool any_assigned = std::any_of(m.records.begin(), m.records.end(),
                                        [](const SampleRecord& r) { return r.split != Split::Unassigned; });
  const auto parents = detail::originals_by_key(m);
  for (const auto& r : m.records) {
    if (r.is_original()) continue;
    auto it = parents.find(r.parent_key());
    if (it == parents.end()) {
      throw ManifestError(K::Malformed, "variant '" + r.sample_id + "' has no original for page '" +
                                            r.source_page + "' line " + std::to_string(r.line_index));
    }
    if (it->second->split != r.split) {
      throw ManifestError(K::SplitViolation, "variant '" + r.sample_id + "' is in split " + to_string(r.split) +
                                                 " but its original '" + it->second->sample_id + "' is in " +
                                                 to_string(it->second->split));
    }
  }
  if (!any_assigned) return;
  if (!m.split_ratios) throw ManifestError(K::SplitViolation, "records carry splits but no split ratios are recorded");
  std::map<std::string, std::array<std::size_t, 3>> per_writer;
  for (const auto& r : m.records) {
    if (!r.is_original()) continue;
    if (r.split == Split::Unassigned) {
      throw ManifestError(K::SplitViolation, "sample '" + r.sample_id + "' is unassigned in a split manifest");
    }
    ++per_writer[r.writer_id][static_cast<int>(r.split)];
  }
  for (const auto& [writer, counts] : per_writer) {
    const std::size_t n = counts[0] + counts[1] + counts[2];
    const SplitCounts want = n >= 3 ? split_counts(n, *m.split_ratios) : SplitCounts{};
    const SplitCounts got{counts[0], counts[1], counts[2]};
    if (n < 3 || !(want == got)) {
      throw ManifestError(K::SplitViolation, "writer '" + writer + "' has " + std::to_string(got.train) + "/" +
                                                 std::to_string(got.val) + "/" + std::to_string(got.test) +
                                                 " train/val/test, expected " + std::to_string(want.train) + "/" +
                                                 std::to_string(want.val) + "/" + std::to_string(want.test));
    }
  }
}

inline void validate_manifest(const DatasetManifest& m) {
  using K = ManifestError::Kind;
  std::set<std::string> ids;
  const std::set<std::string> writers(m.writers.begin(), m.writers.end());
  for (const auto& r : m.records) {
    if (r.sample_id.empty()) throw ManifestError(K::Malformed, "empty sample_id");
    if (!ids.insert(r.sample_id).second) throw ManifestError(K::DuplicateId, "duplicate sample_id '" + r.sample_id + "'");
    if (!writers.contains(r.writer_id)) {
      throw ManifestError(K::UnknownWriter, "sample '" + r.sample_id + "' names unlisted writer '" + r.writer_id + "'");
    }
  }
  validate_splits(m);
}

// ---------------------------------------------------------------------------
// Manifest file: JSON Lines. Line 1 is the header object, every further line
// one record. Documented in docs/formats.md.

inline constexpr std::string_view kManifestFormat = "hwid-manifest";
inline constexpr int kManifestVersion = 1;

inline std::string manifest_to_string(const DatasetManifest& m) {
  validate_manifest(m);
  nlohmann::ordered_json header;
  header["format"] = kManifestFormat;
  header["version"] = kManifestVersion;
  header["seed"] = m.seed;
  header["config_fingerprint"] = m.config_fingerprint;
  if (m.split_ratios) {
    header["split_ratios"] = {m.split_ratios->train, m.split_ratios->val, m.split_ratios->test};
  } else {
    header["split_ratios"] = nullptr;
  }
  header["writers"] = m.writers;
  std::string out = header.dump() + "\n";
  for (const auto& r : m.records) {
    nlohmann::ordered_json row;
    row["sample_id"] = r.sample_id;
    row["writer_id"] = r.writer_id;
    row["image_path"] = r.image_path;
    row["split"] = to_string(r.split);
    row["augmentation"] = r.augmentation.to_string();
    row["source_page"] = r.source_page;
    row["line_index"] = r.line_index;
    out += row.dump() + "\n";
  }
  return out;
}

inline DatasetManifest manifest_from_string(std::string_view text) {
  using K = ManifestError::Kind;
  using json = nlohmann::json;
  DatasetManifest m;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool have_header = false;
  std::set<std::string> ids;

  auto parse_object = [&](const std::string& s) {
    json j;
    try {
      j = json::parse(s);
    } catch (const json::parse_error& e) {
      throw ManifestError(K::Malformed, std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!j.is_object()) throw ManifestError(K::Malformed, "expected a JSON object", line_no);
    return j;
  };
  auto check_fields = [&](const json& j, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw ManifestError(K::UnknownField, "unknown field '" + key + "'", line_no);
      }
    }
    for (auto key : allowed) {
      if (!j.contains(std::string(key))) {
        throw ManifestError(K::Malformed, "missing field '" + std::string(key) + "'", line_no);
      }
    }
  };
  auto string_field = [&](const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_string()) throw ManifestError(K::Malformed, std::string("field '") + key + "' must be a string", line_no);
    return v.get<std::string>();
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const json j = parse_object(line);
    if (!have_header) {
      check_fields(j, {"format", "version", "seed", "config_fingerprint", "split_ratios", "writers"});
      if (j["format"] != kManifestFormat) throw ManifestError(K::Malformed, "not an hwid manifest", line_no);
      if (!j["version"].is_number_integer() || j["version"].get<int>() != kManifestVersion) {
        throw ManifestError(K::UnsupportedVersion, "unsupported manifest version " + j["version"].dump(), line_no);
      }
      if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0)) {
        throw ManifestError(K::Malformed, "seed must be a non-negative integer", line_no);
      }
      m.seed = j["seed"].get<std::uint64_t>();
      m.config_fingerprint = string_field(j, "config_fingerprint");
      const auto& ratios = j["split_ratios"];
      if (!ratios.is_null()) {
        if (!ratios.is_array() || ratios.size() != 3 || !ratios[0].is_number() || !ratios[1].is_number() ||
            !ratios[2].is_number()) {
          throw ManifestError(K::Malformed, "split_ratios must be null or [train, val, test]", line_no);
        }
        m.split_ratios = SplitRatios{ratios[0].get<double>(), ratios[1].get<double>(), ratios[2].get<double>()};
      }
      if (!j["writers"].is_array()) throw ManifestError(K::Malformed, "writers must be an array", line_no);
      std::set<std::string> seen;
      for (const auto& w : j["writers"]) {
        if (!w.is_string()) throw ManifestError(K::Malformed, "writer ids must be strings", line_no);
        if (!seen.insert(w.get<std::string>()).second) {
          throw ManifestError(K::Malformed, "duplicate writer '" + w.get<std::string>() + "'", line_no);
        }
        m.writers.push_back(w.get<std::string>());
      }
      have_header = true;
      continue;
    }
    check_fields(j, {"sample_id", "writer_id", "image_path", "split", "augmentation", "source_page", "line_index"});
    SampleRecord r;
    r.sample_id = string_field(j, "sample_id");
    r.writer_id = string_field(j, "writer_id");
    r.image_path = string_field(j, "image_path");
    const auto split = parse_split(string_field(j, "split"));
    if (!split) throw ManifestError(K::Malformed, "unknown split '" + j["split"].get<std::string>() + "'", line_no);
    r.split = *split;
    try {
      r.augmentation = AugmentationTag::parse(string_field(j, "augmentation"));
    } catch (const std::invalid_argument& e) {
      throw ManifestError(K::Malformed, e.what(), line_no);
    }
    r.source_page = string_field(j, "source_page");
    if (!j["line_index"].is_number_integer()) throw ManifestError(K::Malformed, "line_index must be an integer", line_no);
    r.line_index = j["line_index"].get<int>();
    if (!ids.insert(r.sample_id).second) {
      throw ManifestError(K::DuplicateId, "duplicate sample_id '" + r.sample_id + "'", line_no);
    }
    if (std::find(m.writers.begin(), m.writers.end(), r.writer_id) == m.writers.end()) {
      throw ManifestError(K::UnknownWriter, "writer '" + r.writer_id + "' is not listed in the header", line_no);
    }
    m.records.push_back(std::move(r));
  }
  if (!have_header) throw ManifestError(K::Malformed, "missing header line");
  validate_splits(m);
  return m;
}

inline void write_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
  const std::string text = manifest_to_string(m);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ManifestError(ManifestError::Kind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw ManifestError(ManifestError::Kind::Io, "write failed for " + path.string());
}

inline DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError(ManifestError::Kind::Io, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return manifest_from_string(ss.str());
}

// ---------------------------------------------------------------------------
// Ingestion

enum class Layout { WriterPerDir, FilenameEncoded };

struct SkippedFile {
  std::string path;
  std::string reason;
};

struct IngestResult {
  DatasetManifest manifest;
  std::vector<SkippedFile> skipped;
};

namespace detail {

inline bool is_image_file(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".pgm";
}

}  // namespace detail

/**
 * One unassigned original record per readable image under `root`, ordered by
 * relative path. WriterPerDir: root/<writer_id>/<page>.png (page-level,
 * line_index -1). FilenameEncoded: root/<writer_id>_<page>_<line>.png; the
 * last two '_' fields are page and line, the rest is the writer id.
 */
inline IngestResult ingest(const std::filesystem::path& root, Layout layout) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw Error("ingest: '" + root.string() + "' is not a directory");
  std::vector<fs::path> files;
  if (layout == Layout::WriterPerDir) {
    for (const auto& entry : fs::directory_iterator(root)) {
      if (!entry.is_directory()) continue;
      for (const auto& f : fs::directory_iterator(entry.path())) {
        if (f.is_regular_file() && detail::is_image_file(f.path())) files.push_back(f.path());
      }
    }
  } else {
    for (const auto& f : fs::directory_iterator(root)) {
      if (f.is_regular_file() && detail::is_image_file(f.path())) files.push_back(f.path());
    }
  }
  std::sort(files.begin(), files.end(), [&](const fs::path& a, const fs::path& b) {
    return fs::relative(a, root).generic_string() < fs::relative(b, root).generic_string();
  });

  IngestResult result;
  for (const auto& file : files) {
    const std::string rel = fs::relative(file, root).generic_string();
    SampleRecord r;
    r.sample_id = rel;
    r.image_path = rel;
    r.source_page = rel;
    if (layout == Layout::WriterPerDir) {
      r.writer_id = fs::relative(file.parent_path(), root).generic_string();
    } else {
      const std::string stem = file.stem().string();
      const auto last = stem.rfind('_');
      const auto mid = last == std::string::npos || last == 0 ? std::string::npos : stem.rfind('_', last - 1);
      if (mid == std::string::npos || mid == 0) {
        result.skipped.push_back({rel, "file name does not match <writer>_<page>_<line>"});
        continue;
      }
      const std::string line = stem.substr(last + 1);
      int line_index = 0;
      auto [p, ec] = std::from_chars(line.data(), line.data() + line.size(), line_index);
      if (ec != std::errc{} || p != line.data() + line.size() || line.empty() || line_index < 0) {
        result.skipped.push_back({rel, "line field '" + line + "' is not a non-negative integer"});
        continue;
      }
      r.writer_id = stem.substr(0, mid);
      r.source_page = stem.substr(0, last);
      r.line_index = line_index;
    }
    try {
      (void)read_image(file);
    } catch (const ImageIoError& e) {
      result.skipped.push_back({rel, e.what()});
      continue;
    }
    result.manifest.records.push_back(std::move(r));
  }
  if (result.manifest.records.empty()) throw Error("ingest: no samples under '" + root.string() + "'");
  result.manifest.sync_writers();
  return result;
}

/// Re-expresses every image path relative to a different manifest directory.
inline void rebase_paths(DatasetManifest& m, const std::filesystem::path& from_dir,
                         const std::filesystem::path& to_dir) {
  namespace fs = std::filesystem;
  const fs::path to_abs = fs::weakly_canonical(fs::absolute(to_dir));
  for (auto& r : m.records) {
    const fs::path abs = fs::weakly_canonical(fs::absolute(from_dir / r.image_path));
    r.image_path = abs.lexically_relative(to_abs).generic_string();
  }
}

// ---------------------------------------------------------------------------
// Splitting

/**
 * Per-writer stratified split of the original records. Each writer's
 * originals, ordered by sample_id, are shuffled with a stream derived from
 * (seed, writer_id) and cut by split_counts(). Variants follow their original.
 */
inline DatasetManifest split(const DatasetManifest& input, const SplitRatios& ratios, std::uint64_t seed) {
  validate_ratios(ratios);
  DatasetManifest out = input;
  out.seed = seed;
  out.split_ratios = ratios;

  std::map<std::string, std::vector<std::size_t>> by_writer;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    if (out.records[i].is_original()) by_writer[out.records[i].writer_id].push_back(i);
  }
  for (const auto& w : out.writers) {
    if (!by_writer.contains(w)) throw Error("split: writer '" + w + "' has no original samples (needs >= 3)");
  }
  for (auto& [writer, idx] : by_writer) {
    if (idx.size() < 3) {
      throw Error("split: writer '" + writer + "' has " + std::to_string(idx.size()) +
                  " samples; at least 3 are needed to appear in train, val and test");
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return out.records[a].sample_id < out.records[b].sample_id;
    });
    RandomStream stream(mix64(seed, fnv1a(writer)));
    stream.shuffle(std::span<std::size_t>(idx));
    const SplitCounts c = split_counts(idx.size(), ratios);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      out.records[idx[k]].split = k < c.train ? Split::Train : (k < c.train + c.val ? Split::Val : Split::Test);
    }
  }
  const auto parents = detail::originals_by_key(out);
  std::vector<std::pair<std::size_t, Split>> inherited;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    auto& r = out.records[i];
    if (r.is_original()) continue;
    auto it = parents.find(r.parent_key());
    if (it == parents.end()) throw Error("split: variant '" + r.sample_id + "' has no original");
    inherited.emplace_back(i, it->second->split);
  }
  for (auto [i, s] : inherited) out.records[i].split = s;
  validate_manifest(out);
  return out;
}

}  // namespace hwid
