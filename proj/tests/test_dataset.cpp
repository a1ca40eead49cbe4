#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "hwid/dataset.hpp"
#include "hwid/synth.hpp"

using namespace hwid;
namespace fs = std::filesystem;

namespace {

DatasetManifest corpus(int writers, int per_writer) {
  DatasetManifest m;
  for (int w = 0; w < writers; ++w) {
    for (int s = 0; s < per_writer; ++s) {
      SampleRecord r;
      r.writer_id = "w" + std::to_string(w);
      r.source_page = r.writer_id + "/p" + std::to_string(s);
      r.line_index = s % 3;
      r.sample_id = r.source_page + "_l" + std::to_string(r.line_index);
      r.image_path = r.sample_id + ".png";
      m.records.push_back(r);
    }
  }
  m.sync_writers();
  return m;
}

/// Appends one variant per original for each non-original tag.
void add_variants(DatasetManifest& m) {
  const auto originals = m.records;
  AugmentationTag thin, noise;
  thin.kind = AugmentationTag::Kind::Thinned;
  noise.kind = AugmentationTag::Kind::Noised;
  noise.noise_seed = 99;
  for (const auto& o : originals) {
    for (const auto& tag : {thin, noise}) {
      SampleRecord v = o;
      v.augmentation = tag;
      v.sample_id += tag.suffix();
      v.image_path = v.sample_id + ".png";
      m.records.push_back(v);
    }
  }
}

ManifestError::Kind parse_kind(const std::string& text) {
  try {
    manifest_from_string(text);
  } catch (const ManifestError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ManifestError::Kind::Io;
}

int parse_line(const std::string& text) {
  try {
    manifest_from_string(text);
  } catch (const ManifestError& e) {
    return e.line();
  }
  return -1;
}

const std::string kHeader =
    R"({"format":"hwid-manifest","version":1,"seed":0,"config_fingerprint":"","split_ratios":null,"writers":["a","b"]})"
    "\n";

std::string row(const std::string& id, const std::string& writer = "a", const std::string& extra = "") {
  return R"({"sample_id":")" + id + R"(","writer_id":")" + writer +
         R"(","image_path":"x.png","split":"unassigned","augmentation":"original","source_page":")" + id +
         R"(","line_index":0)" + extra + "}\n";
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("hwid_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST(SplitCounts, FloorRuleWithMinimumPresence) {
  const SplitRatios r;
  EXPECT_EQ(split_counts(20, r), (SplitCounts{16, 2, 2}));
  EXPECT_EQ(split_counts(3, r), (SplitCounts{1, 1, 1}));
  EXPECT_EQ(split_counts(4, r), (SplitCounts{2, 1, 1}));
  EXPECT_EQ(split_counts(10, r), (SplitCounts{8, 1, 1}));
  EXPECT_EQ(split_counts(100, {0.7, 0.29, 0.01}), (SplitCounts{70, 29, 1}));
  for (std::size_t n = 3; n < 200; ++n) {
    const auto c = split_counts(n, r);
    EXPECT_EQ(c.train + c.val + c.test, n);
    EXPECT_GE(c.val, 1u);
    EXPECT_GE(c.test, 1u);
    EXPECT_GE(c.train, 1u);
    // Adjustment moves at most one sample into each split.
    EXPECT_LE(static_cast<double>(n) * 0.8 - 2, static_cast<double>(c.train));
  }
}

TEST(SplitRatios, Validation) {
  EXPECT_THROW(validate_ratios({0.8, 0.1, 0.2}), Error);
  EXPECT_THROW(validate_ratios({0.9, 0.1, 0.0}), Error);
  EXPECT_NO_THROW(validate_ratios({0.6, 0.2, 0.2}));
}

TEST(Split, SixteenTwoTwoPerWriterWithoutLeakage) {
  DatasetManifest m = corpus(10, 20);
  add_variants(m);
  const DatasetManifest s = split(m, {}, 7);
  std::map<std::string, std::array<int, 3>> counts;
  std::map<std::pair<std::string, int>, Split> parent_split;
  for (const auto& r : s.records) {
    ASSERT_NE(r.split, Split::Unassigned);
    if (r.is_original()) {
      ++counts[r.writer_id][static_cast<int>(r.split)];
      parent_split[r.parent_key()] = r.split;
    }
  }
  for (const auto& [w, c] : counts) EXPECT_EQ(c, (std::array<int, 3>{16, 2, 2})) << w;
  for (const auto& r : s.records) EXPECT_EQ(r.split, parent_split.at(r.parent_key())) << r.sample_id;
  EXPECT_EQ(s.split_ratios, SplitRatios{});
  EXPECT_EQ(s.seed, 7u);
}

TEST(Split, DeterministicPerSeed) {
  const DatasetManifest m = corpus(4, 12);
  EXPECT_EQ(split(m, {}, 1), split(m, {}, 1));
  const auto a = split(m, {}, 1), b = split(m, {}, 2);
  bool differs = false;
  for (std::size_t i = 0; i < a.records.size(); ++i) differs |= a.records[i].split != b.records[i].split;
  EXPECT_TRUE(differs);
  // Record order in the input does not change any assignment.
  DatasetManifest shuffled = m;
  std::reverse(shuffled.records.begin(), shuffled.records.end());
  const auto c = split(shuffled, {}, 1);
  std::map<std::string, Split> by_id;
  for (const auto& r : a.records) by_id[r.sample_id] = r.split;
  for (const auto& r : c.records) EXPECT_EQ(by_id.at(r.sample_id), r.split);
}

TEST(Split, RejectsSmallWriters) {
  DatasetManifest m = corpus(3, 5);
  m.records.erase(std::remove_if(m.records.begin(), m.records.end(),
                                 [](const SampleRecord& r) { return r.writer_id == "w1" && r.source_page != "w1/p0" &&
                                                                    r.source_page != "w1/p1"; }),
                  m.records.end());
  try {
    split(m, {}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("'w1'"), std::string::npos) << e.what();
  }
}

TEST(Manifest, RoundTripsExactly) {
  EXPECT_EQ(manifest_from_string(manifest_to_string({})), DatasetManifest{});
  DatasetManifest m = corpus(10, 10);
  add_variants(m);
  m.records[3].augmentation.stretch_factor = std::nullopt;
  AugmentationTag st;
  st.kind = AugmentationTag::Kind::Stretched;
  st.stretch_factor = -0.3141592653589793;
  m.records.back().augmentation = st;
  m.config_fingerprint = "0123456789abcdef";
  m = split(m, {0.8, 0.1, 0.1}, 18446744073709551615ull);
  ASSERT_EQ(m.records.size(), 300u);
  const std::string text = manifest_to_string(m);
  EXPECT_EQ(manifest_from_string(text), m);
  EXPECT_EQ(manifest_to_string(manifest_from_string(text)), text);

  TempDir dir("manifest");
  write_manifest(m, dir.path / "m.jsonl");
  EXPECT_EQ(read_manifest(dir.path / "m.jsonl"), m);
  EXPECT_THROW(read_manifest(dir.path / "missing.jsonl"), ManifestError);
}

TEST(Manifest, ErrorsCarryKindAndLine) {
  using K = ManifestError::Kind;
  EXPECT_EQ(parse_kind(""), K::Malformed);
  EXPECT_EQ(parse_kind(kHeader + row("x") + "{not json\n"), K::Malformed);
  EXPECT_EQ(parse_line(kHeader + row("x") + "{not json\n"), 3);
  EXPECT_EQ(parse_kind(kHeader + row("x") + row("y", "a", R"(,"colour":"red")")), K::UnknownField);
  EXPECT_EQ(parse_line(kHeader + row("x") + row("y", "a", R"(,"colour":"red")")), 3);
  EXPECT_EQ(parse_kind(kHeader + row("x") + row("x")), K::DuplicateId);
  EXPECT_EQ(parse_kind(kHeader + row("x", "zed")), K::UnknownWriter);
  std::string v2 = kHeader;
  v2.replace(v2.find("\"version\":1"), 11, "\"version\":2");
  EXPECT_EQ(parse_kind(v2), K::UnsupportedVersion);
  EXPECT_EQ(parse_kind(R"({"format":"hwid-manifest"})" "\n"), K::Malformed);

  DatasetManifest m = split(corpus(2, 10), {}, 3);
  for (auto& r : m.records) {
    if (r.split == Split::Val) {
      r.split = Split::Train;
      break;
    }
  }
  EXPECT_THROW(manifest_to_string(m), ManifestError);
  m.records.clear();
  std::string text = manifest_to_string(split(corpus(2, 10), {}, 3));
  const auto pos = text.find("\"split\":\"val\"");
  text.replace(pos, 13, "\"split\":\"test\"");
  EXPECT_EQ(parse_kind(text), K::SplitViolation);

  try {
    manifest_from_string(kHeader + row("x") + row("x"));
  } catch (const ManifestError& e) {
    EXPECT_NE(std::string(e.what()).find("'x'"), std::string::npos);
  }
}

TEST(Manifest, VariantsMustShareTheirParentsSplit) {
  DatasetManifest m = corpus(2, 6);
  add_variants(m);
  m = split(m, {}, 1);
  for (auto& r : m.records) {
    if (!r.is_original() && r.split == Split::Test) {
      r.split = Split::Train;
      break;
    }
  }
  try {
    validate_manifest(m);
    FAIL();
  } catch (const ManifestError& e) {
    EXPECT_EQ(e.kind(), ManifestError::Kind::SplitViolation);
  }
}

TEST(Ingest, WriterPerDirectory) {
  TempDir dir("ingest_dirs");
  for (const char* w : {"alice", "bob", "carol"}) {
    fs::create_directories(dir.path / w);
    for (int i = 0; i < 4; ++i) write_png(dir.path / w / ("p" + std::to_string(i) + ".png"), GrayImage(8, 6, 200));
  }
  std::ofstream(dir.path / "bob" / "broken.png") << "not a png";
  std::ofstream(dir.path / "carol" / "notes.txt") << "ignored";
  const IngestResult r = ingest(dir.path, Layout::WriterPerDir);
  EXPECT_EQ(r.manifest.records.size(), 12u);
  EXPECT_EQ(r.manifest.writers, (std::vector<std::string>{"alice", "bob", "carol"}));
  ASSERT_EQ(r.skipped.size(), 1u);
  EXPECT_EQ(r.skipped[0].path, "bob/broken.png");
  EXPECT_EQ(r.manifest.records.front().sample_id, "alice/p0.png");
  EXPECT_EQ(r.manifest.records.back().sample_id, "carol/p3.png");
  for (std::size_t i = 1; i < r.manifest.records.size(); ++i) {
    EXPECT_LT(r.manifest.records[i - 1].image_path, r.manifest.records[i].image_path);
  }
  EXPECT_EQ(ingest(dir.path, Layout::WriterPerDir).manifest, r.manifest);
}

TEST(Ingest, FilenameEncodedAndEmpty) {
  TempDir dir("ingest_names");
  EXPECT_THROW(ingest(dir.path, Layout::FilenameEncoded), Error);
  write_png(dir.path / "w_01_p3_2.png", GrayImage(4, 4, 0));
  write_png(dir.path / "bad.png", GrayImage(4, 4, 0));
  write_png(dir.path / "w_p_x.png", GrayImage(4, 4, 0));
  const IngestResult r = ingest(dir.path, Layout::FilenameEncoded);
  ASSERT_EQ(r.manifest.records.size(), 1u);
  EXPECT_EQ(r.manifest.records[0].writer_id, "w_01");
  EXPECT_EQ(r.manifest.records[0].source_page, "w_01_p3");
  EXPECT_EQ(r.manifest.records[0].line_index, 2);
  EXPECT_EQ(r.skipped.size(), 2u);
  EXPECT_THROW(ingest(dir.path / "nope", Layout::FilenameEncoded), Error);
}

TEST(Ingest, SyntheticCorpusLabelsMatchGenerator) {
  TempDir dir("ingest_synth");
  for (int w = 0; w < 10; ++w) {
    const std::string id = "w" + std::to_string(w);
    fs::create_directories(dir.path / id);
    for (int p = 0; p < 20; ++p) {
      SynthStyle style = style_for_writer(w, id);
      style.seed = static_cast<std::uint64_t>(p);
      write_png(dir.path / id / ("p" + std::to_string(p + 100) + ".png"), synthesize_page(style, 1, 200, 120).image);
    }
  }
  const IngestResult r = ingest(dir.path, Layout::WriterPerDir);
  ASSERT_EQ(r.manifest.records.size(), 200u);
  EXPECT_EQ(r.manifest.writers.size(), 10u);
  for (const auto& rec : r.manifest.records) {
    EXPECT_EQ(rec.writer_id, rec.image_path.substr(0, rec.image_path.find('/')));
  }
}

TEST(RebasePaths, KeepsFilesReachable) {
  DatasetManifest m = corpus(1, 3);
  rebase_paths(m, "/data/a/b", "/data/c");
  EXPECT_EQ(m.records[0].image_path, "../a/b/w0/p0_l0.png");
}
