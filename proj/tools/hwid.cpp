// hwid: the writer-identification pipeline as one subcommand per stage.
//
//   synth -> [ingest] -> preprocess -> augment -> split -> train-baseline -> eval
//
// Every stage reads and writes manifests; image paths inside a manifest are
// relative to the manifest's directory. Progress and summaries go to stderr.
// Exit status: 0 success, 1 user or data error, 2 internal error.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hwid/baseline.hpp"
#include "hwid/config.hpp"
#include "hwid/dataset.hpp"
#include "hwid/evaluation.hpp"
#include "hwid/image_io.hpp"
#include "hwid/parallel.hpp"
#include "hwid/segmentation.hpp"
#include "hwid/synth.hpp"

namespace fs = std::filesystem;
using namespace hwid;

namespace {

void note(const std::string& msg) { std::cerr << "hwid: " << msg << "\n"; }

// Refuses to clobber existing output unless --force. A forced directory is
// cleared only if it looks like a previous hwid output (holds a manifest).
void prepare_out_dir(const fs::path& dir, bool force) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw Error("'" + dir.string() + "' exists and is not a directory");
    if (!fs::is_empty(dir)) {
      if (!force) throw Error("output directory '" + dir.string() + "' is not empty (pass --force to replace it)");
      if (!fs::exists(dir / "manifest.jsonl")) {
        throw Error("refusing to clear '" + dir.string() + "': it holds no manifest.jsonl from a previous run");
      }
      fs::remove_all(dir);
    }
  }
  fs::create_directories(dir);
}

void prepare_out_file(const fs::path& file, bool force) {
  if (fs::exists(file) && !force) throw Error("'" + file.string() + "' exists (pass --force to overwrite)");
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

fs::path manifest_dir(const fs::path& manifest) {
  const fs::path parent = manifest.parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

ToolConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  ToolConfig cfg = path.empty() ? ToolConfig{} : read_config(path);
  for (const auto& o : overrides) apply_override(cfg, o);
  validate_config(cfg);
  return cfg;
}

void add_config_options(CLI::App* cmd, std::string& config, std::vector<std::string>& overrides) {
  cmd->add_option("--config", config, "Config file (key = value lines)")->check(CLI::ExistingFile);
  cmd->add_option("--set", overrides, "Override one config key, e.g. --set pipeline.target_size=128")
      ->take_all();
}

bool has_assignments(const DatasetManifest& m) {
  return std::any_of(m.records.begin(), m.records.end(),
                     [](const SampleRecord& r) { return r.split != Split::Unassigned; });
}

std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  return std::string(s.size() < static_cast<std::size_t>(width) ? width - s.size() : 0, '0') + s;
}

int digits(int n) { return n < 10 ? 1 : 1 + digits(n / 10); }

// ---------------------------------------------------------------------------

struct SynthArgs {
  int writers = 10;
  int pages = 20;
  int lines = 5;
  int specks = 0;
  int width = 1000;
  int height = 800;
  std::uint64_t seed = 0;
  std::string out;
  unsigned jobs = 0;
  bool force = false;
};

int run_synth(const SynthArgs& a) {
  if (a.writers < 1) throw Error("--writers must be at least 1");
  if (a.pages < 1) throw Error("--pages must be at least 1");
  if (a.lines < 0 || a.specks < 0) throw Error("--lines and --specks must be non-negative");
  const fs::path root(a.out);
  prepare_out_dir(root, a.force);

  const int wpad = std::max(2, digits(a.writers - 1));
  const int ppad = std::max(3, digits(a.pages - 1));
  DatasetManifest m;
  m.seed = a.seed;
  for (int w = 0; w < a.writers; ++w) {
    const std::string writer = "w" + zero_pad(w, wpad);
    m.writers.push_back(writer);
    fs::create_directories(root / writer);
    for (int p = 0; p < a.pages; ++p) {
      SampleRecord r;
      r.writer_id = writer;
      r.sample_id = writer + "/p" + zero_pad(p, ppad) + ".png";
      r.image_path = r.sample_id;
      r.source_page = r.sample_id;
      m.records.push_back(std::move(r));
    }
  }

  parallel_for(m.records.size(), a.jobs, [&](std::size_t i) {
    const int w = static_cast<int>(i) / a.pages;
    const int p = static_cast<int>(i) % a.pages;
    SynthStyle style = style_for_writer(w, m.records[i].writer_id);
    style.seed = mix64(a.seed, mix64(static_cast<std::uint64_t>(w), static_cast<std::uint64_t>(p)));
    const SynthPage page = synthesize_page(style, a.lines, a.width, a.height, a.specks);
    write_png(root / m.records[i].image_path, page.image);
  });
  write_manifest(m, root / "manifest.jsonl");
  note("synth: wrote " + std::to_string(m.records.size()) + " pages for " + std::to_string(a.writers) +
       " writers to " + root.string());
  return 0;
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::string root;
  std::string layout = "writer-dir";
  std::string out;
  bool force = false;
};

int run_ingest(const IngestArgs& a) {
  const Layout layout = a.layout == "writer-dir" ? Layout::WriterPerDir : Layout::FilenameEncoded;
  const fs::path out = a.out.empty() ? fs::path(a.root) / "manifest.jsonl" : fs::path(a.out);
  prepare_out_file(out, a.force);
  IngestResult result = ingest(a.root, layout);
  rebase_paths(result.manifest, a.root, manifest_dir(out));
  write_manifest(result.manifest, out);
  for (const auto& s : result.skipped) note("ingest: skipped " + s.path + ": " + s.reason);
  note("ingest: " + std::to_string(result.manifest.records.size()) + " samples, " +
       std::to_string(result.manifest.writers.size()) + " writers, " + std::to_string(result.skipped.size()) +
       " skipped");
  return 0;
}

// ---------------------------------------------------------------------------

struct PreprocessArgs {
  std::string manifest;
  std::string out;
  std::string config;
  std::vector<std::string> overrides;
  bool no_segment = false;
  unsigned jobs = 0;
  bool force = false;
};

int run_preprocess(const PreprocessArgs& a) {
  const ToolConfig cfg = load_config(a.config, a.overrides);
  const DatasetManifest in = read_manifest(a.manifest);
  const fs::path in_dir = manifest_dir(a.manifest);
  const fs::path out_dir(a.out);
  prepare_out_dir(out_dir, a.force);

  std::vector<const SampleRecord*> pages;
  std::size_t ignored_variants = 0;
  for (const auto& r : in.records) {
    if (r.is_original()) {
      pages.push_back(&r);
    } else {
      ++ignored_variants;
    }
  }
  if (ignored_variants > 0) note("preprocess: ignoring " + std::to_string(ignored_variants) + " augmented records");
  if (has_assignments(in)) note("preprocess: split assignments are dropped; run split on the output");

  struct PageResult {
    std::vector<SampleRecord> records;
    std::optional<std::string> error;
  };
  std::vector<PageResult> results(pages.size());
  std::atomic<std::size_t> done{0};
  parallel_for(pages.size(), a.jobs, [&](std::size_t i) {
    const SampleRecord& page = *pages[i];
    GrayImage img(1, 1);
    try {
      img = read_image(in_dir / page.image_path);
    } catch (const ImageIoError& e) {
      results[i].error = e.what();
      return;
    }
    std::vector<LineRoi> rois;
    if (a.no_segment) {
      rois.push_back({normalize_roi(img, cfg.pipeline), page.sample_id, -1, img.bounds()});
    } else {
      rois = segment_page(img, cfg.pipeline, page.sample_id);
    }
    fs::path stem = fs::path(page.image_path).lexically_normal();
    stem.replace_extension();
    // Keep the writer subdirectory; drop any leading "../" so output stays under out_dir.
    fs::path rel;
    for (const auto& part : stem) {
      if (part != "..") rel /= part;
    }
    for (const auto& roi : rois) {
      SampleRecord r;
      r.writer_id = page.writer_id;
      r.source_page = page.sample_id;
      r.line_index = roi.line_index;
      const std::string base = roi.line_index < 0 ? rel.generic_string() : rel.generic_string() + "_l" +
                                                                                std::to_string(roi.line_index);
      r.sample_id = base;
      r.image_path = base + ".png";
      fs::create_directories((out_dir / r.image_path).parent_path());
      write_png(out_dir / r.image_path, roi.image);
      results[i].records.push_back(std::move(r));
    }
    const std::size_t n = ++done;
    if (n % 50 == 0) note("preprocess: " + std::to_string(n) + "/" + std::to_string(pages.size()) + " pages");
  });

  DatasetManifest out;
  out.writers = in.writers;
  out.seed = in.seed;
  out.config_fingerprint = config_fingerprint(cfg);
  std::vector<std::string> empty_pages;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    if (results[i].error) {
      ++skipped;
      note("preprocess: skipped " + pages[i]->sample_id + ": " + *results[i].error);
      continue;
    }
    if (results[i].records.empty()) empty_pages.push_back(pages[i]->sample_id);
    for (auto& r : results[i].records) out.records.push_back(std::move(r));
  }
  write_manifest(out, out_dir / "manifest.jsonl");
  std::string summary = "preprocess: " + std::to_string(pages.size() - skipped) + " pages read, " +
                        std::to_string(out.records.size()) + " line images, " + std::to_string(skipped) +
                        " skipped, " + std::to_string(empty_pages.size()) + " pages with no lines";
  note(summary);
  if (!empty_pages.empty()) {
    std::string list;
    for (const auto& p : empty_pages) list += (list.empty() ? "" : ", ") + p;
    note("preprocess: warning: no lines found in: " + list);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct AugmentArgs {
  std::string manifest;
  std::string out;
  std::string config;
  std::vector<std::string> overrides;
  std::string techniques = "all";
  std::optional<std::uint64_t> seed;
  bool all_splits = false;
  unsigned jobs = 0;
  bool force = false;
};

int run_augment(const AugmentArgs& a) {
  ToolConfig cfg = load_config(a.config, a.overrides);
  if (a.seed) cfg.augment.seed = *a.seed;
  TechniqueSet techniques;
  try {
    techniques = TechniqueSet::parse(a.techniques);
  } catch (const std::invalid_argument& e) {
    throw Error(e.what());
  }
  const DatasetManifest in = read_manifest(a.manifest);
  const fs::path in_dir = manifest_dir(a.manifest);
  const fs::path out_path(a.out);
  prepare_out_file(out_path, a.force);
  for (const auto& r : in.records) {
    if (!r.is_original()) throw Error("manifest already contains augmented records (e.g. '" + r.sample_id + "')");
  }

  // Unsplit manifests are augmented whole; split then keeps children with parents.
  const bool unsplit = !has_assignments(in);
  if (unsplit) note("augment: manifest has no splits; augmenting every record");
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < in.records.size(); ++i) {
    if (unsplit || a.all_splits || in.records[i].split == Split::Train) targets.push_back(i);
  }

  std::vector<std::vector<SampleRecord>> variants(targets.size());
  parallel_for(targets.size(), a.jobs, [&](std::size_t t) {
    const SampleRecord& src = in.records[targets[t]];
    const GrayImage img = read_image(in_dir / src.image_path);
    fs::path stem(src.image_path);
    stem.replace_extension();
    for (auto& v : augment_sample(img, sample_key(src.source_page, src.line_index), cfg.augment, techniques)) {
      SampleRecord r = src;
      r.augmentation = v.tag;
      r.sample_id = src.sample_id + v.tag.suffix();
      r.image_path = stem.generic_string() + v.tag.suffix() + ".png";
      write_png(in_dir / r.image_path, v.image);
      variants[t].push_back(std::move(r));
    }
  });

  DatasetManifest out = in;
  out.records.clear();
  out.config_fingerprint = config_fingerprint(cfg);
  std::size_t t = 0, added = 0;
  for (std::size_t i = 0; i < in.records.size(); ++i) {
    out.records.push_back(in.records[i]);
    if (t < targets.size() && targets[t] == i) {
      for (auto& r : variants[t]) {
        out.records.push_back(std::move(r));
        ++added;
      }
      ++t;
    }
  }
  rebase_paths(out, in_dir, manifest_dir(out_path));
  write_manifest(out, out_path);
  note("augment: " + techniques.to_string() + " on " + std::to_string(targets.size()) + " records, " +
       std::to_string(added) + " variants added, " + std::to_string(out.records.size()) + " records total");
  return 0;
}

// ---------------------------------------------------------------------------

struct SplitArgs {
  std::string manifest;
  std::string out;
  std::string ratios = "0.8,0.1,0.1";
  std::uint64_t seed = 0;
  bool force = false;
};

SplitRatios parse_ratios(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      parts.push_back(detail::parse_double(detail::trim(item)));
    } catch (const std::invalid_argument& e) {
      throw Error(std::string("--ratios: ") + e.what());
    }
  }
  if (parts.size() != 3) throw Error("--ratios needs three comma-separated values, got '" + text + "'");
  return {parts[0], parts[1], parts[2]};
}

int run_split(const SplitArgs& a) {
  const SplitRatios ratios = parse_ratios(a.ratios);
  const DatasetManifest in = read_manifest(a.manifest);
  const fs::path out_path(a.out);
  prepare_out_file(out_path, a.force);
  DatasetManifest out = split(in, ratios, a.seed);
  rebase_paths(out, manifest_dir(a.manifest), manifest_dir(out_path));
  write_manifest(out, out_path);
  std::array<std::size_t, 3> counts{};
  for (const auto& r : out.records) ++counts[static_cast<int>(r.split)];
  note("split: " + std::to_string(counts[0]) + " train, " + std::to_string(counts[1]) + " val, " +
       std::to_string(counts[2]) + " test records across " + std::to_string(out.writers.size()) + " writers");
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string manifest;
  std::string metrics;
  std::string predictions;
  std::string model_name = "lbp-centroid";
  unsigned jobs = 0;
  bool force = false;
};

int run_train_baseline(const TrainArgs& a) {
  const DatasetManifest m = read_manifest(a.manifest);
  if (!has_assignments(m)) throw Error("manifest has no split assignments (run split first)");
  prepare_out_file(a.metrics, a.force);
  if (!a.predictions.empty()) prepare_out_file(a.predictions, a.force);
  const fs::path dir = manifest_dir(a.manifest);

  std::vector<FeatureVector> features(m.records.size());
  std::atomic<std::size_t> done{0};
  parallel_for(m.records.size(), a.jobs, [&](std::size_t i) {
    features[i] = lbp_features(read_image(dir / m.records[i].image_path));
    const std::size_t n = ++done;
    if (n % 500 == 0) note("train-baseline: features " + std::to_string(n) + "/" + std::to_string(features.size()));
  });

  std::vector<LabeledFeature> training;
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    if (m.records[i].split == Split::Train) training.push_back({m.records[i].writer_id, features[i]});
  }
  const auto templates = enroll(training, m.writers);
  Predictions predictions;
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    predictions[m.records[i].sample_id] = identify(features[i], templates).writers;
  }
  EvalReport report = evaluate(predictions, m, a.model_name);
  report.extensions["features"] = "uniform-lbp-59";
  report.extensions["matcher"] = "cosine-nearest-centroid";
  report.extensions["config_fingerprint"] = m.config_fingerprint;

  write_metrics(report, a.metrics);
  if (!a.predictions.empty()) {
    std::ofstream out(a.predictions, std::ios::binary | std::ios::trunc);
    out << predictions_to_string(predictions);
    if (!out) throw Error("write failed for " + a.predictions);
  }
  const std::vector<EvalReport> rows{report};
  std::cout << render_table(rows);
  note("train-baseline: " + std::to_string(templates.size()) + " writer templates from " +
       std::to_string(training.size()) + " training samples; metrics in " + a.metrics);
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::vector<std::string> metrics;
  std::vector<std::string> compare;
  std::string manifest;
  std::string predictions;
  std::string model_name = "external";
  std::string out;
  bool cmc = false;
  bool force = false;
};

int run_eval(const EvalArgs& a) {
  const int modes = !a.metrics.empty() + !a.compare.empty() + !a.manifest.empty();
  if (modes != 1) throw Error("eval needs exactly one of --metrics, --compare, or --manifest with --predictions");
  std::vector<EvalReport> reports;
  if (!a.manifest.empty()) {
    if (a.predictions.empty()) throw Error("--manifest requires --predictions");
    std::ifstream in(a.predictions, std::ios::binary);
    if (!in) throw Error("cannot open " + a.predictions);
    std::stringstream ss;
    ss << in.rdbuf();
    const DatasetManifest m = read_manifest(a.manifest);
    if (!has_assignments(m)) throw Error("manifest has no split assignments (run split first)");
    reports.push_back(evaluate(predictions_from_string(ss.str()), m, a.model_name));
    if (!a.out.empty()) {
      prepare_out_file(a.out, a.force);
      write_metrics(reports.back(), a.out);
    }
  } else {
    if (!a.compare.empty() && a.compare.size() < 2) throw Error("--compare needs at least two metrics files");
    for (const auto& path : a.compare.empty() ? a.metrics : a.compare) reports.push_back(read_metrics(path));
  }
  std::cout << render_table(reports);
  if (a.cmc) {
    for (const auto& r : reports) std::cout << "\n" << render_cmc(r);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hwid: handwritten line segmentation, augmentation and writer identification"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Render a synthetic multi-writer corpus of page images");
  c_synth->add_option("--writers", synth.writers, "Number of writers")->capture_default_str();
  c_synth->add_option("--pages", synth.pages, "Pages per writer")->capture_default_str();
  c_synth->add_option("--lines", synth.lines, "Text lines per page")->capture_default_str();
  c_synth->add_option("--specks", synth.specks, "Isolated noise specks per page")->capture_default_str();
  c_synth->add_option("--width", synth.width, "Page width in pixels")->capture_default_str();
  c_synth->add_option("--height", synth.height, "Page height in pixels")->capture_default_str();
  c_synth->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  c_synth->add_option("--out", synth.out, "Output directory")->required();
  c_synth->add_option("--jobs", synth.jobs, "Worker threads (0 = all cores)");
  c_synth->add_flag("--force", synth.force, "Replace a previous output directory");

  IngestArgs ing;
  auto* c_ingest = app.add_subcommand("ingest", "Build a manifest from an existing image tree");
  c_ingest->add_option("--root", ing.root, "Image root directory")->required()->check(CLI::ExistingDirectory);
  c_ingest->add_option("--layout", ing.layout, "writer-dir (root/<writer>/<page>.png) or filename "
                                              "(root/<writer>_<page>_<line>.png)")
      ->check(CLI::IsMember({"writer-dir", "filename"}))
      ->capture_default_str();
  c_ingest->add_option("--out", ing.out, "Manifest path (default <root>/manifest.jsonl)");
  c_ingest->add_flag("--force", ing.force, "Overwrite an existing manifest");

  PreprocessArgs pre;
  auto* c_pre = app.add_subcommand("preprocess", "Segment pages into normalized line images");
  c_pre->add_option("--manifest", pre.manifest, "Input page manifest")->required()->check(CLI::ExistingFile);
  c_pre->add_option("--out", pre.out, "Output directory (gets manifest.jsonl)")->required();
  add_config_options(c_pre, pre.config, pre.overrides);
  c_pre->add_flag("--no-segment", pre.no_segment, "Normalize whole pages instead of extracting lines");
  c_pre->add_option("--jobs", pre.jobs, "Worker threads (0 = all cores)");
  c_pre->add_flag("--force", pre.force, "Replace a previous output directory");

  AugmentArgs aug;
  auto* c_aug = app.add_subcommand("augment", "Add thinned, noised and stretched variants of line images");
  c_aug->add_option("--manifest", aug.manifest, "Input manifest")->required()->check(CLI::ExistingFile);
  c_aug->add_option("--out", aug.out, "Output manifest path")->required();
  add_config_options(c_aug, aug.config, aug.overrides);
  c_aug->add_option("--techniques", aug.techniques, "none, all, or e.g. thickness+noise")->capture_default_str();
  c_aug->add_option("--seed", aug.seed, "Override augment.seed");
  c_aug->add_flag("--all-splits", aug.all_splits, "Augment val and test records too");
  c_aug->add_option("--jobs", aug.jobs, "Worker threads (0 = all cores)");
  c_aug->add_flag("--force", aug.force, "Overwrite existing outputs");

  SplitArgs sp;
  auto* c_split = app.add_subcommand("split", "Assign per-writer train/val/test splits");
  c_split->add_option("--manifest", sp.manifest, "Input manifest")->required()->check(CLI::ExistingFile);
  c_split->add_option("--out", sp.out, "Output manifest path")->required();
  c_split->add_option("--ratios", sp.ratios, "train,val,test fractions")->capture_default_str();
  c_split->add_option("--seed", sp.seed, "Random seed")->capture_default_str();
  c_split->add_flag("--force", sp.force, "Overwrite an existing manifest");

  TrainArgs tr;
  auto* c_train = app.add_subcommand("train-baseline", "Fit and score the LBP nearest-centroid baseline");
  c_train->add_option("--manifest", tr.manifest, "Split manifest")->required()->check(CLI::ExistingFile);
  c_train->add_option("--metrics", tr.metrics, "Metrics file to write")->required();
  c_train->add_option("--predictions", tr.predictions, "Also write per-sample rankings (JSON Lines)");
  c_train->add_option("--model-name", tr.model_name, "Model name in the report")->capture_default_str();
  c_train->add_option("--jobs", tr.jobs, "Worker threads (0 = all cores)");
  c_train->add_flag("--force", tr.force, "Overwrite existing outputs");

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "Render metrics files or score external predictions");
  c_eval->add_option("--metrics", ev.metrics, "Metrics file(s) to render");
  c_eval->add_option("--compare", ev.compare, "Two or more metrics files, grouped by augmentation mode");
  c_eval->add_option("--manifest", ev.manifest, "Split manifest for scoring --predictions")
      ->check(CLI::ExistingFile);
  c_eval->add_option("--predictions", ev.predictions, "Rankings (JSON Lines) to score")->check(CLI::ExistingFile);
  c_eval->add_option("--model-name", ev.model_name, "Model name for scored predictions")->capture_default_str();
  c_eval->add_option("--out", ev.out, "Write the scored report as a metrics file");
  c_eval->add_flag("--cmc", ev.cmc, "Also print the CMC curve");
  c_eval->add_flag("--force", ev.force, "Overwrite an existing --out file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    int rc = 0;
    if (*c_synth) rc = run_synth(synth);
    if (*c_ingest) rc = run_ingest(ing);
    if (*c_pre) rc = run_preprocess(pre);
    if (*c_aug) rc = run_augment(aug);
    if (*c_split) rc = run_split(sp);
    if (*c_train) rc = run_train_baseline(tr);
    if (*c_eval) rc = run_eval(ev);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "done in %.2f s", secs);
    if (!*c_eval) note(buf);
    return rc;
  } catch (const hwid::Error& e) {
    note(std::string("error: ") + e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    note(std::string("error: ") + e.what());
    return 1;
  } catch (const fs::filesystem_error& e) {
    note(std::string("error: ") + e.what());
    return 1;
  } catch (const std::exception& e) {
    note(std::string("internal error: ") + e.what());
    return 2;
  }
}
