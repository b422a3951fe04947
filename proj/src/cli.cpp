/*
 * Copyright 2026 The LaughSeg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "laughseg/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "laughseg/error.hpp"
#include "laughseg/eval.hpp"
#include "laughseg/synth.hpp"

namespace laughseg::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSeedEnv = "LAUGHSEG_SEED";

// Settings that are exposed as `--key VALUE` flags on `segment`.
const char* const kSegmentKeys[] = {
    "mode",        "stem",       "threshold-db", "embeddings", "seed",          "out",
    "jobs",        "frame-length", "hop",        "floor-db",   "min-event",     "max-event",
    "max-silence", "offset",     "n-trees",      "subsample",  "threshold-mode", "standardize",
    "dump-forest"};

bool is_known_key(const std::string& key) {
  return std::any_of(std::begin(kSegmentKeys), std::end(kSegmentKeys),
                     [&](const char* k) { return key == k; });
}

laughseg::Error bad_value(const std::string& key, const std::string& value) {
  return laughseg::Error(ErrorCode::kInvalidArgument, "bad value for " + key + ": '" + value + "'");
}

double as_double(const Settings& s, const std::string& key) {
  const std::string& v = s.at(key);
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw bad_value(key, v);
    return d;
  } catch (const std::logic_error&) {
    throw bad_value(key, v);
  }
}

std::uint64_t as_u64(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) throw bad_value(key, v);
  try {
    return std::stoull(v);
  } catch (const std::logic_error&) {
    throw bad_value(key, v);
  }
}

std::uint64_t as_u64(const Settings& s, const std::string& key) { return as_u64(key, s.at(key)); }

bool as_bool(const Settings& s, const std::string& key) {
  const std::string& v = s.at(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw bad_value(key, v);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw bad_value(key, text);
    } catch (const std::logic_error&) {
      throw bad_value(key, text);
    }
  }
  if (out.empty()) throw bad_value(key, text);
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw laughseg::Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw laughseg::Error(ErrorCode::kIoError, "write failed: " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw laughseg::Error(ErrorCode::kMissingFile, path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw laughseg::Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

// "name.labels.tsv" -> "name"; "name.tsv" -> "name".
std::string label_stem(const fs::path& p) {
  std::string name = p.filename().string();
  for (const std::string suffix : {".labels.tsv", ".tsv"}) {
    if (name.size() > suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      return name.substr(0, name.size() - suffix.size());
    }
  }
  return name;
}

std::map<std::string, fs::path> label_files(const fs::path& dir) {
  std::map<std::string, fs::path> labels, plain;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() > 11 && name.ends_with(".labels.tsv")) {
      labels[label_stem(entry.path())] = entry.path();
    } else if (name.ends_with(".tsv")) {
      plain[label_stem(entry.path())] = entry.path();
    }
  }
  return labels.empty() ? plain : labels;
}

int usage_error(const CLI::App& app, std::ostream& err, const std::string& msg) {
  err << "error: " << msg << "\n\n" << app.help();
  return kExitUsage;
}

// ---------------------------------------------------------------- segment

struct SegmentJob {
  fs::path input;
  std::string name;
};

fs::path per_input_path(const std::string& setting, const SegmentJob& job, const char* ext) {
  const fs::path p(setting);
  std::error_code ec;
  if (fs::is_directory(p, ec)) return p / (job.name + ext);
  return p;
}

json run_segment_job(const SegmentJob& job, const Settings& settings, const fs::path& out_dir) {
  PipelineConfig cfg = pipeline_config_from_settings(settings);
  if (auto it = settings.find("stem"); it != settings.end()) {
    cfg.background.stem_path = per_input_path(it->second, job, ".wav");
  }
  if (auto it = settings.find("embeddings"); it != settings.end()) {
    cfg.embedding.source = EmbeddingSource::kExternal;
    cfg.embedding.path = per_input_path(it->second, job, ".lemb");
  }
  const AudioBuffer audio = load_wav(job.input);
  const SegmentationResult result = segment_laughter(audio, cfg);

  std::vector<Event> emitted;
  for (const LaughterSegment& s : result.segments) emitted.push_back(s.as_event());
  const fs::path labels = out_dir / (job.name + ".labels.tsv");
  const fs::path report = out_dir / (job.name + ".report.json");
  write_labels(labels, emitted, "laughter");
  json r = result.report.to_json();
  r["input"]["path"] = job.input.string();
  write_text(report, r.dump(2) + "\n");
  if (as_bool(settings, "dump-forest") && result.forest) {
    write_text(out_dir / (job.name + ".forest.json"), result.forest->to_json().dump(1) + "\n");
  }
  return {{"input", job.input.string()},
          {"name", job.name},
          {"ok", true},
          {"labels", labels.filename().string()},
          {"report", report.filename().string()},
          {"segments", emitted.size()}};
}

int cmd_segment(CLI::App& app, const std::vector<std::string>& inputs,
                const std::map<std::string, CLI::Option*>& opts,
                const std::map<std::string, std::string>& values, const std::string& config_path,
                const std::string& manifest_path, std::ostream& out, std::ostream& err) {
  (void)out;
  Settings overrides;
  std::vector<std::string> input_list = inputs;
  try {
    if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
      overrides["seed"] = env;
    }
    if (!manifest_path.empty()) {
      const json m = read_json(manifest_path);
      if (!m.contains("settings") || !m.contains("inputs")) {
        throw laughseg::Error(ErrorCode::kParseError, "manifest lacks settings or inputs");
      }
      for (const auto& [k, v] : m["settings"].items()) overrides[k] = v.get<std::string>();
      if (input_list.empty()) {
        for (const auto& p : m["inputs"]) input_list.push_back(p.get<std::string>());
      }
    }
    if (!config_path.empty()) merge_settings(overrides, load_settings(config_path));
  } catch (const laughseg::Error& e) {
    return usage_error(app, err, e.what());
  } catch (const json::exception& e) {
    return usage_error(app, err, std::string("manifest: ") + e.what());
  }
  for (const auto& [key, opt] : opts) {
    if (opt->count() > 0) overrides[key] = values.at(key);
  }
  for (const auto& [k, v] : overrides) {
    if (!is_known_key(k)) return usage_error(app, err, "unknown setting '" + k + "'");
  }
  if (overrides.contains("stem") && !overrides.contains("mode")) overrides["mode"] = "stem";

  Settings settings = default_segment_settings();
  merge_settings(settings, overrides);

  if (input_list.empty()) return usage_error(app, err, "no input files");
  std::size_t jobs_n = 0;
  try {
    (void)pipeline_config_from_settings(settings);
    jobs_n = static_cast<std::size_t>(as_u64(settings, "jobs"));
    as_bool(settings, "dump-forest");
  } catch (const laughseg::Error& e) {
    return usage_error(app, err, e.what());
  }
  for (const char* key : {"stem", "embeddings"}) {
    auto it = settings.find(key);
    std::error_code ec;
    if (it != settings.end() && input_list.size() > 1 && !fs::is_directory(it->second, ec)) {
      return usage_error(app, err,
                         std::string("--") + key + " must be a directory with several inputs");
    }
  }

  std::vector<SegmentJob> jobs;
  for (const std::string& in : input_list) {
    const fs::path p = fs::absolute(in).lexically_normal();
    jobs.push_back({p, p.stem().string()});
  }

  const fs::path out_dir = settings.at("out");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    err << "error: cannot create " << out_dir << ": " << ec.message() << "\n";
    return kExitDataFailure;
  }

  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (jobs_n == 0) jobs_n = hw;
  jobs_n = std::min(jobs_n, jobs.size());
  const int inner_threads = static_cast<int>(std::max<std::size_t>(1, hw / jobs_n));

  std::vector<json> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    omp_set_num_threads(inner_threads);
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = run_segment_job(jobs[i], settings, out_dir);
        std::lock_guard lock(log_mutex);
        err << "segment: " << jobs[i].input.string() << " -> "
            << results[i]["segments"].get<std::size_t>() << " segments\n";
      } catch (const std::exception& e) {
        results[i] = {{"input", jobs[i].input.string()},
                      {"name", jobs[i].name},
                      {"ok", false},
                      {"error", e.what()}};
        std::lock_guard lock(log_mutex);
        err << "segment: " << jobs[i].input.string() << " failed: " << e.what() << "\n";
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs_n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  bool all_ok = true;
  json manifest;
  manifest["tool"] = "laughseg";
  manifest["version"] = kToolVersion;
  manifest["command"] = "segment";
  manifest["created_at"] = utc_timestamp();
  manifest["seed"] = as_u64(settings, "seed");
  auto& in_json = manifest["inputs"] = json::array();
  for (const SegmentJob& j : jobs) in_json.push_back(j.input.string());
  manifest["settings"] = settings;
  manifest["results"] = results;
  for (const json& r : results) all_ok = all_ok && r["ok"].get<bool>();
  try {
    write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const laughseg::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataFailure;
  }
  return all_ok ? kExitOk : kExitDataFailure;
}

// ------------------------------------------------------------------- eval

struct EvalArgs {
  std::string pred_dir;
  std::string gt_dir;
  std::string ious = "0.3,0.7";
  std::string bins = "1,2,4,8";
  double bins_iou = 0.7;
  bool macro = false;
  std::string out = "eval.report.json";
  std::string csv;
};

void print_summary(std::ostream& out, const EvalReport& r) {
  out << "files: " << r.n_files
      << "  aggregation: " << (r.aggregation == Aggregation::kMicro ? "micro" : "macro") << "\n";
  out << "IoU     precision  recall     f1         tp     fp     fn\n";
  for (const ThresholdResult& t : r.per_threshold) {
    out << std::fixed << std::setprecision(2) << std::left << std::setw(8) << t.iou_threshold
        << std::setprecision(4) << std::setw(11) << t.prf.precision << std::setw(11)
        << t.prf.recall << std::setw(11) << t.prf.f1 << std::setw(7) << t.prf.tp << std::setw(7)
        << t.prf.fp << t.prf.fn << "\n";
  }
  out << "duration bins @ IoU " << std::setprecision(2) << r.bins_iou_threshold << "\n";
  out << "bin     support  preds    f1\n";
  for (const BinResult& b : r.duration_bins) {
    out << std::setw(8) << b.bin.label() << std::setw(9) << b.support << std::setw(9) << b.n_preds
        << std::setprecision(4) << b.f1 << "\n";
  }
  out << std::defaultfloat << std::right;
}

int cmd_eval(CLI::App& app, const EvalArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<double> ious, edges;
  std::vector<DurationBin> bins;
  try {
    ious = parse_list("iou", a.ious);
    edges = parse_list("bins", a.bins);
    bins = bins_from_edges(edges);
    validate_bins(bins);
    for (double t : ious) {
      if (!(t > 0.0 && t <= 1.0)) throw bad_value("iou", a.ious);
    }
  } catch (const laughseg::Error& e) {
    return usage_error(app, err, e.what());
  }
  std::error_code ec;
  for (const std::string& d : {a.pred_dir, a.gt_dir}) {
    if (!fs::is_directory(d, ec)) return usage_error(app, err, "not a directory: " + d);
  }

  const auto preds = label_files(a.pred_dir);
  const auto gts = label_files(a.gt_dir);
  std::vector<std::string> unpaired;
  std::vector<EvalReport> reports;
  json files = json::array();
  bool data_ok = true;
  for (const auto& [name, gt_path] : gts) {
    try {
      const auto gt = read_labels(gt_path);
      std::vector<Event> pred;
      if (auto it = preds.find(name); it != preds.end()) {
        pred = read_labels(it->second);
      } else {
        // Scored as an empty prediction so recall reflects the miss.
        unpaired.push_back(gt_path.string());
      }
      EvalReport r = evaluate(pred, gt, ious, bins, a.bins_iou);
      files.push_back({{"name", name}, {"report", r.to_json()}});
      reports.push_back(std::move(r));
    } catch (const laughseg::Error& e) {
      err << "eval: " << name << ": " << e.what() << "\n";
      data_ok = false;
    }
  }
  for (const auto& [name, pred_path] : preds) {
    if (!gts.contains(name)) unpaired.push_back(pred_path.string());
  }

  const EvalReport overall =
      aggregate(reports, a.macro ? Aggregation::kMacro : Aggregation::kMicro);
  print_summary(out, overall);

  json report;
  report["tool"] = "laughseg";
  report["version"] = kToolVersion;
  report["pred_dir"] = a.pred_dir;
  report["gt_dir"] = a.gt_dir;
  report["overall"] = overall.to_json();
  report["files"] = files;
  report["unpaired"] = unpaired;
  try {
    write_text(a.out, report.dump(2) + "\n");
    if (!a.csv.empty()) write_text(a.csv, overall.bins_csv());
  } catch (const laughseg::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataFailure;
  }
  if (!unpaired.empty()) {
    err << "eval: unpaired files:\n";
    for (const auto& u : unpaired) err << "  " << u << "\n";
    return kExitDataFailure;
  }
  return data_ok ? kExitOk : kExitDataFailure;
}

// ------------------------------------------------------------------ synth

struct SynthArgs {
  std::string out;
  std::size_t files = 20;
  std::string seed;
  std::size_t events_per_file = 10;
  std::size_t distractors_per_file = 2;
  bool force = false;
};

bool is_synth_output(const fs::path& p) {
  const std::string name = p.filename().string();
  return name == "manifest.json" ||
         (name.rfind("synth_", 0) == 0 && (name.ends_with(".wav") || name.ends_with(".tsv")));
}

int cmd_synth(CLI::App& app, const SynthArgs& a, std::ostream& err) {
  std::uint64_t seed = 42;
  try {
    if (!a.seed.empty()) {
      seed = as_u64("seed", a.seed);
    } else if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
      seed = as_u64(kSeedEnv, env);
    }
  } catch (const laughseg::Error& e) {
    return usage_error(app, err, e.what());
  }
  const fs::path dir(a.out);
  std::error_code ec;
  if (fs::exists(dir, ec) && !fs::is_empty(dir, ec)) {
    if (!a.force) {
      err << "error: " << dir.string() << " is not empty (use --force)\n";
      return kExitDataFailure;
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && is_synth_output(entry.path())) fs::remove(entry.path(), ec);
    }
  }
  CorpusParams params;
  params.n_files = a.files;
  params.laughter_per_file = a.events_per_file;
  params.distractors_per_file = a.distractors_per_file;
  try {
    write_corpus(dir, generate_synthetic_corpus(params, seed), params, seed);
  } catch (const laughseg::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataFailure;
  }
  err << "synth: wrote " << a.files << " files to " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

Settings default_segment_settings() {
  return {{"mode", "pass"},         {"threshold-db", "-45"},  {"seed", "42"},
          {"out", "laughseg_out"},  {"jobs", "0"},            {"frame-length", "0.025"},
          {"hop", "0.01"},          {"floor-db", "-100"},     {"min-event", "0.2"},
          {"max-event", "30"},      {"max-silence", "0.3"},   {"offset", "0.1"},
          {"n-trees", "100"},       {"subsample", "256"},     {"threshold-mode", "auto"},
          {"standardize", "false"}, {"dump-forest", "false"}};
}

PipelineConfig pipeline_config_from_settings(const Settings& settings) {
  Settings s = default_segment_settings();
  merge_settings(s, settings);
  PipelineConfig cfg;
  cfg.background.mode = parse_background_mode(s.at("mode"));
  if (cfg.background.mode == BackgroundMode::kExternalStem) {
    if (!s.contains("stem")) {
      throw laughseg::Error(ErrorCode::kInvalidArgument, "--mode stem needs --stem");
    }
    cfg.background.stem_path = s.at("stem");
  } else if (s.contains("stem")) {
    throw laughseg::Error(ErrorCode::kInvalidArgument, "--stem given but --mode is " + s.at("mode"));
  }
  cfg.frame.frame_length_s = as_double(s, "frame-length");
  cfg.frame.hop_s = as_double(s, "hop");
  cfg.frame.floor_db = as_double(s, "floor-db");
  cfg.segmenter.energy_threshold_db = as_double(s, "threshold-db");
  cfg.segmenter.min_event_s = as_double(s, "min-event");
  cfg.segmenter.max_event_s = as_double(s, "max-event");
  cfg.segmenter.max_silence_s = as_double(s, "max-silence");
  cfg.segmenter.offset_s = as_double(s, "offset");
  cfg.forest.n_trees = static_cast<std::size_t>(as_u64(s, "n-trees"));
  cfg.forest.subsample = static_cast<std::size_t>(as_u64(s, "subsample"));
  cfg.forest.seed = as_u64(s, "seed");
  cfg.forest.threshold = ThresholdMode::parse(s.at("threshold-mode"));
  cfg.standardize = as_bool(s, "standardize");
  if (s.contains("embeddings")) {
    cfg.embedding.source = EmbeddingSource::kExternal;
    cfg.embedding.path = s.at("embeddings");
  }
  cfg.background.validate();
  cfg.frame.validate();
  cfg.segmenter.validate();
  cfg.mel.validate();
  cfg.forest.validate();
  return cfg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unsupervised laughter segmentation toolkit", "laughseg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto* segment = app.add_subcommand("segment", "Detect laughter segments in WAV files");
  std::vector<std::string> inputs;
  std::string config_path, manifest_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> opts;
  segment->add_option("audio", inputs, "Input WAV files");
  segment->add_option("--config", config_path, "key = value settings file");
  segment->add_option("--manifest", manifest_path, "Re-run the inputs and settings of a manifest");
  for (const char* key : kSegmentKeys) values[key];
  const std::map<std::string, std::string> help = {
      {"mode", "Background source: sub | stem | pass"},
      {"stem", "Separated background WAV (file, or directory of <name>.wav)"},
      {"threshold-db", "Energy threshold in dBFS"},
      {"embeddings", "External LEMB embeddings (file, or directory of <name>.lemb)"},
      {"seed", "Forest seed (env LAUGHSEG_SEED sets the default)"},
      {"out", "Output directory"},
      {"jobs", "Files processed concurrently (0 = logical CPUs)"},
      {"frame-length", "Energy frame length, s"},
      {"hop", "Energy frame hop, s"},
      {"floor-db", "Energy floor for silent frames, dBFS"},
      {"min-event", "Minimum event duration, s"},
      {"max-event", "Maximum event duration, s"},
      {"max-silence", "Longest gap bridged inside an event, s"},
      {"offset", "Boundary padding, s"},
      {"n-trees", "Isolation trees"},
      {"subsample", "Rows per tree"},
      {"threshold-mode", "auto | quantile:Q"},
  };
  for (const auto& [key, text] : help) {
    opts[key] = segment->add_option("--" + key, values[key], text);
  }
  opts["standardize"] = segment->add_flag_function(
      "--standardize", [&](std::int64_t) { values["standardize"] = "true"; },
      "Z-score embeddings before fitting");
  opts["dump-forest"] = segment->add_flag_function(
      "--dump-forest", [&](std::int64_t) { values["dump-forest"] = "true"; },
      "Write <name>.forest.json next to each report");

  auto* eval = app.add_subcommand("eval", "Score predicted label files against ground truth");
  EvalArgs eval_args;
  eval->add_option("--pred", eval_args.pred_dir, "Directory of predicted label files")->required();
  eval->add_option("--gt", eval_args.gt_dir, "Directory of ground-truth label files")->required();
  eval->add_option("--iou", eval_args.ious, "Comma-separated IoU thresholds")->capture_default_str();
  eval->add_option("--bins", eval_args.bins, "Interior duration-bin edges, s")->capture_default_str();
  eval->add_option("--bins-iou", eval_args.bins_iou, "IoU threshold for duration bins")
      ->capture_default_str();
  eval->add_flag("--macro", eval_args.macro, "Average per-file scores instead of summing counts");
  eval->add_option("--out", eval_args.out, "Combined JSON report")->capture_default_str();
  eval->add_option("--csv", eval_args.csv, "Per-bin CSV for plotting");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic laughter corpus");
  SynthArgs synth_args;
  synth->add_option("--out", synth_args.out, "Output directory")->required();
  synth->add_option("--files", synth_args.files, "Number of files")->capture_default_str();
  synth->add_option("--seed", synth_args.seed, "Seed (env LAUGHSEG_SEED sets the default)");
  synth->add_option("--events-per-file", synth_args.events_per_file, "Laughter events per file")
      ->capture_default_str();
  synth->add_option("--distractors-per-file", synth_args.distractors_per_file,
                    "Tone/chirp distractors per file")
      ->capture_default_str();
  synth->add_flag("--force", synth_args.force, "Replace corpus files in a non-empty directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kExitUsage;
  }

  try {
    if (segment->parsed()) {
      return cmd_segment(*segment, inputs, opts, values, config_path, manifest_path, out, err);
    }
    if (eval->parsed()) return cmd_eval(*eval, eval_args, out, err);
    if (synth->parsed()) return cmd_synth(*synth, synth_args, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataFailure;
  }
  return kExitUsage;
}

}  // namespace laughseg::cli
