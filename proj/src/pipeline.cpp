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

#include "laughseg/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "laughseg/error.hpp"

namespace laughseg {

void PipelineConfig::validate() const {
  background.validate();
  frame.validate();
  segmenter.validate();
  mel.validate();
  forest.validate();
  if (embedding.source == EmbeddingSource::kExternal) {
    std::error_code ec;
    if (!embedding.path || !std::filesystem::is_regular_file(*embedding.path, ec)) {
      throw Error(ErrorCode::kMissingFile, "external embeddings file not found");
    }
  }
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json j;
  j["background"] = {{"mode", to_string(background.mode)},
                     {"stem_path", background.stem_path ? nlohmann::json(background.stem_path->string())
                                                        : nlohmann::json(nullptr)}};
  j["frame"] = {{"frame_length_s", frame.frame_length_s},
                {"hop_s", frame.hop_s},
                {"floor_db", frame.floor_db}};
  j["segmenter"] = {{"energy_threshold_db", segmenter.energy_threshold_db},
                    {"min_event_s", segmenter.min_event_s},
                    {"max_event_s", segmenter.max_event_s},
                    {"max_silence_s", segmenter.max_silence_s},
                    {"offset_s", segmenter.offset_s}};
  j["mel"] = {{"sample_rate", mel.sample_rate}, {"n_fft", mel.n_fft}, {"hop", mel.hop},
              {"n_mels", mel.n_mels},           {"f_min", mel.f_min}, {"f_max", mel.f_max},
              {"log_eps", mel.log_eps}};
  j["forest"] = {{"n_trees", forest.n_trees},
                 {"subsample", forest.subsample},
                 {"seed", forest.seed},
                 {"threshold_mode", forest.threshold.to_string()}};
  j["embedding"] = {{"source", to_string(embedding.source)},
                    {"path", embedding.path ? nlohmann::json(embedding.path->string())
                                            : nlohmann::json(nullptr)}};
  j["standardize"] = standardize;
  return j;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["input"] = {{"duration_s", input_duration_s},
                {"sample_rate", input_sample_rate},
                {"channels", input_channels}};
  j["counts"] = {{"energy_frames", energy_frames},
                 {"raw_events", raw_events},
                 {"events_detected", events_detected},
                 {"events_scored", events_scored},
                 {"segments_emitted", segments_emitted}};
  j["embedding_dim"] = embedding_dim;
  j["threshold"] = threshold;
  j["degenerate_forest"] = degenerate_forest;
  auto& ev = j["events"] = nlohmann::json::array();
  for (const Event& e : events) {
    ev.push_back({{"start_s", e.start_s},
                  {"end_s", e.end_s},
                  {"score", e.score ? nlohmann::json(*e.score) : nlohmann::json(nullptr)},
                  {"laughter", e.label.value_or("") == "laughter"}});
  }
  j["config"] = config;
  return j;
}

std::vector<Embedding> join_embeddings(std::span<const Event> events,
                                       std::span<const Embedding> records) {
  std::vector<Embedding> out;
  out.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    const Embedding* best = nullptr;
    double best_err = kEmbeddingJoinTolerance;
    for (const Embedding& r : records) {
      const double err = std::max(std::abs(r.event.start_s - e.start_s),
                                  std::abs(r.event.end_s - e.end_s));
      if (err <= best_err) {
        best = &r;
        best_err = err;
      }
    }
    if (best == nullptr) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "event %zu [%.3f, %.3f) has no embedding record", i,
                    e.start_s, e.end_s);
      throw Error(ErrorCode::kEmbeddingEventMismatch, buf);
    }
    Embedding emb = *best;
    emb.event = e;
    out.push_back(std::move(emb));
  }
  return out;
}

FeatureMatrix embedding_matrix(std::span<const Embedding> embeddings) {
  if (embeddings.empty()) return {};
  const std::size_t dim = embeddings.front().values.size();
  const EmbeddingSource source = embeddings.front().source;
  FeatureMatrix m(embeddings.size(), dim);
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    const Embedding& e = embeddings[i];
    if (e.values.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "embedding " + std::to_string(i) + " has dim " +
                                                     std::to_string(e.values.size()));
    }
    if (e.source != source) {
      throw Error(ErrorCode::kMixedEmbeddingSources, "builtin and external embeddings mixed");
    }
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = e.values[j];
  }
  return m;
}

SegmentationResult segment_laughter(const AudioBuffer& audio, const PipelineConfig& cfg) {
  cfg.validate();
  audio.validate();
  SegmentationResult result;
  RunReport& report = result.report;
  report.config = cfg.to_json();
  report.input_duration_s = audio.duration_seconds();
  report.input_sample_rate = audio.sample_rate;
  report.input_channels = audio.channel_count();

  const AudioBuffer background = acquire_background(audio, cfg.background, cfg.mel.sample_rate);
  const EnergySeries energy = frame_energy_db(background, cfg.frame);
  report.energy_frames = energy.frames.size();
  const std::vector<Event> raw = detect_events(energy, cfg.segmenter);
  report.raw_events = raw.size();
  std::vector<Event> events =
      apply_offset(raw, cfg.segmenter.offset_s, background.duration_seconds());
  report.events_detected = events.size();
  if (events.empty()) {
    return result;
  }

  std::vector<Embedding> embeddings;
  if (cfg.embedding.source == EmbeddingSource::kBuiltin) {
    embeddings = embed_events(background, events, cfg.mel);
  } else {
    const auto records = read_embeddings(*cfg.embedding.path);
    embeddings = join_embeddings(events, records);
  }
  FeatureMatrix points = embedding_matrix(embeddings);
  report.embedding_dim = points.cols();
  if (cfg.standardize) standardize(points);

  std::vector<double> scores;
  double threshold = 0.5;
  if (points.rows() < 2) {
    report.degenerate_forest = true;
    scores.assign(points.rows(), 0.5);
  } else {
    result.forest = IsolationForest::fit(points, cfg.forest);
    scores = result.forest->score_all(points);
    threshold = result.forest->threshold();
    report.degenerate_forest = result.forest->degenerate();
  }
  report.threshold = threshold;
  report.events_scored = scores.size();

  for (std::size_t i = 0; i < events.size(); ++i) {
    events[i].score = scores[i];
    const bool laughter = scores[i] < threshold;
    events[i].label = laughter ? "laughter" : "other";
    if (laughter) {
      result.segments.push_back({events[i].start_s, events[i].end_s, scores[i], i});
    }
  }
  report.segments_emitted = result.segments.size();
  report.events = std::move(events);
  return result;
}

}  // namespace laughseg
