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

#ifndef LAUGHSEG_PIPELINE_HPP_
#define LAUGHSEG_PIPELINE_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "laughseg/audio_io.hpp"
#include "laughseg/energy_segmenter.hpp"
#include "laughseg/features.hpp"
#include "laughseg/iforest.hpp"
#include "laughseg/voice_removal.hpp"

namespace laughseg {

inline constexpr const char* kToolVersion = "0.1.0";

// Detected events are joined to external records within this many seconds
// at both ends.
inline constexpr double kEmbeddingJoinTolerance = 0.010;

struct EmbeddingSpec {
  EmbeddingSource source = EmbeddingSource::kBuiltin;
  std::optional<std::filesystem::path> path;  // LEMB file when external
};

struct PipelineConfig {
  BackgroundSource background;
  FrameConfig frame;
  SegmenterConfig segmenter;
  MelConfig mel;
  ForestConfig forest;
  EmbeddingSpec embedding;
  bool standardize = false;

  void validate() const;
  nlohmann::json to_json() const;
};

struct LaughterSegment {
  double start_s = 0.0;
  double end_s = 0.0;
  double anomaly_score = 0.0;
  std::size_t event_index = 0;  // into RunReport's detected event list

  Event as_event() const { return Event{start_s, end_s, anomaly_score, "laughter"}; }
};

struct RunReport {
  double input_duration_s = 0.0;
  int input_sample_rate = 0;
  std::size_t input_channels = 0;
  std::size_t energy_frames = 0;
  std::size_t raw_events = 0;       // before offset merging
  std::size_t events_detected = 0;  // after offset padding and merging
  std::size_t events_scored = 0;
  std::size_t segments_emitted = 0;
  std::size_t embedding_dim = 0;
  double threshold = 0.5;
  bool degenerate_forest = false;
  std::vector<Event> events;  // detected events with scores
  nlohmann::json config;

  nlohmann::json to_json() const;
};

struct SegmentationResult {
  std::vector<LaughterSegment> segments;
  RunReport report;
  std::optional<IsolationForest> forest;  // absent below two events
};

// Voice removal, energy segmentation with offset padding, featurization and
// isolation-forest filtering. Inliers are returned as laughter. With a
// single detected event no forest can be grown; it is scored 0.5 like the
// degenerate case.
SegmentationResult segment_laughter(const AudioBuffer& audio, const PipelineConfig& cfg);

// Pairs each event with the record whose (start, end) lies within
// kEmbeddingJoinTolerance. Throws kEmbeddingEventMismatch for an unmatched
// event and kDimensionMismatch/kMixedEmbeddingSources for ragged input.
std::vector<Embedding> join_embeddings(std::span<const Event> events,
                                       std::span<const Embedding> records);

// Stacks embeddings into a matrix after checking they share one dimension
// and one source.
FeatureMatrix embedding_matrix(std::span<const Embedding> embeddings);

}  // namespace laughseg

#endif  // LAUGHSEG_PIPELINE_HPP_
