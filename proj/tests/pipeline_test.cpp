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

#include <gtest/gtest.h>

#include <cmath>

#include "laughseg/error.hpp"
#include "laughseg/eval.hpp"
#include "laughseg/pipeline.hpp"
#include "laughseg/synth.hpp"
#include "test_util.hpp"

namespace laughseg {
namespace {

const SynthFile& fixture_file() {
  static const SynthFile f = generate_synthetic_file(CorpusParams{}, 42, 0);
  return f;
}

bool overlaps_any(const Event& e, const std::vector<LaughterSegment>& segs) {
  for (const auto& s : segs) {
    if (s.start_s < e.end_s && e.start_s < s.end_s) return true;
  }
  return false;
}

TEST(Pipeline, SilenceProducesEmptyStages) {
  const auto r = segment_laughter(testing::mono_buffer(std::vector<float>(32000, 0.0f)),
                                  PipelineConfig{});
  EXPECT_TRUE(r.segments.empty());
  EXPECT_EQ(r.report.raw_events, 0u);
  EXPECT_EQ(r.report.events_detected, 0u);
  EXPECT_EQ(r.report.events_scored, 0u);
  EXPECT_EQ(r.report.segments_emitted, 0u);
  EXPECT_EQ(r.report.energy_frames, 198u);
  EXPECT_FALSE(r.forest.has_value());
}

TEST(Pipeline, SyntheticFileKeepsLaughterDropsTones) {
  const SynthFile& f = fixture_file();
  ASSERT_EQ(f.laughter.size(), 10u);
  ASSERT_EQ(f.distractors.size(), 2u);
  const auto r = segment_laughter(f.audio, PipelineConfig{});
  int laughs = 0, tones = 0;
  for (const Event& e : f.laughter) laughs += overlaps_any(e, r.segments);
  for (const Event& e : f.distractors) tones += overlaps_any(e, r.segments);
  EXPECT_GE(laughs, 8);
  EXPECT_LE(tones, 1);
  EXPECT_EQ(r.report.embedding_dim, 128u);
}

TEST(Pipeline, ThresholdAboveEveryBurstEmitsNothing) {
  PipelineConfig cfg;
  cfg.segmenter.energy_threshold_db = -1.0;
  const auto r = segment_laughter(fixture_file().audio, cfg);
  EXPECT_TRUE(r.segments.empty());
  EXPECT_EQ(r.report.events_detected, 0u);
}

TEST(Pipeline, SegmentsAreDetectedEventsAndCountsAgree) {
  const auto r = segment_laughter(fixture_file().audio, PipelineConfig{});
  const RunReport& rep = r.report;
  EXPECT_EQ(rep.events_scored, rep.events_detected);
  EXPECT_LE(rep.segments_emitted, rep.events_scored);
  EXPECT_LE(rep.events_detected, rep.raw_events);
  EXPECT_EQ(rep.events.size(), rep.events_detected);
  EXPECT_EQ(rep.segments_emitted, r.segments.size());
  EXPECT_TRUE(is_sorted_disjoint(rep.events));
  for (const LaughterSegment& s : r.segments) {
    const Event& src = rep.events.at(s.event_index);
    EXPECT_EQ(s.start_s, src.start_s);
    EXPECT_EQ(s.end_s, src.end_s);
    EXPECT_EQ(s.anomaly_score, *src.score);
    EXPECT_LT(s.anomaly_score, rep.threshold);
    EXPECT_EQ(src.label, "laughter");
  }
  for (const Event& e : rep.events) {
    EXPECT_EQ(e.label == "laughter", *e.score < rep.threshold);
  }
}

TEST(Pipeline, Deterministic) {
  const auto a = segment_laughter(fixture_file().audio, PipelineConfig{});
  const auto b = segment_laughter(fixture_file().audio, PipelineConfig{});
  EXPECT_EQ(a.report.to_json().dump(), b.report.to_json().dump());
  ASSERT_EQ(a.segments.size(), b.segments.size());
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    EXPECT_EQ(a.segments[i].anomaly_score, b.segments[i].anomaly_score);
  }
}

TEST(Pipeline, SingleEventIsScoredNeutral) {
  auto x = std::vector<float>(16000 * 3, 0.0f);
  const auto burst = testing::sine(500.0, 0.3, 1.0, 16000);
  std::copy(burst.begin(), burst.end(), x.begin() + 16000);
  const auto r = segment_laughter(testing::mono_buffer(x), PipelineConfig{});
  EXPECT_EQ(r.report.events_detected, 1u);
  EXPECT_TRUE(r.report.degenerate_forest);
  EXPECT_EQ(r.report.events[0].score, 0.5);
  EXPECT_TRUE(r.segments.empty());
}

TEST(Pipeline, ChannelSubtractionRemovesCenteredSpeech) {
  const SynthFile& f = fixture_file();
  const auto& bg = f.audio.channels[0];
  const auto speech = testing::sine(200.0, 0.2, f.audio.duration_seconds(), 16000);
  AudioBuffer st;
  st.sample_rate = 16000;
  st.channels.assign(2, std::vector<float>(bg.size()));
  for (std::size_t i = 0; i < bg.size(); ++i) {
    st.channels[0][i] = speech[i] + bg[i];
    st.channels[1][i] = speech[i];
  }
  PipelineConfig cfg;
  cfg.background.mode = BackgroundMode::kChannelSubtraction;
  const auto r = segment_laughter(st, cfg);
  int laughs = 0;
  for (const Event& e : f.laughter) laughs += overlaps_any(e, r.segments);
  EXPECT_GE(laughs, 8);
  EXPECT_EQ(r.report.input_channels, 2u);
}

TEST(Pipeline, ExternalEmbeddingsJoinWithinTolerance) {
  const SynthFile& f = fixture_file();
  const auto builtin = segment_laughter(f.audio, PipelineConfig{});
  // Re-create the events' builtin embeddings as an external file with
  // timestamps nudged by 4 ms.
  auto recs = embed_events(f.audio, builtin.report.events, MelConfig{});
  for (Embedding& e : recs) {
    e.event.start_s += 0.004;
    e.event.end_s -= 0.004;
    e.source = EmbeddingSource::kExternal;
  }
  testing::TempDir dir;
  write_embeddings(dir / "e.lemb", recs);
  PipelineConfig cfg;
  cfg.embedding = {EmbeddingSource::kExternal, dir / "e.lemb"};
  const auto ext = segment_laughter(f.audio, cfg);
  ASSERT_EQ(ext.segments.size(), builtin.segments.size());
  for (std::size_t i = 0; i < ext.segments.size(); ++i) {
    EXPECT_EQ(ext.segments[i].start_s, builtin.segments[i].start_s);
    EXPECT_EQ(ext.segments[i].anomaly_score, builtin.segments[i].anomaly_score);
  }

  recs[3].event.start_s += 0.02;
  write_embeddings(dir / "bad.lemb", recs);
  cfg.embedding.path = dir / "bad.lemb";
  try {
    segment_laughter(f.audio, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmbeddingEventMismatch);
  }
}

TEST(Pipeline, EmbeddingMatrixRejectsMixedInput) {
  const Event e{0.0, 1.0, std::nullopt, std::nullopt};
  const std::vector<Embedding> mixed_src = {{e, {1.0f}, EmbeddingSource::kBuiltin},
                                            {e, {2.0f}, EmbeddingSource::kExternal}};
  const std::vector<Embedding> mixed_dim = {{e, {1.0f}, EmbeddingSource::kBuiltin},
                                            {e, {2.0f, 3.0f}, EmbeddingSource::kBuiltin}};
  auto code = [](const std::vector<Embedding>& v) {
    try {
      embedding_matrix(v);
    } catch (const Error& err) {
      return err.code();
    }
    return ErrorCode::kParseError;
  };
  EXPECT_EQ(code(mixed_src), ErrorCode::kMixedEmbeddingSources);
  EXPECT_EQ(code(mixed_dim), ErrorCode::kDimensionMismatch);
  const auto m = embedding_matrix(std::vector<Embedding>{{e, {1.0f, 2.0f}, EmbeddingSource::kBuiltin}});
  EXPECT_EQ(m.rows(), 1u);
  EXPECT_EQ(m(0, 1), 2.0);
}

TEST(Pipeline, ConfigValidation) {
  PipelineConfig cfg;
  cfg.embedding.source = EmbeddingSource::kExternal;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = PipelineConfig{};
  cfg.segmenter.min_event_s = 40.0;
  EXPECT_THROW(cfg.validate(), Error);
  const auto j = PipelineConfig{}.to_json();
  EXPECT_EQ(j["forest"]["seed"], 42);
  EXPECT_EQ(j["segmenter"]["energy_threshold_db"], -45.0);
}

TEST(Synth, DeterministicAndSeedSensitive) {
  CorpusParams p;
  p.n_files = 2;
  const auto a = generate_synthetic_corpus(p, 7);
  const auto b = generate_synthetic_corpus(p, 7);
  const auto c = generate_synthetic_corpus(p, 8);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a[i].audio, b[i].audio);
    EXPECT_EQ(a[i].laughter, b[i].laughter);
    EXPECT_EQ(a[i].name, b[i].name);
  }
  EXPECT_NE(a[0].audio, c[0].audio);
  EXPECT_EQ(a[1].name, "synth_001");
}

TEST(Synth, EventsAreDisjointWithGapsAndInRange) {
  const SynthFile& f = fixture_file();
  std::vector<Event> all = f.laughter;
  all.insert(all.end(), f.distractors.begin(), f.distractors.end());
  std::sort(all.begin(), all.end(), [](const Event& x, const Event& y) { return x.start_s < y.start_s; });
  const double dur = f.audio.duration_seconds();
  EXPECT_GE(all.front().start_s, 1.0 - 1e-9);
  EXPECT_LE(all.back().end_s, dur - 1.0 + 1e-9);
  for (std::size_t k = 1; k < all.size(); ++k) EXPECT_GE(all[k].start_s - all[k - 1].end_s, 1.0 - 1e-9);
  for (const Event& e : f.laughter) {
    EXPECT_GE(e.duration(), 0.3 - 1e-9);
    EXPECT_LE(e.duration(), 8.0 + 1e-9);
    EXPECT_EQ(e.label, "laughter");
    // Whole milliseconds.
    EXPECT_NEAR(e.start_s * 1000.0, std::round(e.start_s * 1000.0), 1e-6);
  }
  for (const Event& e : f.distractors) EXPECT_TRUE(e.label == "tone" || e.label == "chirp");
  EXPECT_EQ(std::fmod(dur, 1.0), 0.0);
}

TEST(Synth, EventLevelsFollowParameters) {
  const SynthFile& f = fixture_file();
  const auto& x = f.audio.channels[0];
  for (const Event& e : f.laughter) {
    // Measure away from the ramps.
    const auto a = static_cast<std::size_t>((e.start_s + 0.05) * 16000);
    const auto b = static_cast<std::size_t>((e.end_s - 0.05) * 16000);
    double acc = 0.0;
    for (std::size_t i = a; i < b; ++i) acc += double(x[i]) * x[i];
    const double db = 10.0 * std::log10(acc / double(b - a));
    EXPECT_GT(db, -21.5);
    EXPECT_LT(db, -12.5);
  }
}

TEST(Synth, ZeroEventsGiveSilence) {
  CorpusParams p;
  p.n_files = 1;
  p.laughter_per_file = 0;
  p.distractors_per_file = 0;
  p.bed_level_db.reset();
  const auto f = generate_synthetic_file(p, 1, 0);
  EXPECT_TRUE(f.laughter.empty());
  EXPECT_GT(f.audio.frame_count(), 0u);
  for (float s : f.audio.channels[0]) EXPECT_EQ(s, 0.0f);
}

TEST(Synth, ExactTotalLaughterDuration) {
  CorpusParams p;
  p.n_files = 1;
  p.laughter_per_file = 10;
  p.distractors_per_file = 0;
  p.total_laughter_s = 12.0;
  p.file_duration_s = 60.0;
  const auto f = generate_synthetic_file(p, 3, 0);
  ASSERT_EQ(f.laughter.size(), 10u);
  long total_ms = 0;
  for (const Event& e : f.laughter) total_ms += std::lround(e.duration() * 1000.0);
  EXPECT_EQ(total_ms, 12000);
  EXPECT_EQ(f.audio.frame_count(), 60u * 16000u);
  // The label file round-trips the same sum at millisecond precision.
  const auto back = parse_labels(format_labels(f.laughter, "laughter"));
  total_ms = 0;
  for (const Event& e : back) total_ms += std::lround(e.duration() * 1000.0);
  EXPECT_EQ(total_ms, 12000);
}

TEST(Synth, PlantedDurations) {
  CorpusParams p;
  p.n_files = 1;
  p.laughter_per_file = 6;
  p.distractors_per_file = 0;
  p.laughter_durations_s = {0.5, 2.0, 10.0, 0.5, 2.0, 10.0};
  p.laughter_max_s = 10.0;
  const auto f = generate_synthetic_file(p, 5, 0);
  std::vector<double> d;
  for (const Event& e : f.laughter) d.push_back(std::round(e.duration() * 1000.0) / 1000.0);
  std::sort(d.begin(), d.end());
  EXPECT_EQ(d, (std::vector<double>{0.5, 0.5, 2.0, 2.0, 10.0, 10.0}));
}

TEST(Synth, WriteCorpusIsByteStable) {
  CorpusParams p;
  p.n_files = 2;
  p.laughter_per_file = 5;
  testing::TempDir a, b;
  write_corpus(a.path(), generate_synthetic_corpus(p, 9), p, 9);
  write_corpus(b.path(), generate_synthetic_corpus(p, 9), p, 9);
  for (const char* name : {"synth_000.wav", "synth_001.wav", "synth_000.labels.tsv",
                           "synth_001.labels.tsv", "synth_000.distractors.tsv", "manifest.json"}) {
    ASSERT_TRUE(std::filesystem::exists(a / name)) << name;
    EXPECT_EQ(read_file_bytes(a / name), read_file_bytes(b / name)) << name;
  }
  EXPECT_EQ(read_labels(a / "synth_001.labels.tsv").size(), 5u);
  EXPECT_EQ(load_wav(a / "synth_000.wav").sample_rate, 16000);
}

TEST(Synth, InvalidParameters) {
  CorpusParams p;
  p.laughter_min_s = 5.0;
  p.laughter_max_s = 1.0;
  EXPECT_THROW(p.validate(), Error);
  p = CorpusParams{};
  p.laughter_per_file = 10;
  p.file_duration_s = 5.0;  // cannot hold the events
  EXPECT_THROW(generate_synthetic_file(p, 1, 0), Error);
}

}  // namespace
}  // namespace laughseg
