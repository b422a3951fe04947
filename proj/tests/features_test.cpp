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
#include <cstring>
#include <numbers>
#include <random>

#include "laughseg/error.hpp"
#include "laughseg/features.hpp"
#include "test_util.hpp"

namespace laughseg {
namespace {

using testing::mono_buffer;

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no laughseg::Error thrown";
  return ErrorCode::kInvalidArgument;
}

// HTK mel written out from its definition, then equally spaced points.
std::vector<double> oracle_edges(const MelConfig& c) {
  auto mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  const double a = mel(c.f_min), b = mel(c.f_max);
  std::vector<double> out;
  for (int k = 0; k < c.n_mels + 2; ++k) out.push_back(hz(a + (b - a) * k / (c.n_mels + 1)));
  return out;
}

std::vector<double> noise_vec(std::size_t n, std::uint32_t seed, double sd = 0.1) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> out(n);
  for (double& v : out) v = d(rng);
  return out;
}

std::vector<float> to_float(const std::vector<double>& x) { return {x.begin(), x.end()}; }

TEST(MelScale, HtkAnchorsAndInverse) {
  EXPECT_NEAR(hz_to_mel(700.0), 2595.0 * std::log10(2.0), 1e-9);
  EXPECT_NEAR(hz_to_mel(1000.0), 1000.0, 0.1);
  for (double f : {0.0, 60.0, 440.0, 7800.0}) EXPECT_NEAR(mel_to_hz(hz_to_mel(f)), f, 1e-9);
}

TEST(MelFrontEnd, CentersMatchIndependentComputation) {
  const MelConfig cfg;
  const MelFrontEnd fe(cfg);
  const auto edges = oracle_edges(cfg);
  ASSERT_EQ(fe.center_frequencies().size(), 64u);
  for (int m = 0; m < 64; ++m) EXPECT_NEAR(fe.center_frequencies()[m], edges[m + 1], 1e-9);
}

TEST(MelFrontEnd, FilterbankIsAreaNormalizedTriangles) {
  const MelConfig cfg;
  const MelFrontEnd fe(cfg);
  const auto dense = fe.dense_filterbank();
  const auto edges = oracle_edges(cfg);
  const std::size_t bins = 513;
  ASSERT_EQ(dense.size(), 64u * bins);
  for (int m = 0; m < 64; ++m) {
    const double lo = edges[m], c = edges[m + 1], hi = edges[m + 2];
    for (std::size_t b = 0; b < bins; ++b) {
      const double f = b * 16000.0 / 1024.0;
      double tri = 0.0;
      if (f > lo && f < c) tri = (f - lo) / (c - lo);
      if (f >= c && f < hi) tri = (hi - f) / (hi - c);
      EXPECT_NEAR(dense[m * bins + b], tri * 2.0 / (hi - lo), 1e-12) << m << "," << b;
    }
  }
}

TEST(LogMel, ZerosHitEpsilonFloor) {
  const auto s = log_mel(mono_buffer(std::vector<float>(16000, 0.0f)), MelConfig{});
  EXPECT_EQ(s.n_frames, 94u);
  EXPECT_EQ(s.n_mels, 64u);
  EXPECT_DOUBLE_EQ(s.frame_rate, 100.0);
  for (double v : s.values) EXPECT_DOUBLE_EQ(v, std::log(1e-6));
}

TEST(LogMel, FrameCountFormula) {
  EXPECT_EQ(log_mel(mono_buffer(std::vector<float>(17024, 0.0f)), MelConfig{}).n_frames, 101u);
  EXPECT_EQ(log_mel(mono_buffer(std::vector<float>(1024, 0.0f)), MelConfig{}).n_frames, 1u);
}

TEST(LogMel, TrailingZerosShorterThanHopKeepFrameCount) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> len(1024, 20000);
  for (int trial = 0; trial < 50; ++trial) {
    auto x = to_float(noise_vec(static_cast<std::size_t>(len(rng)), trial));
    // Largest pad that cannot complete another hop.
    const std::size_t room = 159 - (x.size() - 1024) % 160;
    const auto base = log_mel(mono_buffer(x), MelConfig{});
    x.resize(x.size() + room, 0.0f);
    const auto padded = log_mel(mono_buffer(x), MelConfig{});
    EXPECT_EQ(padded.n_frames, base.n_frames);
    EXPECT_EQ(padded.values, base.values);
  }
}

TEST(LogMel, ToneArgmaxIsNearestCenter) {
  const MelConfig cfg;
  const auto s = log_mel(mono_buffer(testing::sine(1000.0, 0.5, 1.0, 16000)), cfg);
  const auto edges = oracle_edges(cfg);
  std::size_t nearest = 0;
  for (std::size_t m = 1; m < 64; ++m) {
    if (std::abs(edges[m + 1] - 1000.0) < std::abs(edges[nearest + 1] - 1000.0)) nearest = m;
  }
  for (std::size_t t = 0; t < s.n_frames; ++t) {
    const auto row = s.frame(t);
    const auto arg = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    EXPECT_EQ(arg, nearest) << "frame " << t;
  }
}

TEST(LogMel, MatchesNaiveDftOracle) {
  const MelConfig cfg;
  const MelFrontEnd fe(cfg);
  const auto x = noise_vec(1024 + 160 * 3, 17);
  const auto s = log_mel(mono_buffer(to_float(x)), cfg);
  ASSERT_EQ(s.n_frames, 4u);
  const auto edges = oracle_edges(cfg);
  for (std::size_t t = 0; t < s.n_frames; ++t) {
    std::vector<double> frame(1024);
    for (std::size_t i = 0; i < 1024; ++i) {
      const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / 1024.0);
      frame[i] = w * static_cast<double>(static_cast<float>(x[t * 160 + i]));
    }
    const auto mag = testing::naive_dft_magnitude(frame);
    for (int m = 0; m < 64; ++m) {
      const double lo = edges[m], c = edges[m + 1], hi = edges[m + 2];
      double e = 0.0;
      for (std::size_t b = 0; b < mag.size(); ++b) {
        const double f = b * 16000.0 / 1024.0;
        double tri = 0.0;
        if (f > lo && f < c) tri = (f - lo) / (c - lo);
        if (f >= c && f < hi) tri = (hi - f) / (hi - c);
        e += tri * 2.0 / (hi - lo) * mag[b] * mag[b];
      }
      EXPECT_NEAR(s.at(t, m), std::log(e + 1e-6), 1e-9) << t << "," << m;
    }
  }
}

TEST(LogMel, ScalingShiftsByTwentyLogA) {
  // Loud enough that log_eps is negligible against every band energy.
  const auto x = noise_vec(16000, 5, 0.3);
  const double a = 0.25;
  std::vector<double> ax(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) ax[i] = a * x[i];
  const auto base = log_mel(mono_buffer(to_float(x)), MelConfig{});
  const auto scaled = log_mel(mono_buffer(to_float(ax)), MelConfig{});
  const double expected_db = 20.0 * std::log10(a);
  for (std::size_t t = 0; t < base.n_frames; ++t) {
    double eb = 0.0, es = 0.0;
    for (std::size_t m = 0; m < 64; ++m) {
      eb += std::exp(base.at(t, m)) - 1e-6;
      es += std::exp(scaled.at(t, m)) - 1e-6;
    }
    EXPECT_NEAR(10.0 * std::log10(es / eb), expected_db, 1e-3) << t;
  }
}

TEST(LogMel, EntriesFiniteAndAboveFloor) {
  const auto s = log_mel(mono_buffer(to_float(noise_vec(8000, 9, 0.5))), MelConfig{});
  for (double v : s.values) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GE(v, std::log(1e-6));
  }
}

TEST(LogMel, Errors) {
  EXPECT_EQ(code_of([] { log_mel(mono_buffer(std::vector<float>(1023, 0.0f)), MelConfig{}); }),
            ErrorCode::kAudioTooShort);
  EXPECT_EQ(code_of([] { log_mel(mono_buffer(std::vector<float>(4000, 0.0f), 8000), MelConfig{}); }),
            ErrorCode::kRateMismatch);
  AudioBuffer st;
  st.channels.assign(2, std::vector<float>(4000, 0.0f));
  EXPECT_EQ(code_of([&] { log_mel(st, MelConfig{}); }), ErrorCode::kChannelCountMismatch);
  MelConfig bad;
  bad.f_max = 9000.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = MelConfig{};
  bad.hop = 2048;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(LogMel, ParallelMatchesSerial) {
  const auto a = mono_buffer(to_float(noise_vec(48000, 21)));
  const auto p = log_mel(a, MelConfig{});
  const auto r = reference::log_mel(a, MelConfig{});
  EXPECT_EQ(p.values, r.values);
}

Spectrogram make_spec(std::size_t frames, std::size_t mels, const std::vector<double>& values) {
  Spectrogram s;
  s.n_frames = frames;
  s.n_mels = mels;
  s.frame_rate = 100.0;
  s.values = values;
  return s;
}

TEST(PoolEmbedding, SingleFrameRepeats) {
  const auto e = pool_embedding(make_spec(1, 3, {1.5, -2.0, 0.25}));
  EXPECT_EQ(e.values, (std::vector<float>{1.5f, -2.0f, 0.25f, 1.5f, -2.0f, 0.25f}));
  EXPECT_EQ(e.source, EmbeddingSource::kBuiltin);
}

TEST(PoolEmbedding, ConstantAndTwoFrames) {
  const auto c = pool_embedding(make_spec(5, 64, std::vector<double>(320, -3.0)));
  ASSERT_EQ(c.values.size(), 128u);
  for (float v : c.values) EXPECT_EQ(v, -3.0f);
  std::vector<double> two(128, 0.0);
  std::fill(two.begin() + 64, two.end(), 1.0);
  const auto t = pool_embedding(make_spec(2, 64, two));
  for (std::size_t m = 0; m < 64; ++m) {
    EXPECT_EQ(t.values[m], 0.5f);
    EXPECT_EQ(t.values[64 + m], 1.0f);
  }
}

TEST(PoolEmbedding, EmptyThrows) {
  EXPECT_EQ(code_of([] { pool_embedding(make_spec(0, 64, {})); }), ErrorCode::kEmptySpectrogram);
}

TEST(EmbedEvents, ShortEventsArePaddedAndParallelMatchesSerial) {
  const auto a = mono_buffer(to_float(noise_vec(32000, 4)));
  const std::vector<Event> ev = {{0.1, 0.12, std::nullopt, std::nullopt},
                                 {0.5, 1.3, std::nullopt, std::nullopt},
                                 {1.9, 2.0, std::nullopt, std::nullopt}};
  const auto p = embed_events(a, ev, MelConfig{});
  const auto r = reference::embed_events(a, ev, MelConfig{});
  ASSERT_EQ(p.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(p[i].values, r[i].values);
    EXPECT_EQ(p[i].values.size(), 128u);
    EXPECT_EQ(p[i].event, ev[i]);
  }
  // The 20 ms event still yields one frame: mean equals max.
  for (std::size_t m = 0; m < 64; ++m) EXPECT_EQ(p[0].values[m], p[0].values[64 + m]);
}

// ---- LEMB exchange format ----

std::vector<std::uint8_t> lemb_header(std::uint32_t version, std::uint32_t count,
                                      std::uint32_t dim) {
  std::vector<std::uint8_t> out = {'L', 'E', 'M', 'B'};
  for (std::uint32_t v : {version, count, dim}) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  return out;
}

template <typename T>
void append_le(std::vector<std::uint8_t>& out, T v) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));  // host is little-endian
}

Embedding record(double s, double e, std::vector<float> v,
                 EmbeddingSource src = EmbeddingSource::kExternal) {
  return Embedding{Event{s, e, std::nullopt, std::nullopt}, std::move(v), src};
}

TEST(Lemb, EmptyRoundTrip) {
  const auto bytes = encode_embeddings({});
  EXPECT_EQ(bytes, lemb_header(1, 0, 0));
  EXPECT_TRUE(decode_embeddings(bytes).empty());
}

TEST(Lemb, ByteLayoutMatchesHandEncoding) {
  const std::vector<Embedding> recs = {record(0.5, 1.5, {1.0f, 2.0f, 3.0f, 4.0f})};
  auto expected = lemb_header(1, 1, 4);
  append_le(expected, 0.5);
  append_le(expected, 1.5);
  for (float f : {1.0f, 2.0f, 3.0f, 4.0f}) append_le(expected, f);
  EXPECT_EQ(encode_embeddings(recs), expected);
  const auto back = decode_embeddings(expected);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].event.start_s, 0.5);
  EXPECT_EQ(back[0].event.end_s, 1.5);
  EXPECT_EQ(back[0].values, recs[0].values);
  EXPECT_EQ(back[0].source, EmbeddingSource::kExternal);
}

TEST(Lemb, RandomRoundTripIsBitExact) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> t(0.0, 3600.0);
  std::normal_distribution<float> v(0.0f, 10.0f);
  testing::TempDir dir;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 1 + trial * 37 % 300;
    std::vector<Embedding> recs;
    for (int i = 0; i < trial; ++i) {
      std::vector<float> values(dim);
      for (float& f : values) f = v(rng);
      const double s = t(rng);
      recs.push_back(record(s, s + 0.123456789, values));
    }
    write_embeddings(dir / "x.lemb", recs);
    const auto back = read_embeddings(dir / "x.lemb");
    ASSERT_EQ(back.size(), recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
      EXPECT_EQ(back[i].event.start_s, recs[i].event.start_s);
      EXPECT_EQ(back[i].event.end_s, recs[i].event.end_s);
      EXPECT_EQ(std::memcmp(back[i].values.data(), recs[i].values.data(), dim * 4), 0);
    }
    EXPECT_EQ(encode_embeddings(back), read_file_bytes(dir / "x.lemb"));
  }
}

TEST(Lemb, ReaderErrors) {
  auto good = lemb_header(1, 2, 1);
  for (int i = 0; i < 2; ++i) {
    append_le(good, 0.0);
    append_le(good, 1.0);
    append_le(good, 0.5f);
  }
  EXPECT_EQ(decode_embeddings(good).size(), 2u);

  auto magic = good;
  magic[3] = 'X';
  EXPECT_EQ(code_of([&] { decode_embeddings(magic); }), ErrorCode::kBadMagic);
  auto version = good;
  version[4] = 2;
  EXPECT_EQ(code_of([&] { decode_embeddings(version); }), ErrorCode::kVersionUnsupported);
  // Declared count 2, bytes for 1.
  auto truncated = good;
  truncated.resize(good.size() - 20);
  EXPECT_EQ(code_of([&] { decode_embeddings(truncated); }), ErrorCode::kTruncatedFile);
  auto header_only = good;
  header_only.resize(10);
  EXPECT_EQ(code_of([&] { decode_embeddings(header_only); }), ErrorCode::kTruncatedFile);
  auto huge = lemb_header(1, 0xFFFFFFFFu, 0xFFFFFFFFu);
  EXPECT_EQ(code_of([&] { decode_embeddings(huge); }), ErrorCode::kTruncatedFile);
  auto trailing = good;
  trailing.push_back(0);
  EXPECT_EQ(code_of([&] { decode_embeddings(trailing); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { read_embeddings("/nonexistent/x.lemb"); }), ErrorCode::kMissingFile);
}

TEST(Lemb, WriterRejectsMixedDimensions) {
  const std::vector<Embedding> recs = {record(0, 1, {1.0f}), record(1, 2, {1.0f, 2.0f})};
  EXPECT_EQ(code_of([&] { encode_embeddings(recs); }), ErrorCode::kDimensionMismatch);
}

}  // namespace
}  // namespace laughseg
