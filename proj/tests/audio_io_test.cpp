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
#include <random>

#include "laughseg/audio_io.hpp"
#include "laughseg/error.hpp"
#include "test_util.hpp"

namespace laughseg {
namespace {

using testing::handmade_wav;
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

TEST(DecodeWav, SingleMaxSampleScalesByHalfRange) {
  const auto bytes = handmade_wav(16000, 1, 16, 1, {0x7FFF});
  const AudioBuffer a = decode_wav(bytes);
  ASSERT_EQ(a.channel_count(), 1u);
  ASSERT_EQ(a.frame_count(), 1u);
  EXPECT_FLOAT_EQ(a.channels[0][0], 32767.0f / 32768.0f);
  EXPECT_EQ(a.sample_rate, 16000);
}

TEST(DecodeWav, StereoZeros) {
  const auto a = decode_wav(handmade_wav(44100, 2, 16, 1, {0, 0, 0, 0}));
  ASSERT_EQ(a.channel_count(), 2u);
  EXPECT_EQ(a.channels[0], (std::vector<float>{0.0f, 0.0f}));
  EXPECT_EQ(a.channels[1], (std::vector<float>{0.0f, 0.0f}));
}

TEST(DecodeWav, NegativeFullScaleIsMinusOne) {
  const auto a = decode_wav(handmade_wav(8000, 1, 16, 1, {-32768 & 0xFFFF}));
  EXPECT_EQ(a.channels[0][0], -1.0f);
}

TEST(DecodeWav, Interleaving) {
  const auto a = decode_wav(handmade_wav(8000, 2, 16, 1, {100, -200, 300, -400}));
  EXPECT_FLOAT_EQ(a.channels[0][1], 300.0f / 32768.0f);
  EXPECT_FLOAT_EQ(a.channels[1][0], -200.0f / 32768.0f);
}

TEST(DecodeWav, Pcm24AndPcm32) {
  const auto a24 = decode_wav(handmade_wav(8000, 1, 24, 1, {0x400000, 0xC00000}));
  EXPECT_FLOAT_EQ(a24.channels[0][0], 0.5f);
  EXPECT_FLOAT_EQ(a24.channels[0][1], -0.5f);
  const auto a32 = decode_wav(handmade_wav(8000, 1, 32, 1, {0x20000000}));
  EXPECT_FLOAT_EQ(a32.channels[0][0], 0.25f);
}

TEST(DecodeWav, Float32) {
  float v = -0.375f;
  std::uint32_t bits = 0;
  std::memcpy(&bits, &v, 4);
  const auto a = decode_wav(handmade_wav(8000, 1, 32, 3, {bits}));
  EXPECT_EQ(a.channels[0][0], -0.375f);
}

TEST(DecodeWav, FloatNanRejected) {
  const std::uint32_t nan_bits = 0x7FC00000u;
  EXPECT_EQ(code_of([&] { decode_wav(handmade_wav(8000, 1, 32, 3, {nan_bits})); }),
            ErrorCode::kNonFiniteInput);
}

TEST(DecodeWav, NonPcmIsUnsupported) {
  // Format tag 2 is MS ADPCM.
  EXPECT_EQ(code_of([&] { decode_wav(handmade_wav(8000, 1, 16, 2, {0})); }),
            ErrorCode::kUnsupportedCodec);
}

TEST(DecodeWav, GarbageIsMalformed) {
  std::vector<std::uint8_t> junk = {'R', 'I', 'F', 'X', 0, 0, 0, 0, 'W', 'A', 'V', 'E'};
  EXPECT_EQ(code_of([&] { decode_wav(junk); }), ErrorCode::kMalformedHeader);
  std::vector<std::uint8_t> tiny = {'R', 'I'};
  EXPECT_EQ(code_of([&] { decode_wav(tiny); }), ErrorCode::kMalformedHeader);
  auto no_data = handmade_wav(8000, 1, 16, 1, {});
  no_data.resize(36);  // RIFF header and fmt chunk only
  EXPECT_EQ(code_of([&] { decode_wav(no_data); }), ErrorCode::kMalformedHeader);
}

TEST(LoadWav, MissingFile) {
  EXPECT_EQ(code_of([] { load_wav("/nonexistent/dir/x.wav"); }), ErrorCode::kMissingFile);
}

TEST(LoadWav, SineFixtureFromIndependentWriter) {
  testing::TempDir dir;
  std::vector<std::int64_t> ints;
  for (int i = 0; i < 16000; ++i) {
    const double x = 0.5 * std::sin(2.0 * M_PI * 440.0 * i / 16000.0);
    ints.push_back(static_cast<std::int64_t>(std::lround(x * 32767.0)) & 0xFFFF);
  }
  write_file_bytes(dir / "sine_440_16k.wav", handmade_wav(16000, 1, 16, 1, ints));
  const AudioBuffer a = load_wav(dir / "sine_440_16k.wav");
  EXPECT_EQ(a.frame_count(), 16000u);
  float peak = 0.0f;
  for (float s : a.channels[0]) peak = std::max(peak, std::abs(s));
  EXPECT_NEAR(peak, 0.5, 1e-4);
}

TEST(EncodeWav, MatchesIndependentWriterBytes) {
  const std::vector<std::int64_t> ints = {0, 1, 0x7FFF, 0x8000, 0xFFFF, 1234};
  const auto expected = handmade_wav(22050, 2, 16, 1, ints);
  const AudioBuffer a = decode_wav(expected);
  EXPECT_EQ(encode_wav(a, SampleFormat::kPcm16), expected);
}

TEST(EncodeWav, Pcm16RoundTripIsExact) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dist(-32768, 32767);
  AudioBuffer a;
  a.sample_rate = 48000;
  a.channels.assign(3, std::vector<float>(777));
  for (auto& ch : a.channels) {
    for (float& s : ch) s = static_cast<float>(dist(rng)) / 32768.0f;
  }
  testing::TempDir dir;
  write_wav(dir / "r.wav", a);
  const AudioBuffer back = load_wav(dir / "r.wav");
  EXPECT_EQ(back, a);
  write_wav(dir / "r2.wav", back);
  EXPECT_EQ(read_file_bytes(dir / "r.wav"), read_file_bytes(dir / "r2.wav"));
}

TEST(EncodeWav, OtherFormatsRoundTrip) {
  AudioBuffer a = mono_buffer({0.0f, 0.5f, -0.25f, 0.125f, -1.0f}, 8000);
  for (SampleFormat f : {SampleFormat::kPcm24, SampleFormat::kPcm32, SampleFormat::kFloat32}) {
    EXPECT_EQ(decode_wav(encode_wav(a, f)), a);
  }
}

TEST(EncodeWav, ClampsOutOfRange) {
  const auto a = decode_wav(encode_wav(mono_buffer({2.0f, -3.0f}, 8000)));
  EXPECT_FLOAT_EQ(a.channels[0][0], 32767.0f / 32768.0f);
  EXPECT_FLOAT_EQ(a.channels[0][1], -1.0f);
}

TEST(AudioBuffer, ValidateRejectsRaggedAndNonFinite) {
  AudioBuffer ragged;
  ragged.channels = {{0.0f, 0.0f}, {0.0f}};
  EXPECT_THROW(ragged.validate(), Error);
  AudioBuffer inf = mono_buffer({INFINITY});
  EXPECT_THROW(inf.validate(), Error);
  AudioBuffer none;
  EXPECT_THROW(none.validate(), Error);
  AudioBuffer rate = mono_buffer({0.0f}, 0);
  EXPECT_THROW(rate.validate(), Error);
}

TEST(Resample, SameRateIsBitIdentical) {
  std::mt19937 rng(3);
  std::normal_distribution<float> n(0.0f, 0.2f);
  std::vector<float> x(1001);
  for (float& s : x) s = n(rng);
  const AudioBuffer a = mono_buffer(x, 22050);
  EXPECT_EQ(resample(a, 22050), a);
}

TEST(Resample, ZerosStayZeros) {
  const AudioBuffer a = mono_buffer(std::vector<float>(48000, 0.0f), 48000);
  const AudioBuffer b = resample(a, 16000);
  EXPECT_EQ(b.sample_rate, 16000);
  ASSERT_EQ(b.frame_count(), 16000u);
  for (float s : b.channels[0]) EXPECT_EQ(s, 0.0f);
}

TEST(Resample, OutputLengthIsRoundedRatio) {
  for (auto [n, from, to] : {std::tuple{1000, 44100, 16000}, std::tuple{7, 8000, 48000},
                             std::tuple{12345, 22050, 16000}, std::tuple{333, 16000, 11025}}) {
    const AudioBuffer b = resample(mono_buffer(std::vector<float>(n, 0.1f), from), to);
    const auto expected = static_cast<std::size_t>(std::llround(double(n) * to / from));
    EXPECT_EQ(b.frame_count(), expected) << n << " " << from << "->" << to;
    // Duration preserved within one output sample period.
    EXPECT_LE(std::abs(b.duration_seconds() - double(n) / from), 1.0 / to);
  }
}

TEST(Resample, ToneKeepsPeakFrequencyNaiveDft) {
  const AudioBuffer a = mono_buffer(testing::sine(440.0, 0.5, 1.0, 48000), 48000);
  const AudioBuffer b = resample(a, 16000);
  ASSERT_EQ(b.frame_count(), 16000u);
  // 4000-sample window: bin width 4 Hz.
  std::vector<double> x(b.channels[0].begin() + 6000, b.channels[0].begin() + 10000);
  const auto mag = testing::naive_dft_magnitude(x);
  const double bin_hz = 16000.0 / static_cast<double>(x.size());
  const double peak_hz = static_cast<double>(testing::peak_bin(mag)) * bin_hz;
  EXPECT_NEAR(peak_hz, 440.0, bin_hz);
}

TEST(Resample, UpsampleKeepsPeakAndAmplitude) {
  const AudioBuffer a = mono_buffer(testing::sine(1000.0, 0.5, 0.5, 8000), 8000);
  const AudioBuffer b = resample(a, 16000);
  float peak = 0.0f;
  for (std::size_t i = 1000; i + 1000 < b.frame_count(); ++i) {
    peak = std::max(peak, std::abs(b.channels[0][i]));
  }
  EXPECT_NEAR(peak, 0.5, 0.01);
}

TEST(Resample, AttenuatesAboveNewNyquist) {
  // 9 kHz lies past the transition band of the 12 kHz output (Nyquist 6 kHz)
  // and would alias to 3 kHz if it leaked through.
  const AudioBuffer a = mono_buffer(testing::sine(9000.0, 0.5, 0.5, 48000), 48000);
  const AudioBuffer b = resample(a, 12000);
  double energy = 0.0;
  for (std::size_t i = 500; i + 500 < b.frame_count(); ++i) energy += b.channels[0][i] * b.channels[0][i];
  const double rms = std::sqrt(energy / double(b.frame_count() - 1000));
  EXPECT_LT(rms, 0.5 / std::sqrt(2.0) * 0.01);
}

TEST(Resample, ParallelMatchesReference) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<float> u(-0.8f, 0.8f);
  AudioBuffer a;
  a.sample_rate = 44100;
  a.channels.assign(2, std::vector<float>(20000));
  for (auto& ch : a.channels) {
    for (float& s : ch) s = u(rng);
  }
  for (int target : {16000, 8000, 48000, 44099}) {
    EXPECT_EQ(resample(a, target), reference::resample(a, target)) << target;
  }
}

TEST(Resample, RejectsBadRate) {
  EXPECT_THROW(resample(mono_buffer({0.0f}), 0), Error);
}

}  // namespace
}  // namespace laughseg
