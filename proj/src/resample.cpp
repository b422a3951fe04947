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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "laughseg/audio_io.hpp"
#include "laughseg/error.hpp"

namespace laughseg {
namespace {

constexpr int kTaps = 64;
constexpr int kHalfTaps = kTaps / 2;
constexpr double kCutoffFraction = 0.95;
constexpr double kKaiserBeta = 8.0;
// Above this many phases coefficients are computed per output sample.
constexpr std::int64_t kMaxTablePhases = 4096;

class PolyphaseKernel {
 public:
  PolyphaseKernel(int source_rate, int target_rate) {
    const std::int64_t g = std::gcd(source_rate, target_rate);
    up_ = target_rate / g;
    down_ = source_rate / g;
    // Normalized to the input rate, in cycles per sample.
    cutoff_ = kCutoffFraction * 0.5 *
              std::min(source_rate, target_rate) / static_cast<double>(source_rate);
    i0_beta_ = std::cyl_bessel_i(0.0, kKaiserBeta);
    if (up_ <= kMaxTablePhases) {
      table_.resize(static_cast<std::size_t>(up_) * kTaps);
      for (std::int64_t p = 0; p < up_; ++p) fill_phase(p, &table_[p * kTaps]);
    }
  }

  std::int64_t up() const { return up_; }
  std::int64_t down() const { return down_; }

  // Taps for input samples i - 31 ... i + 32 at fractional phase p / up.
  const double* phase(std::int64_t p, double* scratch) const {
    if (!table_.empty()) return &table_[p * kTaps];
    fill_phase(p, scratch);
    return scratch;
  }

 private:
  void fill_phase(std::int64_t p, double* taps) const {
    const double frac = static_cast<double>(p) / static_cast<double>(up_);
    double sum = 0.0;
    for (int k = 0; k < kTaps; ++k) {
      // Distance from the output instant to input sample i - 31 + k.
      const double t = frac + (kHalfTaps - 1) - k;
      const double arg = 2.0 * cutoff_ * t;
      const double sinc =
          arg == 0.0 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
      const double r = t / kHalfTaps;
      const double window =
          r * r >= 1.0 ? 0.0
                       : std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - r * r)) /
                             i0_beta_;
      taps[k] = 2.0 * cutoff_ * sinc * window;
      sum += taps[k];
    }
    // Unity DC gain on every branch.
    for (int k = 0; k < kTaps; ++k) taps[k] /= sum;
  }

  std::int64_t up_ = 1;
  std::int64_t down_ = 1;
  double cutoff_ = 0.5;
  double i0_beta_ = 1.0;
  std::vector<double> table_;
};

float output_sample(const std::vector<float>& in, const PolyphaseKernel& kernel,
                    std::int64_t n) {
  double scratch[kTaps];
  const std::int64_t pos = n * kernel.down();
  const std::int64_t i = pos / kernel.up();
  const double* taps = kernel.phase(pos % kernel.up(), scratch);
  const auto len = static_cast<std::int64_t>(in.size());
  double acc = 0.0;
  for (int k = 0; k < kTaps; ++k) {
    const std::int64_t j = i - (kHalfTaps - 1) + k;
    if (j >= 0 && j < len) acc += taps[k] * in[static_cast<std::size_t>(j)];
  }
  return static_cast<float>(std::clamp(acc, -1.0, 1.0));
}

std::int64_t output_length(std::size_t frames, int source_rate, int target_rate) {
  const auto n = static_cast<std::int64_t>(frames);
  return (n * target_rate + source_rate / 2) / source_rate;
}

void check_rates(const AudioBuffer& audio, int target_rate) {
  if (target_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "target rate must be positive");
  }
  if (audio.sample_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "source rate must be positive");
  }
}

}  // namespace

AudioBuffer resample(const AudioBuffer& audio, int target_rate) {
  check_rates(audio, target_rate);
  if (audio.sample_rate == target_rate) return audio;
  const PolyphaseKernel kernel(audio.sample_rate, target_rate);
  const std::int64_t out_len = output_length(audio.frame_count(), audio.sample_rate, target_rate);
  AudioBuffer out;
  out.sample_rate = target_rate;
  out.channels.resize(audio.channel_count());
  for (std::size_t c = 0; c < audio.channel_count(); ++c) {
    const auto& in = audio.channels[c];
    auto& dst = out.channels[c];
    dst.resize(static_cast<std::size_t>(out_len));
#pragma omp parallel for schedule(static)
    for (std::int64_t n = 0; n < out_len; ++n) {
      dst[static_cast<std::size_t>(n)] = output_sample(in, kernel, n);
    }
  }
  return out;
}

namespace reference {

AudioBuffer resample(const AudioBuffer& audio, int target_rate) {
  check_rates(audio, target_rate);
  if (audio.sample_rate == target_rate) return audio;
  const PolyphaseKernel kernel(audio.sample_rate, target_rate);
  const std::int64_t out_len = output_length(audio.frame_count(), audio.sample_rate, target_rate);
  AudioBuffer out;
  out.sample_rate = target_rate;
  for (const auto& in : audio.channels) {
    std::vector<float> dst(static_cast<std::size_t>(out_len));
    for (std::int64_t n = 0; n < out_len; ++n) {
      dst[static_cast<std::size_t>(n)] = output_sample(in, kernel, n);
    }
    out.channels.push_back(std::move(dst));
  }
  return out;
}

}  // namespace reference
}  // namespace laughseg
