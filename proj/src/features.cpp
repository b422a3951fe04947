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

#include "laughseg/features.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include "laughseg/error.hpp"

namespace laughseg {
namespace {

// FFTW's planner is not reentrant; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwReal {
  explicit FftwReal(std::size_t n) : p(fftw_alloc_real(n)) {}
  ~FftwReal() { fftw_free(p); }
  FftwReal(const FftwReal&) = delete;
  FftwReal& operator=(const FftwReal&) = delete;
  double* p;
};

struct FftwComplex {
  explicit FftwComplex(std::size_t n) : p(fftw_alloc_complex(n)) {}
  ~FftwComplex() { fftw_free(p); }
  FftwComplex(const FftwComplex&) = delete;
  FftwComplex& operator=(const FftwComplex&) = delete;
  fftw_complex* p;
};

}  // namespace

void MelConfig::validate() const {
  if (sample_rate <= 0 || n_fft < 2 || hop < 1 || hop > n_fft || n_mels < 1) {
    throw Error(ErrorCode::kInvalidArgument, "mel config needs rate > 0, 1 <= hop <= n_fft, n_mels >= 1");
  }
  if (!(f_min >= 0.0 && f_min < f_max && f_max <= 0.5 * sample_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "mel config needs 0 <= f_min < f_max <= rate / 2");
  }
  if (!(log_eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "log_eps must be positive");
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

struct MelFrontEnd::FftPlan {
  explicit FftPlan(int n) : size(n) {
    std::lock_guard lock(planner_mutex());
    FftwReal in(static_cast<std::size_t>(n));
    FftwComplex out(static_cast<std::size_t>(n / 2 + 1));
    plan = fftw_plan_dft_r2c_1d(n, in.p, out.p, FFTW_ESTIMATE);
    if (plan == nullptr) throw Error(ErrorCode::kInvalidArgument, "FFTW planning failed");
  }
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  int size;
  fftw_plan plan;
};

MelFrontEnd::MelFrontEnd(const MelConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const auto n_fft = static_cast<std::size_t>(cfg_.n_fft);
  window_.resize(n_fft);
  for (std::size_t i = 0; i < n_fft; ++i) {
    window_[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(n_fft));
  }

  const std::size_t n_bins = n_fft / 2 + 1;
  const double mel_lo = hz_to_mel(cfg_.f_min);
  const double mel_hi = hz_to_mel(cfg_.f_max);
  std::vector<double> edges(static_cast<std::size_t>(cfg_.n_mels) + 2);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    edges[k] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(k) /
                                      static_cast<double>(cfg_.n_mels + 1));
  }
  const double bin_hz = static_cast<double>(cfg_.sample_rate) / static_cast<double>(n_fft);
  for (int m = 0; m < cfg_.n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    const double norm = 2.0 / (hi - lo);
    Filter f{0, {}};
    bool started = false;
    for (std::size_t b = 0; b < n_bins; ++b) {
      const double hz = static_cast<double>(b) * bin_hz;
      const double w = std::max(0.0, std::min((hz - lo) / (mid - lo), (hi - hz) / (hi - mid)));
      if (w > 0.0) {
        if (!started) {
          f.first_bin = b;
          started = true;
        }
        // Interior zeros cannot occur for a triangle, so weights stay contiguous.
        f.weights.push_back(w * norm);
      } else if (started) {
        break;
      }
    }
    centers_.push_back(mid);
    filters_.push_back(std::move(f));
  }
  plan_ = std::make_unique<FftPlan>(cfg_.n_fft);
}

MelFrontEnd::~MelFrontEnd() = default;

std::vector<double> MelFrontEnd::dense_filterbank() const {
  const std::size_t n_bins = static_cast<std::size_t>(cfg_.n_fft) / 2 + 1;
  std::vector<double> dense(filters_.size() * n_bins, 0.0);
  for (std::size_t m = 0; m < filters_.size(); ++m) {
    const Filter& f = filters_[m];
    for (std::size_t k = 0; k < f.weights.size(); ++k) {
      dense[m * n_bins + f.first_bin + k] = f.weights[k];
    }
  }
  return dense;
}

Spectrogram MelFrontEnd::allocate(std::size_t n_samples) const {
  const auto n_fft = static_cast<std::size_t>(cfg_.n_fft);
  if (n_samples < n_fft) {
    throw Error(ErrorCode::kAudioTooShort,
                std::to_string(n_samples) + " samples, need " + std::to_string(n_fft));
  }
  Spectrogram s;
  s.n_frames = (n_samples - n_fft) / static_cast<std::size_t>(cfg_.hop) + 1;
  s.n_mels = static_cast<std::size_t>(cfg_.n_mels);
  s.frame_rate = static_cast<double>(cfg_.sample_rate) / cfg_.hop;
  s.values.resize(s.n_frames * s.n_mels);
  return s;
}

void MelFrontEnd::frame_into(std::span<const float> samples, std::size_t t, double* fft_in,
                             void* fft_out, double* row) const {
  const auto n_fft = static_cast<std::size_t>(cfg_.n_fft);
  const float* x = samples.data() + t * static_cast<std::size_t>(cfg_.hop);
  for (std::size_t i = 0; i < n_fft; ++i) fft_in[i] = window_[i] * x[i];
  auto* spec = static_cast<fftw_complex*>(fft_out);
  fftw_execute_dft_r2c(plan_->plan, fft_in, spec);
  for (std::size_t m = 0; m < filters_.size(); ++m) {
    const Filter& f = filters_[m];
    double e = 0.0;
    for (std::size_t k = 0; k < f.weights.size(); ++k) {
      const fftw_complex& c = spec[f.first_bin + k];
      e += f.weights[k] * (c[0] * c[0] + c[1] * c[1]);
    }
    row[m] = std::log(e + cfg_.log_eps);
  }
}

Spectrogram MelFrontEnd::compute(std::span<const float> samples) const {
  Spectrogram s = allocate(samples.size());
  const auto n_fft = static_cast<std::size_t>(cfg_.n_fft);
  const auto frames = static_cast<std::int64_t>(s.n_frames);
#pragma omp parallel
  {
    FftwReal in(n_fft);
    FftwComplex out(n_fft / 2 + 1);
#pragma omp for schedule(static)
    for (std::int64_t t = 0; t < frames; ++t) {
      frame_into(samples, static_cast<std::size_t>(t), in.p, out.p,
                 &s.values[static_cast<std::size_t>(t) * s.n_mels]);
    }
  }
  return s;
}

Spectrogram MelFrontEnd::compute_serial(std::span<const float> samples) const {
  Spectrogram s = allocate(samples.size());
  const auto n_fft = static_cast<std::size_t>(cfg_.n_fft);
  FftwReal in(n_fft);
  FftwComplex out(n_fft / 2 + 1);
  for (std::size_t t = 0; t < s.n_frames; ++t) {
    frame_into(samples, t, in.p, out.p, &s.values[t * s.n_mels]);
  }
  return s;
}

namespace {

std::span<const float> checked_mono(const AudioBuffer& audio, const MelConfig& cfg) {
  if (audio.channel_count() != 1) {
    throw Error(ErrorCode::kChannelCountMismatch, "log-mel needs mono audio");
  }
  if (audio.sample_rate != cfg.sample_rate) {
    throw Error(ErrorCode::kRateMismatch, std::to_string(audio.sample_rate) + " Hz, expected " +
                                              std::to_string(cfg.sample_rate));
  }
  return audio.channels[0];
}

std::vector<float> event_samples(std::span<const float> x, const Event& e, int rate,
                                 std::size_t min_len) {
  const auto n = static_cast<long long>(x.size());
  const long long a = std::clamp(std::llround(e.start_s * rate), 0LL, n);
  const long long b = std::clamp(std::llround(e.end_s * rate), a, n);
  std::vector<float> seg(x.begin() + a, x.begin() + b);
  if (seg.size() < min_len) seg.resize(min_len, 0.0f);
  return seg;
}

}  // namespace

Spectrogram log_mel(const AudioBuffer& audio, const MelConfig& cfg) {
  const MelFrontEnd fe(cfg);
  return fe.compute(checked_mono(audio, cfg));
}

std::string_view to_string(EmbeddingSource source) {
  return source == EmbeddingSource::kBuiltin ? "builtin" : "external";
}

Embedding pool_embedding(const Spectrogram& spec) {
  if (spec.n_frames == 0 || spec.n_mels == 0) {
    throw Error(ErrorCode::kEmptySpectrogram, "cannot pool an empty spectrogram");
  }
  Embedding emb;
  emb.source = EmbeddingSource::kBuiltin;
  emb.values.resize(2 * spec.n_mels);
  for (std::size_t m = 0; m < spec.n_mels; ++m) {
    double sum = 0.0;
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < spec.n_frames; ++t) {
      const double v = spec.at(t, m);
      sum += v;
      peak = std::max(peak, v);
    }
    emb.values[m] = static_cast<float>(sum / static_cast<double>(spec.n_frames));
    emb.values[spec.n_mels + m] = static_cast<float>(peak);
  }
  return emb;
}

std::vector<Embedding> embed_events(const AudioBuffer& audio, std::span<const Event> events,
                                    const MelConfig& cfg) {
  const MelFrontEnd fe(cfg);
  const auto x = checked_mono(audio, cfg);
  std::vector<Embedding> out(events.size());
  const auto n = static_cast<std::int64_t>(events.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    const Event& e = events[static_cast<std::size_t>(i)];
    const auto seg = event_samples(x, e, cfg.sample_rate, static_cast<std::size_t>(cfg.n_fft));
    Embedding emb = pool_embedding(fe.compute_serial(seg));
    emb.event = e;
    out[static_cast<std::size_t>(i)] = std::move(emb);
  }
  return out;
}

namespace reference {

Spectrogram log_mel(const AudioBuffer& audio, const MelConfig& cfg) {
  const MelFrontEnd fe(cfg);
  return fe.compute_serial(checked_mono(audio, cfg));
}

std::vector<Embedding> embed_events(const AudioBuffer& audio, std::span<const Event> events,
                                    const MelConfig& cfg) {
  const MelFrontEnd fe(cfg);
  const auto x = checked_mono(audio, cfg);
  std::vector<Embedding> out;
  out.reserve(events.size());
  for (const Event& e : events) {
    const auto seg = event_samples(x, e, cfg.sample_rate, static_cast<std::size_t>(cfg.n_fft));
    Embedding emb = pool_embedding(fe.compute_serial(seg));
    emb.event = e;
    out.push_back(std::move(emb));
  }
  return out;
}

}  // namespace reference
}  // namespace laughseg
