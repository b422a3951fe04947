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

#include "laughseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "laughseg/error.hpp"
#include "laughseg/rng.hpp"

namespace laughseg {
namespace {

using Ms = std::int64_t;

Ms to_ms(double s) { return static_cast<Ms>(std::llround(s * 1000.0)); }

double gaussian(CounterRng& rng) {
  const double u1 = rng.uniform_open();
  const double u2 = rng.uniform_open();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double uniform(CounterRng& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform_open();
}

// RBJ biquad, Butterworth Q.
class Biquad {
 public:
  static Biquad lowpass(double fc, double rate) { return make(fc, rate, true); }
  static Biquad highpass(double fc, double rate) { return make(fc, rate, false); }

  double operator()(double x) {
    const double y = b0_ * x + b1_ * x1_ + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
    x2_ = x1_;
    x1_ = x;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  static Biquad make(double fc, double rate, bool low) {
    const double w = 2.0 * std::numbers::pi * fc / rate;
    const double alpha = std::sin(w) / (2.0 * std::numbers::sqrt2 / 2.0);
    const double c = std::cos(w);
    const double a0 = 1.0 + alpha;
    Biquad q;
    if (low) {
      q.b0_ = (1.0 - c) / 2.0 / a0;
      q.b1_ = (1.0 - c) / a0;
    } else {
      q.b0_ = (1.0 + c) / 2.0 / a0;
      q.b1_ = -(1.0 + c) / a0;
    }
    q.b2_ = q.b0_;
    q.a1_ = -2.0 * c / a0;
    q.a2_ = (1.0 - alpha) / a0;
    return q;
  }

  double b0_ = 1, b1_ = 0, b2_ = 0, a1_ = 0, a2_ = 0;
  double x1_ = 0, x2_ = 0, y1_ = 0, y2_ = 0;
};

constexpr double kLaughLowHz = 400.0;
constexpr double kLaughHighHz = 3000.0;
constexpr double kRampS = 0.020;

double edge_ramp(std::size_t i, std::size_t n, int rate) {
  const double ramp = kRampS * rate;
  const double from_edge = static_cast<double>(std::min(i, n - 1 - i));
  if (from_edge >= ramp) return 1.0;
  return 0.5 - 0.5 * std::cos(std::numbers::pi * from_edge / ramp);
}

void scale_to_rms(std::vector<double>& x, double level_db) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  const double rms = std::sqrt(acc / static_cast<double>(x.size()));
  if (rms <= 0.0) return;
  const double gain = std::pow(10.0, level_db / 20.0) / rms;
  for (double& v : x) v *= gain;
}

std::vector<double> render_laughter(std::size_t n, int rate, double level_db, CounterRng& rng) {
  Biquad hp1 = Biquad::highpass(kLaughLowHz, rate), hp2 = Biquad::highpass(kLaughLowHz, rate);
  Biquad lp1 = Biquad::lowpass(kLaughHighHz, rate), lp2 = Biquad::lowpass(kLaughHighHz, rate);
  auto filtered = [&] { return lp2(lp1(hp2(hp1(gaussian(rng))))); };
  for (int k = 0; k < 2048; ++k) filtered();  // settle the filter state
  const double syllable_hz = uniform(rng, 4.0, 6.0);
  const double phase = uniform(rng, 0.0, 1.0);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double pulse = std::sin(std::numbers::pi * (syllable_hz * t + phase));
    x[i] = filtered() * (0.35 + 0.65 * pulse * pulse);
  }
  scale_to_rms(x, level_db);
  for (std::size_t i = 0; i < n; ++i) x[i] *= edge_ramp(i, n, rate);
  return x;
}

std::vector<double> render_tone(std::size_t n, int rate, double level_db, CounterRng& rng) {
  const double f0 = uniform(rng, 220.0, 880.0);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    double v = 0.0;
    for (int h = 1; h <= 3; ++h) v += std::sin(2.0 * std::numbers::pi * h * f0 * t) / (1 << (h - 1));
    x[i] = v;
  }
  scale_to_rms(x, level_db);
  for (std::size_t i = 0; i < n; ++i) x[i] *= edge_ramp(i, n, rate);
  return x;
}

std::vector<double> render_chirp(std::size_t n, int rate, double level_db, CounterRng& rng) {
  const double fa = uniform(rng, 300.0, 600.0);
  const double fb = uniform(rng, 2000.0, 4000.0);
  const double dur = static_cast<double>(n) / rate;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    x[i] = std::sin(2.0 * std::numbers::pi * (fa * t + 0.5 * (fb - fa) / dur * t * t));
  }
  scale_to_rms(x, level_db);
  for (std::size_t i = 0; i < n; ++i) x[i] *= edge_ramp(i, n, rate);
  return x;
}

// Splits `total` into parts proportional to `weights`, largest remainder
// first, so the parts sum to `total` exactly.
std::vector<Ms> apportion(Ms total, const std::vector<double>& weights) {
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  std::vector<Ms> parts(weights.size());
  std::vector<std::pair<double, std::size_t>> rem;
  Ms used = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = static_cast<double>(total) * weights[i] / wsum;
    parts[i] = static_cast<Ms>(std::floor(exact));
    used += parts[i];
    rem.emplace_back(exact - static_cast<double>(parts[i]), i);
  }
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; used < total; ++k, ++used) ++parts[rem[k % rem.size()].second];
  return parts;
}

enum class Kind { kLaughter, kTone, kChirp };

}  // namespace

void CorpusParams::validate() const {
  if (sample_rate <= 0) throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  if (!(laughter_min_s > 0.0 && laughter_min_s <= laughter_max_s)) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < laughter_min_s <= laughter_max_s");
  }
  if (!(distractor_min_s > 0.0 && distractor_min_s <= distractor_max_s)) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < distractor_min_s <= distractor_max_s");
  }
  if (!(level_min_db <= level_max_db && level_max_db < 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "event levels must be ordered and below 0 dBFS");
  }
  for (double d : laughter_durations_s) {
    if (!(d > 0.0)) throw Error(ErrorCode::kInvalidArgument, "laughter durations must be positive");
  }
  if (total_laughter_s && !(*total_laughter_s > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "total laughter duration must be positive");
  }
  if (total_laughter_s && laughter_per_file == 0) {
    throw Error(ErrorCode::kInvalidArgument, "total laughter duration needs laughter events");
  }
  if (min_gap_s < 0.0 || file_duration_s < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "gap and file duration must be >= 0");
  }
}

nlohmann::json CorpusParams::to_json() const {
  return {{"n_files", n_files},
          {"laughter_per_file", laughter_per_file},
          {"distractors_per_file", distractors_per_file},
          {"sample_rate", sample_rate},
          {"laughter_min_s", laughter_min_s},
          {"laughter_max_s", laughter_max_s},
          {"laughter_durations_s", laughter_durations_s},
          {"total_laughter_s", total_laughter_s ? nlohmann::json(*total_laughter_s) : nlohmann::json(nullptr)},
          {"distractor_min_s", distractor_min_s},
          {"distractor_max_s", distractor_max_s},
          {"level_min_db", level_min_db},
          {"level_max_db", level_max_db},
          {"bed_level_db", bed_level_db ? nlohmann::json(*bed_level_db) : nlohmann::json(nullptr)},
          {"min_gap_s", min_gap_s},
          {"file_duration_s", file_duration_s}};
}

SynthFile generate_synthetic_file(const CorpusParams& params, std::uint64_t seed,
                                  std::size_t index) {
  params.validate();
  CounterRng rng(CounterRng::mix(seed) + index);
  const int rate = params.sample_rate;

  std::vector<Ms> laugh_ms;
  if (!params.laughter_durations_s.empty()) {
    for (double d : params.laughter_durations_s) laugh_ms.push_back(to_ms(d));
  } else {
    const double lo = std::log(params.laughter_min_s), hi = std::log(params.laughter_max_s);
    std::vector<double> drawn;
    for (std::size_t k = 0; k < params.laughter_per_file; ++k) drawn.push_back(std::exp(uniform(rng, lo, hi)));
    if (params.total_laughter_s) {
      laugh_ms = apportion(to_ms(*params.total_laughter_s), drawn);
    } else {
      for (double d : drawn) laugh_ms.push_back(std::max<Ms>(1, to_ms(d)));
    }
  }
  std::vector<Ms> distract_ms;
  for (std::size_t k = 0; k < params.distractors_per_file; ++k) {
    distract_ms.push_back(to_ms(uniform(rng, params.distractor_min_s, params.distractor_max_s)));
  }

  struct Planned {
    Kind kind;
    Ms duration;
    Ms start = 0;
  };
  std::vector<Planned> plan;
  for (Ms d : laugh_ms) plan.push_back({Kind::kLaughter, d});
  for (std::size_t k = 0; k < distract_ms.size(); ++k) {
    plan.push_back({k % 2 == 0 ? Kind::kTone : Kind::kChirp, distract_ms[k]});
  }
  for (std::size_t i = plan.size(); i > 1; --i) {
    std::swap(plan[i - 1], plan[static_cast<std::size_t>(rng.below(i))]);
  }

  const Ms gap = to_ms(params.min_gap_s);
  Ms needed = gap * static_cast<Ms>(plan.size() + 1);
  for (const Planned& p : plan) needed += p.duration;
  Ms total;
  if (params.file_duration_s > 0.0) {
    total = to_ms(params.file_duration_s);
    if (total < needed) {
      throw Error(ErrorCode::kInvalidArgument, "file too short for the requested events");
    }
  } else {
    total = std::max<Ms>(1000, (needed * 5 / 4 + 999) / 1000 * 1000);
  }

  std::vector<double> slack_w(plan.size() + 1);
  for (double& w : slack_w) w = -std::log(rng.uniform_open());
  const std::vector<Ms> slack = apportion(total - needed, slack_w);
  Ms cursor = gap + slack[0];
  for (std::size_t k = 0; k < plan.size(); ++k) {
    plan[k].start = cursor;
    cursor += plan[k].duration + gap + slack[k + 1];
  }

  const auto n_samples = static_cast<std::size_t>(total * rate / 1000);
  std::vector<double> mix(n_samples, 0.0);
  if (params.bed_level_db) {
    const double sigma = std::pow(10.0, *params.bed_level_db / 20.0);
    for (double& v : mix) v = sigma * gaussian(rng);
  }

  SynthFile file;
  char name[32];
  std::snprintf(name, sizeof(name), "synth_%03zu", index);
  file.name = name;
  for (const Planned& p : plan) {
    const auto a = static_cast<std::size_t>(p.start * rate / 1000);
    const auto b = static_cast<std::size_t>((p.start + p.duration) * rate / 1000);
    const double level = uniform(rng, params.level_min_db, params.level_max_db);
    std::vector<double> x;
    Event e{static_cast<double>(p.start) / 1000.0,
            static_cast<double>(p.start + p.duration) / 1000.0, std::nullopt, std::nullopt};
    switch (p.kind) {
      case Kind::kLaughter:
        x = render_laughter(b - a, rate, level, rng);
        e.label = "laughter";
        break;
      case Kind::kTone:
        x = render_tone(b - a, rate, level, rng);
        e.label = "tone";
        break;
      case Kind::kChirp:
        x = render_chirp(b - a, rate, level, rng);
        e.label = "chirp";
        break;
    }
    for (std::size_t i = 0; i < x.size(); ++i) mix[a + i] += x[i];
    (p.kind == Kind::kLaughter ? file.laughter : file.distractors).push_back(std::move(e));
  }

  std::vector<float> samples(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    samples[i] = static_cast<float>(std::clamp(mix[i], -1.0, 1.0));
  }
  file.audio = AudioBuffer::mono(std::move(samples), rate);
  return file;
}

std::vector<SynthFile> generate_synthetic_corpus(const CorpusParams& params, std::uint64_t seed) {
  std::vector<SynthFile> corpus;
  corpus.reserve(params.n_files);
  for (std::size_t i = 0; i < params.n_files; ++i) {
    corpus.push_back(generate_synthetic_file(params, seed, i));
  }
  return corpus;
}

void write_corpus(const std::filesystem::path& dir, const std::vector<SynthFile>& corpus,
                  const CorpusParams& params, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["tool"] = "laughseg";
  manifest["command"] = "synth";
  manifest["seed"] = seed;
  manifest["params"] = params.to_json();
  auto& files = manifest["files"] = nlohmann::json::array();
  for (const SynthFile& f : corpus) {
    write_wav(dir / (f.name + ".wav"), f.audio);
    write_labels(dir / (f.name + ".labels.tsv"), f.laughter, "laughter");
    write_labels(dir / (f.name + ".distractors.tsv"), f.distractors, "distractor");
    files.push_back({{"name", f.name},
                     {"audio", f.name + ".wav"},
                     {"labels", f.name + ".labels.tsv"},
                     {"distractors", f.name + ".distractors.tsv"},
                     {"duration_s", f.audio.duration_seconds()},
                     {"n_laughter", f.laughter.size()},
                     {"n_distractors", f.distractors.size()}});
  }
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

}  // namespace laughseg
