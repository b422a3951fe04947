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

// Serial reference kernels against their OpenMP counterparts. Each pair is
// registered under the same argument so the reports line up side by side.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "laughseg/audio_io.hpp"
#include "laughseg/energy_segmenter.hpp"
#include "laughseg/features.hpp"
#include "laughseg/iforest.hpp"

namespace {

using namespace laughseg;

AudioBuffer noise(double seconds, int rate) {
  std::mt19937 rng(7);
  std::normal_distribution<float> n(0.0f, 0.1f);
  std::vector<float> x(static_cast<std::size_t>(seconds * rate));
  for (float& v : x) v = n(rng);
  return AudioBuffer::mono(std::move(x), rate);
}

void BM_FrameEnergy(benchmark::State& state) {
  const auto audio = noise(static_cast<double>(state.range(0)), kCanonicalRate);
  for (auto _ : state) benchmark::DoNotOptimize(frame_energy_db(audio, FrameConfig{}));
}

void BM_FrameEnergySerial(benchmark::State& state) {
  const auto audio = noise(static_cast<double>(state.range(0)), kCanonicalRate);
  for (auto _ : state) benchmark::DoNotOptimize(reference::frame_energy_db(audio, FrameConfig{}));
}

void BM_LogMel(benchmark::State& state) {
  const auto audio = noise(static_cast<double>(state.range(0)), kCanonicalRate);
  for (auto _ : state) benchmark::DoNotOptimize(log_mel(audio, MelConfig{}));
}

void BM_LogMelSerial(benchmark::State& state) {
  const auto audio = noise(static_cast<double>(state.range(0)), kCanonicalRate);
  for (auto _ : state) benchmark::DoNotOptimize(reference::log_mel(audio, MelConfig{}));
}

void BM_Resample(benchmark::State& state) {
  const auto audio = noise(static_cast<double>(state.range(0)), 48000);
  for (auto _ : state) benchmark::DoNotOptimize(resample(audio, kCanonicalRate));
}

void BM_ResampleSerial(benchmark::State& state) {
  const auto audio = noise(static_cast<double>(state.range(0)), 48000);
  for (auto _ : state) benchmark::DoNotOptimize(reference::resample(audio, kCanonicalRate));
}

FeatureMatrix random_points(std::size_t n, std::size_t d) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  FeatureMatrix m(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) m(i, j) = g(rng);
  }
  return m;
}

void BM_ForestScore(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 128);
  const auto forest = IsolationForest::fit(pts, ForestConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(forest.score_all(pts));
}

void BM_ForestScoreSerial(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 128);
  const auto forest = IsolationForest::fit(pts, ForestConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(forest.score_all_serial(pts));
}

}  // namespace

BENCHMARK(BM_FrameEnergy)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FrameEnergySerial)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LogMel)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LogMelSerial)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Resample)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResampleSerial)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestScore)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestScoreSerial)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
