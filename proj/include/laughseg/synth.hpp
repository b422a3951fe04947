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

#ifndef LAUGHSEG_SYNTH_HPP_
#define LAUGHSEG_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "laughseg/audio_io.hpp"
#include "laughseg/energy_segmenter.hpp"

namespace laughseg {

// Parameters of the synthetic test corpus. Laughter is band-limited noise
// (one fixed band-pass shape for every burst) with a syllable-rate amplitude
// pulse; distractors alternate between harmonic tones and linear chirps.
// All event boundaries fall on whole milliseconds.
struct CorpusParams {
  std::size_t n_files = 20;
  std::size_t laughter_per_file = 10;
  std::size_t distractors_per_file = 2;
  int sample_rate = kCanonicalRate;

  // Log-uniform laughter durations unless explicit durations are given.
  double laughter_min_s = 0.3;
  double laughter_max_s = 8.0;
  std::vector<double> laughter_durations_s;
  // If set, drawn durations are rescaled so each file sums to exactly this.
  std::optional<double> total_laughter_s;

  double distractor_min_s = 0.5;
  double distractor_max_s = 3.0;

  // Event RMS level range, dBFS.
  double level_min_db = -20.0;
  double level_max_db = -14.0;
  // White-noise bed RMS in dBFS; nullopt gives digital silence.
  std::optional<double> bed_level_db = -70.0;

  // Minimum silence between events and at the file edges.
  double min_gap_s = 1.0;
  // 0 picks 125% of the space the events need, rounded up to whole seconds.
  double file_duration_s = 0.0;

  void validate() const;
  nlohmann::json to_json() const;
};

struct SynthFile {
  std::string name;
  AudioBuffer audio;
  std::vector<Event> laughter;     // ground truth, label "laughter"
  std::vector<Event> distractors;  // label "tone" or "chirp"
};

SynthFile generate_synthetic_file(const CorpusParams& params, std::uint64_t seed,
                                  std::size_t index);
std::vector<SynthFile> generate_synthetic_corpus(const CorpusParams& params, std::uint64_t seed);

// Writes <name>.wav (16-bit PCM), <name>.labels.tsv (laughter only),
// <name>.distractors.tsv and manifest.json. Output is a pure function of
// (params, seed).
void write_corpus(const std::filesystem::path& dir, const std::vector<SynthFile>& corpus,
                  const CorpusParams& params, std::uint64_t seed);

}  // namespace laughseg

#endif  // LAUGHSEG_SYNTH_HPP_
