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

#ifndef LAUGHSEG_ENERGY_SEGMENTER_HPP_
#define LAUGHSEG_ENERGY_SEGMENTER_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "laughseg/audio_io.hpp"

namespace laughseg {

struct FrameConfig {
  double frame_length_s = 0.025;
  double hop_s = 0.010;
  double floor_db = -100.0;

  void validate() const;
};

struct SegmenterConfig {
  double energy_threshold_db = -45.0;
  double min_event_s = 0.2;
  double max_event_s = 30.0;
  // Longest sub-threshold gap bridged inside one event.
  double max_silence_s = 0.3;
  // Symmetric boundary padding applied by apply_offset.
  double offset_s = 0.1;

  void validate() const;
};

// Half-open interval [start_s, end_s) in seconds.
struct Event {
  double start_s = 0.0;
  double end_s = 0.0;
  std::optional<double> score;
  std::optional<std::string> label;

  double duration() const { return end_s - start_s; }
  friend bool operator==(const Event&, const Event&) = default;
};

struct EnergyFrame {
  double start_s;
  double energy_db;
};

// Frame i owns the time cell [start_s + (frame_length_s - hop_s) / 2, +hop_s),
// so consecutive frames tile the signal without overlap.
struct EnergySeries {
  double frame_length_s = 0.0;
  double hop_s = 0.0;
  std::vector<EnergyFrame> frames;

  double cell_start(std::size_t i) const {
    return frames[i].start_s + 0.5 * (frame_length_s - hop_s);
  }
};

// Frame lengths are rounded to whole samples. Throws kAudioTooShort when the
// signal is shorter than one frame and kChannelCountMismatch for non-mono.
EnergySeries frame_energy_db(const AudioBuffer& audio, const FrameConfig& cfg);

namespace reference {
EnergySeries frame_energy_db(const AudioBuffer& audio, const FrameConfig& cfg);
}  // namespace reference

// Runs of frames at or above the threshold, with gaps of at most
// max_silence_s bridged. Runs shorter than min_event_s are dropped; runs longer
// than max_event_s are cut at max_event_s boundaries. A short tail piece
// borrows frames from its predecessor so it reaches min_event_s, or is folded
// into it when max_event_s < 2 * min_event_s.
std::vector<Event> detect_events(const EnergySeries& energy, const SegmenterConfig& cfg);

// Pads both ends by offset_s, clamps to [0, total_duration_s] and merges
// intervals that touch or overlap afterwards.
std::vector<Event> apply_offset(std::span<const Event> events, double offset_s,
                                double total_duration_s);

// True when sorted by start and pairwise disjoint (touching is allowed).
bool is_sorted_disjoint(std::span<const Event> events);

// Tab-separated `start<TAB>end<TAB>label` rows, seconds with 3 decimals.
std::string format_labels(std::span<const Event> events,
                          const std::string& default_label = "event");
std::vector<Event> parse_labels(const std::string& text);
void write_labels(const std::filesystem::path& path, std::span<const Event> events,
                  const std::string& default_label = "event");
std::vector<Event> read_labels(const std::filesystem::path& path);

}  // namespace laughseg

#endif  // LAUGHSEG_ENERGY_SEGMENTER_HPP_
