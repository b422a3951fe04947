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

#include "laughseg/energy_segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "laughseg/error.hpp"

namespace laughseg {

void FrameConfig::validate() const {
  if (!(hop_s > 0.0) || !(hop_s <= frame_length_s)) {
    throw Error(ErrorCode::kInvalidArgument, "frame config needs 0 < hop <= frame length");
  }
  if (!(floor_db < 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "floor_db must be negative");
  }
}

void SegmenterConfig::validate() const {
  if (!std::isfinite(energy_threshold_db)) {
    throw Error(ErrorCode::kInvalidArgument, "energy threshold must be finite");
  }
  if (min_event_s < 0.0 || max_event_s < 0.0 || max_silence_s < 0.0 || offset_s < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "segmenter durations must be >= 0");
  }
  if (!(min_event_s < max_event_s)) {
    throw Error(ErrorCode::kInvalidArgument, "min_event_s must be below max_event_s");
  }
}

namespace {

struct Framing {
  std::size_t frame_len;
  std::size_t hop;
  std::size_t count;
};

Framing plan_frames(const AudioBuffer& audio, const FrameConfig& cfg) {
  cfg.validate();
  if (audio.channel_count() != 1) {
    throw Error(ErrorCode::kChannelCountMismatch, "energy framing needs mono audio");
  }
  const auto rate = static_cast<double>(audio.sample_rate);
  Framing f{};
  f.frame_len = static_cast<std::size_t>(std::max<long>(1, std::lround(cfg.frame_length_s * rate)));
  f.hop = static_cast<std::size_t>(std::max<long>(1, std::lround(cfg.hop_s * rate)));
  const std::size_t n = audio.frame_count();
  if (n < f.frame_len) {
    throw Error(ErrorCode::kAudioTooShort, std::to_string(n) + " samples, frame needs " +
                                               std::to_string(f.frame_len));
  }
  f.count = (n - f.frame_len) / f.hop + 1;
  return f;
}

double frame_db(const float* x, std::size_t len, double floor_db) {
  double acc = 0.0;
  for (std::size_t k = 0; k < len; ++k) acc += static_cast<double>(x[k]) * x[k];
  const double db = 10.0 * std::log10(acc / static_cast<double>(len) + 1e-10);
  return std::max(db, floor_db);
}

EnergySeries make_series(const AudioBuffer& audio, const Framing& f) {
  EnergySeries s;
  s.frame_length_s = static_cast<double>(f.frame_len) / audio.sample_rate;
  s.hop_s = static_cast<double>(f.hop) / audio.sample_rate;
  s.frames.resize(f.count);
  return s;
}

}  // namespace

EnergySeries frame_energy_db(const AudioBuffer& audio, const FrameConfig& cfg) {
  const Framing f = plan_frames(audio, cfg);
  EnergySeries s = make_series(audio, f);
  const float* x = audio.channels[0].data();
  const auto count = static_cast<std::int64_t>(f.count);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    const std::size_t off = static_cast<std::size_t>(i) * f.hop;
    s.frames[static_cast<std::size_t>(i)] = {
        static_cast<double>(off) / audio.sample_rate,
        frame_db(x + off, f.frame_len, cfg.floor_db)};
  }
  return s;
}

namespace reference {

EnergySeries frame_energy_db(const AudioBuffer& audio, const FrameConfig& cfg) {
  const Framing f = plan_frames(audio, cfg);
  EnergySeries s = make_series(audio, f);
  const float* x = audio.channels[0].data();
  for (std::size_t i = 0; i < f.count; ++i) {
    const std::size_t off = i * f.hop;
    s.frames[i] = {static_cast<double>(off) / audio.sample_rate,
                   frame_db(x + off, f.frame_len, cfg.floor_db)};
  }
  return s;
}

}  // namespace reference

std::vector<Event> detect_events(const EnergySeries& energy, const SegmenterConfig& cfg) {
  cfg.validate();
  std::vector<Event> events;
  const std::size_t n = energy.frames.size();
  if (n == 0) return events;
  const double hop = energy.hop_s;
  // Tolerances absorb binary representation error in s / hop ratios.
  const auto max_gap = static_cast<std::size_t>(std::floor(cfg.max_silence_s / hop + 1e-9));
  const auto min_frames =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cfg.min_event_s / hop - 1e-9)));
  const auto max_frames =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(cfg.max_event_s / hop + 1e-9)));

  // Cell k starts at boundary(k); the last cell closes at boundary(n). Using
  // one formula keeps adjacent split pieces exactly touching.
  auto boundary = [&](std::size_t k) {
    return k < n ? energy.cell_start(k) : energy.cell_start(n - 1) + hop;
  };
  auto emit = [&](std::size_t first, std::size_t last_excl) {
    events.push_back(Event{boundary(first), boundary(last_excl), std::nullopt, std::nullopt});
  };

  auto emit_run = [&](std::size_t a, std::size_t b) {
    const std::size_t len = b - a;
    if (len < min_frames) return;
    if (len <= max_frames) {
      emit(a, b);
      return;
    }
    std::size_t pieces = len / max_frames;
    std::size_t tail = len % max_frames;
    std::size_t last_len = max_frames;
    if (tail > 0 && tail < min_frames) {
      if (max_frames - (min_frames - tail) >= min_frames) {
        last_len = max_frames - (min_frames - tail);
        tail = min_frames;
      } else {
        last_len = max_frames + tail;
        tail = 0;
      }
    }
    std::size_t pos = a;
    for (std::size_t p = 0; p < pieces; ++p) {
      const std::size_t piece = (p + 1 == pieces) ? last_len : max_frames;
      emit(pos, pos + piece);
      pos += piece;
    }
    if (tail > 0) emit(pos, pos + tail);
  };

  const double thr = cfg.energy_threshold_db;
  std::size_t i = 0;
  while (i < n) {
    if (energy.frames[i].energy_db < thr) {
      ++i;
      continue;
    }
    const std::size_t run_start = i;
    std::size_t run_end = i + 1;  // one past the last above-threshold frame
    std::size_t j = run_end;
    while (j < n) {
      if (energy.frames[j].energy_db >= thr) {
        run_end = ++j;
      } else if (j - run_end < max_gap) {
        ++j;
      } else {
        break;
      }
    }
    emit_run(run_start, run_end);
    i = std::max(j, run_end);
  }
  return events;
}

std::vector<Event> apply_offset(std::span<const Event> events, double offset_s,
                                double total_duration_s) {
  std::vector<Event> out;
  out.reserve(events.size());
  for (std::size_t k = 0; k < events.size(); ++k) {
    Event e = events[k];
    // Pieces split from one run share a boundary; keep it in place.
    const bool joined_prev = k > 0 && events[k - 1].end_s == e.start_s;
    const bool joined_next = k + 1 < events.size() && events[k + 1].start_s == e.end_s;
    if (!joined_prev) e.start_s = std::max(0.0, e.start_s - offset_s);
    if (!joined_next) e.end_s = std::min(total_duration_s, e.end_s + offset_s);
    if (!out.empty() && e.start_s < out.back().end_s) {
      out.back().end_s = std::max(out.back().end_s, e.end_s);
      out.back().score.reset();
    } else {
      out.push_back(std::move(e));
    }
  }
  return out;
}

bool is_sorted_disjoint(std::span<const Event> events) {
  for (std::size_t k = 0; k < events.size(); ++k) {
    if (!(events[k].end_s > events[k].start_s)) return false;
    if (k > 0 && events[k].start_s < events[k - 1].end_s) return false;
  }
  return true;
}

}  // namespace laughseg
