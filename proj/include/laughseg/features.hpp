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

#ifndef LAUGHSEG_FEATURES_HPP_
#define LAUGHSEG_FEATURES_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "laughseg/audio_io.hpp"
#include "laughseg/energy_segmenter.hpp"

namespace laughseg {

struct MelConfig {
  int sample_rate = kCanonicalRate;
  int n_fft = 1024;
  int hop = 160;
  int n_mels = 64;
  double f_min = 60.0;
  double f_max = 7800.0;
  double log_eps = 1e-6;

  void validate() const;
};

// T x n_mels log-mel energies, row-major.
struct Spectrogram {
  std::size_t n_frames = 0;
  std::size_t n_mels = 0;
  double frame_rate = 0.0;
  std::vector<double> values;

  double at(std::size_t t, std::size_t m) const { return values[t * n_mels + m]; }
  std::span<const double> frame(std::size_t t) const {
    return std::span<const double>(values).subspan(t * n_mels, n_mels);
  }
};

double hz_to_mel(double hz);  // HTK: 2595 log10(1 + f / 700)
double mel_to_hz(double mel);

// Periodic Hann window, HTK-spaced triangular filters normalized to unit
// area, natural log of the filtered power spectrum plus log_eps.
class MelFrontEnd {
 public:
  explicit MelFrontEnd(const MelConfig& cfg);
  ~MelFrontEnd();
  MelFrontEnd(const MelFrontEnd&) = delete;
  MelFrontEnd& operator=(const MelFrontEnd&) = delete;

  const MelConfig& config() const { return cfg_; }
  // Filter peak frequencies in Hz, one per mel band.
  const std::vector<double>& center_frequencies() const { return centers_; }
  // Dense n_mels x (n_fft / 2 + 1) filterbank weights.
  std::vector<double> dense_filterbank() const;

  // Frames are parallelized with OpenMP.
  Spectrogram compute(std::span<const float> samples) const;
  Spectrogram compute_serial(std::span<const float> samples) const;

 private:
  struct Filter {
    std::size_t first_bin;
    std::vector<double> weights;
  };
  struct FftPlan;

  void frame_into(std::span<const float> samples, std::size_t t, double* fft_in,
                  void* fft_out, double* row) const;
  Spectrogram allocate(std::size_t n_samples) const;

  MelConfig cfg_;
  std::vector<double> window_;
  std::vector<Filter> filters_;
  std::vector<double> centers_;
  std::unique_ptr<FftPlan> plan_;
};

// Throws kRateMismatch when audio is not at cfg.sample_rate and
// kAudioTooShort below n_fft samples.
Spectrogram log_mel(const AudioBuffer& audio, const MelConfig& cfg);

namespace reference {
Spectrogram log_mel(const AudioBuffer& audio, const MelConfig& cfg);
}  // namespace reference

enum class EmbeddingSource { kBuiltin, kExternal };

std::string_view to_string(EmbeddingSource source);

struct Embedding {
  Event event;
  std::vector<float> values;
  EmbeddingSource source = EmbeddingSource::kBuiltin;
};

// Per-band temporal mean followed by per-band temporal max (2 * n_mels).
Embedding pool_embedding(const Spectrogram& spec);

// Builtin embeddings for each event of a mono signal. Segments shorter than
// n_fft samples are right-padded with zeros. Events run in parallel.
std::vector<Embedding> embed_events(const AudioBuffer& audio, std::span<const Event> events,
                                    const MelConfig& cfg);

namespace reference {
std::vector<Embedding> embed_events(const AudioBuffer& audio, std::span<const Event> events,
                                    const MelConfig& cfg);
}  // namespace reference

// LEMB v1 exchange format, little-endian:
//   "LEMB" | u32 version = 1 | u32 record_count | u32 dim |
//   record_count x { f64 start_s | f64 end_s | dim x f32 }
inline constexpr std::uint32_t kLembVersion = 1;

std::vector<std::uint8_t> encode_embeddings(std::span<const Embedding> records);
// Records come back with source = kExternal.
std::vector<Embedding> decode_embeddings(std::span<const std::uint8_t> bytes);
void write_embeddings(const std::filesystem::path& path, std::span<const Embedding> records);
std::vector<Embedding> read_embeddings(const std::filesystem::path& path);

}  // namespace laughseg

#endif  // LAUGHSEG_FEATURES_HPP_
