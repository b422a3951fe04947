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

#include "laughseg/audio_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>

#include "laughseg/error.hpp"

namespace laughseg {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FormatChunk {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

FormatChunk parse_fmt(const std::uint8_t* p, std::uint32_t size) {
  if (size < 16) throw Error(ErrorCode::kMalformedHeader, "fmt chunk too small");
  FormatChunk fmt;
  fmt.tag = read_u16(p);
  fmt.channels = read_u16(p + 2);
  fmt.rate = read_u32(p + 4);
  fmt.block_align = read_u16(p + 12);
  fmt.bits = read_u16(p + 14);
  if (fmt.tag == kFormatExtensible) {
    if (size < 40) {
      throw Error(ErrorCode::kMalformedHeader, "extensible fmt chunk too small");
    }
    // The first two bytes of the subformat GUID hold the basic format tag.
    fmt.tag = read_u16(p + 24);
  }
  if (fmt.channels == 0 || fmt.rate == 0) {
    throw Error(ErrorCode::kMalformedHeader, "zero channels or sample rate");
  }
  if (fmt.tag == kFormatPcm) {
    if (fmt.bits != 16 && fmt.bits != 24 && fmt.bits != 32) {
      throw Error(ErrorCode::kUnsupportedCodec,
                  "PCM bit depth " + std::to_string(fmt.bits));
    }
  } else if (fmt.tag == kFormatFloat) {
    if (fmt.bits != 32) {
      throw Error(ErrorCode::kUnsupportedCodec,
                  "float bit depth " + std::to_string(fmt.bits));
    }
  } else {
    throw Error(ErrorCode::kUnsupportedCodec,
                "format tag " + std::to_string(fmt.tag));
  }
  if (fmt.block_align != fmt.channels * (fmt.bits / 8)) {
    throw Error(ErrorCode::kMalformedHeader, "inconsistent block alignment");
  }
  return fmt;
}

float decode_sample(const std::uint8_t* p, const FormatChunk& fmt) {
  switch (fmt.bits) {
    case 16: {
      auto v = static_cast<std::int16_t>(read_u16(p));
      return static_cast<float>(v / 32768.0);
    }
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return static_cast<float>(v / 8388608.0);
    }
    default: {
      std::uint32_t raw = read_u32(p);
      if (fmt.tag == kFormatFloat) {
        float f = std::bit_cast<float>(raw);
        if (!std::isfinite(f)) {
          throw Error(ErrorCode::kNonFiniteInput, "non-finite float sample");
        }
        return std::clamp(f, -1.0f, 1.0f);
      }
      auto v = static_cast<std::int32_t>(raw);
      return static_cast<float>(v / 2147483648.0);
    }
  }
}

template <typename Int>
Int quantize(float x, double scale) {
  double v = std::nearbyint(static_cast<double>(x) * scale);
  v = std::clamp(v, -scale, scale - 1.0);
  return static_cast<Int>(v);
}

}  // namespace

AudioBuffer AudioBuffer::mono(std::vector<float> samples, int sample_rate) {
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.channels.push_back(std::move(samples));
  return out;
}

void AudioBuffer::validate() const {
  if (sample_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  if (channels.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "audio has no channels");
  }
  for (const auto& ch : channels) {
    if (ch.size() != channels.front().size()) {
      throw Error(ErrorCode::kInvalidArgument, "channels differ in length");
    }
    for (float s : ch) {
      if (!std::isfinite(s)) {
        throw Error(ErrorCode::kNonFiniteInput, "non-finite sample");
      }
    }
  }
}

AudioBuffer decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kMalformedHeader, "not a RIFF/WAVE container");
  }
  std::optional<FormatChunk> fmt;
  std::span<const std::uint8_t> data;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* hdr = bytes.data() + pos;
    std::uint32_t size = read_u32(hdr + 4);
    std::size_t body = pos + 8;
    std::size_t avail = bytes.size() - body;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (size > avail) throw Error(ErrorCode::kMalformedHeader, "truncated fmt chunk");
      fmt = parse_fmt(bytes.data() + body, size);
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      // Streaming writers leave the size at 0 or 0xFFFFFFFF; take what exists.
      std::size_t len = (size == 0 || size > avail) ? avail : size;
      data = bytes.subspan(body, len);
      have_data = true;
      if (size > avail || size == 0) break;
    }
    pos = body + size + (size & 1u);
  }
  if (!fmt) throw Error(ErrorCode::kMalformedHeader, "missing fmt chunk");
  if (!have_data) throw Error(ErrorCode::kMalformedHeader, "missing data chunk");

  const std::size_t frames = data.size() / fmt->block_align;
  const std::size_t width = fmt->bits / 8;
  AudioBuffer out;
  out.sample_rate = static_cast<int>(fmt->rate);
  out.channels.assign(fmt->channels, std::vector<float>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    const std::uint8_t* frame = data.data() + i * fmt->block_align;
    for (std::size_t c = 0; c < fmt->channels; ++c) {
      out.channels[c][i] = decode_sample(frame + c * width, *fmt);
    }
  }
  return out;
}

AudioBuffer load_wav(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kMissingFile, path.string());
  }
  auto bytes = read_file_bytes(path);
  return decode_wav(bytes);
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio, SampleFormat format) {
  audio.validate();
  std::uint16_t bits = 16;
  std::uint16_t tag = kFormatPcm;
  switch (format) {
    case SampleFormat::kPcm16: bits = 16; break;
    case SampleFormat::kPcm24: bits = 24; break;
    case SampleFormat::kPcm32: bits = 32; break;
    case SampleFormat::kFloat32: bits = 32; tag = kFormatFloat; break;
  }
  const auto n_ch = static_cast<std::uint16_t>(audio.channel_count());
  const std::size_t frames = audio.frame_count();
  const std::uint16_t block = static_cast<std::uint16_t>(n_ch * bits / 8);
  const std::size_t data_size = frames * block;
  if (data_size + 36 > 0xFFFFFFFFu) {
    throw Error(ErrorCode::kInvalidArgument, "audio too long for RIFF");
  }

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_u32(out, static_cast<std::uint32_t>(36 + data_size));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, tag);
  put_u16(out, n_ch);
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate) * block);
  put_u16(out, block);
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, static_cast<std::uint32_t>(data_size));

  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < n_ch; ++c) {
      float x = audio.channels[c][i];
      switch (format) {
        case SampleFormat::kPcm16:
          put_u16(out, static_cast<std::uint16_t>(quantize<std::int16_t>(x, 32768.0)));
          break;
        case SampleFormat::kPcm24: {
          auto v = static_cast<std::uint32_t>(quantize<std::int32_t>(x, 8388608.0));
          out.push_back(static_cast<std::uint8_t>(v & 0xFF));
          out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
          out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
          break;
        }
        case SampleFormat::kPcm32:
          put_u32(out, static_cast<std::uint32_t>(quantize<std::int32_t>(x, 2147483648.0)));
          break;
        case SampleFormat::kFloat32:
          put_u32(out, std::bit_cast<std::uint32_t>(x));
          break;
      }
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio,
               SampleFormat format) {
  write_file_bytes(path, encode_wav(audio, format));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());
  in.seekg(0, std::ios::end);
  auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(size);
  if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()),
                           static_cast<std::streamsize>(size))) {
    throw Error(ErrorCode::kIoError, "read failed: " + path.string());
  }
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

}  // namespace laughseg
