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

#include <bit>
#include <cstring>
#include <string>

#include "laughseg/error.hpp"
#include "laughseg/features.hpp"

namespace laughseg {
namespace {

constexpr char kMagic[4] = {'L', 'E', 'M', 'B'};
constexpr std::size_t kHeaderSize = 16;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_embeddings(std::span<const Embedding> records) {
  const std::size_t dim = records.empty() ? 0 : records.front().values.size();
  for (const Embedding& r : records) {
    if (r.values.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "records of dimension " + std::to_string(dim) +
                                                     " and " + std::to_string(r.values.size()));
    }
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + records.size() * (16 + 4 * dim));
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kLembVersion);
  put_u32(out, static_cast<std::uint32_t>(records.size()));
  put_u32(out, static_cast<std::uint32_t>(dim));
  for (const Embedding& r : records) {
    put_u64(out, std::bit_cast<std::uint64_t>(r.event.start_s));
    put_u64(out, std::bit_cast<std::uint64_t>(r.event.end_s));
    for (float v : r.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

std::vector<Embedding> decode_embeddings(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not an LEMB file");
  }
  if (bytes.size() < kHeaderSize) throw Error(ErrorCode::kTruncatedFile, "header incomplete");
  const std::uint32_t version = get_u32(bytes.data() + 4);
  if (version != kLembVersion) {
    throw Error(ErrorCode::kVersionUnsupported, "LEMB version " + std::to_string(version));
  }
  const std::uint64_t count = get_u32(bytes.data() + 8);
  const std::uint64_t dim = get_u32(bytes.data() + 12);
  const std::uint64_t record_size = 16 + 4 * dim;
  const std::uint64_t body = bytes.size() - kHeaderSize;
  if (count > body / record_size) {
    throw Error(ErrorCode::kTruncatedFile, "declared " + std::to_string(count) +
                                               " records, bytes for " +
                                               std::to_string(body / record_size));
  }
  if (body > count * record_size) {
    throw Error(ErrorCode::kParseError, "trailing bytes after last record");
  }
  std::vector<Embedding> out(count);
  const std::uint8_t* p = bytes.data() + kHeaderSize;
  for (auto& r : out) {
    r.source = EmbeddingSource::kExternal;
    r.event.start_s = std::bit_cast<double>(get_u64(p));
    r.event.end_s = std::bit_cast<double>(get_u64(p + 8));
    p += 16;
    r.values.resize(dim);
    for (auto& v : r.values) {
      v = std::bit_cast<float>(get_u32(p));
      p += 4;
    }
  }
  return out;
}

void write_embeddings(const std::filesystem::path& path, std::span<const Embedding> records) {
  write_file_bytes(path, encode_embeddings(records));
}

std::vector<Embedding> read_embeddings(const std::filesystem::path& path) {
  return decode_embeddings(read_file_bytes(path));
}

}  // namespace laughseg
