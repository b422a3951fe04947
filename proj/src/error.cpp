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

#include "laughseg/error.hpp"

namespace laughseg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kUnsupportedCodec: return "UnsupportedCodec";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kChannelCountMismatch: return "ChannelCountMismatch";
    case ErrorCode::kStemMissing: return "StemMissing";
    case ErrorCode::kStemDurationMismatch: return "StemDurationMismatch";
    case ErrorCode::kAudioTooShort: return "AudioTooShort";
    case ErrorCode::kRateMismatch: return "RateMismatch";
    case ErrorCode::kEmptySpectrogram: return "EmptySpectrogram";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kVersionUnsupported: return "VersionUnsupported";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kMixedEmbeddingSources: return "MixedEmbeddingSources";
    case ErrorCode::kEmbeddingEventMismatch: return "EmbeddingEventMismatch";
    case ErrorCode::kOverlappingInput: return "OverlappingInput";
    case ErrorCode::kBinsNotPartition: return "BinsNotPartition";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace laughseg
