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

#ifndef LAUGHSEG_ERROR_HPP_
#define LAUGHSEG_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace laughseg {

enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kMissingFile,
  kUnsupportedCodec,
  kMalformedHeader,
  kChannelCountMismatch,
  kStemMissing,
  kStemDurationMismatch,
  kAudioTooShort,
  kRateMismatch,
  kEmptySpectrogram,
  kBadMagic,
  kVersionUnsupported,
  kDimensionMismatch,
  kTruncatedFile,
  kTooFewPoints,
  kNonFiniteInput,
  kMixedEmbeddingSources,
  kEmbeddingEventMismatch,
  kOverlappingInput,
  kBinsNotPartition,
  kParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map them to exit codes and messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace laughseg

#endif  // LAUGHSEG_ERROR_HPP_
