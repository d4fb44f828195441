// Copyright 2026 The interj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef INTERJ_ERROR_H_
#define INTERJ_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace interj {

enum class ErrorCode {
  kUnsupportedFormat,
  kCorruptHeader,
  kIoFailure,
  kEmptySignal,
  kInvalidFraming,
  kSignalTooShort,
  kEmptyScene,
  kPlanInvalid,
  kLengthMismatch,
  kClipTooLong,
  kUnknownSpeaker,
  kOverlappingSplit,
  kUnknownLabel,
  kShapeMismatch,
  kNonFiniteLoss,
  kEmptyTrainingSet,
  kVersionMismatch,
  kCorruptCheckpoint,
  kConfigError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace interj

#endif  // INTERJ_ERROR_H_
