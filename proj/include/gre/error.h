// Copyright 2026 The gre Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRE_ERROR_H_
#define GRE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace gre {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidConfig,
  kEmptyPrompt,
  kMalformedDocument,
  kEmptyRequirements,
  kEmptyCorpus,
  kActionNotInSupport,
  kSupportMismatch,
  kStateAlreadyPassing,
  kGroupTooSmall,
  kNonFiniteRatio,
  kTimeout,
  kMalformedResponse,
  kRetriesExhausted,
  kUnparseableVerdict,
  kUnparseableResponse,
  kBackendFailure,
  kMissingCheckpoint,
  kCheckpointMismatch,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string const& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gre

#endif  // GRE_ERROR_H_
