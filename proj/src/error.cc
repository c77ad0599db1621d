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

#include "gre/error.h"

namespace gre {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kEmptyPrompt: return "EmptyPrompt";
    case ErrorCode::kMalformedDocument: return "MalformedDocument";
    case ErrorCode::kEmptyRequirements: return "EmptyRequirements";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kActionNotInSupport: return "ActionNotInSupport";
    case ErrorCode::kSupportMismatch: return "SupportMismatch";
    case ErrorCode::kStateAlreadyPassing: return "StateAlreadyPassing";
    case ErrorCode::kGroupTooSmall: return "GroupTooSmall";
    case ErrorCode::kNonFiniteRatio: return "NonFiniteRatio";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kRetriesExhausted: return "RetriesExhausted";
    case ErrorCode::kUnparseableVerdict: return "UnparseableVerdict";
    case ErrorCode::kUnparseableResponse: return "UnparseableResponse";
    case ErrorCode::kBackendFailure: return "BackendFailure";
    case ErrorCode::kMissingCheckpoint: return "MissingCheckpoint";
    case ErrorCode::kCheckpointMismatch: return "CheckpointMismatch";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace gre
