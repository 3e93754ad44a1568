// Copyright 2026 The groundcheck Authors
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

#include "groundcheck/error.hpp"

namespace groundcheck {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kDim: return "DimError";
    case ErrorCode::kZeroVector: return "ZeroVectorError";
    case ErrorCode::kEmptyTarget: return "EmptyTargetError";
    case ErrorCode::kBin: return "BinError";
    case ErrorCode::kMissingEmbedding: return "MissingEmbedding";
    case ErrorCode::kEmptySplit: return "EmptySplitError";
    case ErrorCode::kReportMismatch: return "ReportMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kInvalidRequest: return "InvalidRequest";
    case ErrorCode::kScorerUnavailable: return "ScorerUnavailable";
    case ErrorCode::kProtocol: return "ProtocolError";
    case ErrorCode::kHandshake: return "HandshakeError";
    case ErrorCode::kScorerContractViolation: return "ScorerContractViolation";
    case ErrorCode::kScorerRemote: return "ScorerRemoteError";
    case ErrorCode::kEmptyQuery: return "EmptyQuery";
    case ErrorCode::kPoolExhausted: return "PoolExhausted";
    case ErrorCode::kMissingDoc: return "MissingDoc";
    case ErrorCode::kNoKeyTokens: return "NoKeyTokens";
    case ErrorCode::kMissingAnswer: return "MissingAnswer";
    case ErrorCode::kInternal: return "InternalError";
  }
  return "InternalError";
}

void raise(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace groundcheck
