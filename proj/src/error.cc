// Copyright 2026 The DSR Toolkit Authors.
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

#include "dsr/error.h"

namespace dsr {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kUndefinedNonterminal: return "UndefinedNonterminal";
    case ErrorCode::kCyclicGrammar: return "CyclicGrammar";
    case ErrorCode::kDuplicateStartSymbol: return "DuplicateStartSymbol";
    case ErrorCode::kUnknownStart: return "UnknownStart";
    case ErrorCode::kOverlappingSpans: return "OverlappingSpans";
    case ErrorCode::kSpanOutOfBounds: return "SpanOutOfBounds";
    case ErrorCode::kUnboundSlot: return "UnboundSlot";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kUnknownDomain: return "UnknownDomain";
    case ErrorCode::kNotEnoughEntities: return "NotEnoughEntities";
    case ErrorCode::kDuplicateEntity: return "DuplicateEntity";
    case ErrorCode::kGrammarMissingStart: return "GrammarMissingStart";
    case ErrorCode::kNoUniquePartial: return "NoUniquePartial";
    case ErrorCode::kNoDiscriminatingAttribute: return "NoDiscriminatingAttribute";
    case ErrorCode::kInvalidTargetArity: return "InvalidTargetArity";
    case ErrorCode::kNoMatch: return "NoMatch";
    case ErrorCode::kMissingPrediction: return "MissingPrediction";
    case ErrorCode::kUnknownSubsetTurn: return "UnknownSubsetTurn";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace dsr
