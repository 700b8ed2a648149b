#include "diot/error.hpp"

namespace diot {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoPath: return "NO_PATH";
    case ErrorCode::kPathExplosion: return "PATH_EXPLOSION";
    case ErrorCode::kCyclicGraph: return "CYCLIC_GRAPH";
    case ErrorCode::kDomainError: return "DOMAIN_ERROR";
    case ErrorCode::kUnknownEdge: return "UNKNOWN_EDGE";
    case ErrorCode::kNotBpr: return "NOT_BPR";
    case ErrorCode::kNoValidOrder: return "NO_VALID_ORDER";
    case ErrorCode::kZeroOptimum: return "ZERO_OPTIMUM";
    case ErrorCode::kWrongShape: return "WRONG_SHAPE";
    case ErrorCode::kParseError: return "PARSE_ERROR";
    case ErrorCode::kValidationError: return "VALIDATION_ERROR";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

}  // namespace diot
