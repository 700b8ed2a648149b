#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace diot {

enum class ErrorCode {
  kNoPath,
  kPathExplosion,
  kCyclicGraph,
  kDomainError,
  kUnknownEdge,
  kNotBpr,
  kNoValidOrder,
  kZeroOptimum,
  kWrongShape,
  kParseError,
  kValidationError,
  kInvalidArgument,
};

// Stable upper-case name, used as the machine-readable prefix of CLI errors.
std::string_view error_code_name(ErrorCode code);

class DiotError : public std::runtime_error {
 public:
  DiotError(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace diot
