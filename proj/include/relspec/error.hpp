#pragma once

#include <stdexcept>
#include <string>

namespace relspec {

enum class ErrorCode {
  kInvalidOrder,
  kResolution,
  kDimension,
  kProjection,
  kNormalization,
  kNotSymmetric,
  kOutOfRange,
  kInvalidArgument,
  kIo,
  kParse,
  kConfig,
};

const char* to_string(ErrorCode code);

/// All library failures surface as this exception; `code()` identifies the
/// failure class so callers and tests can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace relspec
