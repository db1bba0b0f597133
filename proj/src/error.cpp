#include "relspec/error.hpp"

namespace relspec {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidOrder: return "invalid order";
    case ErrorCode::kResolution: return "resolution";
    case ErrorCode::kDimension: return "dimension mismatch";
    case ErrorCode::kProjection: return "projection";
    case ErrorCode::kNormalization: return "normalization";
    case ErrorCode::kNotSymmetric: return "not symmetric";
    case ErrorCode::kOutOfRange: return "out of range";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kConfig: return "config";
  }
  return "unknown";
}

}  // namespace relspec
