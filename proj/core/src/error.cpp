#include "pmse/error.hpp"

namespace pmse {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDomainError: return "domain error";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kImageTooSmall: return "image smaller than patch";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kNotIndexFile: return "not an index file";
    case ErrorCode::kVersionMismatch: return "index version mismatch";
    case ErrorCode::kUnexpectedEof: return "unexpected end of file";
    case ErrorCode::kInconsistentIndex: return "inconsistent index";
    case ErrorCode::kDegenerate: return "degenerate estimate";
  }
  return "unknown error";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace pmse
