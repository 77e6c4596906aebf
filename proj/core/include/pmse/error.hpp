#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmse {

enum class ErrorCode {
  kInvalidArgument,
  kDomainError,
  kDimensionMismatch,
  kImageTooSmall,
  kIo,
  kFormat,
  kNotIndexFile,
  kVersionMismatch,
  kUnexpectedEof,
  kInconsistentIndex,
  kDegenerate,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` distinguishes failure classes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace pmse
