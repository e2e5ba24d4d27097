#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmlab {

enum class ErrorCode {
  InvalidArgument,
  InvalidRange,
  MissingSupport,
  ResourceLimit,
  UnsupportedTheory,
  NumericInput,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Base class of every error raised by the library. The code selects the CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

template <ErrorCode C>
class CodedError : public Error {
 public:
  explicit CodedError(const std::string& what) : Error(C, what) {}
};

using InvalidArgumentError = CodedError<ErrorCode::InvalidArgument>;
using InvalidRangeError = CodedError<ErrorCode::InvalidRange>;
using MissingSupportError = CodedError<ErrorCode::MissingSupport>;
using ResourceLimitError = CodedError<ErrorCode::ResourceLimit>;
using UnsupportedTheoryError = CodedError<ErrorCode::UnsupportedTheory>;
using NumericInputError = CodedError<ErrorCode::NumericInput>;
using IoError = CodedError<ErrorCode::Io>;

}  // namespace rmlab
