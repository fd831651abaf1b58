#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scn {

enum class ErrorCode {
  InvalidParams,
  SymbolOutOfRange,
  SameCluster,
  IndexOutOfRange,
  FailedInput,
  NotSingleton,
  InvalidConfig,
  EmptyStore,
  BadMagic,
  BadVersion,
  Truncated,
  TrailingData,
  SymmetryViolation,
  NonzeroPadding,
  WrongArity,
  MalformedToken,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace scn
