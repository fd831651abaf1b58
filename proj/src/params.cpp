#include "scn/params.hpp"

#include <bit>
#include <string>

#include "scn/error.hpp"

namespace scn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParams: return "invalid-params";
    case ErrorCode::SymbolOutOfRange: return "symbol-out-of-range";
    case ErrorCode::SameCluster: return "same-cluster";
    case ErrorCode::IndexOutOfRange: return "index-out-of-range";
    case ErrorCode::FailedInput: return "failed-input";
    case ErrorCode::NotSingleton: return "not-singleton";
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::EmptyStore: return "empty-store";
    case ErrorCode::BadMagic: return "bad-magic";
    case ErrorCode::BadVersion: return "bad-version";
    case ErrorCode::Truncated: return "truncated";
    case ErrorCode::TrailingData: return "trailing-data";
    case ErrorCode::SymmetryViolation: return "symmetry-violation";
    case ErrorCode::NonzeroPadding: return "nonzero-padding";
    case ErrorCode::WrongArity: return "wrong-arity";
    case ErrorCode::MalformedToken: return "malformed-token";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

std::uint32_t ceil_log2(std::uint64_t value) noexcept {
  if (value <= 1) return 0;
  return static_cast<std::uint32_t>(std::bit_width(value - 1));
}

NetworkParams::NetworkParams(std::uint32_t clusters, std::uint32_t neurons)
    : clusters_(clusters), neurons_(neurons), kappa_(ceil_log2(neurons)) {
  if (clusters < 2 || neurons < 2) {
    throw Error(ErrorCode::InvalidParams,
                "network needs at least 2 clusters of at least 2 neurons (got c=" +
                    std::to_string(clusters) + ", l=" + std::to_string(neurons) + ")");
  }
}

}  // namespace scn
