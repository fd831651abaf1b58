#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "scn/neuron_set.hpp"
#include "scn/params.hpp"

namespace scn {

/// A full message: one symbol in [0, l) per cluster.
using Message = std::vector<std::uint32_t>;

struct Known {
  std::uint32_t symbol;
  friend bool operator==(const Known&, const Known&) = default;
};

struct ErasedCluster {
  friend bool operator==(const ErasedCluster&, const ErasedCluster&) = default;
};

/// Sub-message with some erased bits. Bits set in `erased_mask` are unknown;
/// the remaining bits of `value` are trusted.
struct PartialBits {
  std::uint32_t value;
  std::uint32_t erased_mask;
  friend bool operator==(const PartialBits&, const PartialBits&) = default;
};

using QueryEntry = std::variant<Known, ErasedCluster, PartialBits>;
using PartialMessage = std::vector<QueryEntry>;

/// One neuron set per cluster.
using ActivationState = std::vector<NeuronSet>;

/// Throws SymbolOutOfRange / WrongArity.
void validate_message(const NetworkParams& params, const Message& msg);

/// Throws WrongArity, SymbolOutOfRange for Known entries, FailedInput for
/// PartialBits with no admissible neuron, InvalidParams for masks wider than kappa.
void validate_query(const NetworkParams& params, const PartialMessage& query);

PartialMessage as_query(const Message& msg);

/// Number of erased bits of an entry (kappa for an erased cluster).
std::uint32_t erased_bits(const NetworkParams& params, const QueryEntry& entry);

}  // namespace scn
