#pragma once

#include <cstdint>

namespace scn {

/// Shape of a sparse clustered network: `clusters` groups of `neurons`
/// binary neurons each. Every sub-message selects one neuron per cluster.
class NetworkParams {
 public:
  /// Throws Error(InvalidParams) unless clusters >= 2 and neurons >= 2.
  NetworkParams(std::uint32_t clusters, std::uint32_t neurons);

  std::uint32_t clusters() const noexcept { return clusters_; }
  std::uint32_t neurons() const noexcept { return neurons_; }

  /// Bits per sub-message: the smallest k with 2^k >= neurons.
  std::uint32_t kappa() const noexcept { return kappa_; }
  std::uint64_t total_neurons() const noexcept {
    return std::uint64_t{clusters_} * neurons_;
  }
  std::uint64_t message_bits() const noexcept {
    return std::uint64_t{clusters_} * kappa_;
  }

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;

 private:
  std::uint32_t clusters_;
  std::uint32_t neurons_;
  std::uint32_t kappa_;
};

std::uint32_t ceil_log2(std::uint64_t value) noexcept;

}  // namespace scn
