#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scn/message.hpp"
#include "scn/neuron_set.hpp"
#include "scn/params.hpp"

namespace scn {

/// A neuron address: (cluster, neuron-within-cluster).
struct NeuronRef {
  std::uint32_t cluster;
  std::uint32_t neuron;
};

/// Binary link memory of the network.
///
/// Holds one l x l bit block for every ordered pair of distinct clusters
/// (a, b). Row r of block (a, b) lists the neurons of cluster b linked to
/// neuron r of cluster a. Both directions are kept, so block (b, a) is the
/// transpose of block (a, b) for any store built by store_message. Rows are
/// packed into 64-bit words and padded to a whole word.
class LinkStore {
 public:
  explicit LinkStore(NetworkParams params);

  const NetworkParams& params() const noexcept { return params_; }
  std::uint64_t stored_count() const noexcept { return stored_count_; }
  std::size_t block_count() const noexcept;

  /// Sets every clique edge of `msg` in both directions.
  void store_message(const Message& msg);

  bool get_link(NeuronRef src, NeuronRef dst) const;

  /// One RAM read: row `src.neuron` of block (src.cluster, dst_cluster).
  RowView read_row(NeuronRef src, std::uint32_t dst_cluster) const;

  /// Unchecked variant used on the decode hot path.
  RowView row(std::uint32_t src_cluster, std::uint32_t src_neuron,
              std::uint32_t dst_cluster) const noexcept {
    return {row_words(src_cluster, src_neuron, dst_cluster), params_.neurons()};
  }

  std::uint64_t set_bits() const noexcept;
  /// set_bits / (c (c-1) l^2).
  double density() const noexcept;

  /// True when block (b, a) is the transpose of block (a, b) for every pair.
  bool symmetric() const noexcept;

  std::size_t memory_bytes() const noexcept { return words_.size() * sizeof(std::uint64_t); }

  friend bool operator==(const LinkStore&, const LinkStore&) = default;

 private:
  friend class LinkStoreWriter;

  std::size_t block_index(std::uint32_t src, std::uint32_t dst) const noexcept {
    return std::size_t{src} * (params_.clusters() - 1) + (dst < src ? dst : dst - 1);
  }
  std::size_t row_offset(std::uint32_t src_cluster, std::uint32_t src_neuron,
                         std::uint32_t dst_cluster) const noexcept {
    return (block_index(src_cluster, dst_cluster) * params_.neurons() + src_neuron) *
           words_per_row_;
  }
  std::span<const std::uint64_t> row_words(std::uint32_t src_cluster, std::uint32_t src_neuron,
                                           std::uint32_t dst_cluster) const noexcept {
    return {words_.data() + row_offset(src_cluster, src_neuron, dst_cluster), words_per_row_};
  }
  void check_ref(NeuronRef ref) const;

  NetworkParams params_;
  std::size_t words_per_row_;
  std::uint64_t stored_count_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Raw row access for deserialization. Does not maintain symmetry.
class LinkStoreWriter {
 public:
  explicit LinkStoreWriter(LinkStore& store) : store_(store) {}
  void set(std::uint32_t src_cluster, std::uint32_t src_neuron, std::uint32_t dst_cluster,
           std::uint32_t dst_neuron);
  void set_stored_count(std::uint64_t count) { store_.stored_count_ = count; }

 private:
  LinkStore& store_;
};

LinkStore new_network(std::uint32_t clusters, std::uint32_t neurons);

/// Closed-form density after storing m uniform messages: 1 - (1 - 1/l^2)^m.
double expected_density(std::uint32_t neurons, std::uint64_t messages);

}  // namespace scn
