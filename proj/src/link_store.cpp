#include "scn/link_store.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "scn/error.hpp"

namespace scn {

LinkStore::LinkStore(NetworkParams params)
    : params_(params),
      words_per_row_(words_for(params.neurons())),
      words_(std::size_t{params.clusters()} * (params.clusters() - 1) * params.neurons() *
                 words_per_row_,
             0) {}

std::size_t LinkStore::block_count() const noexcept {
  return std::size_t{params_.clusters()} * (params_.clusters() - 1);
}

void LinkStore::store_message(const Message& msg) {
  validate_message(params_, msg);
  const auto c = params_.clusters();
  for (std::uint32_t a = 0; a < c; ++a) {
    for (std::uint32_t b = 0; b < c; ++b) {
      if (a == b) continue;
      words_[row_offset(a, msg[a], b) + msg[b] / 64] |= std::uint64_t{1} << (msg[b] % 64);
    }
  }
  ++stored_count_;
}

void LinkStore::check_ref(NeuronRef ref) const {
  if (ref.cluster >= params_.clusters() || ref.neuron >= params_.neurons()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "neuron (" + std::to_string(ref.cluster) + ", " + std::to_string(ref.neuron) +
                    ") outside network");
  }
}

bool LinkStore::get_link(NeuronRef src, NeuronRef dst) const {
  check_ref(src);
  check_ref(dst);
  if (src.cluster == dst.cluster) {
    throw Error(ErrorCode::SameCluster, "no links inside a cluster");
  }
  return row(src.cluster, src.neuron, dst.cluster).test(dst.neuron);
}

RowView LinkStore::read_row(NeuronRef src, std::uint32_t dst_cluster) const {
  check_ref(src);
  if (dst_cluster >= params_.clusters()) {
    throw Error(ErrorCode::IndexOutOfRange, "cluster " + std::to_string(dst_cluster) +
                                                " outside network");
  }
  if (src.cluster == dst_cluster) {
    throw Error(ErrorCode::SameCluster, "no links inside a cluster");
  }
  return row(src.cluster, src.neuron, dst_cluster);
}

std::uint64_t LinkStore::set_bits() const noexcept {
  return std::accumulate(words_.begin(), words_.end(), std::uint64_t{0},
                         [](std::uint64_t acc, std::uint64_t w) {
                           return acc + static_cast<std::uint64_t>(std::popcount(w));
                         });
}

double LinkStore::density() const noexcept {
  const double possible = static_cast<double>(block_count()) * params_.neurons() *
                          params_.neurons();
  return static_cast<double>(set_bits()) / possible;
}

bool LinkStore::symmetric() const noexcept {
  const auto c = params_.clusters();
  const auto l = params_.neurons();
  for (std::uint32_t a = 0; a < c; ++a) {
    for (std::uint32_t b = a + 1; b < c; ++b) {
      for (std::uint32_t r = 0; r < l; ++r) {
        auto forward = row(a, r, b);
        for (std::uint32_t t = 0; t < l; ++t) {
          if (forward.test(t) != row(b, t, a).test(r)) return false;
        }
      }
    }
  }
  return true;
}

void LinkStoreWriter::set(std::uint32_t src_cluster, std::uint32_t src_neuron,
                          std::uint32_t dst_cluster, std::uint32_t dst_neuron) {
  store_.words_[store_.row_offset(src_cluster, src_neuron, dst_cluster) + dst_neuron / 64] |=
      std::uint64_t{1} << (dst_neuron % 64);
}

LinkStore new_network(std::uint32_t clusters, std::uint32_t neurons) {
  return LinkStore(NetworkParams(clusters, neurons));
}

double expected_density(std::uint32_t neurons, std::uint64_t messages) {
  const double l2 = static_cast<double>(neurons) * neurons;
  return -std::expm1(static_cast<double>(messages) * std::log1p(-1.0 / l2));
}

}  // namespace scn
