#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "scn/decoder.hpp"
#include "scn/link_store.hpp"

namespace scn {

/// Link memory size: c (c-1) blocks of l x l bits.
std::uint64_t bram_bits(std::uint32_t clusters, std::uint32_t neurons);

/// Stored information: m messages of c * ceil(log2 l) bits.
std::uint64_t capacity_bits(std::uint32_t clusters, std::uint32_t neurons, std::uint64_t messages);

/// Serialized decoder latency: 2 + (beta + 1) (it - 1).
std::uint64_t access_delay_sd(std::uint32_t beta, std::uint32_t iters);

/// Fully parallel decoder latency: 1 + it.
std::uint64_t access_delay_mpd(std::uint32_t iters);

/// Clock cycles spent by a decode that ran `iterations_used` GD iterations.
/// The first iteration (LD plus first GD pass) costs 2 cycles for every
/// rule. Each later iteration costs beta + 1 for the serialized rules and 1
/// for Mpd.
std::uint64_t cycle_count(const DecodeConfig& config, std::uint32_t iterations_used);

struct ResourceReport {
  std::uint64_t bram_bits = 0;
  std::uint64_t capacity_bits = 0;
  std::uint64_t access_delay_sd = 0;
  std::uint64_t access_delay_mpd = 0;
  double efficiency = 0.0;
};

ResourceReport resource_report(std::uint32_t clusters, std::uint32_t neurons,
                               std::uint64_t messages, std::uint32_t beta, std::uint32_t iters);

struct BetaReport {
  std::vector<std::uint32_t> per_trial;
  std::uint32_t aggregate = 0;
  std::map<std::uint32_t, std::uint64_t> histogram;
  std::uint64_t trials = 0;
  std::uint32_t erase_count = 0;
  std::uint64_t seed = 0;

  // Outcomes of the probe decodes.
  std::uint64_t correct = 0;
  std::uint64_t ambiguous = 0;
  std::uint64_t failed = 0;
  std::uint64_t total_cycles = 0;

  /// Most frequent per-trial value (smallest on ties), 0 when empty.
  std::uint32_t modal() const;
};

/// Draws `trials` queries uniformly from `messages` (the set stored in
/// `store`), erases `erase_count` distinct clusters of each, and records the
/// largest per-cluster activation count after the first GD iteration of an
/// unbounded Sd decode. Throws EmptyStore if `messages` is empty.
BetaReport measure_beta(const LinkStore& store, const std::vector<Message>& messages,
                        std::uint64_t trials, std::uint32_t erase_count, std::uint64_t seed,
                        DecodeConfig config);

}  // namespace scn
