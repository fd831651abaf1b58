#include "scn/hw_model.hpp"

#include <algorithm>

#include "scn/error.hpp"
#include "scn/experiments.hpp"
#include "scn/rng.hpp"

namespace scn {

std::uint64_t bram_bits(std::uint32_t clusters, std::uint32_t neurons) {
  const NetworkParams params(clusters, neurons);
  return std::uint64_t{clusters} * (clusters - 1) * neurons * neurons;
}

std::uint64_t capacity_bits(std::uint32_t clusters, std::uint32_t neurons,
                            std::uint64_t messages) {
  const NetworkParams params(clusters, neurons);
  return messages * params.message_bits();
}

std::uint64_t access_delay_sd(std::uint32_t beta, std::uint32_t iters) {
  if (beta == 0 || iters == 0) throw Error(ErrorCode::InvalidConfig, "beta and it must be >= 1");
  return 2 + std::uint64_t{beta + 1ULL} * (iters - 1);
}

std::uint64_t access_delay_mpd(std::uint32_t iters) {
  if (iters == 0) throw Error(ErrorCode::InvalidConfig, "it must be >= 1");
  return 1 + std::uint64_t{iters};
}

std::uint64_t cycle_count(const DecodeConfig& config, std::uint32_t iterations_used) {
  config.validate();
  if (iterations_used == 0) return 0;
  if (config.rule == Rule::Mpd) return access_delay_mpd(iterations_used);
  return access_delay_sd(config.beta, iterations_used);
}

ResourceReport resource_report(std::uint32_t clusters, std::uint32_t neurons,
                               std::uint64_t messages, std::uint32_t beta, std::uint32_t iters) {
  ResourceReport r;
  r.bram_bits = bram_bits(clusters, neurons);
  r.capacity_bits = capacity_bits(clusters, neurons, messages);
  r.access_delay_sd = access_delay_sd(beta, iters);
  r.access_delay_mpd = access_delay_mpd(iters);
  r.efficiency = static_cast<double>(r.capacity_bits) / static_cast<double>(r.bram_bits);
  return r;
}

std::uint32_t BetaReport::modal() const {
  std::uint32_t best = 0;
  std::uint64_t best_count = 0;
  for (const auto& [value, count] : histogram) {
    if (count > best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

BetaReport measure_beta(const LinkStore& store, const std::vector<Message>& messages,
                        std::uint64_t trials, std::uint32_t erase_count, std::uint64_t seed,
                        DecodeConfig config) {
  if (messages.empty()) throw Error(ErrorCode::EmptyStore, "no stored messages to probe");
  if (erase_count >= store.params().clusters()) {
    throw Error(ErrorCode::InvalidParams, "erase_count must be below c");
  }
  config.rule = Rule::Sd;

  BetaReport report;
  report.trials = trials;
  report.erase_count = erase_count;
  report.seed = seed;
  report.per_trial.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(substream_seed(seed, 0x62657461 /* "beta" */, t));
    const auto& original = messages[rng.below(messages.size())];
    const auto outcome = decode(store, erase_clusters(original, erase_count, rng), config);
    const auto observed = outcome.max_active_after_first_iter;
    report.per_trial.push_back(observed);
    report.aggregate = std::max(report.aggregate, observed);
    ++report.histogram[observed];
    report.total_cycles += outcome.cycles;
    switch (outcome.status) {
      case Status::Retrieved: report.correct += *outcome.message == original; break;
      case Status::Ambiguous: ++report.ambiguous; break;
      case Status::Failed: ++report.failed; break;
    }
  }
  return report;
}

}  // namespace scn
