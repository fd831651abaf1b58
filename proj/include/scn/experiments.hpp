#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scn/decoder.hpp"
#include "scn/link_store.hpp"
#include "scn/rng.hpp"

namespace scn {

/// m messages with every symbol uniform on [0, l). Deterministic in seed.
std::vector<Message> gen_messages(const NetworkParams& params, std::uint64_t count,
                                  std::uint64_t seed);

/// Erases exactly `erase_count` distinct clusters chosen uniformly.
/// Throws InvalidParams if erase_count >= c.
PartialMessage erase_clusters(const Message& msg, std::uint32_t erase_count, std::uint64_t seed);
PartialMessage erase_clusters(const Message& msg, std::uint32_t erase_count, Rng& rng);

LinkStore build_store(const NetworkParams& params, const std::vector<Message>& messages);

enum class ProbeSource { Stored, Random };

struct ExperimentSpec {
  NetworkParams params{8, 64};
  std::vector<std::uint64_t> message_counts;
  std::uint64_t trials = 1000;
  std::uint32_t erase_count = 4;
  DecodeConfig config;
  std::uint64_t seed = 0;
  ProbeSource probes = ProbeSource::Stored;
  /// Worker threads for trials; results do not depend on it.
  unsigned threads = 1;

  void validate() const;
};

struct ExperimentRow {
  std::uint32_t c = 0;
  std::uint32_t l = 0;
  std::uint64_t m = 0;
  std::uint64_t trials = 0;
  std::uint32_t erase_count = 0;
  Rule rule = Rule::Sd;
  ErasedPolicy policy = ErasedPolicy::SkipAsOnes;
  std::uint32_t beta = 0;
  std::uint32_t iters = 0;
  double density = 0.0;
  double error_rate = 0.0;
  double ambiguous_rate = 0.0;
  double failed_rate = 0.0;
  double overflow_rate = 0.0;
  std::uint32_t beta_max = 0;
  double mean_cycles = 0.0;

  /// Retrieved a message different from the probe. Never nonzero for
  /// erasure-only probes of stored messages.
  std::uint64_t wrong_count = 0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
};

/// Outcome of one trial in an experiment point; exposed for tests.
struct TrialRecord {
  Message original;
  PartialMessage query;
  DecodeOutcome outcome;
};

/// Messages stored for point m of `spec` (shared by every config at that point).
std::vector<Message> point_messages(const ExperimentSpec& spec, std::uint64_t m);

/// Query for trial `trial` of point m; depends only on (seed, m, trial).
TrialRecord make_trial(const ExperimentSpec& spec, const std::vector<Message>& stored,
                       std::uint64_t m, std::uint64_t trial);

ExperimentResult run_experiment(const ExperimentSpec& spec);

struct AgreementReport {
  std::uint64_t m = 0;
  std::uint64_t trials = 0;
  double mpd_vs_sd_strict = 0.0;
  double sd_skip_vs_sd_strict = 0.0;
  double bounded_vs_sd = 0.0;
  /// Agreement restricted to trials without overflow; 1.0 when there are none.
  double bounded_vs_sd_no_overflow = 0.0;
  double overflow_rate = 0.0;
  /// Agreement of final status only between Mpd and Sd(SkipAsOnes).
  double skip_status_agreement = 0.0;
};

/// Runs Mpd, Sd(StrictOr), Sd(SkipAsOnes) and SdBounded(spec.config.beta,
/// spec.config.erased_policy) on identical trials.
std::vector<AgreementReport> compare_decoders(const ExperimentSpec& spec);

inline constexpr const char* kCsvHeader =
    "c,l,m,trials,erase_count,rule,policy,beta,iters,density,error_rate,ambiguous_rate,"
    "failed_rate,overflow_rate,beta_max,mean_cycles";

void emit_csv(const ExperimentResult& result, std::ostream& out);
void emit_csv(const ExperimentResult& result, const std::string& path);

/// Parses text produced by emit_csv. Used by tests and tooling.
ExperimentResult parse_csv(std::istream& in);

}  // namespace scn
