#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "scn/link_store.hpp"
#include "scn/message.hpp"

namespace scn {

/// Global-decoding rule.
///  - Mpd: every neuron evaluates the full OR over all links into each other
///    cluster, gated by the source activation.
///  - Sd: only the rows of active source neurons are read and ORed.
///  - SdBounded: Sd, but each contributing cluster is serialized through the
///    priority encoder and at most `beta` rows are read per iteration.
enum class Rule { Mpd, Sd, SdBounded };

/// How a fully active contributing cluster (an erased cluster) is handled.
///  - SkipAsOnes: the link memory is bypassed and the cluster contributes all ones.
///  - StrictOr: the rows of all its active neurons are ORed like any other cluster.
enum class ErasedPolicy { SkipAsOnes, StrictOr };

struct DecodeConfig {
  Rule rule = Rule::Sd;
  std::uint32_t max_iters = 4;
  std::uint32_t beta = 2;
  ErasedPolicy erased_policy = ErasedPolicy::SkipAsOnes;
  bool early_stop = false;

  /// Throws Error(InvalidConfig) if max_iters or beta is zero.
  void validate() const;
};

enum class Status { Retrieved, Ambiguous, Failed };

struct DecodeOutcome {
  ActivationState final_state;
  Status status = Status::Failed;
  std::optional<Message> message;  // set iff status == Retrieved
  std::uint32_t iterations_used = 0;
  std::uint64_t cycles = 0;
  bool beta_overflow = false;
  std::uint32_t max_active_after_first_iter = 0;
};

/// Same final state, status and iteration count.
bool same_outcome(const DecodeOutcome& a, const DecodeOutcome& b);

std::string_view to_string(Rule rule);
std::string_view to_string(ErasedPolicy policy);
std::string_view to_string(Status status);
Rule parse_rule(std::string_view text);
ErasedPolicy parse_policy(std::string_view text);

/// Initial activations from a (partial) input. A known symbol activates one
/// neuron, an erased cluster activates all l, and partially erased bits
/// activate every neuron < l agreeing with the known bits.
ActivationState local_decode(const NetworkParams& params, const PartialMessage& input);

ActivationState gd_step_mpd(const LinkStore& store, const ActivationState& state);
ActivationState gd_step_sd(const LinkStore& store, const ActivationState& state,
                           ErasedPolicy policy);

struct SerialPass {
  std::vector<std::uint32_t> order;  // strictly descending
  bool overflow = false;
};

/// Priority-encoder serialization of one cluster: up to `beta` active
/// indices, highest first. Anything beyond `beta` is dropped.
SerialPass spm_serialize(const NeuronSet& cluster_bits, std::uint32_t beta);

struct BoundedStep {
  ActivationState state;
  bool overflow = false;
};

BoundedStep gd_step_bounded(const LinkStore& store, const ActivationState& state,
                            std::uint32_t beta, ErasedPolicy policy);

/// Throws Error(NotSingleton) unless every cluster has exactly one active neuron.
Message encode_output(const ActivationState& state);

Status classify(const ActivationState& state);

/// Local decoding followed by up to max_iters global-decoding iterations.
/// Cycle accounting follows cycle_count() in hw_model.hpp.
DecodeOutcome decode(const LinkStore& store, const PartialMessage& input,
                     const DecodeConfig& config);

}  // namespace scn
