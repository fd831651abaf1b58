#include "scn/decoder.hpp"

#include <algorithm>
#include <string>

#include "scn/error.hpp"
#include "scn/hw_model.hpp"

namespace scn {

void DecodeConfig::validate() const {
  if (max_iters == 0) throw Error(ErrorCode::InvalidConfig, "max_iters must be at least 1");
  if (beta == 0) throw Error(ErrorCode::InvalidConfig, "beta must be at least 1");
}

bool same_outcome(const DecodeOutcome& a, const DecodeOutcome& b) {
  return a.status == b.status && a.iterations_used == b.iterations_used &&
         a.final_state == b.final_state;
}

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::Mpd: return "mpd";
    case Rule::Sd: return "sd";
    case Rule::SdBounded: return "sd-bounded";
  }
  return "?";
}

std::string_view to_string(ErasedPolicy policy) {
  return policy == ErasedPolicy::SkipAsOnes ? "skip" : "strict";
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Retrieved: return "Retrieved";
    case Status::Ambiguous: return "Ambiguous";
    case Status::Failed: return "Failed";
  }
  return "?";
}

Rule parse_rule(std::string_view text) {
  if (text == "mpd") return Rule::Mpd;
  if (text == "sd") return Rule::Sd;
  if (text == "sd-bounded") return Rule::SdBounded;
  throw Error(ErrorCode::InvalidConfig, "unknown decoder '" + std::string(text) + "'");
}

ErasedPolicy parse_policy(std::string_view text) {
  if (text == "skip") return ErasedPolicy::SkipAsOnes;
  if (text == "strict") return ErasedPolicy::StrictOr;
  throw Error(ErrorCode::InvalidConfig, "unknown erased policy '" + std::string(text) + "'");
}

ActivationState local_decode(const NetworkParams& params, const PartialMessage& input) {
  validate_query(params, input);
  const auto l = params.neurons();
  const std::uint32_t kappa_mask = (params.kappa() >= 32) ? ~0U : (1U << params.kappa()) - 1;

  ActivationState state;
  state.reserve(input.size());
  for (const auto& entry : input) {
    NeuronSet cluster(l);
    if (const auto* known = std::get_if<Known>(&entry)) {
      cluster.set(known->symbol);
    } else if (std::holds_alternative<ErasedCluster>(entry)) {
      cluster.fill();
    } else {
      // Score kappa - n_e is reached exactly by the neurons agreeing on every known bit.
      const auto& bits = std::get<PartialBits>(entry);
      const std::uint32_t known_mask = ~bits.erased_mask & kappa_mask;
      for (std::uint32_t n = 0; n < l; ++n) {
        if (((n ^ bits.value) & known_mask) == 0) cluster.set(n);
      }
    }
    state.push_back(std::move(cluster));
  }
  return state;
}

ActivationState gd_step_mpd(const LinkStore& store, const ActivationState& state) {
  const auto c = store.params().clusters();
  const auto l = store.params().neurons();
  ActivationState out(c, NeuronSet(l));
  for (std::uint32_t i = 0; i < c; ++i) {
    for (std::uint32_t n = 0; n < l; ++n) {
      bool signal_from_all = true;
      for (std::uint32_t j = 0; j < c && signal_from_all; ++j) {
        if (j == i) continue;
        // OR over every neuron of cluster j of w * v.
        signal_from_all = intersects(store.row(i, n, j), state[j].view());
      }
      if (signal_from_all && state[i].test(n)) out[i].set(n);
    }
  }
  return out;
}

namespace {

bool bypassed(const NeuronSet& cluster, ErasedPolicy policy) {
  return policy == ErasedPolicy::SkipAsOnes && cluster.all();
}

// One global-decoding pass given, for each contributing cluster, the
// neuron indices whose rows are read. A cluster flagged as bypassed
// contributes all ones.
ActivationState combine_rows(const LinkStore& store, const ActivationState& state,
                             const std::vector<std::vector<std::uint32_t>>& reads,
                             const std::vector<bool>& bypass) {
  const auto c = store.params().clusters();
  const auto l = store.params().neurons();
  ActivationState out;
  out.reserve(c);
  NeuronSet contribution(l);
  for (std::uint32_t i = 0; i < c; ++i) {
    NeuronSet next = state[i];
    for (std::uint32_t j = 0; j < c && !next.none(); ++j) {
      if (j == i || bypass[j]) continue;
      contribution.clear();
      for (auto source : reads[j]) contribution |= store.row(j, source, i);
      next &= contribution;
    }
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace

ActivationState gd_step_sd(const LinkStore& store, const ActivationState& state,
                           ErasedPolicy policy) {
  const auto c = store.params().clusters();
  std::vector<std::vector<std::uint32_t>> reads(c);
  std::vector<bool> bypass(c, false);
  for (std::uint32_t j = 0; j < c; ++j) {
    bypass[j] = bypassed(state[j], policy);
    if (!bypass[j]) reads[j] = state[j].members();
  }
  return combine_rows(store, state, reads, bypass);
}

SerialPass spm_serialize(const NeuronSet& cluster_bits, std::uint32_t beta) {
  SerialPass pass;
  NeuronSet pending = cluster_bits;
  while (!pending.none()) {
    if (pass.order.size() == beta) {
      pass.overflow = true;
      break;
    }
    const auto top = static_cast<std::uint32_t>(pending.highest());
    pass.order.push_back(top);
    pending.reset(top);
  }
  return pass;
}

BoundedStep gd_step_bounded(const LinkStore& store, const ActivationState& state,
                            std::uint32_t beta, ErasedPolicy policy) {
  const auto c = store.params().clusters();
  std::vector<std::vector<std::uint32_t>> reads(c);
  std::vector<bool> bypass(c, false);
  bool overflow = false;
  for (std::uint32_t j = 0; j < c; ++j) {
    bypass[j] = bypassed(state[j], policy);
    if (bypass[j]) continue;
    auto pass = spm_serialize(state[j], beta);
    overflow = overflow || pass.overflow;
    reads[j] = std::move(pass.order);
  }
  return {combine_rows(store, state, reads, bypass), overflow};
}

Status classify(const ActivationState& state) {
  bool all_single = true;
  for (const auto& cluster : state) {
    const auto n = cluster.count();
    if (n == 0) return Status::Failed;
    all_single = all_single && n == 1;
  }
  return all_single ? Status::Retrieved : Status::Ambiguous;
}

Message encode_output(const ActivationState& state) {
  Message msg;
  msg.reserve(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state[i].count() != 1) {
      throw Error(ErrorCode::NotSingleton,
                  "cluster " + std::to_string(i) + " has " + std::to_string(state[i].count()) +
                      " active neurons");
    }
    msg.push_back(static_cast<std::uint32_t>(state[i].highest()));
  }
  return msg;
}

DecodeOutcome decode(const LinkStore& store, const PartialMessage& input,
                     const DecodeConfig& config) {
  config.validate();
  ActivationState state = local_decode(store.params(), input);

  DecodeOutcome outcome;
  for (std::uint32_t iter = 1; iter <= config.max_iters; ++iter) {
    ActivationState next;
    switch (config.rule) {
      case Rule::Mpd:
        next = gd_step_mpd(store, state);
        break;
      case Rule::Sd:
        next = gd_step_sd(store, state, config.erased_policy);
        break;
      case Rule::SdBounded: {
        auto step = gd_step_bounded(store, state, config.beta, config.erased_policy);
        outcome.beta_overflow = outcome.beta_overflow || step.overflow;
        next = std::move(step.state);
        break;
      }
    }
    outcome.iterations_used = iter;
    if (iter == 1) {
      std::uint32_t widest = 0;
      for (const auto& cluster : next) widest = std::max(widest, cluster.count());
      outcome.max_active_after_first_iter = widest;
    }
    const bool repeated = next == state;
    state = std::move(next);
    if (config.early_stop &&
        (repeated || std::all_of(state.begin(), state.end(),
                                 [](const NeuronSet& s) { return s.count() == 1; }))) {
      break;
    }
  }

  outcome.status = classify(state);
  if (outcome.status == Status::Retrieved) outcome.message = encode_output(state);
  outcome.final_state = std::move(state);
  outcome.cycles = cycle_count(config, outcome.iterations_used);
  return outcome;
}

}  // namespace scn
