#include "scn/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "scn/error.hpp"

namespace scn {

namespace {

// Substream tags keep message generation and probe draws independent.
constexpr std::uint64_t kMessageTag = 0x6d736773;  // "msgs"
constexpr std::uint64_t kProbeTag = 0x70726f62;    // "prob"

}  // namespace

std::vector<Message> gen_messages(const NetworkParams& params, std::uint64_t count,
                                  std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Message> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Message msg(params.clusters());
    for (auto& s : msg) s = static_cast<std::uint32_t>(rng.below(params.neurons()));
    out.push_back(std::move(msg));
  }
  return out;
}

PartialMessage erase_clusters(const Message& msg, std::uint32_t erase_count, Rng& rng) {
  if (erase_count >= msg.size()) {
    throw Error(ErrorCode::InvalidParams, "erase_count must be below the cluster count");
  }
  // Partial Fisher-Yates: the first erase_count slots are a uniform subset.
  std::vector<std::uint32_t> order(msg.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::uint32_t i = 0; i < erase_count; ++i) {
    const auto pick = i + static_cast<std::uint32_t>(rng.below(order.size() - i));
    std::swap(order[i], order[pick]);
  }
  PartialMessage query = as_query(msg);
  for (std::uint32_t i = 0; i < erase_count; ++i) query[order[i]] = ErasedCluster{};
  return query;
}

PartialMessage erase_clusters(const Message& msg, std::uint32_t erase_count, std::uint64_t seed) {
  Rng rng(seed);
  return erase_clusters(msg, erase_count, rng);
}

LinkStore build_store(const NetworkParams& params, const std::vector<Message>& messages) {
  LinkStore store(params);
  for (const auto& msg : messages) store.store_message(msg);
  return store;
}

void ExperimentSpec::validate() const {
  config.validate();
  if (trials == 0) throw Error(ErrorCode::InvalidConfig, "trials must be at least 1");
  if (erase_count >= params.clusters()) {
    throw Error(ErrorCode::InvalidConfig, "erase_count must be below c");
  }
  if (probes == ProbeSource::Stored &&
      std::any_of(message_counts.begin(), message_counts.end(), [](auto m) { return m == 0; })) {
    throw Error(ErrorCode::InvalidConfig, "stored-message probes need m >= 1");
  }
}

std::vector<Message> point_messages(const ExperimentSpec& spec, std::uint64_t m) {
  return gen_messages(spec.params, m, substream_seed(spec.seed, kMessageTag, m));
}

TrialRecord make_trial(const ExperimentSpec& spec, const std::vector<Message>& stored,
                       std::uint64_t m, std::uint64_t trial) {
  Rng rng(substream_seed(spec.seed, kProbeTag ^ (m << 32), trial));
  TrialRecord rec;
  if (spec.probes == ProbeSource::Stored) {
    rec.original = stored[rng.below(stored.size())];
  } else {
    rec.original.resize(spec.params.clusters());
    for (auto& s : rec.original) s = static_cast<std::uint32_t>(rng.below(spec.params.neurons()));
  }
  rec.query = erase_clusters(rec.original, spec.erase_count, rng);
  return rec;
}

namespace {

struct Tally {
  std::uint64_t correct = 0;
  std::uint64_t ambiguous = 0;
  std::uint64_t failed = 0;
  std::uint64_t wrong = 0;
  std::uint64_t overflow = 0;
  std::uint64_t cycles = 0;
  std::uint32_t beta_max = 0;

  Tally& operator+=(const Tally& o) {
    correct += o.correct;
    ambiguous += o.ambiguous;
    failed += o.failed;
    wrong += o.wrong;
    overflow += o.overflow;
    cycles += o.cycles;
    beta_max = std::max(beta_max, o.beta_max);
    return *this;
  }
};

// Runs fn(trial, tally) over [0, trials) split across worker threads. Each
// worker owns its tally; results are merged in worker order, and merging is
// order-insensitive anyway.
template <typename T, typename Fn>
T parallel_trials(std::uint64_t trials, unsigned threads, Fn fn) {
  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, std::max<std::uint64_t>(trials, 1)));
  std::vector<T> partial(workers);
  auto run = [&](unsigned w) {
    const auto begin = trials * w / workers;
    const auto end = trials * (w + 1) / workers;
    for (auto t = begin; t < end; ++t) fn(t, partial[w]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  T total{};
  for (const auto& p : partial) total += p;
  return total;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;
  for (const auto m : spec.message_counts) {
    const auto messages = point_messages(spec, m);
    const auto store = build_store(spec.params, messages);

    const Tally tally = parallel_trials<Tally>(spec.trials, spec.threads,
                                               [&](std::uint64_t t, Tally& acc) {
      const auto rec = make_trial(spec, messages, m, t);
      const auto& out = decode(store, rec.query, spec.config);
      switch (out.status) {
        case Status::Retrieved:
          if (*out.message == rec.original) {
            ++acc.correct;
          } else {
            ++acc.wrong;
          }
          break;
        case Status::Ambiguous: ++acc.ambiguous; break;
        case Status::Failed: ++acc.failed; break;
      }
      if (out.beta_overflow) ++acc.overflow;
      acc.cycles += out.cycles;
      acc.beta_max = std::max(acc.beta_max, out.max_active_after_first_iter);
    });

    const double n = static_cast<double>(spec.trials);
    ExperimentRow row;
    row.c = spec.params.clusters();
    row.l = spec.params.neurons();
    row.m = m;
    row.trials = spec.trials;
    row.erase_count = spec.erase_count;
    row.rule = spec.config.rule;
    row.policy = spec.config.rule == Rule::Mpd ? ErasedPolicy::StrictOr : spec.config.erased_policy;
    row.beta = spec.config.beta;
    row.iters = spec.config.max_iters;
    row.density = store.density();
    row.error_rate = static_cast<double>(spec.trials - tally.correct) / n;
    row.ambiguous_rate = static_cast<double>(tally.ambiguous) / n;
    row.failed_rate = static_cast<double>(tally.failed) / n;
    row.overflow_rate = static_cast<double>(tally.overflow) / n;
    row.beta_max = tally.beta_max;
    row.mean_cycles = static_cast<double>(tally.cycles) / n;
    row.wrong_count = tally.wrong;
    result.rows.push_back(row);
  }
  return result;
}

namespace {

struct Agreement {
  std::uint64_t mpd_sd = 0;
  std::uint64_t skip_strict = 0;
  std::uint64_t bounded_sd = 0;
  std::uint64_t overflow = 0;
  std::uint64_t bounded_sd_clean = 0;
  std::uint64_t skip_status = 0;

  Agreement& operator+=(const Agreement& o) {
    mpd_sd += o.mpd_sd;
    skip_strict += o.skip_strict;
    bounded_sd += o.bounded_sd;
    overflow += o.overflow;
    bounded_sd_clean += o.bounded_sd_clean;
    skip_status += o.skip_status;
    return *this;
  }
};

}  // namespace

std::vector<AgreementReport> compare_decoders(const ExperimentSpec& spec) {
  spec.validate();
  DecodeConfig mpd = spec.config;
  mpd.rule = Rule::Mpd;
  DecodeConfig strict = spec.config;
  strict.rule = Rule::Sd;
  strict.erased_policy = ErasedPolicy::StrictOr;
  DecodeConfig skip = strict;
  skip.erased_policy = ErasedPolicy::SkipAsOnes;
  DecodeConfig bounded = spec.config;
  bounded.rule = Rule::SdBounded;
  DecodeConfig sd_same_policy = bounded;
  sd_same_policy.rule = Rule::Sd;

  std::vector<AgreementReport> reports;
  for (const auto m : spec.message_counts) {
    const auto messages = point_messages(spec, m);
    const auto store = build_store(spec.params, messages);
    const Agreement a = parallel_trials<Agreement>(spec.trials, spec.threads,
                                                   [&](std::uint64_t t, Agreement& acc) {
      const auto rec = make_trial(spec, messages, m, t);
      const auto out_mpd = decode(store, rec.query, mpd);
      const auto out_strict = decode(store, rec.query, strict);
      const auto out_skip = decode(store, rec.query, skip);
      const auto out_bounded = decode(store, rec.query, bounded);
      const auto out_sd = sd_same_policy.erased_policy == ErasedPolicy::SkipAsOnes ? out_skip
                                                                                    : out_strict;
      acc.mpd_sd += same_outcome(out_mpd, out_strict);
      acc.skip_strict += same_outcome(out_skip, out_strict);
      acc.skip_status += out_skip.status == out_mpd.status;
      const bool agree = same_outcome(out_bounded, out_sd);
      acc.bounded_sd += agree;
      if (out_bounded.beta_overflow) {
        ++acc.overflow;
      } else {
        acc.bounded_sd_clean += agree;
      }
    });
    const double n = static_cast<double>(spec.trials);
    AgreementReport r;
    r.m = m;
    r.trials = spec.trials;
    r.mpd_vs_sd_strict = static_cast<double>(a.mpd_sd) / n;
    r.sd_skip_vs_sd_strict = static_cast<double>(a.skip_strict) / n;
    r.skip_status_agreement = static_cast<double>(a.skip_status) / n;
    r.bounded_vs_sd = static_cast<double>(a.bounded_sd) / n;
    r.overflow_rate = static_cast<double>(a.overflow) / n;
    const auto clean = spec.trials - a.overflow;
    r.bounded_vs_sd_no_overflow =
        clean == 0 ? 1.0 : static_cast<double>(a.bounded_sd_clean) / static_cast<double>(clean);
    reports.push_back(r);
  }
  return reports;
}

namespace {

std::string fmt6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

}  // namespace

void emit_csv(const ExperimentResult& result, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : result.rows) {
    out << r.c << ',' << r.l << ',' << r.m << ',' << r.trials << ',' << r.erase_count << ','
        << to_string(r.rule) << ',' << to_string(r.policy) << ',' << r.beta << ',' << r.iters
        << ',' << fmt6(r.density) << ',' << fmt6(r.error_rate) << ','
        << fmt6(r.ambiguous_rate) << ',' << fmt6(r.failed_rate) << ','
        << fmt6(r.overflow_rate) << ',' << r.beta_max << ',' << fmt6(r.mean_cycles) << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing CSV");
}

void emit_csv(const ExperimentResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  emit_csv(result, out);
}

ExperimentResult parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(ErrorCode::MalformedToken, "missing or unexpected CSV header");
  }
  ExperimentResult result;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 16) throw Error(ErrorCode::WrongArity, "CSV row needs 16 fields");
    try {
      ExperimentRow r;
      r.c = static_cast<std::uint32_t>(std::stoul(f[0]));
      r.l = static_cast<std::uint32_t>(std::stoul(f[1]));
      r.m = std::stoull(f[2]);
      r.trials = std::stoull(f[3]);
      r.erase_count = static_cast<std::uint32_t>(std::stoul(f[4]));
      r.rule = parse_rule(f[5]);
      r.policy = parse_policy(f[6]);
      r.beta = static_cast<std::uint32_t>(std::stoul(f[7]));
      r.iters = static_cast<std::uint32_t>(std::stoul(f[8]));
      r.density = std::stod(f[9]);
      r.error_rate = std::stod(f[10]);
      r.ambiguous_rate = std::stod(f[11]);
      r.failed_rate = std::stod(f[12]);
      r.overflow_rate = std::stod(f[13]);
      r.beta_max = static_cast<std::uint32_t>(std::stoul(f[14]));
      r.mean_cycles = std::stod(f[15]);
      result.rows.push_back(r);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::MalformedToken, "bad numeric field in CSV row: " + line);
    }
  }
  return result;
}

}  // namespace scn
