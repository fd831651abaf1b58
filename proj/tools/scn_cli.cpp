// Command-line front end: train, query, bench-beta, bench-error, report, info.
//
// Exit codes: 0 success (query: Retrieved), 1 usage/IO/parse error,
// 2 query Ambiguous, 3 query Failed.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scn/decoder.hpp"
#include "scn/error.hpp"
#include "scn/experiments.hpp"
#include "scn/hw_model.hpp"
#include "scn/link_store.hpp"
#include "scn/persistence.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitAmbiguous = 2;
constexpr int kExitFailed = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options shared by subcommands that either generate a network or load one.
struct SourceOptions {
  std::string net;
  std::string messages;
  std::optional<std::uint32_t> clusters;
  std::optional<std::uint32_t> neurons;
  std::optional<std::uint64_t> count;
  std::optional<std::uint64_t> seed;
};

struct DecoderOptions {
  std::string decoder = "sd";
  std::uint32_t beta = 2;
  std::uint32_t iters = 4;
  std::string policy = "skip";
  bool early_stop = false;

  scn::DecodeConfig config() const {
    scn::DecodeConfig c;
    c.rule = scn::parse_rule(decoder);
    c.beta = beta;
    c.max_iters = iters;
    c.erased_policy = scn::parse_policy(policy);
    c.early_stop = early_stop;
    c.validate();
    return c;
  }
};

void add_decoder_flags(CLI::App* cmd, DecoderOptions& opt, bool with_decoder) {
  if (with_decoder) {
    cmd->add_option("--decoder", opt.decoder, "mpd | sd | sd-bounded")
        ->check(CLI::IsMember({"mpd", "sd", "sd-bounded"}))
        ->capture_default_str();
  }
  cmd->add_option("--beta", opt.beta, "serial passes per cluster (sd-bounded)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--iters", opt.iters, "global-decoding iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--policy", opt.policy, "erased-cluster handling: skip | strict")
      ->check(CLI::IsMember({"skip", "strict"}))
      ->capture_default_str();
  cmd->add_flag("--early-stop", opt.early_stop, "stop once converged");
}

scn::NetworkParams require_params(const SourceOptions& src) {
  if (!src.clusters || !src.neurons) throw UsageError("--clusters and --neurons are required");
  return scn::NetworkParams(*src.clusters, *src.neurons);
}

// Messages from --messages or from --count/--seed.
std::vector<scn::Message> source_messages(const SourceOptions& src,
                                          const scn::NetworkParams& params) {
  if (!src.messages.empty()) return scn::read_messages(src.messages, params);
  if (src.count && src.seed) return scn::gen_messages(params, *src.count, *src.seed);
  throw UsageError("need either --messages FILE or --count N --seed S");
}

std::string fmt6(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

int cmd_train(const SourceOptions& src, const std::string& out) {
  const auto params = require_params(src);
  const auto messages = source_messages(src, params);
  const auto store = scn::build_store(params, messages);
  scn::save_network(store, out);
  std::cout << "clusters=" << params.clusters() << " neurons=" << params.neurons()
            << " total_neurons=" << params.total_neurons() << '\n'
            << "M=" << store.stored_count() << '\n'
            << "density=" << fmt6(store.density()) << '\n';
  return 0;
}

int cmd_query(const std::string& net, const std::string& input, const DecoderOptions& dec) {
  const auto config = dec.config();
  const auto store = scn::load_network(net);
  const auto query = scn::parse_query_line(input, store.params());
  const auto out = scn::decode(store, query, config);

  std::cout << scn::to_string(out.status);
  if (out.message) std::cout << ' ' << scn::format_message(*out.message);
  std::cout << '\n';
  if (out.status != scn::Status::Retrieved) {
    for (std::size_t i = 0; i < out.final_state.size(); ++i) {
      std::cout << "cluster " << i << ":";
      for (auto n : out.final_state[i].members()) std::cout << ' ' << n;
      std::cout << '\n';
    }
  }
  std::cout << "iterations=" << out.iterations_used << '\n'
            << "cycles=" << out.cycles << '\n'
            << "beta_observed=" << out.max_active_after_first_iter << '\n'
            << "beta_overflow=" << (out.beta_overflow ? 1 : 0) << '\n';
  switch (out.status) {
    case scn::Status::Retrieved: return 0;
    case scn::Status::Ambiguous: return kExitAmbiguous;
    case scn::Status::Failed: return kExitFailed;
  }
  return kExitUsage;
}

void write_result(const scn::ExperimentResult& result, const std::string& csv) {
  if (csv.empty()) {
    scn::emit_csv(result, std::cout);
  } else {
    scn::emit_csv(result, csv);
  }
}

std::uint32_t default_erase_count(const scn::NetworkParams& params,
                                  const std::optional<std::uint32_t>& erase) {
  return erase ? *erase : params.clusters() / 2;
}

int cmd_bench_beta(const SourceOptions& src, std::uint64_t trials,
                   std::optional<std::uint32_t> erase, std::uint64_t probe_seed,
                   const DecoderOptions& dec, const std::string& csv) {
  std::optional<scn::LinkStore> store;
  std::vector<scn::Message> messages;
  if (!src.net.empty()) {
    store = scn::load_network(src.net);
    if (src.messages.empty()) {
      throw UsageError("--net needs --messages FILE listing the stored messages to probe");
    }
    messages = scn::read_messages(src.messages, store->params());
  } else {
    const auto params = require_params(src);
    messages = source_messages(src, params);
    store = scn::build_store(params, messages);
  }
  const auto& params = store->params();
  const auto erase_count = default_erase_count(params, erase);

  auto config = dec.config();
  config.rule = scn::Rule::Sd;
  const auto report = scn::measure_beta(*store, messages, trials, erase_count, probe_seed, config);

  const double n = static_cast<double>(trials);
  scn::ExperimentRow row;
  row.c = params.clusters();
  row.l = params.neurons();
  row.m = store->stored_count();
  row.trials = trials;
  row.erase_count = erase_count;
  row.rule = scn::Rule::Sd;
  row.policy = config.erased_policy;
  row.beta = config.beta;
  row.iters = config.max_iters;
  row.density = store->density();
  row.error_rate = static_cast<double>(trials - report.correct) / n;
  row.ambiguous_rate = static_cast<double>(report.ambiguous) / n;
  row.failed_rate = static_cast<double>(report.failed) / n;
  row.overflow_rate = 0.0;
  row.beta_max = report.aggregate;
  row.mean_cycles = static_cast<double>(report.total_cycles) / n;
  write_result({{row}}, csv);

  if (!csv.empty()) {
    std::cout << "beta=" << report.aggregate << " modal=" << report.modal() << '\n';
    for (const auto& [value, count] : report.histogram) {
      std::cout << "  " << value << ": " << count << '\n';
    }
  }
  return 0;
}

int cmd_bench_error(const SourceOptions& src, std::vector<std::uint64_t> counts,
                    std::uint64_t trials, std::optional<std::uint32_t> erase,
                    std::vector<std::string> decoders, DecoderOptions dec, unsigned threads,
                    const std::string& probes, bool compare, const std::string& csv) {
  if (!src.seed) throw UsageError("--seed is required");
  if (counts.empty()) throw UsageError("--count is required");
  scn::ExperimentSpec spec;
  spec.params = require_params(src);
  spec.message_counts = std::move(counts);
  spec.trials = trials;
  spec.erase_count = default_erase_count(spec.params, erase);
  spec.seed = *src.seed;
  spec.threads = threads;
  spec.probes = probes == "random" ? scn::ProbeSource::Random : scn::ProbeSource::Stored;
  if (decoders.empty()) decoders.push_back("sd");

  scn::ExperimentResult all;
  for (const auto& name : decoders) {
    dec.decoder = name;
    spec.config = dec.config();
    auto r = scn::run_experiment(spec);
    all.rows.insert(all.rows.end(), r.rows.begin(), r.rows.end());
  }
  write_result(all, csv);

  if (compare) {
    spec.config = dec.config();
    for (const auto& a : scn::compare_decoders(spec)) {
      std::cerr << "m=" << a.m << " mpd~sd_strict=" << fmt6(a.mpd_vs_sd_strict)
                << " sd_skip~sd_strict=" << fmt6(a.sd_skip_vs_sd_strict)
                << " bounded~sd=" << fmt6(a.bounded_vs_sd)
                << " bounded~sd(no overflow)=" << fmt6(a.bounded_vs_sd_no_overflow)
                << " overflow_rate=" << fmt6(a.overflow_rate) << '\n';
    }
  }
  return 0;
}

int cmd_report(std::uint32_t clusters, std::uint32_t neurons, std::uint64_t count,
               std::uint32_t beta, std::uint32_t iters) {
  const scn::NetworkParams params(clusters, neurons);
  const auto r = scn::resource_report(clusters, neurons, count, beta, iters);
  std::cout << "clusters=" << clusters << '\n'
            << "neurons=" << neurons << '\n'
            << "total_neurons=" << params.total_neurons() << '\n'
            << "messages=" << count << '\n'
            << "capacity_bits=" << r.capacity_bits << '\n'
            << "capacity_kbits=" << fmt6(static_cast<double>(r.capacity_bits) / 1000.0) << '\n'
            << "bram_bits=" << r.bram_bits << '\n'
            << "access_delay_sd=" << r.access_delay_sd << '\n'
            << "access_delay_mpd=" << r.access_delay_mpd << '\n'
            << "efficiency=" << fmt6(r.efficiency) << '\n';
  return 0;
}

int cmd_info(const std::string& net) {
  const auto store = scn::load_network(net);
  const auto& p = store.params();
  std::cout << "clusters=" << p.clusters() << '\n'
            << "neurons=" << p.neurons() << '\n'
            << "total_neurons=" << p.total_neurons() << '\n'
            << "stored_count=" << store.stored_count() << '\n'
            << "density=" << fmt6(store.density()) << '\n'
            << "file_size=" << std::filesystem::file_size(net) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse clustered network associative memory"};
  app.require_subcommand(1);

  SourceOptions src;
  DecoderOptions dec;
  std::string out_path;
  std::string input;
  std::string csv;
  std::uint64_t trials = 1000;
  std::optional<std::uint32_t> erase;
  std::vector<std::uint64_t> counts;
  std::vector<std::string> decoders;
  unsigned threads = 1;
  std::string probes = "stored";
  bool compare = false;

  auto add_shape = [&](CLI::App* cmd, bool required) {
    auto* c = cmd->add_option("--clusters", src.clusters, "number of clusters c");
    auto* l = cmd->add_option("--neurons", src.neurons, "neurons per cluster l");
    if (required) {
      c->required();
      l->required();
    }
  };

  auto* train = app.add_subcommand("train", "store messages and write an SCNW network file");
  add_shape(train, true);
  auto* t_count = train->add_option("--count", src.count, "number of uniform random messages");
  auto* t_seed = train->add_option("--seed", src.seed, "generator seed");
  auto* t_msgs = train->add_option("--messages", src.messages, "message file, one per line");
  t_count->needs(t_seed);
  t_msgs->excludes(t_count);
  train->add_option("--out", out_path, "output network file")->required();

  auto* query = app.add_subcommand("query", "retrieve a message from a partial input");
  query->add_option("--net", src.net, "network file")->required();
  query->add_option("--input", input, "query, '?' marks an erased cluster")->required();
  add_decoder_flags(query, dec, true);

  auto* beta = app.add_subcommand("bench-beta", "measure activations after the first iteration");
  beta->add_option("--net", src.net, "network file (requires --messages)");
  add_shape(beta, false);
  auto* b_count = beta->add_option("--count", src.count, "number of uniform random messages");
  auto* b_msgs = beta->add_option("--messages", src.messages, "stored message file");
  std::uint64_t probe_seed = 0;
  beta->add_option("--seed", src.seed, "message generator seed");
  beta->add_option("--probe-seed", probe_seed, "probe seed (defaults to --seed)");
  b_count->excludes(b_msgs);
  beta->add_option("--trials", trials, "number of probes")->capture_default_str();
  beta->add_option("--erase-count", erase, "erased clusters per probe (default c/2)");
  beta->add_option("--csv", csv, "CSV output file (default stdout)");
  add_decoder_flags(beta, dec, false);

  auto* error = app.add_subcommand("bench-error", "retrieval error rates over message counts");
  add_shape(error, true);
  error->add_option("--count", counts, "message counts (repeat or comma-separate)")
      ->delimiter(',')
      ->required();
  error->add_option("--seed", src.seed, "experiment seed")->required();
  error->add_option("--trials", trials, "trials per point")->capture_default_str();
  error->add_option("--erase-count", erase, "erased clusters per probe (default c/2)");
  error->add_option("--decoder", decoders, "decoders to run (repeat or comma-separate)")
      ->delimiter(',')
      ->check(CLI::IsMember({"mpd", "sd", "sd-bounded"}));
  error->add_option("--threads", threads, "worker threads")->capture_default_str();
  error->add_option("--probes", probes, "stored | random")
      ->check(CLI::IsMember({"stored", "random"}))
      ->capture_default_str();
  error->add_flag("--compare", compare, "print decoder agreement to stderr");
  error->add_option("--csv", csv, "CSV output file (default stdout)");
  add_decoder_flags(error, dec, false);

  std::uint32_t r_clusters = 0;
  std::uint32_t r_neurons = 0;
  std::uint64_t r_count = 0;
  auto* report = app.add_subcommand("report", "memory and latency model");
  report->add_option("--clusters", r_clusters)->required();
  report->add_option("--neurons", r_neurons)->required();
  report->add_option("--count", r_count, "stored messages M")->required();
  report->add_option("--beta", dec.beta)->check(CLI::PositiveNumber)->capture_default_str();
  report->add_option("--iters", dec.iters)->check(CLI::PositiveNumber)->capture_default_str();

  auto* info = app.add_subcommand("info", "summarize a network file");
  info->add_option("--net", src.net, "network file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*train) {
      if (src.messages.empty() && !src.count) {
        throw UsageError("need either --messages FILE or --count N --seed S");
      }
      return cmd_train(src, out_path);
    }
    if (*query) return cmd_query(src.net, input, dec);
    if (*beta) {
      if (src.net.empty() && src.messages.empty() && !(src.count && src.seed)) {
        throw UsageError("need --count N --seed S, --messages FILE, or --net with --messages");
      }
      return cmd_bench_beta(src, trials, erase, beta->count("--probe-seed") ? probe_seed
                                                                          : src.seed.value_or(0),
                            dec, csv);
    }
    if (*error) {
      return cmd_bench_error(src, counts, trials, erase, decoders, dec, threads, probes, compare,
                             csv);
    }
    if (*report) return cmd_report(r_clusters, r_neurons, r_count, dec.beta, dec.iters);
    if (*info) return cmd_info(src.net);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const scn::Error& e) {
    std::cerr << "error (" << scn::to_string(e.code()) << "): " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
