#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scn/decoder.hpp"
#include "scn/error.hpp"
#include "scn/experiments.hpp"
#include "scn/hw_model.hpp"
#include "scn/link_store.hpp"
#include "scn/persistence.hpp"

namespace py = pybind11;
using namespace scn;

namespace {

// Queries cross the boundary as lists: int = known symbol, None = erased
// cluster, (value, erased_mask) = partially known symbol.
PartialMessage to_query(const py::sequence& seq) {
  PartialMessage q;
  q.reserve(seq.size());
  for (const auto& item : seq) {
    if (item.is_none()) {
      q.emplace_back(ErasedCluster{});
    } else if (py::isinstance<py::tuple>(item)) {
      auto t = item.cast<std::pair<std::uint32_t, std::uint32_t>>();
      q.emplace_back(PartialBits{t.first, t.second});
    } else {
      q.emplace_back(Known{item.cast<std::uint32_t>()});
    }
  }
  return q;
}

py::list from_query(const PartialMessage& q) {
  py::list out;
  for (const auto& e : q) {
    if (auto k = std::get_if<Known>(&e)) {
      out.append(k->symbol);
    } else if (auto p = std::get_if<PartialBits>(&e)) {
      out.append(py::make_tuple(p->value, p->erased_mask));
    } else {
      out.append(py::none());
    }
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> from_state(const ActivationState& state) {
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(state.size());
  for (const auto& s : state) {
    auto m = s.members();
    out.emplace_back(m.begin(), m.end());
  }
  return out;
}

ActivationState to_state(const NetworkParams& p,
                         const std::vector<std::vector<std::uint32_t>>& lists) {
  if (lists.size() != p.clusters()) throw Error(ErrorCode::WrongArity, "state needs c clusters");
  ActivationState state(p.clusters(), NeuronSet(p.neurons()));
  for (std::size_t i = 0; i < lists.size(); ++i) {
    for (auto n : lists[i]) {
      if (n >= p.neurons()) throw Error(ErrorCode::IndexOutOfRange, "neuron index out of range");
      state[i].set(n);
    }
  }
  return state;
}

DecodeConfig make_config(const std::string& rule, std::uint32_t iters, std::uint32_t beta,
                         const std::string& policy, bool early_stop) {
  DecodeConfig c;
  c.rule = parse_rule(rule);
  c.max_iters = iters;
  c.beta = beta;
  c.erased_policy = parse_policy(policy);
  c.early_stop = early_stop;
  return c;
}

py::dict outcome_dict(const DecodeOutcome& o) {
  py::dict d;
  d["status"] = std::string(to_string(o.status));
  d["message"] = o.message ? py::cast(*o.message) : py::none();
  d["state"] = from_state(o.final_state);
  d["iterations"] = o.iterations_used;
  d["cycles"] = o.cycles;
  d["beta_overflow"] = o.beta_overflow;
  d["beta_observed"] = o.max_active_after_first_iter;
  return d;
}

py::dict row_dict(const ExperimentRow& r) {
  py::dict d;
  d["c"] = r.c;
  d["l"] = r.l;
  d["m"] = r.m;
  d["trials"] = r.trials;
  d["erase_count"] = r.erase_count;
  d["rule"] = std::string(to_string(r.rule));
  d["policy"] = std::string(to_string(r.policy));
  d["beta"] = r.beta;
  d["iters"] = r.iters;
  d["density"] = r.density;
  d["error_rate"] = r.error_rate;
  d["ambiguous_rate"] = r.ambiguous_rate;
  d["failed_rate"] = r.failed_rate;
  d["overflow_rate"] = r.overflow_rate;
  d["beta_max"] = r.beta_max;
  d["mean_cycles"] = r.mean_cycles;
  d["wrong_count"] = r.wrong_count;
  return d;
}

ExperimentSpec make_spec(std::uint32_t clusters, std::uint32_t neurons,
                         std::vector<std::uint64_t> counts, std::uint64_t trials,
                         std::uint32_t erase_count, std::uint64_t seed, const DecodeConfig& config,
                         const std::string& probes, unsigned threads) {
  ExperimentSpec spec;
  spec.params = NetworkParams(clusters, neurons);
  spec.message_counts = std::move(counts);
  spec.trials = trials;
  spec.erase_count = erase_count;
  spec.seed = seed;
  spec.config = config;
  if (probes == "stored") {
    spec.probes = ProbeSource::Stored;
  } else if (probes == "random") {
    spec.probes = ProbeSource::Random;
  } else {
    throw Error(ErrorCode::InvalidConfig, "probes must be 'stored' or 'random'");
  }
  spec.threads = threads;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_scn, m) {
  m.doc() = "Sparse clustered network associative memory";

  // Kept alive for the lifetime of the interpreter.
  static PyObject* scn_error =
      py::exception<Error>(m, "ScnError", PyExc_ValueError).inc_ref().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(scn_error)(std::string(e.what()));
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(scn_error, exc.ptr());
    }
  });

  py::class_<NetworkParams>(m, "NetworkParams")
      .def(py::init<std::uint32_t, std::uint32_t>(), py::arg("clusters"), py::arg("neurons"))
      .def_property_readonly("clusters", &NetworkParams::clusters)
      .def_property_readonly("neurons", &NetworkParams::neurons)
      .def_property_readonly("kappa", &NetworkParams::kappa)
      .def_property_readonly("total_neurons", &NetworkParams::total_neurons)
      .def_property_readonly("message_bits", &NetworkParams::message_bits)
      .def("__eq__", [](const NetworkParams& a, const NetworkParams& b) { return a == b; })
      .def("__repr__", [](const NetworkParams& p) {
        return "NetworkParams(clusters=" + std::to_string(p.clusters()) +
               ", neurons=" + std::to_string(p.neurons()) + ")";
      });

  py::class_<DecodeConfig>(m, "DecodeConfig")
      .def(py::init(&make_config), py::arg("rule") = "sd", py::arg("iters") = 4,
           py::arg("beta") = 2, py::arg("policy") = "skip", py::arg("early_stop") = false)
      .def_property_readonly("rule", [](const DecodeConfig& c) { return to_string(c.rule); })
      .def_property_readonly("policy",
                             [](const DecodeConfig& c) { return to_string(c.erased_policy); })
      .def_readwrite("iters", &DecodeConfig::max_iters)
      .def_readwrite("beta", &DecodeConfig::beta)
      .def_readwrite("early_stop", &DecodeConfig::early_stop);

  py::class_<LinkStore>(m, "LinkStore")
      .def(py::init([](std::uint32_t c, std::uint32_t l) { return new_network(c, l); }),
           py::arg("clusters"), py::arg("neurons"))
      .def_property_readonly("params", &LinkStore::params)
      .def_property_readonly("stored_count", &LinkStore::stored_count)
      .def("store", &LinkStore::store_message, py::arg("message"))
      .def("store_all",
           [](LinkStore& s, const std::vector<Message>& msgs) {
             for (const auto& msg : msgs) s.store_message(msg);
           })
      .def(
          "get_link",
          [](const LinkStore& s, std::uint32_t a, std::uint32_t r, std::uint32_t b,
             std::uint32_t t) { return s.get_link({a, r}, {b, t}); },
          py::arg("src_cluster"), py::arg("src_neuron"), py::arg("dst_cluster"),
          py::arg("dst_neuron"))
      .def(
          "read_row",
          [](const LinkStore& s, std::uint32_t a, std::uint32_t r, std::uint32_t b) {
            return NeuronSet(s.read_row({a, r}, b)).members();
          },
          py::arg("src_cluster"), py::arg("src_neuron"), py::arg("dst_cluster"))
      .def("density", &LinkStore::density)
      .def("symmetric", &LinkStore::symmetric)
      .def("memory_bytes", &LinkStore::memory_bytes)
      .def("__eq__", [](const LinkStore& a, const LinkStore& b) { return a == b; })
      .def(
          "decode",
          [](const LinkStore& s, const py::sequence& q, const DecodeConfig& c) {
            return outcome_dict(decode(s, to_query(q), c));
          },
          py::arg("query"), py::arg("config") = DecodeConfig{})
      .def(
          "save", [](const LinkStore& s, const std::string& path) { save_network(s, path); },
          py::arg("path"));

  m.def(
      "load", [](const std::string& path) { return load_network(path); }, py::arg("path"));
  m.def(
      "local_decode",
      [](const NetworkParams& p, const py::sequence& q) {
        return from_state(local_decode(p, to_query(q)));
      },
      py::arg("params"), py::arg("query"));
  m.def(
      "gd_step",
      [](const LinkStore& s, const std::vector<std::vector<std::uint32_t>>& state,
         const std::string& rule, const std::string& policy) {
        auto st = to_state(s.params(), state);
        switch (parse_rule(rule)) {
          case Rule::Mpd:
            return from_state(gd_step_mpd(s, st));
          case Rule::Sd:
            return from_state(gd_step_sd(s, st, parse_policy(policy)));
          default:
            throw Error(ErrorCode::InvalidConfig, "gd_step takes 'mpd' or 'sd'");
        }
      },
      py::arg("store"), py::arg("state"), py::arg("rule") = "sd", py::arg("policy") = "skip");
  m.def("expected_density", &expected_density, py::arg("neurons"), py::arg("messages"));

  m.def("bram_bits", &bram_bits, py::arg("clusters"), py::arg("neurons"));
  m.def("capacity_bits", &capacity_bits, py::arg("clusters"), py::arg("neurons"),
        py::arg("messages"));
  m.def("access_delay_sd", &access_delay_sd, py::arg("beta"), py::arg("iters"));
  m.def("access_delay_mpd", &access_delay_mpd, py::arg("iters"));
  m.def("cycle_count", &cycle_count, py::arg("config"), py::arg("iterations_used"));
  m.def(
      "resource_report",
      [](std::uint32_t c, std::uint32_t l, std::uint64_t msgs, std::uint32_t beta,
         std::uint32_t iters) {
        auto r = resource_report(c, l, msgs, beta, iters);
        py::dict d;
        d["bram_bits"] = r.bram_bits;
        d["capacity_bits"] = r.capacity_bits;
        d["access_delay_sd"] = r.access_delay_sd;
        d["access_delay_mpd"] = r.access_delay_mpd;
        d["efficiency"] = r.efficiency;
        return d;
      },
      py::arg("clusters"), py::arg("neurons"), py::arg("messages"), py::arg("beta") = 2,
      py::arg("iters") = 4);
  m.def(
      "measure_beta",
      [](const LinkStore& s, const std::vector<Message>& msgs, std::uint64_t trials,
         std::uint32_t erase_count, std::uint64_t seed, const DecodeConfig& c) {
        auto r = measure_beta(s, msgs, trials, erase_count, seed, c);
        py::dict d;
        d["aggregate"] = r.aggregate;
        d["modal"] = r.modal();
        d["per_trial"] = r.per_trial;
        d["histogram"] = r.histogram;
        d["correct"] = r.correct;
        d["ambiguous"] = r.ambiguous;
        d["failed"] = r.failed;
        return d;
      },
      py::arg("store"), py::arg("messages"), py::arg("trials"), py::arg("erase_count"),
      py::arg("seed"), py::arg("config") = DecodeConfig{});

  m.def(
      "gen_messages",
      [](const NetworkParams& p, std::uint64_t count, std::uint64_t seed) {
        return gen_messages(p, count, seed);
      },
      py::arg("params"), py::arg("count"), py::arg("seed"));
  m.def(
      "erase_clusters",
      [](const Message& msg, std::uint32_t erase_count, std::uint64_t seed) {
        return from_query(erase_clusters(msg, erase_count, seed));
      },
      py::arg("message"), py::arg("erase_count"), py::arg("seed"));
  m.def("build_store", &build_store, py::arg("params"), py::arg("messages"));
  m.def(
      "run_experiment",
      [](std::uint32_t c, std::uint32_t l, std::vector<std::uint64_t> counts, std::uint64_t trials,
         std::uint32_t erase_count, std::uint64_t seed, const DecodeConfig& config,
         const std::string& probes, unsigned threads) {
        auto spec = make_spec(c, l, std::move(counts), trials, erase_count, seed, config, probes,
                              threads);
        py::list rows;
        for (const auto& r : run_experiment(spec).rows) rows.append(row_dict(r));
        return rows;
      },
      py::arg("clusters"), py::arg("neurons"), py::arg("counts"), py::arg("trials"),
      py::arg("erase_count"), py::arg("seed"), py::arg("config") = DecodeConfig{},
      py::arg("probes") = "stored", py::arg("threads") = 1);
  m.def(
      "compare_decoders",
      [](std::uint32_t c, std::uint32_t l, std::vector<std::uint64_t> counts, std::uint64_t trials,
         std::uint32_t erase_count, std::uint64_t seed, const DecodeConfig& config) {
        auto spec =
            make_spec(c, l, std::move(counts), trials, erase_count, seed, config, "stored", 1);
        py::list out;
        for (const auto& a : compare_decoders(spec)) {
          py::dict d;
          d["m"] = a.m;
          d["trials"] = a.trials;
          d["mpd_vs_sd_strict"] = a.mpd_vs_sd_strict;
          d["sd_skip_vs_sd_strict"] = a.sd_skip_vs_sd_strict;
          d["bounded_vs_sd"] = a.bounded_vs_sd;
          d["bounded_vs_sd_no_overflow"] = a.bounded_vs_sd_no_overflow;
          d["overflow_rate"] = a.overflow_rate;
          out.append(d);
        }
        return out;
      },
      py::arg("clusters"), py::arg("neurons"), py::arg("counts"), py::arg("trials"),
      py::arg("erase_count"), py::arg("seed"), py::arg("config") = DecodeConfig{});
  m.attr("CSV_HEADER") = kCsvHeader;

  m.def(
      "parse_message_line",
      [](const std::string& line, const NetworkParams& p) { return parse_message_line(line, p); },
      py::arg("line"), py::arg("params"));
  m.def(
      "parse_query_line",
      [](const std::string& line, const NetworkParams& p) {
        return from_query(parse_query_line(line, p));
      },
      py::arg("line"), py::arg("params"));
  m.def(
      "read_messages",
      [](const std::string& path, const NetworkParams& p) { return read_messages(path, p); },
      py::arg("path"), py::arg("params"));
  m.def("payload_bytes", &payload_bytes, py::arg("clusters"), py::arg("neurons"));
}
