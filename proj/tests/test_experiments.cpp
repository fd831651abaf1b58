#include <doctest.h>

#include <cmath>
#include <sstream>

#include "scn/error.hpp"
#include "scn/experiments.hpp"

using namespace scn;

TEST_CASE("gen_messages") {
  NetworkParams p(8, 64);
  CHECK(gen_messages(p, 100, 3) == gen_messages(p, 100, 3));
  CHECK(gen_messages(p, 100, 3) != gen_messages(p, 100, 4));
  CHECK(gen_messages(p, 0, 3).empty());
  for (const auto& m : gen_messages(p, 100, 3)) CHECK_NOTHROW(validate_message(p, m));
}

TEST_CASE("gen_messages symbols are uniform (binomial 3-sigma)") {
  NetworkParams p(8, 64);
  const std::uint64_t m = 100'000;
  std::vector<std::vector<std::uint64_t>> counts(8, std::vector<std::uint64_t>(64, 0));
  for (const auto& msg : gen_messages(p, m, 2024))
    for (std::uint32_t i = 0; i < 8; ++i) ++counts[i][msg[i]];

  const double expect = static_cast<double>(m) / 64.0;
  const double sigma = std::sqrt(static_cast<double>(m) * (1.0 / 64) * (63.0 / 64));
  double chi2 = 0.0;
  int outside = 0;
  for (const auto& cluster : counts) {
    for (auto n : cluster) {
      const double d = static_cast<double>(n) - expect;
      outside += std::abs(d) > 3 * sigma;
      chi2 += d * d / expect;
    }
  }
  // 512 cells; P(|z| > 3) = 0.27 % so a couple may stray.
  CHECK(outside <= 5);
  // chi-square with 8 * 63 = 504 dof: mean 504, sd ~31.7.
  CHECK(chi2 < 504 + 5 * 31.75);
}

TEST_CASE("erase_clusters") {
  const Message msg{0, 1, 2, 3, 4, 5, 6, 7};
  auto none = erase_clusters(msg, 0, std::uint64_t{1});
  CHECK(none == as_query(msg));

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto q = erase_clusters(msg, 4, seed);
    int erased = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (std::holds_alternative<ErasedCluster>(q[i])) {
        ++erased;
      } else {
        CHECK(std::get<Known>(q[i]).symbol == msg[i]);
      }
    }
    CHECK(erased == 4);
    CHECK(q == erase_clusters(msg, 4, seed));
  }
  CHECK_THROWS_AS(erase_clusters(msg, 8, std::uint64_t{1}), Error);
}

TEST_CASE("erase_clusters picks clusters uniformly") {
  const Message msg(8, 0);
  std::vector<int> hits(8, 0);
  Rng rng(11);
  const int n = 20'000;
  for (int t = 0; t < n; ++t) {
    auto q = erase_clusters(msg, 4, rng);
    for (std::size_t i = 0; i < 8; ++i) hits[i] += std::holds_alternative<ErasedCluster>(q[i]);
  }
  // Each cluster erased with probability 1/2.
  const double sigma = std::sqrt(n * 0.25);
  for (int h : hits) CHECK(std::abs(h - n / 2.0) < 4 * sigma);
}

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.params = NetworkParams(8, 64);
  spec.message_counts = {1, 1018};
  spec.trials = 300;
  spec.erase_count = 4;
  spec.seed = 17;
  return spec;
}

}  // namespace

TEST_CASE("run_experiment") {
  auto spec = small_spec();
  auto res = run_experiment(spec);
  REQUIRE(res.rows.size() == 2);
  CHECK(res.rows[0].m == 1);
  CHECK(res.rows[0].error_rate == 0.0);
  CHECK(res.rows[1].density == doctest::Approx(0.22).epsilon(0.05));
  for (const auto& r : res.rows) {
    CHECK(r.wrong_count == 0);
    CHECK(r.error_rate == doctest::Approx(r.ambiguous_rate + r.failed_rate));
    CHECK(r.failed_rate == 0.0);
    CHECK(r.mean_cycles == doctest::Approx(11.0));
  }

  spec.erase_count = 0;
  for (const auto& r : run_experiment(spec).rows) CHECK(r.error_rate == 0.0);
}

TEST_CASE("run_experiment: sd and mpd give identical rates per seed") {
  auto spec = small_spec();
  spec.config.erased_policy = ErasedPolicy::StrictOr;
  spec.config.rule = Rule::Sd;
  auto sd = run_experiment(spec);
  spec.config.rule = Rule::Mpd;
  auto mpd = run_experiment(spec);
  for (std::size_t i = 0; i < sd.rows.size(); ++i) {
    CHECK(sd.rows[i].error_rate == mpd.rows[i].error_rate);
    CHECK(sd.rows[i].ambiguous_rate == mpd.rows[i].ambiguous_rate);
  }
}

TEST_CASE("run_experiment is independent of thread count") {
  auto spec = small_spec();
  spec.config.rule = Rule::SdBounded;
  spec.config.early_stop = true;
  std::ostringstream one, four;
  emit_csv(run_experiment(spec), one);
  spec.threads = 4;
  emit_csv(run_experiment(spec), four);
  CHECK(one.str() == four.str());
}

TEST_CASE("run_experiment rejects bad specs") {
  auto spec = small_spec();
  spec.trials = 0;
  CHECK_THROWS_AS(run_experiment(spec), Error);
  spec = small_spec();
  spec.erase_count = 8;
  CHECK_THROWS_AS(run_experiment(spec), Error);
  spec = small_spec();
  spec.message_counts = {0};
  CHECK_THROWS_AS(run_experiment(spec), Error);
  spec.probes = ProbeSource::Random;
  CHECK_NOTHROW(run_experiment(spec));
}

TEST_CASE("random probes against an empty store always fail") {
  auto spec = small_spec();
  spec.message_counts = {0};
  spec.probes = ProbeSource::Random;
  auto r = run_experiment(spec).rows.at(0);
  CHECK(r.failed_rate == 1.0);
  CHECK(r.error_rate == 1.0);
}

TEST_CASE("compare_decoders") {
  auto spec = small_spec();
  spec.config.beta = 64;
  auto wide = compare_decoders(spec);
  for (const auto& a : wide) {
    CHECK(a.mpd_vs_sd_strict == 1.0);
    CHECK(a.bounded_vs_sd == 1.0);
    CHECK(a.overflow_rate == 0.0);
  }
  spec.config.beta = 2;
  for (const auto& a : compare_decoders(spec)) {
    CHECK(a.mpd_vs_sd_strict == 1.0);
    CHECK(a.bounded_vs_sd_no_overflow == 1.0);
    if (a.overflow_rate == 0.0) CHECK(a.bounded_vs_sd == 1.0);
  }
}

TEST_CASE("error rate grows with the number of stored messages") {
  ExperimentSpec spec;
  spec.params = NetworkParams(8, 64);
  spec.message_counts = {64, 256, 512, 1018};
  spec.trials = 2000;
  spec.erase_count = 4;
  spec.seed = 5;
  auto res = run_experiment(spec);
  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    CHECK(res.rows[i].error_rate >= res.rows[i - 1].error_rate - 0.01);
  }
  CHECK(res.rows.back().error_rate >= res.rows.front().error_rate);
  for (const auto& r : res.rows) CHECK(r.wrong_count == 0);
}

TEST_CASE("emit_csv") {
  std::ostringstream empty;
  emit_csv(ExperimentResult{}, empty);
  CHECK(empty.str() == std::string(kCsvHeader) + "\n");

  ExperimentRow row;
  row.c = 8;
  row.l = 64;
  row.m = 1018;
  row.trials = 1000;
  row.erase_count = 4;
  row.rule = Rule::SdBounded;
  row.policy = ErasedPolicy::SkipAsOnes;
  row.beta = 2;
  row.iters = 4;
  row.density = 0.2201234567;
  row.error_rate = 1.0 / 3.0;
  row.ambiguous_rate = 0.25;
  row.failed_rate = 0.0;
  row.overflow_rate = 1e-7;
  row.beta_max = 2;
  row.mean_cycles = 11;
  std::ostringstream one;
  emit_csv(ExperimentResult{{row}}, one);
  CHECK(one.str() == std::string(kCsvHeader) +
                         "\n8,64,1018,1000,4,sd-bounded,skip,2,4,0.220123,0.333333,0.25,0,1e-07,2,11\n");

  // Parsing what was emitted and emitting again is byte-identical.
  std::istringstream in(one.str());
  auto parsed = parse_csv(in);
  REQUIRE(parsed.rows.size() == 1);
  CHECK(parsed.rows[0].m == 1018);
  CHECK(parsed.rows[0].density == 0.220123);
  std::ostringstream again;
  emit_csv(parsed, again);
  CHECK(again.str() == one.str());

  auto res = run_experiment(small_spec());
  std::ostringstream full;
  emit_csv(res, full);
  std::istringstream full_in(full.str());
  auto back = parse_csv(full_in);
  REQUIRE(back.rows.size() == res.rows.size());
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    CHECK(back.rows[i].m == res.rows[i].m);
    CHECK(back.rows[i].beta_max == res.rows[i].beta_max);
    CHECK(back.rows[i].error_rate == doctest::Approx(res.rows[i].error_rate).epsilon(1e-5));
  }
}
