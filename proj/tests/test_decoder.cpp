#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "scn/error.hpp"
#include "scn/experiments.hpp"

using namespace scn;

namespace {

LinkStore store_of(std::uint32_t c, std::uint32_t l, std::initializer_list<Message> msgs) {
  auto store = new_network(c, l);
  for (const auto& m : msgs) store.store_message(m);
  return store;
}

ActivationState state_of(std::uint32_t l,
                         std::initializer_list<std::initializer_list<std::uint32_t>> clusters) {
  ActivationState s;
  for (auto members : clusters) s.emplace_back(l, members);
  return s;
}

PartialMessage q(std::initializer_list<int> entries) {
  PartialMessage out;
  for (int e : entries) {
    if (e < 0) {
      out.emplace_back(ErasedCluster{});
    } else {
      out.emplace_back(Known{static_cast<std::uint32_t>(e)});
    }
  }
  return out;
}
constexpr int X = -1;

bool subset(const ActivationState& a, const ActivationState& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].subset_of(b[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("local_decode") {
  NetworkParams p(4, 8);
  auto s = local_decode(p, q({3, X, 5, 0}));
  CHECK(s == state_of(8, {{3}, {0, 1, 2, 3, 4, 5, 6, 7}, {5}, {0}}));

  auto identity = local_decode(p, as_query({1, 2, 3, 4}));
  CHECK(encode_output(identity) == Message{1, 2, 3, 4});

  NetworkParams p16(2, 16);
  PartialMessage partial{PartialBits{0b1001, 0b0100}, Known{0}};
  CHECK(local_decode(p16, partial)[0] == NeuronSet(16, {9, 13}));

  // l = 5, kappa = 3: value 0b1xx with the two low bits erased admits only 4.
  NetworkParams p5(2, 5);
  CHECK(local_decode(p5, {PartialBits{0b100, 0b011}, Known{1}})[0] == NeuronSet(5, {4}));
  // value 0b11x admits 6, 7: none below 5.
  try {
    local_decode(p5, {PartialBits{0b110, 0b001}, Known{1}});
    FAIL("expected failed-input");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FailedInput);
  }
  // A fully-masked PartialBits behaves as an erased cluster.
  CHECK(local_decode(p5, {PartialBits{0, 0b111}, Known{1}})[0] == NeuronSet::full(5));
}

TEST_CASE("gd_step_mpd") {
  auto empty = new_network(3, 4);
  auto any = state_of(4, {{1}, {0, 1, 2, 3}, {3}});
  CHECK(gd_step_mpd(empty, any) == state_of(4, {{}, {}, {}}));

  auto s = store_of(3, 4, {{1, 2, 3}});
  auto ld = local_decode(s.params(), q({1, X, 3}));
  CHECK(gd_step_mpd(s, ld) == state_of(4, {{1}, {2}, {3}}));

  auto clique = state_of(4, {{1}, {2}, {3}});
  CHECK(gd_step_mpd(s, clique) == clique);
}

TEST_CASE("gd_step_sd") {
  auto empty = new_network(3, 4);
  auto any = state_of(4, {{1}, {0, 1, 2, 3}, {3}});
  CHECK(gd_step_sd(empty, any, ErasedPolicy::StrictOr) == state_of(4, {{}, {}, {}}));

  auto s = store_of(3, 4, {{1, 2, 3}, {1, 0, 3}});
  auto ld = local_decode(s.params(), q({1, X, 3}));
  for (auto policy : {ErasedPolicy::StrictOr, ErasedPolicy::SkipAsOnes}) {
    auto out = gd_step_sd(s, ld, policy);
    CHECK(out[1] == NeuronSet(4, {0, 2}));
    CHECK(out[0] == NeuronSet(4, {1}));
    CHECK(out[2] == NeuronSet(4, {3}));
  }
}

TEST_CASE("skip-as-ones admits a neuron with no links toward an erased cluster") {
  // c=3, l=2. Cluster 2 known = 0; clusters 0 and 1 erased. Neuron (0,1) is
  // linked to (2,0) but has no link into cluster 1 at all.
  auto s = new_network(3, 2);
  LinkStoreWriter w(s);
  w.set(0, 1, 2, 0);
  w.set(2, 0, 0, 1);
  auto state = state_of(2, {{0, 1}, {0, 1}, {0}});
  CHECK(gd_step_sd(s, state, ErasedPolicy::SkipAsOnes)[0] == NeuronSet(2, {1}));
  CHECK(gd_step_sd(s, state, ErasedPolicy::StrictOr)[0] == NeuronSet(2, {}));
  CHECK(gd_step_mpd(s, state)[0] == NeuronSet(2, {}));
}

TEST_CASE("step equivalence: sd(strict) == mpd == dense oracle on random pairs") {
  Rng rng(42);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint32_t c = 2 + static_cast<std::uint32_t>(rng.below(3));
    const std::uint32_t l = rng.below(2) ? 4 : 8;
    NetworkParams p(c, l);
    const auto msgs = gen_messages(p, 1 + rng.below(20), rng.next());
    auto store = build_store(p, msgs);
    oracle::DenseNet dense(c, l);
    for (const auto& m : msgs) dense.store(m);

    const auto state = oracle::random_state(rng, c, l);
    const auto mpd = gd_step_mpd(store, state);
    const auto sd = gd_step_sd(store, state, ErasedPolicy::StrictOr);
    const auto ref = oracle::from_dense(oracle::global_step(dense, oracle::to_dense(state)));
    REQUIRE(mpd == ref);
    REQUIRE(sd == mpd);
    // Memory effect: every variant only removes activations.
    REQUIRE(subset(gd_step_sd(store, state, ErasedPolicy::SkipAsOnes), state));
    REQUIRE(subset(gd_step_bounded(store, state, 2, ErasedPolicy::SkipAsOnes).state, state));
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("spm_serialize") {
  auto pass = spm_serialize(NeuronSet(16, {3, 9, 12}), 2);
  CHECK(pass.order == std::vector<std::uint32_t>{12, 9});
  CHECK(pass.overflow);

  pass = spm_serialize(NeuronSet(16, {5}), 2);
  CHECK(pass.order == std::vector<std::uint32_t>{5});
  CHECK_FALSE(pass.overflow);

  pass = spm_serialize(NeuronSet(16), 3);
  CHECK(pass.order.empty());
  CHECK_FALSE(pass.overflow);

  pass = spm_serialize(NeuronSet(16, {3, 9}), 2);
  CHECK_FALSE(pass.overflow);

  // Property: strictly descending, and taken plus dropped equals the input.
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto l = static_cast<std::uint32_t>(2 + rng.below(200));
    NeuronSet set(l);
    for (std::uint32_t n = 0; n < l; ++n)
      if (rng.below(5) == 0) set.set(n);
    const auto beta = static_cast<std::uint32_t>(1 + rng.below(6));
    const auto out = spm_serialize(set, beta);
    REQUIRE(std::adjacent_find(out.order.begin(), out.order.end(),
                               [](auto a, auto b) { return a <= b; }) == out.order.end());
    auto members = set.members();
    std::reverse(members.begin(), members.end());
    const auto taken = std::min<std::size_t>(beta, members.size());
    REQUIRE(std::equal(out.order.begin(), out.order.end(), members.begin(), members.begin() + taken));
    REQUIRE(out.overflow == (members.size() > beta));
  }
}

TEST_CASE("gd_step_bounded") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint32_t c = 2 + static_cast<std::uint32_t>(rng.below(3));
    const std::uint32_t l = rng.below(2) ? 4 : 8;
    NetworkParams p(c, l);
    auto store = build_store(p, gen_messages(p, 1 + rng.below(20), rng.next()));
    const auto state = oracle::random_state(rng, c, l);
    for (auto policy : {ErasedPolicy::StrictOr, ErasedPolicy::SkipAsOnes}) {
      const auto sd = gd_step_sd(store, state, policy);
      // beta = l never binds.
      const auto wide = gd_step_bounded(store, state, l, policy);
      REQUIRE_FALSE(wide.overflow);
      REQUIRE(wide.state == sd);
      const auto tight = gd_step_bounded(store, state, 2, policy);
      REQUIRE(subset(tight.state, sd));
      bool within = true;
      for (const auto& cl : state) within = within && (cl.count() <= 2 || (policy == ErasedPolicy::SkipAsOnes && cl.all()));
      if (within) {
        REQUIRE_FALSE(tight.overflow);
        REQUIRE(tight.state == sd);
      }
    }
  }
}

TEST_CASE("gd_step_bounded overflow on a brute-forced three-message store") {
  // Search c=3, l=4 stores of three messages for a query with one erased
  // cluster whose first iteration leaves 3 survivors in that cluster.
  NetworkParams p(3, 4);
  bool found = false;
  for (std::uint32_t code = 0; code < 64 * 64 * 64 && !found; ++code) {
    std::vector<Message> msgs;
    for (int k = 0; k < 3; ++k) {
      const auto v = (code >> (6 * k)) & 63U;
      msgs.push_back({v & 3U, (v >> 2) & 3U, (v >> 4) & 3U});
    }
    auto store = build_store(p, msgs);
    for (const auto& target : msgs) {
      auto query = as_query(target);
      query[1] = ErasedCluster{};
      const auto ld = local_decode(p, query);
      const auto first = gd_step_sd(store, ld, ErasedPolicy::SkipAsOnes);
      if (first[1].count() < 3) continue;
      found = true;
      const auto unbounded = gd_step_sd(store, first, ErasedPolicy::SkipAsOnes);
      const auto bounded = gd_step_bounded(store, first, 2, ErasedPolicy::SkipAsOnes);
      CHECK(bounded.overflow);
      CHECK(subset(bounded.state, unbounded));
      // Dropped contributions are exactly the lowest-index survivor's rows.
      auto serialized = spm_serialize(first[1], 2);
      CHECK(serialized.order.size() == 2);
      break;
    }
  }
  CHECK(found);
}

TEST_CASE("decode examples") {
  DecodeConfig sd;
  sd.rule = Rule::Sd;
  sd.max_iters = 4;
  sd.early_stop = true;

  auto single = store_of(3, 4, {{1, 2, 3}});
  auto out = decode(single, q({1, X, 3}), sd);
  CHECK(out.status == Status::Retrieved);
  CHECK(*out.message == Message{1, 2, 3});
  CHECK(out.iterations_used == 1);
  CHECK(out.max_active_after_first_iter == 1);

  auto known = decode(single, as_query({1, 2, 3}), sd);
  CHECK(known.status == Status::Retrieved);
  CHECK(*known.message == Message{1, 2, 3});

  auto amb_store = store_of(3, 4, {{1, 2, 3}, {1, 2, 0}});
  for (auto rule : {Rule::Mpd, Rule::Sd, Rule::SdBounded}) {
    DecodeConfig cfg;
    cfg.rule = rule;
    auto amb = decode(amb_store, q({1, 2, X}), cfg);
    CHECK(amb.status == Status::Ambiguous);
    CHECK_FALSE(amb.message);
    CHECK(amb.final_state[2] == NeuronSet(4, {0, 3}));
    CHECK(amb.iterations_used == 4);
  }

  // Early stop on state repetition.
  auto amb = decode(amb_store, q({1, 2, X}), sd);
  CHECK(amb.status == Status::Ambiguous);
  CHECK(amb.iterations_used == 2);

  // A message that was never stored fails.
  auto failed = decode(single, q({0, X, 3}), sd);
  CHECK(failed.status == Status::Failed);
  CHECK(failed.max_active_after_first_iter == 0);
}

TEST_CASE("decode cycle accounting") {
  auto s = store_of(3, 4, {{1, 2, 3}});
  DecodeConfig cfg;
  cfg.rule = Rule::SdBounded;
  cfg.beta = 2;
  cfg.max_iters = 4;
  CHECK(decode(s, q({1, X, 3}), cfg).cycles == 11);
  cfg.early_stop = true;
  CHECK(decode(s, q({1, X, 3}), cfg).cycles == 2);
  cfg.rule = Rule::Mpd;
  cfg.early_stop = false;
  CHECK(decode(s, q({1, X, 3}), cfg).cycles == 5);
}

TEST_CASE("decode on c = 2") {
  auto s = store_of(2, 8, {{3, 5}, {3, 6}, {1, 5}});
  DecodeConfig cfg;
  auto out = decode(s, q({X, 6}), cfg);
  CHECK(out.status == Status::Retrieved);
  CHECK(*out.message == Message{3, 6});
  out = decode(s, q({X, 5}), cfg);
  CHECK(out.status == Status::Ambiguous);
  CHECK(out.final_state[0] == NeuronSet(8, {1, 3}));
}

TEST_CASE("encode_output") {
  CHECK(encode_output(state_of(4, {{1}, {2}, {3}})) == Message{1, 2, 3});
  CHECK_THROWS_AS(encode_output(state_of(4, {{1}, {}, {3}})), Error);
  CHECK_THROWS_AS(encode_output(state_of(4, {{1}, {0, 2}, {3}})), Error);
}

TEST_CASE("invalid configs and inputs") {
  auto s = store_of(3, 4, {{1, 2, 3}});
  DecodeConfig cfg;
  cfg.max_iters = 0;
  CHECK_THROWS_AS(decode(s, q({1, X, 3}), cfg), Error);
  cfg = {};
  cfg.beta = 0;
  CHECK_THROWS_AS(decode(s, q({1, X, 3}), cfg), Error);
  CHECK_THROWS_AS(decode(s, q({1, X}), DecodeConfig{}), Error);
  CHECK_THROWS_AS(decode(s, q({1, X, 4}), DecodeConfig{}), Error);
}

TEST_CASE("clique survival and bounded soundness on erasure-only probes") {
  struct Shape {
    std::uint32_t c, l;
    std::uint64_t m;
  };
  int wrong = 0;
  int trials = 0;
  for (Shape shape : {Shape{3, 4, 6}, Shape{4, 8, 20}, Shape{5, 8, 40}, Shape{8, 64, 1018}}) {
    NetworkParams p(shape.c, shape.l);
    const auto msgs = gen_messages(p, shape.m, shape.c * 1000 + shape.l);
    const auto store = build_store(p, msgs);
    Rng rng(shape.m);
    for (int t = 0; t < 150; ++t) {
      const auto& original = msgs[rng.below(msgs.size())];
      const auto erase = static_cast<std::uint32_t>(rng.below(shape.c));
      const auto query = erase_clusters(original, erase, rng);
      for (auto policy : {ErasedPolicy::StrictOr, ErasedPolicy::SkipAsOnes}) {
        // Survival through every iteration.
        auto state = local_decode(p, query);
        for (int it = 0; it < 4; ++it) {
          const auto mpd = gd_step_mpd(store, state);
          state = gd_step_sd(store, state, policy);
          if (policy == ErasedPolicy::StrictOr) REQUIRE(state == mpd);
          for (std::uint32_t i = 0; i < shape.c; ++i) REQUIRE(state[i].test(original[i]));
        }
        DecodeConfig sd;
        sd.erased_policy = policy;
        DecodeConfig bounded = sd;
        bounded.rule = Rule::SdBounded;
        for (bool early : {false, true}) {
          sd.early_stop = bounded.early_stop = early;
          const auto a = decode(store, query, sd);
          const auto b = decode(store, query, bounded);
          if (!b.beta_overflow) REQUIRE(same_outcome(a, b));
          if (a.status == Status::Retrieved && *a.message != original) ++wrong;
          ++trials;
        }
      }
    }
  }
  CHECK(wrong == 0);
  CHECK(trials > 0);
}

TEST_CASE("fixed points are stable") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    NetworkParams p(4, 8);
    auto store = build_store(p, gen_messages(p, 1 + rng.below(15), rng.next()));
    auto state = oracle::random_state(rng, 4, 8);
    for (int it = 0; it < 32; ++it) {
      auto next = gd_step_sd(store, state, ErasedPolicy::StrictOr);
      if (next == state) break;
      state = std::move(next);
    }
    REQUIRE(gd_step_sd(store, state, ErasedPolicy::StrictOr) == state);
    REQUIRE(gd_step_mpd(store, state) == state);
  }
}
