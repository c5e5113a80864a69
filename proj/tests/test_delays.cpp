#include <gtest/gtest.h>

#include "dropctl/certificate_check.hpp"
#include "dropctl/delays.hpp"
#include "dropctl/oracle.hpp"
#include "test_support.hpp"

using namespace dropctl;
using namespace dropctl::testing;

namespace {

DelaySignal random_signal(Random& rnd, const std::vector<std::size_t>& d, std::size_t len) {
  DelaySignal out;
  for (std::size_t i = 0; i < len; ++i) out.push_back(d[static_cast<std::size_t>(rnd.integer(0, static_cast<int>(d.size()) - 1))]);
  return out;
}

std::vector<std::size_t> random_delay_set(Random& rnd, std::size_t max_size, int max_delay) {
  std::vector<std::size_t> d;
  std::size_t size = static_cast<std::size_t>(rnd.integer(1, static_cast<int>(max_size)));
  while (d.size() < size) {
    std::size_t x = static_cast<std::size_t>(rnd.integer(0, max_delay));
    if (std::find(d.begin(), d.end(), x) == d.end()) d.push_back(x);
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

TEST(DelayReachMatrix, ZeroDelayIsClassical) {
  Random rnd(41);
  for (int i = 0; i < 10; ++i) {
    RatMatrix a = rnd.matrix(2, 2);
    RatMatrix b = rnd.matrix(2, 1);
    DelaySystem sys{a, b, {0}};
    for (std::size_t t = 1; t <= 4; ++t) {
      // Block i is A^(t-i) B: the classical matrix read right to left.
      EXPECT_EQ(rank(delay_reach_matrix(sys, DelaySignal(t, 0), t)), rank(reachability_matrix(a, b, Labels(t, 1))));
      EXPECT_EQ(delay_reach_matrix(sys, DelaySignal(t, 0), t).col_vector(t - 1), b.col_vector(0));
    }
  }
}

TEST(DelayReachMatrix, LongDelaysZeroEverything) {
  DelaySystem sys{swap_a(), RatMatrix{{1}, {0}}, {5}};
  EXPECT_TRUE(delay_reach_matrix(sys, DelaySignal(3, 5), 3).is_zero());
}

TEST(DelayReachMatrix, HandExample) {
  // A = 0, B = I, d = (1, 0), t = 2: both packets land at time 1, and with
  // A = 0 only A^0 B survives in each block.
  DelaySystem sys{RatMatrix::zero(2, 2), RatMatrix::identity(2), {0, 1}};
  RatMatrix m = delay_reach_matrix(sys, {1, 0}, 2);
  EXPECT_EQ(m, hstack(RatMatrix::identity(2), RatMatrix::identity(2)));
  EXPECT_EQ(rank(m), 2u);
}

TEST(ActuationSignal, Examples) {
  EXPECT_EQ(actuation_signal(DelaySignal(5, 0), 5), Labels(5, 1));
  EXPECT_EQ(actuation_signal(DelaySignal(5, 1), 5), (Labels{0, 1, 1, 1, 1}));
  EXPECT_EQ(actuation_signal({2, 0, 0}, 3), (Labels{0, 1, 1}));
}

TEST(DeBruijn, Examples) {
  auto single = de_bruijn_automaton({0});
  EXPECT_EQ(single.automaton.size(), 1u);
  EXPECT_EQ(single.automaton.label(0), 1);
  EXPECT_TRUE(single.automaton.edge(0, 0));

  auto two = de_bruijn_automaton({0, 1});
  ASSERT_EQ(two.automaton.size(), 4u);
  std::size_t edges = 0;
  for (NodeId u = 0; u < 4; ++u) {
    const auto& t = two.tuples[u];
    Label expected = (t == std::vector<std::size_t>{1, 0}) ? 0 : 1;
    EXPECT_EQ(two.automaton.label(u), expected);
    for (NodeId v = 0; v < 4; ++v) {
      if (!two.automaton.edge(u, v)) continue;
      ++edges;
      EXPECT_EQ(two.tuples[v][1], t[0]);
    }
  }
  EXPECT_EQ(edges, 8u);
  EXPECT_EQ(de_bruijn_automaton({0, 2, 3}).automaton.size(), 81u);
}

TEST(DeBruijn, LabelsReproduceShiftedActuation) {
  Random rnd(42);
  for (int trial = 0; trial < 40; ++trial) {
    auto d = random_delay_set(rnd, 3, 3);
    auto db = de_bruijn_automaton(d);
    const std::size_t shift = db.shift;
    DelaySignal signal = random_signal(rnd, d, 20 + shift);
    Labels tau = actuation_signal(signal, signal.size());
    // Node at step p holds (d(p+shift), ..., d(p)).
    for (std::size_t p = 0; p + shift < signal.size(); ++p) {
      std::vector<std::size_t> tuple;
      for (std::size_t i = 0; i <= shift; ++i) tuple.push_back(signal[p + shift - i]);
      auto it = std::find(db.tuples.begin(), db.tuples.end(), tuple);
      ASSERT_NE(it, db.tuples.end());
      NodeId node = static_cast<NodeId>(it - db.tuples.begin());
      EXPECT_EQ(db.automaton.label(node), tau[p + shift]) << "p=" << p;
      if (p + shift + 1 < signal.size()) {
        std::vector<std::size_t> next;
        for (std::size_t i = 0; i <= shift; ++i) next.push_back(signal[p + 1 + shift - i]);
        NodeId to = static_cast<NodeId>(std::find(db.tuples.begin(), db.tuples.end(), next) - db.tuples.begin());
        EXPECT_TRUE(db.automaton.edge(node, to));
      }
    }
  }
}

TEST(DeBruijn, ThreeCycleIsNotExpressible) {
  Automaton target = three_cycle_110();
  for (unsigned mask = 1; mask < 16; ++mask) {
    std::vector<std::size_t> d;
    for (std::size_t i = 0; i < 4; ++i)
      if (mask >> i & 1) d.push_back(i);
    EXPECT_FALSE(language_equal_up_to(de_bruijn_automaton(d).automaton, target, 12));
  }
}

TEST(ImageLink, RandomSamples) {
  Random rnd(43);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = static_cast<std::size_t>(rnd.integer(1, 3));
    DelaySystem sys{rnd.matrix(n, n), rnd.matrix(n, static_cast<std::size_t>(rnd.integer(1, 2))),
                    random_delay_set(rnd, 3, 3)};
    std::size_t t = static_cast<std::size_t>(rnd.integer(1, 6));
    EXPECT_TRUE(verify_image_link(sys, random_signal(rnd, sys.delays, t), t));
  }
  DelaySystem late{swap_a(), RatMatrix{{1}, {1}}, {3}};
  EXPECT_TRUE(verify_image_link(late, DelaySignal(3, 3), 3));
}

TEST(DelayControllability, Examples) {
  DelaySystem classical{RatMatrix{{1, 1}, {0, 1}}, RatMatrix{{0}, {1}}, {0}};
  EXPECT_EQ(decide_delay_controllability(classical).status, Status::holds);
  DelaySystem trivial{RatMatrix::zero(2, 2), RatMatrix::identity(2), {0}};
  EXPECT_EQ(decide_delay_controllability(trivial).status, Status::holds);

  DelaySystem swap{swap_a(), RatMatrix{{1}, {0}}, {0, 1}};
  Verdict v = decide_delay_controllability(swap);
  auto oracle = oracle_delay_controllability(swap, 10);
  ASSERT_TRUE(oracle.status().has_value());
  EXPECT_EQ(v.status, *oracle.status());
  EXPECT_TRUE(verify_delay_verdict(v, swap).ok);
}

TEST(DelayControllability, FailureCarriesDelayWitness) {
  DelaySystem stuck{RatMatrix::identity(2), RatMatrix{{1}, {0}}, {0, 1}};
  Verdict v = decide_delay_controllability(stuck);
  ASSERT_EQ(v.status, Status::fails);
  ASSERT_TRUE(v.delay_witness.has_value());
  EXPECT_FALSE(v.delay_witness->cycle.empty());
  EXPECT_EQ(v.delay_witness->shift, 1u);
  EXPECT_TRUE(verify_delay_verdict(v, stuck).ok);
}

TEST(DelayControllability, AgreesWithDelayOracle) {
  Random rnd(44);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = static_cast<std::size_t>(rnd.integer(1, 2));
    DelaySystem sys{rnd.matrix(n, n), rnd.matrix(n, 1), random_delay_set(rnd, 2, 2)};
    auto oracle = oracle_delay_controllability(sys, 10);
    if (!oracle.status()) continue;
    ++compared;
    Verdict v = decide_delay_controllability(sys);
    EXPECT_EQ(v.status, *oracle.status()) << "A=" << sys.a.to_string() << " B=" << sys.b.to_string();
  }
  EXPECT_GT(compared, 20);
}

TEST(MaxDropDelayEquivalence, Examples) {
  EXPECT_EQ(verify_maxdrop_delay_equivalence(RatMatrix{{1, 1}, {0, 1}}, RatMatrix{{0}, {1}}, 0), true);
  EXPECT_EQ(verify_maxdrop_delay_equivalence(RatMatrix::zero(2, 2), RatMatrix::identity(2), 1), true);
  Random rnd(45);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = verify_maxdrop_delay_equivalence(rnd.invertible(2), rnd.matrix(2, 1),
                                              static_cast<std::size_t>(rnd.integer(1, 2)));
    if (r) EXPECT_TRUE(*r);
  }
}
