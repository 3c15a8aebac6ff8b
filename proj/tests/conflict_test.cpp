#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"

namespace {

using namespace pnsem;
using namespace pnsem::testing;

TEST(IsConflict, Examples) {
  Net c = load_net("NET-C");
  EXPECT_TRUE(is_conflict(c, c.initial_marking(), step(c, {{"t", 1}, {"u", 1}})));
  EXPECT_FALSE(is_conflict(c, c.initial_marking(), step(c, {{"t", 2}, {"u", 1}})));
  Net b = load_net("NET-B");
  EXPECT_TRUE(is_conflict(b, b.initial_marking(), step(b, {{"a", 1}, {"b", 1}, {"c", 1}})));
  EXPECT_FALSE(is_conflict(b, b.initial_marking(), step(b, {{"a", 1}, {"b", 1}})));
  EXPECT_FALSE(is_conflict(b, b.initial_marking(), Step{}));
}

TEST(FindConflicts, Examples) {
  Net a = load_net("NET-A");
  auto fa = find_conflicts(a, {});
  EXPECT_TRUE(fa.witnesses.empty());
  EXPECT_FALSE(fa.truncated);

  Net b = load_net("NET-B");
  auto fb = find_conflicts(b, {});
  ASSERT_FALSE(fb.witnesses.empty());
  const auto& w0 = fb.witnesses.front();
  EXPECT_TRUE(w0.sigma.empty());
  EXPECT_EQ(w0.marking, b.initial_marking());
  EXPECT_EQ(w0.g, step(b, {{"a", 1}, {"b", 1}, {"c", 1}}));

  Net c = load_net("NET-C");
  auto fc = find_conflicts(c, {});
  ASSERT_EQ(fc.witnesses.size(), 1u);
  EXPECT_EQ(fc.witnesses[0].g, step(c, {{"t", 1}, {"u", 1}}));
}

TEST(CheckStructural, Examples) {
  EXPECT_TRUE(check_structural(load_net("NET-A"), {}).holds());
  EXPECT_TRUE(check_structural(load_net("NET-C"), {}).holds());
  Net b = load_net("NET-B");
  auto v = check_structural(b, {});
  ASSERT_TRUE(v.violated());
  EXPECT_TRUE(v.witness->sigma.empty());
  EXPECT_EQ(b.name(v.witness->t), "a");
  EXPECT_EQ(b.name(v.witness->u), "b");
  EXPECT_EQ(v.witness->shared, marking(b, {{"p", 1}}));
}

TEST(CheckStructural, SelfConcurrencyAndUnknown) {
  NetDescription d;
  d.places = {{"s", 2}, {"out", 0}};
  d.transitions = {"t"};
  d.arcs = {{"s", "t", 1}, {"t", "out", 1}};
  auto v = check_structural(validate_net(d), {});
  ASSERT_TRUE(v.violated());
  EXPECT_EQ(v.witness->t, v.witness->u);

  NetDescription g;
  g.places = {{"s", 1}, {"acc", 0}};
  g.transitions = {"t"};
  g.arcs = {{"s", "t", 1}, {"t", "s", 1}, {"t", "acc", 1}};
  auto w = check_structural(validate_net(g), {3, 16, 4});
  EXPECT_EQ(w.status, Status::unknown);
}

TEST(PairwiseReduction, Examples) {
  Net c = load_net("NET-C");
  auto vc = check_structural(c, {});
  std::set<TransitionId> tu{c.transition("t"), c.transition("u")};
  EXPECT_TRUE(pairwise_conflict_reduction(c, vc, c.initial_marking(), tu));
  EXPECT_TRUE(is_conflict(c, c.initial_marking(), step(c, {{"t", 1}, {"u", 1}})));
  EXPECT_FALSE(pairwise_conflict_reduction(c, vc, c.initial_marking(), {c.transition("t")}));

  Net a = load_net("NET-A");
  auto va = check_structural(a, {});
  auto ex = explore(a, 12, 16);
  for (const auto& m : ex.markings)
    EXPECT_FALSE(pairwise_conflict_reduction(a, va, m, {a.transition("a"), a.transition("b")}));

  Net b = load_net("NET-B");
  EXPECT_THROW(pairwise_conflict_reduction(b, check_structural(b, {}), b.initial_marking(), {}),
               PreconditionError);
}

TEST(FindConflicts, WitnessesRevalidate) {
  std::size_t witnesses = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Net net = random_net({4, 4, 0.35, 2, 2, seed});
    auto found = find_conflicts(net, {5, 6, 3});
    for (const auto& w : found.witnesses) {
      ++witnesses;
      ASSERT_EQ(fire_sequence(net, net.initial_marking(), w.sigma), w.marking);
      EXPECT_TRUE(is_conflict(net, w.marking, w.g));
      // ⊆-minimal: removing one occurrence leaves no conflict
      for (const auto& [t, n] : w.g) {
        Step smaller = w.g;
        smaller.remove(t);
        EXPECT_FALSE(!smaller.empty() && is_conflict(net, w.marking, smaller));
      }
    }
  }
  EXPECT_GT(witnesses, 100u);
}

TEST(PairwiseReduction, AgreesWithSemanticConflictOnStructuralNets) {
  std::size_t nets = 0, cases = 0;
  for (std::uint64_t seed = 1; nets < 120; ++seed) {
    auto g = random_structural_conflict_net({4, 4, 0.35, 1, 2, seed}, {6, 6, 4}, 50);
    if (!g.net) continue;
    ++nets;
    const Net& net = *g.net;
    auto v = check_structural(net, {6, 6, 4});
    auto ex = explore(net, 6, 6);
    auto ts = net.transitions();
    for (const auto& m : ex.markings)
      for (std::uint32_t mask = 1; mask < (1u << ts.size()); ++mask) {
        std::set<TransitionId> set;
        Step g;
        for (std::size_t i = 0; i < ts.size(); ++i)
          if (mask & (1u << i)) {
            set.insert(ts[i]);
            g.add(ts[i]);
          }
        ++cases;
        EXPECT_EQ(pairwise_conflict_reduction(net, v, m, set), is_conflict(net, m, g));
      }
  }
  EXPECT_GT(cases, 1000u);
}

}  // namespace
