#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

namespace {

using namespace pnsem;
using namespace pnsem::testing;

std::vector<std::size_t> occurrences_of(const Process& p, const std::string& label) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.place_count(); ++i)
    if (p.net().name(p.place(i).label) == label) out.push_back(i);
  return out;
}

BDClassRef class_of(const Net& net, const char* w) { return bd_class_of(build_process(net, word(net, w))); }

TEST(Swap, FigureOne) {
  Net a = load_net("NET-A");
  Process left = fig1_left(a);
  auto fours = occurrences_of(left, "4");
  ASSERT_EQ(fours.size(), 2u);
  Process swapped = swap(left, fours[0], fours[1]);
  EXPECT_TRUE(is_valid_process(swapped));
  EXPECT_TRUE(are_isomorphic(swapped, fig1_right(a)));
  EXPECT_TRUE(are_isomorphic(swap(left, fours[0], fours[0]), left));
}

TEST(Swap, Preconditions) {
  Net a = load_net("NET-A");
  Process left = fig1_left(a);
  auto ones = occurrences_of(left, "1");
  auto fours = occurrences_of(left, "4");
  try {
    swap(left, ones[0], fours[0]);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("label mismatch"), std::string::npos);
  }
  Net b = load_net("NET-B");
  Process pb = build_process(b, word(b, "a b d c"));
  auto ps = occurrences_of(pb, "p");
  ASSERT_EQ(ps.size(), 3u);
  // the p produced by d comes after the p consumed by a (a -> q -> d -> p)
  std::size_t produced = ps.back();
  ASSERT_TRUE(pb.producer(produced).has_value());
  std::size_t consumed_by_a = ps[0];
  EXPECT_THROW(swap(pb, consumed_by_a, produced), PreconditionError);
}

TEST(OneStepEquiv, Examples) {
  Net a = load_net("NET-A");
  EXPECT_TRUE(one_step_equiv(fig1_left(a), fig1_right(a)));
  EXPECT_TRUE(one_step_equiv(fig1_left(a), fig1_left(a)));
  EXPECT_FALSE(one_step_equiv(build_process(a, word(a, "a b")), fig1_left(a)));
}

TEST(SwapEquivalent, Examples) {
  Net a = load_net("NET-A");
  for (auto m : {SwapMethod::via_traces, SwapMethod::direct_bfs}) {
    EXPECT_TRUE(swap_equivalent(fig1_left(a), fig1_right(a), m));
    EXPECT_FALSE(swap_equivalent(build_process(a, word(a, "a b")), fig1_left(a), m));
  }
}

TEST(BDClass, OrderExamples) {
  Net a = load_net("NET-A");
  auto ab = class_of(a, "a b");
  auto full = bd_class_of(fig1_left(a));
  EXPECT_EQ(full, bd_class_of(fig1_right(a)));
  EXPECT_TRUE(bd_class_leq(a, ab, full));
  EXPECT_TRUE(bd_class_leq(a, full, full));
  EXPECT_FALSE(bd_class_leq(a, full, ab));
  EXPECT_TRUE(bd_class_leq_direct(build_process(a, word(a, "a b")), fig1_right(a)));
  EXPECT_EQ(full.canonical(), word(a, "a b c"));
}

TEST(Bdify, Examples) {
  Net a = load_net("NET-A");
  auto empty = bdify(build_process(a, {}));
  ASSERT_EQ(empty.classes.size(), 1u);
  EXPECT_EQ(empty.classes[0].length(), 0u);

  auto l = bdify(fig1_left(a));
  EXPECT_EQ(l, bdify(fig1_right(a)));
  // ε, a, b, ab, ac, bc, abc: the bc prefix of the right process is
  // swapping equivalent to a prefix of some member of the left class
  ASSERT_EQ(l.classes.size(), 7u);
  for (auto w : {"", "a", "b", "a b", "a c", "b c", "a b c"}) EXPECT_TRUE(l.contains(class_of(a, w))) << w;
}

TEST(MaximalProcesses, Examples) {
  Net a = load_net("NET-A");
  auto ma = maximal_processes(a, 3);
  EXPECT_EQ(ma.classes.size(), 1u);
  EXPECT_EQ(ma.verdict, Uniqueness::unique);
  Net b = load_net("NET-B");
  auto mb = maximal_processes(b, 4);
  EXPECT_EQ(mb.classes.size(), 1u);
  EXPECT_EQ(mb.verdict, Uniqueness::unique);
  Net c = load_net("NET-C");
  auto mc = maximal_processes(c, 1);
  EXPECT_EQ(mc.classes.size(), 2u);
  EXPECT_EQ(mc.verdict, Uniqueness::multiple);
}

TEST(Swap, InvolutionAndValidity) {
  std::mt19937_64 rng(31);
  std::size_t swaps = 0;
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    Net net = random_net({4, 4, 0.4, 1, 3, seed});
    Process p = build_process(net, random_firing_sequence(net, 6, rng));
    for (auto [x, y] : admissible_swaps(p)) {
      Process q = swap(p, x, y);
      ++swaps;
      ASSERT_TRUE(is_valid_process(q));
      EXPECT_TRUE(are_isomorphic(swap(q, x, y), p));
      EXPECT_TRUE(one_step_equiv(p, q));
      EXPECT_TRUE(one_step_equiv(q, p));
      EXPECT_EQ(q.transition_labels(), p.transition_labels());
    }
  }
  EXPECT_GT(swaps, 200u);
}

TEST(SwapEquivalent, MethodsAgree) {
  std::mt19937_64 rng(37);
  std::size_t instances = 0, positive = 0;
  for (std::uint64_t seed = 1; instances < 200; ++seed) {
    Net net = random_net({4, 3, 0.4, 1, 2, seed});
    Word w = random_firing_sequence(net, 5, rng);
    auto pi = pi_members(net, w, true, 8);
    // a second process from a permutation of w, when one exists
    auto cls = trace_class(net, w);
    Word v = cls.members()[rng() % cls.size()];
    std::vector<Process> others = pi.processes;
    others.push_back(build_process(net, v, TokenPolicy::newest_first()));
    for (std::size_t i = 0; i + 1 < others.size() && instances < 200; ++i) {
      bool x = swap_equivalent(others[i], others.back(), SwapMethod::via_traces);
      bool y = swap_equivalent(others[i], others.back(), SwapMethod::direct_bfs);
      EXPECT_EQ(x, y) << "seed " << seed;
      positive += x;
      ++instances;
    }
  }
  EXPECT_GT(positive, 20u);
}

TEST(BDClass, PartialOrderAndBdifyIsARun) {
  std::mt19937_64 rng(41);
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Net net = random_net({4, 3, 0.4, 1, 2, seed});
    Process p = build_process(net, random_firing_sequence(net, 5, rng));
    auto run = bdify(p);
    const auto& cs = run.classes;
    for (const auto& x : cs) {
      EXPECT_TRUE(bd_class_leq(net, x, x));
      EXPECT_TRUE(bd_class_leq(net, x, bd_class_of(p)));  // directed: p's class is on top
      for (const auto& y : cs) {
        if (!(x == y) && bd_class_leq(net, x, y)) EXPECT_FALSE(bd_class_leq(net, y, x));
        for (const auto& z : cs)
          if (bd_class_leq(net, x, y) && bd_class_leq(net, y, z)) EXPECT_TRUE(bd_class_leq(net, x, z));
      }
      // prefix-closed: every class of a prefix of the representative is present
      for (const auto& keep : downward_closed_sets(x.representative()))
        EXPECT_TRUE(run.contains(bd_class_of(prefix_by_transitions(x.representative(), keep))));
    }
  }
}

}  // namespace
