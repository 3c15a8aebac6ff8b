#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "fixtures.hpp"

namespace {

using namespace pnsem;
using namespace pnsem::testing;

std::set<Word> words(const Net& net, std::initializer_list<const char*> ws) {
  std::set<Word> out;
  for (auto w : ws) out.insert(word(net, w));
  return out;
}

// Same process with occurrences stored in a shuffled order and fresh births.
Process shuffled_copy(const Process& p, std::mt19937_64& rng) {
  std::vector<std::size_t> pp(p.place_count()), tp(p.transition_count());
  std::iota(pp.begin(), pp.end(), 0);
  std::iota(tp.begin(), tp.end(), 0);
  std::shuffle(pp.begin(), pp.end(), rng);
  std::shuffle(tp.begin(), tp.end(), rng);
  Process out(p.net());
  std::vector<std::size_t> pnew(p.place_count()), tnew(p.transition_count());
  std::size_t birth = 1000;
  for (auto i : pp) pnew[i] = out.add_place(p.place(i).label, birth++, p.place(i).initial);
  for (auto i : tp) tnew[i] = out.add_transition(p.transition(i).label, birth++);
  for (auto t : tp) {
    for (auto q : p.inputs(t)) out.add_input(pnew[q], tnew[t]);
    for (auto q : p.outputs(t)) out.add_output(tnew[t], pnew[q]);
  }
  return out;
}

TEST(BuildProcess, FigureOneProcesses) {
  Net a = load_net("NET-A");
  Process left = fig1_left(a), right = fig1_right(a);
  EXPECT_TRUE(is_valid_process(left));
  EXPECT_TRUE(is_valid_process(right));
  EXPECT_FALSE(are_isomorphic(left, right));
  EXPECT_EQ(linearisations(left), words(a, {"a b c", "a c b", "b a c"}));
  EXPECT_EQ(linearisations(right), words(a, {"a b c", "b a c", "b c a"}));
  EXPECT_EQ(left.final_marking(), marking(a, {{"4", 1}, {"5", 1}}));
  EXPECT_TRUE(are_isomorphic(right, build_process(a, word(a, "b c a"))));
}

TEST(BuildProcess, PoliciesAndErrors) {
  Net a = load_net("NET-A");
  EXPECT_TRUE(are_isomorphic(build_process(a, word(a, "a b c"), TokenPolicy::newest_first()),
                             fig1_right(a)));
  EXPECT_THROW(build_process(a, word(a, "c")), NotEnabled);
  EXPECT_THROW(build_process(a, word(a, "a b c"), TokenPolicy::explicit_choice({})),
               PreconditionError);
  EXPECT_THROW(build_process(a, word(a, "a b c"), TokenPolicy::explicit_choice({2})),
               PreconditionError);
  EXPECT_THROW(build_process(a, word(a, "a b c"), TokenPolicy::explicit_choice({0, 0})),
               PreconditionError);
  Process empty = build_process(a, {});
  EXPECT_EQ(empty.transition_count(), 0u);
  EXPECT_EQ(empty.place_count(), 3u);
}

TEST(PiMembers, FigureOne) {
  Net a = load_net("NET-A");
  auto pi = pi_members(a, word(a, "a b c"));
  ASSERT_EQ(pi.processes.size(), 2u);
  EXPECT_FALSE(pi.truncated);
  IsoSet expected;
  expected.insert(fig1_left(a));
  expected.insert(fig1_right(a));
  for (const auto& p : pi.processes) EXPECT_TRUE(expected.contains(p));
  EXPECT_EQ(pi_members(a, word(a, "a b c"), false).processes.size(), 2u);
  EXPECT_EQ(pi_members(a, word(a, "a b c"), true, 1).processes.size(), 1u);
  EXPECT_TRUE(pi_members(a, word(a, "a b c"), true, 1).truncated);
  EXPECT_THROW(pi_members(a, word(a, "c")), NotEnabled);
}

TEST(PiMembers, NetBWithoutDedupCountsTokenChoices) {
  Net b = load_net("NET-B");
  // a picks one of the two p tokens, b takes the other, d picks one of the
  // two q tokens, c takes the single p token d produced.
  auto raw = pi_members(b, word(b, "a b d c"), false);
  EXPECT_EQ(raw.processes.size(), 2u * 1u * 2u * 1u);
  auto dedup = pi_members(b, word(b, "a b d c"));
  EXPECT_LE(dedup.processes.size(), raw.processes.size());
  for (const auto& p : dedup.processes) EXPECT_TRUE(linearisations(p).count(word(b, "a b d c")));
}

TEST(ValidateProcess, ReportsViolations) {
  Net c = load_net("NET-C");
  auto s = c.place("s");
  {
    // branching place: s consumed by both t and u
    Process p(c);
    auto init = p.add_place(s, 0, true);
    auto t = p.add_transition(c.transition("t"), 1);
    auto u = p.add_transition(c.transition("u"), 2);
    p.add_input(init, t);
    p.add_input(init, u);
    try {
      validate_process(p);
      FAIL();
    } catch (const InvalidProcess& e) {
      EXPECT_NE(std::string(e.what()).find("place branching at s@0"), std::string::npos);
    }
  }
  {
    // missing initial place
    Process p(c);
    EXPECT_FALSE(is_valid_process(p));
  }
  {
    // wrong label on the consumed place
    Net a = load_net("NET-A");
    Process p = build_process(a, {});
    auto t = p.add_transition(a.transition("c"), 10);
    p.add_input(0, t);
    auto v = [&] {
      try {
        validate_process(p);
      } catch (const InvalidProcess& e) {
        return e.violations;
      }
      return std::vector<std::string>{};
    }();
    EXPECT_FALSE(v.empty());
  }
}

TEST(Prefix, ByTransitions) {
  Net a = load_net("NET-A");
  Process left = fig1_left(a);
  auto sets = downward_closed_sets(left);
  // a, b independent; c after a: {}, a, b, ab, ac, abc
  EXPECT_EQ(sets.size(), 6u);
  for (const auto& keep : sets) {
    Process pre = prefix_by_transitions(left, keep);
    EXPECT_TRUE(is_valid_process(pre));
    EXPECT_TRUE(is_prefix(pre, left));
  }
  std::vector<bool> bad(3, false);
  for (std::size_t t = 0; t < 3; ++t)
    if (a.name(left.transition(t).label) == "c") bad[t] = true;
  EXPECT_THROW(prefix_by_transitions(left, bad), PreconditionError);
  EXPECT_FALSE(is_prefix(left, build_process(a, word(a, "a b"))));
  EXPECT_FALSE(is_prefix(fig1_right(a), left));
}

TEST(Prefix, UnionOfPrefixesIsPrefix) {
  std::mt19937_64 rng(5);
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    Net net = random_net({4, 4, 0.4, 1, 2, seed});
    Process p = build_process(net, random_firing_sequence(net, 5, rng));
    auto sets = downward_closed_sets(p);
    if (sets.size() > 40) sets.resize(40);
    for (std::size_t i = 0; i < sets.size(); i += 3)
      for (std::size_t j = i; j < sets.size(); j += 5) {
        Process u = process_union(prefix_by_transitions(p, sets[i]), prefix_by_transitions(p, sets[j]));
        EXPECT_TRUE(is_valid_process(u));
        EXPECT_TRUE(is_prefix(u, p));
        ++checked;
      }
  }
  EXPECT_GT(checked, 300u);
}

TEST(Isomorphism, InvariantUnderRenumbering) {
  std::mt19937_64 rng(9);
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Net net = random_net({4, 3, 0.4, 2, 2, seed});
    Process p = build_process(net, random_firing_sequence(net, 6, rng), TokenPolicy::newest_first());
    Process q = shuffled_copy(p, rng);
    EXPECT_TRUE(is_valid_process(q));
    EXPECT_TRUE(are_isomorphic(p, q));
    EXPECT_EQ(linearisations(p), linearisations(q));
  }
}

// Every member of Π(σ) is a valid process with σ among its linearisations;
// every linearisation fires and reaches the process's final marking.
TEST(PiMembers, MembersAreProcessesOfTheSequence) {
  std::mt19937_64 rng(3);
  std::size_t members = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Net net = random_net({4, 3, 0.45, 2, 2, seed});
    Word w = random_firing_sequence(net, 5, rng);
    auto pi = pi_members(net, w, true, 200);
    for (const auto& p : pi.processes) {
      ++members;
      ASSERT_TRUE(is_valid_process(p));
      auto lin = linearisations(p);
      EXPECT_TRUE(lin.count(w));
      for (const auto& l : lin)
        EXPECT_EQ(fire_sequence(net, net.initial_marking(), l), p.final_marking());
    }
  }
  EXPECT_GT(members, 300u);
}

}  // namespace
