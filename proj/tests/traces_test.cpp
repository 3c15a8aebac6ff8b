#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"

namespace {

using namespace pnsem;
using namespace pnsem::testing;

TraceClass cls(const Net& net, const char* w) { return trace_class(net, word(net, w)); }

// Closure computed over all firing-sequence permutations of σ, joined
// pairwise through adjacent(); independent of the BFS in trace_class.
std::set<Word> closure_by_permutations(const Net& net, Word sigma) {
  std::vector<Word> perms;
  Word w = sigma;
  std::sort(w.begin(), w.end());
  do {
    if (is_firing_sequence(net, w)) perms.push_back(w);
  } while (std::next_permutation(w.begin(), w.end()));
  std::set<Word> in{sigma};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& p : perms) {
      if (in.count(p)) continue;
      for (const auto& q : in)
        if (adjacent(net, q, p)) {
          in.insert(p);
          grew = true;
          break;
        }
    }
  }
  return in;
}

TEST(Adjacent, Examples) {
  Net b = load_net("NET-B");
  EXPECT_TRUE(adjacent(b, word(b, "a b d c"), word(b, "a d b c")));
  Net c = load_net("NET-C");
  EXPECT_FALSE(adjacent(c, word(c, "t"), word(c, "u")));
  Net a = load_net("NET-A");
  EXPECT_TRUE(adjacent(a, word(a, "a b c"), word(a, "b a c")));
  EXPECT_FALSE(adjacent(a, word(a, "a b c"), word(a, "a b c")));
  EXPECT_THROW(adjacent(c, word(c, "t u"), word(c, "u t")), NotEnabled);
}

TEST(TraceClass, Examples) {
  Net b = load_net("NET-B");
  auto cb = cls(b, "a b d c");
  EXPECT_EQ(cb.size(), 12u);
  EXPECT_EQ(cb.representative(), word(b, "a b d c"));
  for (auto w : {"a d b c", "b a d c", "c d a b", "b d a c"}) EXPECT_TRUE(cb.contains(word(b, w))) << w;

  Net c = load_net("NET-C");
  EXPECT_EQ(cls(c, "t").size(), 1u);

  Net a = load_net("NET-A");
  auto ca = cls(a, "a b c");
  std::vector<Word> expect{word(a, "a b c"), word(a, "a c b"), word(a, "b a c"), word(a, "b c a")};
  EXPECT_EQ(ca.members(), expect);
  EXPECT_THROW(cls(c, "t u"), NotEnabled);
}

TEST(TraceEquivalent, Examples) {
  Net b = load_net("NET-B");
  EXPECT_TRUE(trace_equivalent(b, word(b, "a b d c"), word(b, "b a d c")));
  EXPECT_TRUE(trace_equivalent(b, word(b, "a b"), word(b, "a b")));
  EXPECT_FALSE(trace_equivalent(b, word(b, "a"), word(b, "b")));
  Net c = load_net("NET-C");
  EXPECT_THROW(trace_equivalent(c, word(c, "t u"), word(c, "t")), NotEnabled);
}

TEST(ClassLeq, Examples) {
  Net b = load_net("NET-B");
  EXPECT_TRUE(class_leq(cls(b, "a"), cls(b, "a b d c")));
  EXPECT_TRUE(class_leq(cls(b, "c"), cls(b, "a b d c")));
  EXPECT_FALSE(class_leq(cls(b, "a b d c"), cls(b, "a")));
  EXPECT_TRUE(class_leq(cls(b, ""), cls(b, "a")));
}

TEST(EnumerateRuns, Examples) {
  Net b = load_net("NET-B");
  auto eb = enumerate_runs(b, 4);
  ASSERT_EQ(eb.maximal.size(), 1u);
  EXPECT_EQ(eb.classes[eb.maximal[0]].representative(), word(b, "a b d c"));
  EXPECT_EQ(eb.classes[eb.maximal[0]].size(), 12u);
  EXPECT_FALSE(eb.truncated);
  EXPECT_EQ(eb.verdict, Uniqueness::unique);

  Net c = load_net("NET-C");
  auto ec = enumerate_runs(c, 1);
  ASSERT_EQ(ec.maximal.size(), 2u);
  EXPECT_EQ(ec.classes[ec.maximal[0]].representative(), word(c, "t"));
  EXPECT_EQ(ec.classes[ec.maximal[1]].representative(), word(c, "u"));
  EXPECT_EQ(ec.verdict, Uniqueness::multiple);

  Net a = load_net("NET-A");
  auto ea = enumerate_runs(a, 3);
  ASSERT_EQ(ea.maximal.size(), 1u);
  EXPECT_EQ(ea.classes[ea.maximal[0]], cls(a, "a b c"));
  EXPECT_EQ(ea.verdict, Uniqueness::unique);

  auto partial = enumerate_runs(b, 2);
  EXPECT_TRUE(partial.truncated);
  EXPECT_EQ(partial.verdict, Uniqueness::unknown);
}

TEST(EnumerateRuns, TruncatedMultipleNeedsCertificate) {
  // Two transitions that fight over a token forever: loop t or loop u.
  NetDescription d;
  d.places = {{"s", 1}};
  d.transitions = {"t", "u"};
  d.arcs = {{"s", "t", 1}, {"t", "s", 1}, {"s", "u", 1}, {"u", "s", 1}};
  Net n = validate_net(d);
  auto e = enumerate_runs(n, 3);
  EXPECT_TRUE(e.truncated);
  EXPECT_EQ(e.verdict, Uniqueness::multiple);
  EXPECT_NE(e.reason.find("never enabled as a step"), std::string::npos);
}

TEST(RunConflictFree, Examples) {
  Net b = load_net("NET-B");
  auto vb = run_conflict_free(b, FiniteRun(cls(b, "a b d c")), 4);
  ASSERT_TRUE(vb.violated());
  EXPECT_TRUE(vb.witness->sigma.empty());
  EXPECT_EQ(vb.witness->g, step(b, {{"a", 1}, {"b", 1}, {"c", 1}}));

  Net c = load_net("NET-C");
  EXPECT_TRUE(run_conflict_free(c, FiniteRun(cls(c, "t")), 4).holds());

  Net a = load_net("NET-A");
  EXPECT_TRUE(run_conflict_free(a, FiniteRun(cls(a, "a b c")), 4).holds());
}

TEST(FiniteRun, ClassesBelowTop) {
  Net a = load_net("NET-A");
  FiniteRun r(cls(a, "a b c"));
  auto cs = r.classes(a);
  // [ε] [a] [b] [ab] [ac] [bc] [abc]
  EXPECT_EQ(cs.size(), 7u);
  for (const auto& c : cs) EXPECT_TRUE(class_leq(c, r.top()));
}

TEST(TraceClass, MatchesPermutationClosure) {
  std::mt19937_64 rng(17);
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Net net = random_net({4, 4, 0.35, 1, 2, seed});
    Word w = random_firing_sequence(net, 5, rng);
    auto c = trace_class(net, w);
    auto oracle = closure_by_permutations(net, w);
    EXPECT_EQ(std::set<Word>(c.members().begin(), c.members().end()), oracle);
    for (const auto& m : c.members()) EXPECT_EQ(step_of(m), step_of(w));
    ++checked;
  }
  EXPECT_EQ(checked, 300u);
}

TEST(TraceClass, ExtensionStability) {
  std::mt19937_64 rng(23);
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 1000 && checked < 400; ++seed) {
    Net net = random_net({4, 4, 0.35, 1, 2, seed});
    Word full = random_firing_sequence(net, 6, rng);
    if (full.size() < 3) continue;
    std::size_t cut = full.size() - 2;
    Word sigma(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(cut));
    Word mu(full.begin() + static_cast<std::ptrdiff_t>(cut), full.end());
    auto c = trace_class(net, sigma);
    for (const auto& rho : c.members()) {
      Word ext = rho;
      ext.insert(ext.end(), mu.begin(), mu.end());
      ASSERT_TRUE(is_firing_sequence(net, ext));
      EXPECT_TRUE(trace_equivalent(net, full, ext));
    }
    ++checked;
  }
  EXPECT_GE(checked, 400u);
}

TEST(ClassLeq, PartialOrderOnEnumeratedClasses) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Net net = random_net({4, 4, 0.35, 1, 2, seed});
    auto e = enumerate_runs(net, 4);
    const auto& cs = e.classes;
    std::size_t n = std::min<std::size_t>(cs.size(), 25);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_TRUE(class_leq(cs[i], cs[i]));
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && class_leq(cs[i], cs[j])) EXPECT_FALSE(class_leq(cs[j], cs[i]));
        for (std::size_t k = 0; k < n; ++k)
          if (class_leq(cs[i], cs[j]) && class_leq(cs[j], cs[k])) EXPECT_TRUE(class_leq(cs[i], cs[k]));
      }
    }
    // enumerated classes agree with trace_class
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(trace_class(net, cs[i].representative()), cs[i]);
  }
}

}  // namespace
