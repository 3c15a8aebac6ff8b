#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "explore.hpp"
#include "net.hpp"
#include "traces.hpp"
#include "verdict.hpp"

namespace pnsem {

/// Semantic conflict: every G↾{t} is enabled at M but G is not.
inline bool is_conflict(const Net& net, const Marking& m, const Step& g) {
  if (g.empty()) return false;
  for (const auto& [t, n] : g)
    if (!leq(scale(n, net.pre(t)), m)) return false;
  return !enabled(net, m, g);
}

struct ConflictWitness {
  Word sigma;  // reaches `marking` from the initial marking
  Marking marking;
  Step g;
};

struct ConflictSearch {
  std::vector<ConflictWitness> witnesses;
  bool truncated = false;
};

/// Reachable conflicts within the bounds. For each explored marking, reports
/// the ⊆-minimal conflicting multisets G with G(t) <= gmax, ordered by
/// support then multiplicities.
inline ConflictSearch find_conflicts(const Net& net, const Bounds& b) {
  auto ex = explore(net, b.depth, b.tokens);
  ConflictSearch out;
  out.truncated = ex.truncated;
  for (std::size_t i = 0; i < ex.size(); ++i) {
    const Marking& m = ex.markings[i];
    std::vector<std::pair<TransitionId, std::size_t>> limit;
    for (auto t : net.transitions()) {
      std::size_t k = 0;
      while (k < b.gmax && leq(scale(k + 1, net.pre(t)), m)) ++k;
      if (k > 0) limit.emplace_back(t, k);
    }
    std::vector<Step> found;
    // by total size so that every sub-multiset is seen first
    std::vector<Step> candidates;
    detail::for_each_multiset(limit, [&](const Step& g) {
      candidates.push_back(g);
      return false;
    });
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Step& x, const Step& y) { return x.size() < y.size(); });
    for (const auto& g : candidates) {
      if (enabled(net, m, g)) continue;
      if (std::any_of(found.begin(), found.end(), [&](const Step& f) { return leq(f, g); }))
        continue;
      found.push_back(g);
    }
    std::sort(found.begin(), found.end(), [](const Step& x, const Step& y) {
      std::vector<TransitionId> sx, sy;
      for (const auto& [t, n] : x) sx.push_back(t);
      for (const auto& [t, n] : y) sy.push_back(t);
      if (sx != sy) return sx < sy;
      return x < y;
    });
    for (auto& g : found) out.witnesses.push_back({ex.witness[i], m, std::move(g)});
  }
  return out;
}

struct StructuralWitness {
  Word sigma;
  Marking marking;
  TransitionId t, u;  // t <= u; t == u means self-concurrency
  Marking shared;     // common preplaces
};

/// Structural conflict net check: no reachable marking enables a step {t,u}
/// whose transitions share a preplace. t == u counts, since every transition
/// has a preplace.
inline Verdict<StructuralWitness> check_structural(const Net& net, const Bounds& b) {
  Verdict<StructuralWitness> v;
  v.bounds = b;
  auto ex = explore(net, b.depth, b.tokens);
  for (std::size_t i = 0; i < ex.size(); ++i) {
    const Marking& m = ex.markings[i];
    for (auto t : net.transitions())
      for (auto u : net.transitions()) {
        if (u < t) continue;
        Step g;
        g.add(t);
        g.add(u);
        if (!enabled(net, m, g)) continue;
        Marking shared;
        for (const auto& [s, w] : net.pre(t))
          if (net.pre(u).contains(s)) shared.add(s);
        if (shared.empty()) continue;
        v.status = Status::violated;
        v.witness = StructuralWitness{ex.witness[i], m, t, u, shared};
        return v;
      }
  }
  v.status = ex.truncated ? Status::unknown : Status::holds;
  return v;
}

/// Conflict of a set of transitions decided pairwise, valid on structural
/// conflict nets only: all members enabled and some two distinct members not
/// enabled together.
inline bool pairwise_conflict_reduction(const Net& net, const Verdict<StructuralWitness>& structural,
                                        const Marking& m, const std::set<TransitionId>& g) {
  if (!structural.holds())
    throw PreconditionError("net is not established as a structural conflict net");
  for (auto t : g)
    if (!enabled(net, m, t)) return false;
  for (auto t : g)
    for (auto u : g) {
      if (!(t < u)) continue;
      if (!detail::pair_enabled(net, m, t, u)) return true;
    }
  return false;
}

}  // namespace pnsem
