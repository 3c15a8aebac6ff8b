#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "process.hpp"
#include "traces.hpp"
#include "verdict.hpp"

namespace pnsem {

/// Whether place occurrences p and q are causally ordered (p F+ q or q F+ p).
inline bool causally_ordered(const Process& proc, std::size_t p, std::size_t q,
                             const std::vector<std::vector<bool>>& causes) {
  auto before = [&](std::size_t x, std::size_t y) {
    auto c = proc.consumer(x);
    auto pr = proc.producer(y);
    return c && pr && causes[*pr][*c];
  };
  return before(p, q) || before(q, p);
}

/// Exchanges the outgoing arcs of two causally unordered place occurrences
/// with the same label.
inline Process swap(const Process& proc, std::size_t p, std::size_t q) {
  if (p >= proc.place_count() || q >= proc.place_count())
    throw PreconditionError("swap: no such place occurrence");
  if (proc.place(p).label != proc.place(q).label)
    throw PreconditionError("swap: label mismatch (" + proc.net().name(proc.place(p).label) +
                            " vs " + proc.net().name(proc.place(q).label) + ")");
  if (causally_ordered(proc, p, q, detail::causality(proc)))
    throw PreconditionError("swap: place occurrences are causally ordered");
  Process out = proc;
  if (p == q) return out;
  auto cp = proc.consumers(p);
  auto cq = proc.consumers(q);
  out.set_consumers(p, cq);
  out.set_consumers(q, cp);
  return out;
}

/// Pairs p < q admissible for swap that actually change the process.
inline std::vector<std::pair<std::size_t, std::size_t>> admissible_swaps(const Process& proc) {
  auto causes = detail::causality(proc);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t p = 0; p < proc.place_count(); ++p)
    for (std::size_t q = p + 1; q < proc.place_count(); ++q) {
      if (proc.place(p).label != proc.place(q).label) continue;
      if (proc.consumers(p) == proc.consumers(q)) continue;
      if (causally_ordered(proc, p, q, causes)) continue;
      out.emplace_back(p, q);
    }
  return out;
}

/// Some single swap (possibly the trivial one) turns a into a process
/// isomorphic to b.
inline bool one_step_equiv(const Process& a, const Process& b) {
  if (a.transition_labels() != b.transition_labels()) return false;
  if (are_isomorphic(a, b)) return true;
  for (auto [p, q] : admissible_swaps(a))
    if (are_isomorphic(swap(a, p, q), b)) return true;
  return false;
}

/// Processes reachable from `proc` by swaps, one per isomorphism class.
inline std::vector<Process> swap_class(const Process& proc, std::size_t limit = 100000) {
  IsoSet seen;
  seen.insert(proc);
  std::deque<std::size_t> queue{0};
  while (!queue.empty() && seen.size() < limit) {
    Process cur = seen.items()[queue.front()];
    queue.pop_front();
    for (auto [p, q] : admissible_swaps(cur))
      if (seen.insert(swap(cur, p, q))) queue.push_back(seen.size() - 1);
  }
  return seen.release();
}

enum class SwapMethod { via_traces, direct_bfs };

/// Decides the reflexive-transitive closure of one-step swapping equivalence.
///
/// via_traces compares the adjacency classes of one linearisation of each
/// process; direct_bfs explores swaps up to isomorphism and never looks at
/// firing sequences.
inline bool swap_equivalent(const Process& a, const Process& b,
                            SwapMethod method = SwapMethod::via_traces) {
  if (a.transition_labels() != b.transition_labels()) return false;
  if (method == SwapMethod::via_traces)
    return trace_equivalent(a.net(), some_linearisation(a), some_linearisation(b));

  IsoSet seen;
  seen.insert(a);
  if (are_isomorphic(a, b)) return true;
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    Process cur = seen.items()[queue.front()];
    queue.pop_front();
    for (auto [p, q] : admissible_swaps(cur)) {
      Process next = swap(cur, p, q);
      if (!seen.insert(next)) continue;
      if (are_isomorphic(next, b)) return true;
      queue.push_back(seen.size() - 1);
    }
  }
  return false;
}

/// A swapping-equivalence class of finite processes, named by the least
/// firing sequence of the corresponding adjacency class. The representative
/// is built from that sequence with the oldest-first policy.
class BDClassRef {
public:
  BDClassRef(const Net& net, const TraceClass& c)
      : canonical_(c.representative()), representative_(build_process(net, c.representative())) {}

  const Word& canonical() const { return canonical_; }
  const Process& representative() const { return representative_; }
  std::size_t length() const { return canonical_.size(); }

  friend bool operator==(const BDClassRef& a, const BDClassRef& b) {
    return a.canonical_ == b.canonical_;
  }
  /// Length first, then lexicographic.
  friend bool operator<(const BDClassRef& a, const BDClassRef& b) {
    if (a.canonical_.size() != b.canonical_.size()) return a.canonical_.size() < b.canonical_.size();
    return a.canonical_ < b.canonical_;
  }

private:
  Word canonical_;
  Process representative_;
};

inline BDClassRef bd_class_of(const Process& proc) {
  return BDClassRef(proc.net(), trace_class(proc.net(), some_linearisation(proc)));
}

/// Prefix order on swap classes, through the order-preserving correspondence
/// with adjacency classes.
inline bool bd_class_leq(const Net& net, const BDClassRef& small, const BDClassRef& big) {
  if (small.length() > big.length()) return false;
  return class_leq(trace_class(net, small.canonical()), trace_class(net, big.canonical()));
}

/// Prefix order on swap classes searched directly on processes: some member
/// of [small] is a prefix of some member of [big]. Exponential; meant as an
/// independent check of bd_class_leq on small instances.
inline bool bd_class_leq_direct(const Process& small, const Process& big) {
  if (small.transition_count() > big.transition_count()) return false;
  if (!leq(small.transition_labels(), big.transition_labels())) return false;
  IsoSet small_class;
  for (auto& p : swap_class(small)) small_class.insert(p);
  for (const auto& q : swap_class(big))
    for (const auto& keep : downward_closed_sets(q)) {
      if (static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true)) !=
          small.transition_count())
        continue;
      if (small_class.contains(prefix_by_transitions(q, keep))) return true;
    }
  return false;
}

/// A finite, prefix-closed and directed set of swap classes.
struct FiniteBDRun {
  std::vector<BDClassRef> classes;  // sorted, no duplicates

  bool contains(const BDClassRef& c) const {
    return std::binary_search(classes.begin(), classes.end(), c);
  }
  friend bool operator==(const FiniteBDRun& a, const FiniteBDRun& b) {
    return a.classes == b.classes;
  }
};

/// Swap classes of all prefixes of `proc`, closed downwards.
inline FiniteBDRun bdify(const Process& proc) {
  const Net& net = proc.net();
  std::set<Word> tops;
  for (const auto& keep : downward_closed_sets(proc))
    tops.insert(trace_class(net, some_linearisation(prefix_by_transitions(proc, keep)))
                    .representative());
  std::set<Word> reps;
  for (const auto& top : tops) {
    if (reps.count(top)) continue;
    for (const auto& c : FiniteRun(trace_class(net, top)).classes(net))
      reps.insert(c.representative());
  }
  FiniteBDRun run;
  for (const auto& w : reps) run.classes.emplace_back(net, trace_class(net, w));
  std::sort(run.classes.begin(), run.classes.end());
  return run;
}

/// Maximal processes up to swapping, as far as a length bound shows.
struct MaximalProcesses {
  std::vector<BDClassRef> classes;  // maximal within the bound
  std::vector<bool> terminal;       // per class: no extension exists at all
  bool truncated = false;
  Uniqueness verdict = Uniqueness::unknown;
  std::string reason;
};

inline MaximalProcesses maximal_processes(const Net& net, std::size_t depth_bound,
                                          const Bounds& certify = {}) {
  auto runs = enumerate_runs(net, depth_bound, certify);
  MaximalProcesses out;
  for (auto i : runs.maximal) {
    out.classes.emplace_back(net, runs.classes[i]);
    out.terminal.push_back(runs.dead[i]);
  }
  out.truncated = runs.truncated;
  out.verdict = runs.verdict;
  out.reason = runs.reason;
  return out;
}

}  // namespace pnsem
