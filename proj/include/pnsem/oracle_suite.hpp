#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "conflict.hpp"
#include "generator.hpp"
#include "io.hpp"
#include "net.hpp"
#include "process.hpp"
#include "swap.hpp"
#include "traces.hpp"
#include "verdict.hpp"

namespace pnsem {

/// A failed instance: the net in file format plus what went wrong, enough to
/// replay the check by hand.
struct PropertyFailure {
  std::string net_text;
  std::string detail;

  /// Net file with the detail as leading comments.
  std::string witness_file() const {
    std::ostringstream out;
    std::istringstream in(detail);
    std::string line;
    while (std::getline(in, line)) out << "# " << line << '\n';
    out << net_text;
    return out.str();
  }
};

struct PropertyReport {
  std::string id;
  std::size_t instances = 0;
  std::vector<PropertyFailure> failures;
  std::uint64_t seed = 0;
  Bounds bounds;
  std::string note;

  bool passed() const { return failures.empty() && instances > 0; }

  std::string summary() const {
    std::ostringstream out;
    out << id << ": " << instances << " instances, " << failures.size() << " failures (seed "
        << seed << ", depth " << bounds.depth << ", tokens " << bounds.tokens << ", gmax "
        << bounds.gmax << ")";
    if (!note.empty()) out << "; " << note;
    return out.str();
  }
};

namespace detail {

/// Small random nets: at most 6 transitions and 8 places.
inline GenParams small_params(std::mt19937_64& rng) {
  GenParams p;
  p.place_count = 3 + rng() % 4;
  p.transition_count = 2 + rng() % 4;
  p.arc_density = 0.3 + 0.05 * static_cast<double>(rng() % 4);
  p.max_weight = 1 + rng() % 2;
  p.max_initial_tokens = 1 + rng() % 2;
  p.seed = rng();
  return p;
}

inline Word random_sequence(const Net& net, std::size_t max_len, std::mt19937_64& rng) {
  Word w;
  Marking m = net.initial_marking();
  for (std::size_t i = 0; i < max_len; ++i) {
    auto en = enabled_transitions(net, m);
    if (en.empty()) break;
    auto t = en[rng() % en.size()];
    w.push_back(t);
    m = fire_unchecked(net, m, t);
  }
  return w;
}

/// The classes of all firing sequences that permute `w`.
inline std::vector<TraceClass> permutation_classes(const Net& net, const Word& w) {
  Word v = w;
  std::sort(v.begin(), v.end());
  std::vector<TraceClass> classes;
  std::set<Word> covered;
  do {
    if (covered.count(v) || !is_firing_sequence(net, v)) continue;
    classes.push_back(trace_class(net, v));
    covered.insert(classes.back().members().begin(), classes.back().members().end());
  } while (std::next_permutation(v.begin(), v.end()));
  return classes;
}

/// A member of another class with the same transitions as `w`; empty when
/// there is none.
inline std::optional<Word> inequivalent_permutation(const Net& net, const Word& w,
                                                    std::mt19937_64& rng) {
  std::vector<TraceClass> others;
  for (auto& c : permutation_classes(net, w))
    if (!c.contains(w)) others.push_back(std::move(c));
  if (others.empty()) return std::nullopt;
  const auto& c = others[rng() % others.size()];
  return c.members()[rng() % c.size()];
}

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[rng() % v.size()];
}

inline Word pick_linearisation(const Process& p, std::mt19937_64& rng) {
  auto lin = linearisations(p);
  std::vector<Word> v(lin.begin(), lin.end());
  return pick(v, rng);
}

inline std::string describe_words(const Net& net, std::initializer_list<std::pair<const char*, Word>> ws) {
  std::string out;
  for (const auto& [name, w] : ws) out += std::string(name) + ": " + format_word_spaced(net, w) + "\n";
  return out;
}

}  // namespace detail

/// Common Π-members imply equivalence; adjacency implies a common Π-member.
inline PropertyReport check_adjacent_share_process(std::size_t net_count, std::uint64_t seed) {
  PropertyReport r{"adjacent-share-process", 0, {}, seed, {5, 16, 4}, {}};
  std::mt19937_64 rng(seed);
  for (std::size_t n = 0; n < net_count; ++n) {
    Net net = random_net(detail::small_params(rng));
    Word sigma = detail::random_sequence(net, r.bounds.depth, rng);
    auto pi_sigma = pi_members(net, sigma, true, 2000);
    if (pi_sigma.truncated) continue;
    IsoSet mine;
    for (const auto& p : pi_sigma.processes) mine.insert(p);
    auto common = [&](const Word& rho) {
      for (const auto& q : pi_members(net, rho, true, 2000).processes)
        if (mine.contains(q)) return true;
      return false;
    };
    for (const auto& rho : detail::adjacent_words(net, sigma)) {
      ++r.instances;
      if (!common(rho))
        r.failures.push_back({write_net(net), "adjacent sequences without a common process\n" +
                                                  detail::describe_words(net, {{"sigma", sigma}, {"rho", rho}})});
    }
    // inequivalent sequences over the same transitions must share no process
    auto other = detail::inequivalent_permutation(net, sigma, rng);
    Word rho = other ? *other : sigma;
    ++r.instances;
    if (common(rho) && !trace_equivalent(net, sigma, rho))
      r.failures.push_back({write_net(net), "common process but not equivalent\n" +
                                                detail::describe_words(net, {{"sigma", sigma}, {"rho", rho}})});
  }
  return r;
}

/// Sequence-level and process-level equivalence agree, decided by two
/// independent procedures.
inline PropertyReport check_sequence_process_equivalence(std::size_t instances, std::uint64_t seed) {
  PropertyReport r{"sequence-process-equivalence", 0, {}, seed, {5, 16, 4}, {}};
  std::mt19937_64 rng(seed);
  std::size_t positive = 0, hard = 0;
  while (r.instances < instances) {
    Net net = random_net(detail::small_params(rng));
    Word sigma = detail::random_sequence(net, r.bounds.depth, rng);
    Word rho;
    switch (r.instances % 3) {
      case 0:
        rho = detail::pick(trace_class(net, sigma).members(), rng);
        break;
      case 1: {
        // same transitions, different class; resample until one exists
        auto other = detail::inequivalent_permutation(net, sigma, rng);
        if (!other) continue;
        rho = *other;
        ++hard;
        break;
      }
      default:
        rho = detail::random_sequence(net, sigma.size(), rng);
    }
    auto ps = pi_members(net, sigma, true, 50);
    auto qs = pi_members(net, rho, true, 50);
    const Process& p = detail::pick(ps.processes, rng);
    const Process& q = detail::pick(qs.processes, rng);
    Word ls = detail::pick_linearisation(p, rng);
    Word lr = detail::pick_linearisation(q, rng);
    ++r.instances;
    bool seq = trace_equivalent(net, ls, lr);
    bool proc = swap_equivalent(p, q, SwapMethod::direct_bfs);
    positive += seq;
    if (seq != proc)
      r.failures.push_back(
          {write_net(net), std::string("sequences ") + (seq ? "equivalent" : "not equivalent") +
                               ", processes " + (proc ? "equivalent" : "not equivalent") + "\n" +
                               detail::describe_words(net, {{"sigma", ls}, {"rho", lr}})});
  }
  r.note = std::to_string(positive) + " equivalent pairs, " + std::to_string(hard) +
           " inequivalent pairs over the same transitions";
  return r;
}

/// The prefix orders on sequence classes and on swap classes agree.
inline PropertyReport check_prefix_order_agreement(std::size_t instances, std::uint64_t seed) {
  PropertyReport r{"prefix-order-agreement", 0, {}, seed, {5, 16, 4}, {}};
  std::mt19937_64 rng(seed);
  std::size_t positive = 0, hard = 0;
  while (r.instances < instances) {
    Net net = random_net(detail::small_params(rng));
    Word big = detail::random_sequence(net, r.bounds.depth, rng);
    auto qs = pi_members(net, big, true, 50);
    const Process& q = detail::pick(qs.processes, rng);
    Process p(net);
    switch (r.instances % 3) {
      case 0: {
        auto sets = downward_closed_sets(q);
        p = prefix_by_transitions(q, detail::pick(sets, rng));
        break;
      }
      case 1: {
        // a non-empty prefix of a sequence from another class over the same
        // transitions
        auto other = detail::inequivalent_permutation(net, big, rng);
        if (!other) continue;
        other->resize(1 + rng() % other->size());
        p = detail::pick(pi_members(net, *other, true, 50).processes, rng);
        ++hard;
        break;
      }
      default: {
        Word w = detail::random_sequence(net, rng() % (r.bounds.depth + 1), rng);
        p = detail::pick(pi_members(net, w, true, 50).processes, rng);
      }
    }
    Word ls = detail::pick_linearisation(p, rng);
    Word lb = detail::pick_linearisation(q, rng);
    ++r.instances;
    bool seq = class_leq(trace_class(net, ls), trace_class(net, lb));
    bool proc = bd_class_leq_direct(p, q);
    positive += seq;
    if (seq != proc)
      r.failures.push_back(
          {write_net(net), std::string("class order ") + (seq ? "holds" : "fails") +
                               " on sequences but " + (proc ? "holds" : "fails") + " on processes\n" +
                               detail::describe_words(net, {{"small", ls}, {"big", lb}})});
  }
  r.note = std::to_string(positive) + " ordered pairs, " + std::to_string(hard) +
           " pairs drawn from another class over the same transitions";
  return r;
}

/// On structural conflict nets: every run is conflict-free, and a reachable
/// conflict splits the maximal runs and the maximal processes. Sampling goes
/// on until `net_count` nets were checked for conflict-freeness of their runs
/// and `net_count` nets carrying a conflict were checked for the split.
inline PropertyReport check_conflict_free_runs(std::size_t net_count, std::uint64_t seed) {
  PropertyReport r{"conflict-free-runs", 0, {}, seed, {6, 8, 4}, {}};
  std::mt19937_64 rng(seed);
  std::size_t run_nets = 0, conflict_nets = 0;
  for (std::size_t sampled = 0; (run_nets < net_count || conflict_nets < net_count) &&
                                sampled < 100 * net_count;
       ++sampled) {
    GenParams params = detail::small_params(rng);
    params.transition_count = 3 + rng() % 4;
    params.arc_density = 0.4;
    auto g = random_structural_conflict_net(params, r.bounds, 200);
    if (!g.net || enabled_transitions(*g.net, g.net->initial_marking()).empty()) continue;
    const Net& net = *g.net;
    if (run_nets < net_count) {
      ++run_nets;
      for (const auto& c : enumerate_runs(net, r.bounds.depth, r.bounds).classes) {
        ++r.instances;
        auto v = run_conflict_free(net, FiniteRun(c), r.bounds.gmax);
        if (v.violated())
          r.failures.push_back({write_net(net), "run not conflict-free\n" +
                                                    detail::describe_words(net, {{"top", c.representative()},
                                                                                 {"sigma", v.witness->sigma}}) +
                                                    "G: " + format_step(net, v.witness->g) + "\n"});
      }
    }
    if (conflict_nets >= net_count) continue;
    auto conflicts = find_conflicts(net, r.bounds);
    if (conflicts.witnesses.empty()) continue;
    ++conflict_nets;
    const auto& w = conflicts.witnesses.front();
    std::size_t gmax = 0;
    for (const auto& [t, k] : w.g) gmax = std::max(gmax, k);
    std::size_t bound = w.sigma.size() + gmax;
    std::string where = detail::describe_words(net, {{"sigma", w.sigma}}) + "G: " + format_step(net, w.g) + "\n";
    ++r.instances;
    auto e = enumerate_runs(net, bound, r.bounds);
    if (e.maximal.size() < 2)
      r.failures.push_back({write_net(net), "conflict but a single maximal class at bound " +
                                                std::to_string(bound) + "\n" + where});
    ++r.instances;
    auto mp = maximal_processes(net, bound, r.bounds);
    if (mp.verdict != Uniqueness::multiple)
      r.failures.push_back({write_net(net), std::string("conflict but maximal processes verdict ") +
                                                to_string(mp.verdict) + " at bound " +
                                                std::to_string(bound) + "\n" + where});
  }
  r.note = std::to_string(run_nets) + " nets with runs checked, " + std::to_string(conflict_nets) +
           " nets with a conflict";
  if (run_nets < net_count || conflict_nets < net_count)
    r.failures.push_back({"", "sampling budget exhausted: " + r.note});
  return r;
}

/// The downward closure of a finite process's prefix classes is prefix-closed
/// and directed; prefixes join by componentwise union.
inline PropertyReport check_prefix_lattice(std::size_t sample_count, std::uint64_t seed) {
  PropertyReport r{"prefix-lattice", 0, {}, seed, {5, 16, 4}, {}};
  std::mt19937_64 rng(seed);
  for (std::size_t n = 0; n < sample_count; ++n) {
    Net net = random_net(detail::small_params(rng));
    Word w = detail::random_sequence(net, r.bounds.depth, rng);
    Process proc = detail::pick(pi_members(net, w, true, 50).processes, rng);
    ++r.instances;
    auto run = bdify(proc);
    std::vector<std::string> problems;
    for (const auto& c : run.classes)
      for (const auto& keep : downward_closed_sets(c.representative()))
        if (!run.contains(bd_class_of(prefix_by_transitions(c.representative(), keep))))
          problems.push_back("not prefix-closed below [" + format_word_spaced(net, c.canonical()) + "]");
    for (const auto& x : run.classes)
      for (const auto& y : run.classes) {
        bool joined = std::any_of(run.classes.begin(), run.classes.end(), [&](const BDClassRef& z) {
          return bd_class_leq(net, x, z) && bd_class_leq(net, y, z);
        });
        if (!joined)
          problems.push_back("no upper bound for [" + format_word_spaced(net, x.canonical()) + "] and [" +
                             format_word_spaced(net, y.canonical()) + "]");
      }
    auto sets = downward_closed_sets(proc);
    for (std::size_t k = 0; k < std::min<std::size_t>(sets.size(), 10); ++k) {
      Process p1 = prefix_by_transitions(proc, detail::pick(sets, rng));
      Process p2 = prefix_by_transitions(proc, detail::pick(sets, rng));
      Process u = process_union(p1, p2);
      if (!is_valid_process(u) || !is_prefix(u, proc) || !is_prefix(p1, u) || !is_prefix(p2, u))
        problems.push_back("componentwise union of two prefixes is not their join");
      else if (!run.contains(bd_class_of(u)))
        problems.push_back("union class missing from the run");
    }
    if (!problems.empty())
      r.failures.push_back({write_net(net), problems.front() + "\n" +
                                                detail::describe_words(net, {{"process of", w}})});
  }
  return r;
}

/// On one-safe nets every firing sequence has exactly one process up to
/// isomorphism.
inline PropertyReport check_one_safe_singleton(std::size_t net_count, std::uint64_t seed) {
  PropertyReport r{"one-safe-singleton", 0, {}, seed, {6, 1, 4}, {}};
  std::mt19937_64 rng(seed);
  std::size_t accepted = 0;
  while (accepted < net_count) {
    auto p = detail::small_params(rng);
    p.max_initial_tokens = 1;
    auto g = random_one_safe_net(p, r.bounds.depth, 200);
    if (!g.net) continue;
    ++accepted;
    for (int k = 0; k < 5; ++k) {
      Word w = detail::random_sequence(*g.net, r.bounds.depth, rng);
      ++r.instances;
      auto pi = pi_members(*g.net, w);
      if (pi.processes.size() != 1)
        r.failures.push_back({write_net(*g.net), std::to_string(pi.processes.size()) +
                                                     " processes up to isomorphism\n" +
                                                     detail::describe_words(*g.net, {{"sigma", w}})});
    }
  }
  return r;
}

struct SuiteSizes {
  std::size_t adjacent_share_process = 100;
  std::size_t sequence_process_equivalence = 200;
  std::size_t prefix_order_agreement = 200;
  std::size_t conflict_free_runs = 100;
  std::size_t prefix_lattice = 100;
  std::size_t one_safe = 50;
};

/// Every property above, each with its own seed derived from `seed`.
inline std::vector<PropertyReport> run_suite(std::uint64_t seed, const SuiteSizes& sizes = {}) {
  return {
      check_adjacent_share_process(sizes.adjacent_share_process, detail::attempt_seed(seed, 1)),
      check_sequence_process_equivalence(sizes.sequence_process_equivalence, detail::attempt_seed(seed, 2)),
      check_prefix_order_agreement(sizes.prefix_order_agreement, detail::attempt_seed(seed, 3)),
      check_conflict_free_runs(sizes.conflict_free_runs, detail::attempt_seed(seed, 4)),
      check_prefix_lattice(sizes.prefix_lattice, detail::attempt_seed(seed, 5)),
      check_one_safe_singleton(sizes.one_safe, detail::attempt_seed(seed, 6)),
  };
}

}  // namespace pnsem
