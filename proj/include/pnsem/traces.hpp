#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "explore.hpp"
#include "net.hpp"
#include "verdict.hpp"

namespace pnsem {

namespace detail {

/// markings[i] is the marking reached by the first i transitions of w.
inline std::vector<Marking> markings_along(const Net& net, const Word& w) {
  std::vector<Marking> ms{net.initial_marking()};
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!enabled(net, ms.back(), w[i])) throw NotEnabled(i + 1, net.name(w[i]));
    ms.push_back(fire_unchecked(net, ms.back(), w[i]));
  }
  return ms;
}

inline bool pair_enabled(const Net& net, const Marking& m, TransitionId t, TransitionId u) {
  Step g;
  g.add(t);
  g.add(u);
  return enabled(net, m, g);
}

/// Words adjacent to w (distinct from w).
inline std::vector<Word> adjacent_words(const Net& net, const Word& w) {
  auto ms = markings_along(net, w);
  std::vector<Word> out;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] == w[i + 1]) continue;
    if (!pair_enabled(net, ms[i], w[i], w[i + 1])) continue;
    Word v = w;
    std::swap(v[i], v[i + 1]);
    out.push_back(std::move(v));
  }
  return out;
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

inline bool starts_with(const Word& w, const Word& prefix) {
  return prefix.size() <= w.size() && std::equal(prefix.begin(), prefix.end(), w.begin());
}

}  // namespace detail

/// Adjacency: ρ arises from σ by exchanging two neighbouring transitions t u
/// that are enabled together as the step {t,u} where they occur.
inline bool adjacent(const Net& net, const Word& sigma, const Word& rho) {
  auto ms = detail::markings_along(net, sigma);
  detail::markings_along(net, rho);
  if (sigma.size() != rho.size()) return false;
  for (std::size_t i = 0; i + 1 < sigma.size(); ++i) {
    if (sigma[i] != rho[i + 1] || sigma[i + 1] != rho[i]) continue;
    bool rest_equal = std::equal(sigma.begin(), sigma.begin() + i, rho.begin()) &&
                      std::equal(sigma.begin() + i + 2, sigma.end(), rho.begin() + i + 2);
    if (rest_equal && detail::pair_enabled(net, ms[i], sigma[i], sigma[i + 1])) return true;
  }
  return false;
}

/// An equivalence class of firing sequences under the closure of adjacency,
/// held with all of its members.
class TraceClass {
public:
  TraceClass() = default;
  explicit TraceClass(std::vector<Word> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  /// Lexicographically least member.
  const Word& representative() const { return members_.front(); }
  const std::vector<Word>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::size_t length() const { return members_.front().size(); }
  bool contains(const Word& w) const {
    return std::binary_search(members_.begin(), members_.end(), w);
  }
  Step transitions() const { return step_of(representative()); }

  friend bool operator==(const TraceClass& a, const TraceClass& b) {
    return a.representative() == b.representative();
  }

private:
  std::vector<Word> members_;
};

inline TraceClass trace_class(const Net& net, const Word& sigma) {
  detail::markings_along(net, sigma);
  std::set<Word> seen{sigma};
  std::deque<Word> queue{sigma};
  while (!queue.empty()) {
    Word w = std::move(queue.front());
    queue.pop_front();
    for (auto& v : detail::adjacent_words(net, w))
      if (seen.insert(v).second) queue.push_back(std::move(v));
  }
  return TraceClass(std::vector<Word>(seen.begin(), seen.end()));
}

inline bool trace_equivalent(const Net& net, const Word& sigma, const Word& rho) {
  detail::markings_along(net, sigma);
  detail::markings_along(net, rho);
  if (sigma == rho) return true;
  if (step_of(sigma) != step_of(rho)) return false;
  std::set<Word> seen{sigma};
  std::deque<Word> queue{sigma};
  while (!queue.empty()) {
    Word w = std::move(queue.front());
    queue.pop_front();
    for (auto& v : detail::adjacent_words(net, w)) {
      if (v == rho) return true;
      if (seen.insert(v).second) queue.push_back(std::move(v));
    }
  }
  return false;
}

/// Prefix order on classes: some member of `big` starts with a member of
/// `small`. The set of prefixes of members of a class is itself closed under
/// equivalence, so testing the representative of `small` suffices.
inline bool class_leq(const TraceClass& small, const TraceClass& big) {
  if (small.length() > big.length()) return false;
  const Word& r = small.representative();
  return std::any_of(big.members().begin(), big.members().end(),
                     [&](const Word& m) { return detail::starts_with(m, r); });
}

/// The finite run generated by a class: every class below `top`, stored as
/// the set of all prefixes of members of `top`.
class FiniteRun {
public:
  explicit FiniteRun(TraceClass top) : top_(std::move(top)) {
    for (const auto& m : top_.members())
      for (std::size_t k = 0; k <= m.size(); ++k) prefixes_.emplace(m.begin(), m.begin() + k);
  }

  const TraceClass& top() const { return top_; }
  const std::set<Word>& words() const { return prefixes_; }

  /// [w] belongs to the run.
  bool contains(const Word& w) const { return prefixes_.count(w) != 0; }

  /// The classes of the run, ordered by (length, representative).
  std::vector<TraceClass> classes(const Net& net) const {
    std::vector<TraceClass> out;
    std::set<Word> covered;
    std::vector<Word> ordered(prefixes_.begin(), prefixes_.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const Word& a, const Word& b) { return a.size() < b.size(); });
    for (const auto& w : ordered) {
      if (covered.count(w)) continue;
      TraceClass c = trace_class(net, w);
      for (const auto& m : c.members()) covered.insert(m);
      out.push_back(std::move(c));
    }
    return out;
  }

private:
  TraceClass top_;
  std::set<Word> prefixes_;
};

/// All classes of firing sequences up to a length bound.
struct RunEnumeration {
  std::size_t bound = 0;
  std::vector<TraceClass> classes;   // ordered by (length, representative)
  std::vector<std::size_t> maximal;  // classes not strictly below another one
  std::vector<bool> dead;            // per class: the reached marking enables nothing
  bool truncated = false;            // some length-`bound` sequence can continue

  Uniqueness verdict = Uniqueness::unknown;
  std::string reason;
};

namespace detail {

/// Pairs {t,u}, t != u, that are never enabled together as a step at any
/// reachable marking. Empty optional when reachability is not complete within
/// the bounds.
inline std::optional<std::set<std::pair<TransitionId, TransitionId>>> never_coenabled(
    const Net& net, const Bounds& b) {
  auto ex = explore(net, b.depth, b.tokens);
  if (ex.truncated) return std::nullopt;
  std::set<std::pair<TransitionId, TransitionId>> out;
  for (auto t : net.transitions())
    for (auto u : net.transitions())
      if (t != u) out.insert({t, u});
  for (const auto& m : ex.markings)
    for (auto it = out.begin(); it != out.end();)
      it = pair_enabled(net, m, it->first, it->second) ? out.erase(it) : std::next(it);
  return out;
}

/// Decides uniqueness of the maximal run from a bounded enumeration.
///
/// Complete enumerations are exact. Otherwise "multiple" needs a certificate
/// that two maximal-within-bound classes lie in different maximal runs:
///  - a dead class (a genuinely maximal element) next to any other maximal
///    class, or
///  - members σt... of one class and σu... of another with {t,u} never
///    enabled as a step at a reachable marking. Any common upper bound of
///    [σt] and [σu] would have to exchange that t and u by an adjacency step,
///    which needs {t,u} enabled somewhere.
inline void decide_uniqueness(const Net& net, RunEnumeration& e, const Bounds& certify) {
  if (!e.truncated) {
    e.verdict = e.maximal.size() == 1 ? Uniqueness::unique : Uniqueness::multiple;
    e.reason = "enumeration complete";
    return;
  }
  e.verdict = Uniqueness::unknown;
  e.reason = "bound exhausted";
  if (e.maximal.size() < 2) return;
  for (auto i : e.maximal)
    if (e.dead[i]) {
      e.verdict = Uniqueness::multiple;
      e.reason = "class [" + format_word(net, e.classes[i].representative()) +
                 "] cannot be extended";
      return;
    }
  auto apart = never_coenabled(net, certify);
  if (!apart || apart->empty()) return;
  for (std::size_t x = 0; x < e.maximal.size(); ++x) {
    const auto& c1 = e.classes[e.maximal[x]];
    for (std::size_t y = x + 1; y < e.maximal.size(); ++y) {
      const auto& c2 = e.classes[e.maximal[y]];
      std::set<Word> p2;
      for (const auto& m : c2.members())
        for (std::size_t k = 1; k <= m.size(); ++k) p2.emplace(m.begin(), m.begin() + k);
      for (const auto& m : c1.members()) {
        Word sigma;
        for (auto t : m) {
          for (const auto& [a, u] : *apart) {
            if (a != t) continue;
            Word probe = sigma;
            probe.push_back(u);
            if (p2.count(probe)) {
              sigma.push_back(t);
              e.verdict = Uniqueness::multiple;
              e.reason = "[" + format_word(net, sigma) + "] and [" + format_word(net, probe) +
                         "] are incompatible ({" + net.name(t) + "," + net.name(u) +
                         "} never enabled as a step)";
              return;
            }
          }
          sigma.push_back(t);
        }
      }
    }
  }
}

}  // namespace detail

/// Enumerates every class of firing sequences of length <= bound.
/// `certify` bounds the reachability search used to certify "multiple" on a
/// truncated enumeration.
inline RunEnumeration enumerate_runs(const Net& net, std::size_t bound,
                                     const Bounds& certify = {}) {
  RunEnumeration e;
  e.bound = bound;
  std::vector<std::map<Word, Marking>> levels(1);
  levels[0].emplace(Word{}, net.initial_marking());
  for (std::size_t k = 0; k < bound; ++k) {
    std::map<Word, Marking> next;
    for (const auto& [w, m] : levels[k])
      for (auto t : enabled_transitions(net, m)) {
        Word v = w;
        v.push_back(t);
        next.emplace(std::move(v), fire_unchecked(net, m, t));
      }
    if (next.empty()) break;
    levels.push_back(std::move(next));
  }

  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto& level = levels[k];
    std::vector<const Word*> words;
    std::map<Word, std::size_t> idx;
    for (const auto& [w, m] : level) {
      idx.emplace(w, words.size());
      words.push_back(&w);
    }
    detail::DisjointSets ds(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      const Word& w = *words[i];
      for (std::size_t j = 0; j + 1 < w.size(); ++j) {
        if (w[j] == w[j + 1]) continue;
        const Marking& before = levels[j].at(Word(w.begin(), w.begin() + j));
        if (!detail::pair_enabled(net, before, w[j], w[j + 1])) continue;
        Word v = w;
        std::swap(v[j], v[j + 1]);
        ds.unite(i, idx.at(v));
      }
    }
    std::map<std::size_t, std::vector<Word>> groups;
    for (std::size_t i = 0; i < words.size(); ++i) groups[ds.find(i)].push_back(*words[i]);
    std::vector<TraceClass> at_k;
    for (auto& [root, members] : groups) at_k.emplace_back(std::move(members));
    std::sort(at_k.begin(), at_k.end(), [](const TraceClass& a, const TraceClass& b) {
      return a.representative() < b.representative();
    });
    for (auto& c : at_k) {
      const Marking& m = level.at(c.representative());
      bool is_dead = enabled_transitions(net, m).empty();
      e.dead.push_back(is_dead);
      if (is_dead || k == bound) e.maximal.push_back(e.classes.size());
      if (!is_dead && k == bound) e.truncated = true;
      e.classes.push_back(std::move(c));
    }
  }
  detail::decide_uniqueness(net, e, certify);
  return e;
}

struct RunConflictWitness {
  Word sigma;
  Step g;
};

namespace detail {

/// Calls f(G) for each non-empty G with 0 <= G(t) <= limit[t], ordered by
/// support size, then support (lexicographic), then multiplicities ascending.
/// Stops when f returns true.
template <typename F>
bool for_each_multiset(const std::vector<std::pair<TransitionId, std::size_t>>& limit, F&& f) {
  std::size_t n = limit.size();
  for (std::size_t size = 1; size <= n; ++size) {
    std::vector<std::size_t> pick(size);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      std::vector<std::size_t> mult(size, 1);
      while (true) {
        Step g;
        for (std::size_t i = 0; i < size; ++i) g.add(limit[pick[i]].first, mult[i]);
        if (f(g)) return true;
        std::size_t j = size;
        while (j > 0 && mult[j - 1] == limit[pick[j - 1]].second) mult[--j] = 1;
        if (j == 0) break;
        ++mult[j - 1];
      }
      std::size_t j = size;
      while (j > 0 && pick[j - 1] == n - size + j - 1) --j;
      if (j == 0) break;
      ++pick[j - 1];
      for (std::size_t k = j; k < size; ++k) pick[k] = pick[k - 1] + 1;
    }
  }
  return false;
}

}  // namespace detail

/// Conflict-freeness of a finite run: whenever each t in G can follow σ
/// inside the run G(t) times and σ enables G↾{t}, σ must enable G. Checks all
/// σ in the run and all G with G(t) <= gmax; the first violation found (σ in
/// length-lexicographic order) is returned as witness.
inline Verdict<RunConflictWitness> run_conflict_free(const Net& net, const FiniteRun& run,
                                                    std::size_t gmax) {
  Verdict<RunConflictWitness> v;
  v.bounds.gmax = gmax;
  v.bounds.depth = run.top().length();
  std::vector<Word> sigmas(run.words().begin(), run.words().end());
  std::stable_sort(sigmas.begin(), sigmas.end(),
                   [](const Word& a, const Word& b) { return a.size() < b.size(); });
  for (const auto& sigma : sigmas) {
    Marking m = fire_sequence(net, net.initial_marking(), sigma);
    std::vector<std::pair<TransitionId, std::size_t>> limit;
    for (auto t : net.transitions()) {
      std::size_t k = 0;
      Word probe = sigma;
      while (k < gmax) {
        probe.push_back(t);
        if (!run.contains(probe) || !leq(scale(k + 1, net.pre(t)), m)) break;
        ++k;
      }
      if (k > 0) limit.emplace_back(t, k);
    }
    if (limit.empty()) continue;
    Step all;
    for (const auto& [t, k] : limit) all.add(t, k);
    if (enabled(net, m, all)) continue;  // every smaller G is enabled too
    detail::for_each_multiset(limit, [&](const Step& g) {
      if (enabled(net, m, g)) return false;
      v.witness = RunConflictWitness{sigma, g};
      return true;
    });
    v.status = Status::violated;
    return v;
  }
  v.status = Status::holds;
  return v;
}

}  // namespace pnsem
