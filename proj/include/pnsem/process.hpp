#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "net.hpp"

namespace pnsem {

/// Place occurrence (a token) of a process. `birth` is its position in the
/// construction order; (label, birth) identifies it across prefixes.
struct PlaceOccurrence {
  PlaceId label;
  std::size_t birth = 0;
  bool initial = false;
};

struct TransitionOccurrence {
  TransitionId label;
  std::size_t birth = 0;
};

/// A finite GR-process: an occurrence net with arcs of weight one, mapped onto
/// a host net through the occurrence labels.
///
/// The host net must outlive the process. Candidates built by hand may break
/// the process conditions; validate_process reports every violation.
class Process {
public:
  explicit Process(const Net& host) : net_(&host) {}

  const Net& net() const { return *net_; }

  std::size_t place_count() const { return places_.size(); }
  std::size_t transition_count() const { return transitions_.size(); }

  const PlaceOccurrence& place(std::size_t p) const { return places_.at(p); }
  const TransitionOccurrence& transition(std::size_t t) const { return transitions_.at(t); }
  const std::vector<PlaceOccurrence>& places() const { return places_; }
  const std::vector<TransitionOccurrence>& transitions() const { return transitions_; }

  const std::vector<std::size_t>& producers(std::size_t p) const { return producers_.at(p); }
  const std::vector<std::size_t>& consumers(std::size_t p) const { return consumers_.at(p); }
  const std::vector<std::size_t>& inputs(std::size_t t) const { return inputs_.at(t); }
  const std::vector<std::size_t>& outputs(std::size_t t) const { return outputs_.at(t); }

  std::optional<std::size_t> producer(std::size_t p) const {
    const auto& v = producers_.at(p);
    return v.empty() ? std::nullopt : std::optional<std::size_t>(v.front());
  }
  std::optional<std::size_t> consumer(std::size_t p) const {
    const auto& v = consumers_.at(p);
    return v.empty() ? std::nullopt : std::optional<std::size_t>(v.front());
  }

  std::size_t add_place(PlaceId label, std::size_t birth, bool initial) {
    places_.push_back({label, birth, initial});
    producers_.emplace_back();
    consumers_.emplace_back();
    return places_.size() - 1;
  }
  std::size_t add_transition(TransitionId label, std::size_t birth) {
    transitions_.push_back({label, birth});
    inputs_.emplace_back();
    outputs_.emplace_back();
    return transitions_.size() - 1;
  }
  /// Arc place -> transition.
  void add_input(std::size_t p, std::size_t t) {
    consumers_.at(p).push_back(t);
    inputs_.at(t).push_back(p);
  }
  /// Arc transition -> place.
  void add_output(std::size_t t, std::size_t p) {
    outputs_.at(t).push_back(p);
    producers_.at(p).push_back(t);
  }

  /// Replaces all outgoing arcs of p.
  void set_consumers(std::size_t p, std::vector<std::size_t> ts) {
    for (auto t : consumers_.at(p)) std::erase(inputs_[t], p);
    consumers_[p] = std::move(ts);
    for (auto t : consumers_[p]) inputs_[t].push_back(p);
  }

  /// Transition labels as a multiset over host transitions.
  Step transition_labels() const {
    Step g;
    for (const auto& t : transitions_) g.add(t.label);
    return g;
  }

  std::vector<std::size_t> initial_places() const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < places_.size(); ++p)
      if (places_[p].initial) out.push_back(p);
    return out;
  }

  /// Occurrences with no consumer, as a marking of the host net.
  Marking final_marking() const {
    Marking m;
    for (std::size_t p = 0; p < places_.size(); ++p)
      if (consumers_[p].empty()) m.add(places_[p].label);
    return m;
  }

private:
  const Net* net_;
  std::vector<PlaceOccurrence> places_;
  std::vector<TransitionOccurrence> transitions_;
  std::vector<std::vector<std::size_t>> producers_, consumers_;
  std::vector<std::vector<std::size_t>> inputs_, outputs_;
};

namespace detail {

/// Direct causal predecessors of each transition occurrence.
inline std::vector<std::vector<std::size_t>> predecessors(const Process& proc) {
  std::vector<std::vector<std::size_t>> pred(proc.transition_count());
  for (std::size_t t = 0; t < proc.transition_count(); ++t) {
    for (auto p : proc.inputs(t))
      for (auto u : proc.producers(p)) pred[t].push_back(u);
    std::sort(pred[t].begin(), pred[t].end());
    pred[t].erase(std::unique(pred[t].begin(), pred[t].end()), pred[t].end());
  }
  return pred;
}

/// Kahn order over transition occurrences, ties broken by birth; nullopt on a
/// cycle.
inline std::optional<std::vector<std::size_t>> topological_order(const Process& proc) {
  auto pred = predecessors(proc);
  std::size_t n = proc.transition_count();
  std::vector<std::size_t> missing(n);
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t t = 0; t < n; ++t) {
    missing[t] = pred[t].size();
    for (auto u : pred[t]) succ[u].push_back(t);
  }
  auto later = [&](std::size_t a, std::size_t b) {
    return proc.transition(a).birth > proc.transition(b).birth;
  };
  std::vector<std::size_t> ready;
  for (std::size_t t = 0; t < n; ++t)
    if (missing[t] == 0) ready.push_back(t);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::make_heap(ready.begin(), ready.end(), later);
    std::pop_heap(ready.begin(), ready.end(), later);
    std::size_t t = ready.back();
    ready.pop_back();
    order.push_back(t);
    for (auto u : succ[t])
      if (--missing[u] == 0) ready.push_back(u);
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

/// causes[t][u] iff u F+ t or u == t (reflexive-transitive causality).
inline std::vector<std::vector<bool>> causality(const Process& proc) {
  std::size_t n = proc.transition_count();
  auto order = topological_order(proc);
  if (!order) throw InvalidProcess({"flow relation is cyclic"});
  auto pred = predecessors(proc);
  std::vector<std::vector<bool>> causes(n, std::vector<bool>(n, false));
  for (auto t : *order) {
    causes[t][t] = true;
    for (auto u : pred[t])
      for (std::size_t v = 0; v < n; ++v)
        if (causes[u][v]) causes[t][v] = true;
  }
  return causes;
}

}  // namespace detail

/// Checks every process condition and returns the process unchanged.
/// Throws InvalidProcess listing each violated clause.
inline const Process& validate_process(const Process& proc) {
  const Net& net = proc.net();
  std::vector<std::string> problems;
  auto pname = [&](std::size_t p) {
    return net.name(proc.place(p).label) + "@" + std::to_string(proc.place(p).birth);
  };
  for (std::size_t p = 0; p < proc.place_count(); ++p) {
    if (proc.place(p).label.index >= net.place_count()) {
      problems.push_back("place occurrence maps to an unknown place");
      continue;
    }
    if (proc.producers(p).size() > 1 || proc.consumers(p).size() > 1)
      problems.push_back("place branching at " + pname(p));
    if (proc.place(p).initial != proc.producers(p).empty())
      problems.push_back("initial-marking mismatch at " + pname(p));
  }
  for (std::size_t t = 0; t < proc.transition_count(); ++t)
    if (proc.transition(t).label.index >= net.transition_count())
      problems.push_back("transition occurrence maps to an unknown transition");
  if (!problems.empty()) throw InvalidProcess(std::move(problems));

  if (!detail::topological_order(proc)) problems.push_back("cycle in flow relation");

  Marking image;
  for (auto p : proc.initial_places()) image.add(proc.place(p).label);
  if (image != net.initial_marking())
    problems.push_back("initial-marking mismatch: image " + format_marking(net, image) +
                       " differs from " + format_marking(net, net.initial_marking()));

  for (std::size_t t = 0; t < proc.transition_count(); ++t) {
    TransitionId label = proc.transition(t).label;
    Marking in, out;
    for (auto p : proc.inputs(t)) in.add(proc.place(p).label);
    for (auto p : proc.outputs(t)) out.add(proc.place(p).label);
    for (auto s : net.places()) {
      if (net.weight(s, label) != in.count(s))
        problems.push_back("π-count mismatch for arc " + net.name(s) + "->" + net.name(label));
      if (net.weight(label, s) != out.count(s))
        problems.push_back("π-count mismatch for arc " + net.name(label) + "->" + net.name(s));
    }
  }
  if (!problems.empty()) throw InvalidProcess(std::move(problems));
  return proc;
}

inline bool is_valid_process(const Process& proc) {
  try {
    validate_process(proc);
    return true;
  } catch (const InvalidProcess&) {
    return false;
  }
}

/// Which of several equivalent tokens a transition consumes.
struct TokenPolicy {
  enum class Kind { oldest_first, newest_first, explicit_choice };
  Kind kind = Kind::oldest_first;
  /// explicit_choice: consulted only when more tokens are available than
  /// needed; each entry picks one token by index into the tokens still
  /// available in that place, ordered by birth.
  std::vector<std::size_t> choices;

  static TokenPolicy oldest_first() { return {Kind::oldest_first, {}}; }
  static TokenPolicy newest_first() { return {Kind::newest_first, {}}; }
  static TokenPolicy explicit_choice(std::vector<std::size_t> c) {
    return {Kind::explicit_choice, std::move(c)};
  }
};

namespace detail {

/// Incremental process construction along a firing sequence.
struct ProcessBuilder {
  Process proc;
  std::vector<std::vector<std::size_t>> available;  // per host place, birth order
  std::size_t next_birth = 0;

  explicit ProcessBuilder(const Net& net) : proc(net), available(net.place_count()) {
    for (const auto& [s, n] : net.initial_marking())
      for (std::size_t i = 0; i < n; ++i)
        available[s.index].push_back(proc.add_place(s, next_birth++, true));
  }

  /// Fires t consuming the given tokens (already removed from `available`).
  void fire(TransitionId t, const std::vector<std::size_t>& consumed) {
    std::size_t occ = proc.add_transition(t, next_birth++);
    for (auto p : consumed) proc.add_input(p, occ);
    for (const auto& [s, w] : proc.net().post(t))
      for (std::size_t i = 0; i < w; ++i) {
        std::size_t p = proc.add_place(s, next_birth++, false);
        proc.add_output(occ, p);
        available[s.index].push_back(p);
      }
  }
};

}  // namespace detail

/// A process having `word` as a linearisation; with the oldest-first policy
/// the result is a deterministic function of (net, word).
inline Process build_process(const Net& net, const Word& word,
                             const TokenPolicy& policy = TokenPolicy::oldest_first()) {
  detail::ProcessBuilder b(net);
  std::size_t next_choice = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    TransitionId t = word[i];
    std::vector<std::size_t> consumed;
    for (const auto& [s, w] : net.pre(t)) {
      auto& avail = b.available[s.index];
      if (avail.size() < w) throw NotEnabled(i + 1, net.name(t));
      if (avail.size() == w || policy.kind == TokenPolicy::Kind::oldest_first) {
        consumed.insert(consumed.end(), avail.begin(), avail.begin() + w);
        avail.erase(avail.begin(), avail.begin() + w);
      } else if (policy.kind == TokenPolicy::Kind::newest_first) {
        consumed.insert(consumed.end(), avail.end() - w, avail.end());
        avail.erase(avail.end() - w, avail.end());
      } else {
        for (std::size_t k = 0; k < w; ++k) {
          if (next_choice >= policy.choices.size())
            throw PreconditionError("choice list exhausted at position " + std::to_string(i + 1));
          std::size_t c = policy.choices[next_choice++];
          if (c >= avail.size())
            throw PreconditionError("choice " + std::to_string(c) + " out of range at position " +
                                    std::to_string(i + 1) + " (" + std::to_string(avail.size()) +
                                    " tokens on " + net.name(s) + ")");
          consumed.push_back(avail[c]);
          avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(c));
        }
      }
    }
    b.fire(t, consumed);
  }
  if (policy.kind == TokenPolicy::Kind::explicit_choice && next_choice != policy.choices.size())
    throw PreconditionError("unused entries in choice list");
  return std::move(b.proc);
}

/// Cheap isomorphism invariant used to bucket processes before the full test.
inline std::vector<std::size_t> process_signature(const Process& proc) {
  std::vector<std::size_t> sig{proc.place_count(), proc.transition_count()};
  auto order = detail::topological_order(proc);
  std::vector<std::size_t> depth(proc.transition_count(), 0);
  auto pred = detail::predecessors(proc);
  if (order)
    for (auto t : *order)
      for (auto u : pred[t]) depth[t] = std::max(depth[t], depth[u] + 1);
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> ts;
  for (std::size_t t = 0; t < proc.transition_count(); ++t)
    ts.emplace_back(proc.transition(t).label.index, depth[t], proc.inputs(t).size(),
                    proc.outputs(t).size());
  std::sort(ts.begin(), ts.end());
  for (const auto& [a, b, c, d] : ts) sig.insert(sig.end(), {a, b, c, d});
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> ps;
  for (std::size_t p = 0; p < proc.place_count(); ++p)
    ps.emplace_back(proc.place(p).label.index, proc.producers(p).size(),
                    proc.consumers(p).size());
  std::sort(ps.begin(), ps.end());
  for (const auto& [a, b, c] : ps) sig.insert(sig.end(), {a, b, c});
  if (!order) return sig;

  // Hash of each transition occurrence's causal past and future.
  auto mix = [](std::size_t h, std::size_t v) {
    return h ^ (v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2));
  };
  std::size_t n = proc.transition_count();
  std::vector<std::size_t> past(n), future(n);
  for (auto t : *order) {
    std::vector<std::size_t> in;
    for (auto p : proc.inputs(t)) {
      auto pr = proc.producer(p);
      in.push_back(mix(proc.place(p).label.index, pr ? past[*pr] : 0));
    }
    std::sort(in.begin(), in.end());
    std::size_t h = mix(1, proc.transition(t).label.index);
    for (auto v : in) h = mix(h, v);
    past[t] = h;
  }
  for (auto it = order->rbegin(); it != order->rend(); ++it) {
    std::size_t t = *it;
    std::vector<std::size_t> out;
    for (auto p : proc.outputs(t)) {
      auto c = proc.consumer(p);
      out.push_back(mix(proc.place(p).label.index, c ? future[*c] : 0));
    }
    std::sort(out.begin(), out.end());
    std::size_t h = mix(2, proc.transition(t).label.index);
    for (auto v : out) h = mix(h, v);
    future[t] = h;
  }
  std::vector<std::size_t> hs;
  for (std::size_t t = 0; t < n; ++t) hs.push_back(mix(past[t], future[t]));
  std::sort(hs.begin(), hs.end());
  sig.insert(sig.end(), hs.begin(), hs.end());
  return sig;
}

/// Decides whether a label-preserving isomorphism exists between two valid
/// processes of the same net.
///
/// In a valid process every place occurrence is determined, up to
/// interchangeable copies, by (label, producer, consumer). The search maps
/// transition occurrences in topological order; when t is mapped all its
/// producers already are, so the inputs of t can be compared as multisets of
/// (label, image of producer). Unconsumed places are compared at the end.
inline bool are_isomorphic(const Process& a, const Process& b) {
  if (a.transition_count() != b.transition_count() || a.place_count() != b.place_count())
    return false;
  if (process_signature(a) != process_signature(b)) return false;

  auto order_a = detail::topological_order(a);
  auto order_b = detail::topological_order(b);
  if (!order_a || !order_b) return false;
  const std::size_t n = a.transition_count();
  constexpr std::size_t none = static_cast<std::size_t>(-1);

  auto depth_of = [](const Process& p, const std::vector<std::size_t>& order) {
    auto pred = detail::predecessors(p);
    std::vector<std::size_t> d(p.transition_count(), 0);
    for (auto t : order)
      for (auto u : pred[t]) d[t] = std::max(d[t], d[u] + 1);
    return d;
  };
  auto da = depth_of(a, *order_a);
  auto db = depth_of(b, *order_b);

  std::vector<std::size_t> phi(n, none), used_by(n, none);

  // Multiset of (label, producer image) for a place list; producer `none`
  // marks an initial place.
  auto inputs_a = [&](const std::vector<std::size_t>& places) {
    std::vector<std::pair<std::uint32_t, std::size_t>> v;
    for (auto p : places) {
      auto pr = a.producer(p);
      v.emplace_back(a.place(p).label.index, pr ? phi[*pr] : none);
    }
    std::sort(v.begin(), v.end());
    return v;
  };
  auto inputs_b = [&](const std::vector<std::size_t>& places) {
    std::vector<std::pair<std::uint32_t, std::size_t>> v;
    for (auto p : places) {
      auto pr = b.producer(p);
      v.emplace_back(b.place(p).label.index, pr ? *pr : none);
    }
    std::sort(v.begin(), v.end());
    return v;
  };
  auto unconsumed = [](const Process& p) {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < p.place_count(); ++i)
      if (p.consumers(i).empty()) v.push_back(i);
    return v;
  };
  auto open_a = unconsumed(a);
  auto open_b = unconsumed(b);
  if (open_a.size() != open_b.size()) return false;

  std::function<bool(std::size_t)> extend = [&](std::size_t k) -> bool {
    if (k == n) return inputs_a(open_a) == inputs_b(open_b);
    std::size_t t = (*order_a)[k];
    auto want = inputs_a(a.inputs(t));
    for (std::size_t u = 0; u < n; ++u) {
      if (used_by[u] != none) continue;
      if (b.transition(u).label != a.transition(t).label || db[u] != da[t]) continue;
      if (b.outputs(u).size() != a.outputs(t).size()) continue;
      if (inputs_b(b.inputs(u)) != want) continue;
      phi[t] = u;
      used_by[u] = t;
      if (extend(k + 1)) return true;
      phi[t] = none;
      used_by[u] = none;
    }
    return false;
  };
  return extend(0);
}

/// Result of enumerating Π(σ).
struct PiMembers {
  std::vector<Process> processes;
  bool truncated = false;
};

/// Adds `p` unless an isomorphic process is already present.
class IsoSet {
public:
  bool insert(const Process& p) {
    auto& bucket = buckets_[process_signature(p)];
    for (auto i : bucket)
      if (are_isomorphic(items_[i], p)) return false;
    bucket.push_back(items_.size());
    items_.push_back(p);
    return true;
  }
  bool contains(const Process& p) const {
    auto it = buckets_.find(process_signature(p));
    if (it == buckets_.end()) return false;
    for (auto i : it->second)
      if (are_isomorphic(items_[i], p)) return true;
    return false;
  }
  const std::vector<Process>& items() const { return items_; }
  std::vector<Process> release() { return std::move(items_); }
  std::size_t size() const { return items_.size(); }

private:
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> buckets_;
  std::vector<Process> items_;
};

/// Every process obtainable from `word` by some choice of consumed tokens;
/// with `iso_dedup`, one per isomorphism class. Stops after `limit` members.
inline PiMembers pi_members(const Net& net, const Word& word, bool iso_dedup = true,
                            std::size_t limit = 10000) {
  fire_sequence(net, net.initial_marking(), word);  // throws on a non-firing sequence
  PiMembers out;
  IsoSet dedup;
  std::vector<Process> raw;

  // Choices for one transition: per preplace, a w-subset of available tokens.
  std::function<void(detail::ProcessBuilder&, std::size_t)> step;
  std::function<void(detail::ProcessBuilder&, std::size_t, std::vector<std::pair<PlaceId, std::size_t>>&,
                     std::size_t, std::vector<std::size_t>&)>
      choose;

  auto emit = [&](const Process& p) {
    if (iso_dedup)
      dedup.insert(p);
    else
      raw.push_back(p);
    if ((iso_dedup ? dedup.size() : raw.size()) >= limit) out.truncated = true;
  };

  choose = [&](detail::ProcessBuilder& b, std::size_t i,
               std::vector<std::pair<PlaceId, std::size_t>>& pre, std::size_t k,
               std::vector<std::size_t>& consumed) {
    if (out.truncated) return;
    if (k == pre.size()) {
      detail::ProcessBuilder next = b;
      for (auto p : consumed) {
        auto& av = next.available[next.proc.place(p).label.index];
        av.erase(std::find(av.begin(), av.end(), p));
      }
      next.fire(word[i], consumed);
      step(next, i + 1);
      return;
    }
    auto [s, w] = pre[k];
    const auto& avail = b.available[s.index];
    std::vector<std::size_t> pick(w);
    std::function<void(std::size_t, std::size_t)> combo = [&](std::size_t start, std::size_t j) {
      if (out.truncated) return;
      if (j == w) {
        std::size_t mark = consumed.size();
        consumed.insert(consumed.end(), pick.begin(), pick.end());
        choose(b, i, pre, k + 1, consumed);
        consumed.resize(mark);
        return;
      }
      for (std::size_t c = start; c + (w - j) <= avail.size(); ++c) {
        pick[j] = avail[c];
        combo(c + 1, j + 1);
      }
    };
    combo(0, 0);
  };

  step = [&](detail::ProcessBuilder& b, std::size_t i) {
    if (out.truncated) return;
    if (i == word.size()) {
      emit(b.proc);
      return;
    }
    std::vector<std::pair<PlaceId, std::size_t>> pre(net.pre(word[i]).begin(),
                                                     net.pre(word[i]).end());
    std::vector<std::size_t> consumed;
    choose(b, i, pre, 0, consumed);
  };

  detail::ProcessBuilder start(net);
  step(start, 0);
  out.processes = iso_dedup ? dedup.release() : std::move(raw);
  return out;
}

/// All words π(t1)...π(tn) over orderings of the transition occurrences that
/// respect causality.
inline std::set<Word> linearisations(const Process& proc) {
  auto pred = detail::predecessors(proc);
  std::size_t n = proc.transition_count();
  std::set<Word> out;
  std::vector<bool> done(n, false);
  Word cur;
  std::function<void()> go = [&]() {
    if (cur.size() == n) {
      out.insert(cur);
      return;
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (done[t]) continue;
      bool ready = std::all_of(pred[t].begin(), pred[t].end(), [&](auto u) { return done[u]; });
      if (!ready) continue;
      done[t] = true;
      cur.push_back(proc.transition(t).label);
      go();
      cur.pop_back();
      done[t] = false;
    }
  };
  go();
  return out;
}

/// One linearisation, cheaper than enumerating all of them.
inline Word some_linearisation(const Process& proc) {
  auto order = detail::topological_order(proc);
  if (!order) throw InvalidProcess({"flow relation is cyclic"});
  Word w;
  for (auto t : *order) w.push_back(proc.transition(t).label);
  return w;
}

namespace detail {
using OccKey = std::pair<std::uint32_t, std::size_t>;  // (label, birth)

inline std::map<OccKey, std::size_t> place_keys(const Process& p) {
  std::map<OccKey, std::size_t> m;
  for (std::size_t i = 0; i < p.place_count(); ++i)
    m[{p.place(i).label.index, p.place(i).birth}] = i;
  return m;
}
inline std::map<OccKey, std::size_t> transition_keys(const Process& p) {
  std::map<OccKey, std::size_t> m;
  for (std::size_t i = 0; i < p.transition_count(); ++i)
    m[{p.transition(i).label.index, p.transition(i).birth}] = i;
  return m;
}
inline OccKey key(const PlaceOccurrence& o) { return {o.label.index, o.birth}; }
inline OccKey key(const TransitionOccurrence& o) { return {o.label.index, o.birth}; }
}  // namespace detail

/// Prefix order on processes, occurrences identified by (label, birth):
/// occurrence sets included, same initial places, and arcs of `small` equal
/// to the arcs of `big` between occurrences of `small`.
inline bool is_prefix(const Process& small, const Process& big) {
  auto bp = detail::place_keys(big);
  auto bt = detail::transition_keys(big);
  std::vector<std::size_t> pmap, tmap;
  for (const auto& o : small.places()) {
    auto it = bp.find(detail::key(o));
    if (it == bp.end()) return false;
    pmap.push_back(it->second);
  }
  for (const auto& o : small.transitions()) {
    auto it = bt.find(detail::key(o));
    if (it == bt.end()) return false;
    tmap.push_back(it->second);
  }
  std::set<std::size_t> init_small;
  for (auto p : small.initial_places()) init_small.insert(pmap[p]);
  auto init_big_v = big.initial_places();
  if (init_small != std::set<std::size_t>(init_big_v.begin(), init_big_v.end())) return false;

  std::vector<bool> in_small(big.transition_count(), false);
  for (auto t : tmap) in_small[t] = true;
  for (std::size_t p = 0; p < small.place_count(); ++p) {
    if (small.place(p).initial != big.place(pmap[p]).initial) return false;
    std::set<std::size_t> sc, bc, sp, bpd;
    for (auto t : small.consumers(p)) sc.insert(tmap[t]);
    for (auto t : small.producers(p)) sp.insert(tmap[t]);
    for (auto t : big.consumers(pmap[p]))
      if (in_small[t]) bc.insert(t);
    for (auto t : big.producers(pmap[p]))
      if (in_small[t]) bpd.insert(t);
    if (sc != bc || sp != bpd) return false;
  }
  // arcs of big between a small transition and a place outside small
  std::vector<bool> place_in_small(big.place_count(), false);
  for (auto p : pmap) place_in_small[p] = true;
  for (auto t : tmap) {
    for (auto p : big.inputs(t))
      if (!place_in_small[p]) return false;
    for (auto p : big.outputs(t))
      if (!place_in_small[p]) return false;
  }
  return true;
}

/// Whether a set of transition occurrences is closed under causal predecessors.
inline bool is_downward_closed(const Process& proc, const std::vector<bool>& keep) {
  auto pred = detail::predecessors(proc);
  for (std::size_t t = 0; t < proc.transition_count(); ++t)
    if (keep[t])
      for (auto u : pred[t])
        if (!keep[u]) return false;
  return true;
}

/// The unique prefix of `proc` whose transition occurrences are `keep`.
inline Process prefix_by_transitions(const Process& proc, const std::vector<bool>& keep) {
  if (keep.size() != proc.transition_count())
    throw PreconditionError("transition selection has the wrong size");
  if (!is_downward_closed(proc, keep))
    throw PreconditionError("transition set is not causally downward-closed");
  Process out(proc.net());
  std::vector<std::size_t> pmap(proc.place_count(), static_cast<std::size_t>(-1));
  std::vector<std::size_t> tmap(proc.transition_count(), static_cast<std::size_t>(-1));
  for (std::size_t p = 0; p < proc.place_count(); ++p) {
    auto pr = proc.producers(p);
    bool kept = pr.empty() || std::all_of(pr.begin(), pr.end(), [&](auto t) { return keep[t]; });
    if (kept) pmap[p] = out.add_place(proc.place(p).label, proc.place(p).birth, proc.place(p).initial);
  }
  for (std::size_t t = 0; t < proc.transition_count(); ++t)
    if (keep[t]) tmap[t] = out.add_transition(proc.transition(t).label, proc.transition(t).birth);
  for (std::size_t t = 0; t < proc.transition_count(); ++t) {
    if (!keep[t]) continue;
    for (auto p : proc.inputs(t)) out.add_input(pmap[p], tmap[t]);
    for (auto p : proc.outputs(t)) out.add_output(tmap[t], pmap[p]);
  }
  return out;
}

/// Transition sets of all prefixes of `proc`, each exactly once.
inline std::vector<std::vector<bool>> downward_closed_sets(const Process& proc) {
  auto order = detail::topological_order(proc);
  if (!order) throw InvalidProcess({"flow relation is cyclic"});
  auto pred = detail::predecessors(proc);
  std::vector<std::vector<bool>> out;
  std::vector<bool> keep(proc.transition_count(), false);
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == order->size()) {
      out.push_back(keep);
      return;
    }
    std::size_t t = (*order)[k];
    go(k + 1);
    if (std::all_of(pred[t].begin(), pred[t].end(), [&](auto u) { return keep[u]; })) {
      keep[t] = true;
      go(k + 1);
      keep[t] = false;
    }
  };
  go(0);
  return out;
}

/// Componentwise union of two processes sharing occurrence identities.
inline Process process_union(const Process& a, const Process& b) {
  Process out(a.net());
  std::map<detail::OccKey, std::size_t> pidx, tidx;
  auto add_nodes = [&](const Process& p) {
    for (const auto& o : p.places())
      if (!pidx.count(detail::key(o))) pidx[detail::key(o)] = out.add_place(o.label, o.birth, o.initial);
    for (const auto& o : p.transitions())
      if (!tidx.count(detail::key(o))) tidx[detail::key(o)] = out.add_transition(o.label, o.birth);
  };
  add_nodes(a);
  add_nodes(b);
  std::set<std::pair<std::size_t, std::size_t>> ins, outs;
  auto add_arcs = [&](const Process& p) {
    for (std::size_t t = 0; t < p.transition_count(); ++t) {
      std::size_t ti = tidx[detail::key(p.transition(t))];
      for (auto q : p.inputs(t)) ins.insert({pidx[detail::key(p.place(q))], ti});
      for (auto q : p.outputs(t)) outs.insert({ti, pidx[detail::key(p.place(q))]});
    }
  };
  add_arcs(a);
  add_arcs(b);
  for (auto [p, t] : ins) out.add_input(p, t);
  for (auto [t, p] : outs) out.add_output(t, p);
  return out;
}

}  // namespace pnsem
