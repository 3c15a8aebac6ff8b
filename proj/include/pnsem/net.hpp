#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "multiset.hpp"

namespace pnsem {

struct PlaceId {
  std::uint32_t index = 0;
  friend auto operator<=>(PlaceId, PlaceId) = default;
};

struct TransitionId {
  std::uint32_t index = 0;
  friend auto operator<=>(TransitionId, TransitionId) = default;
};

using Marking = Multiset<PlaceId>;
using Step = Multiset<TransitionId>;
using Word = std::vector<TransitionId>;

/// Unchecked net as read from a file or built by hand.
struct NetDescription {
  struct Place {
    std::string name;
    std::size_t tokens = 0;
  };
  struct Arc {
    std::string from;
    std::string to;
    std::size_t weight = 1;
  };
  std::vector<Place> places;
  std::vector<std::string> transitions;
  std::vector<Arc> arcs;
};

class Net;
Net validate_net(const NetDescription& d);

/// A place/transition net with weighted arcs and an initial marking.
///
/// Places and transitions are indexed in lexicographic order of their names,
/// so index order is the canonical identifier order used everywhere else.
class Net {
public:
  Net() = default;

  std::size_t place_count() const { return place_names_.size(); }
  std::size_t transition_count() const { return transition_names_.size(); }

  const std::string& name(PlaceId s) const { return place_names_.at(s.index); }
  const std::string& name(TransitionId t) const { return transition_names_.at(t.index); }

  std::optional<PlaceId> find_place(std::string_view n) const {
    auto it = std::lower_bound(place_names_.begin(), place_names_.end(), n);
    if (it == place_names_.end() || *it != n) return std::nullopt;
    return PlaceId{static_cast<std::uint32_t>(it - place_names_.begin())};
  }
  std::optional<TransitionId> find_transition(std::string_view n) const {
    auto it = std::lower_bound(transition_names_.begin(), transition_names_.end(), n);
    if (it == transition_names_.end() || *it != n) return std::nullopt;
    return TransitionId{static_cast<std::uint32_t>(it - transition_names_.begin())};
  }
  PlaceId place(std::string_view n) const {
    if (auto s = find_place(n)) return *s;
    throw Error("unknown place '" + std::string(n) + "'");
  }
  TransitionId transition(std::string_view n) const {
    if (auto t = find_transition(n)) return *t;
    throw Error("unknown transition '" + std::string(n) + "'");
  }

  std::vector<PlaceId> places() const {
    std::vector<PlaceId> out;
    for (std::uint32_t i = 0; i < place_count(); ++i) out.push_back({i});
    return out;
  }
  std::vector<TransitionId> transitions() const {
    std::vector<TransitionId> out;
    for (std::uint32_t i = 0; i < transition_count(); ++i) out.push_back({i});
    return out;
  }

  const Marking& initial_marking() const { return initial_; }

  /// Arc weight F(s,t) / F(t,s); zero when absent.
  std::size_t weight(PlaceId s, TransitionId t) const { return pre(t).count(s); }
  std::size_t weight(TransitionId t, PlaceId s) const { return post(t).count(s); }

  const Marking& pre(TransitionId t) const { return pre_.at(t.index); }
  const Marking& post(TransitionId t) const { return post_.at(t.index); }
  const Step& pre(PlaceId s) const { return place_pre_.at(s.index); }
  const Step& post(PlaceId s) const { return place_post_.at(s.index); }

  /// Back to the unchecked form, in canonical order.
  NetDescription describe() const {
    NetDescription d;
    for (auto s : places()) d.places.push_back({name(s), initial_.count(s)});
    for (auto t : transitions()) d.transitions.push_back(name(t));
    for (auto s : places())
      for (const auto& [t, w] : place_post_[s.index]) d.arcs.push_back({name(s), name(t), w});
    for (auto t : transitions())
      for (const auto& [s, w] : post_[t.index]) d.arcs.push_back({name(t), name(s), w});
    return d;
  }

  friend bool operator==(const Net&, const Net&) = default;

private:
  friend Net validate_net(const NetDescription& d);

  std::vector<std::string> place_names_;
  std::vector<std::string> transition_names_;
  std::vector<Marking> pre_, post_;
  std::vector<Step> place_pre_, place_post_;
  Marking initial_;
};

/// Builds a net, collecting every violated well-formedness rule.
inline Net validate_net(const NetDescription& d) {
  std::vector<std::string> problems;
  std::set<std::string> place_set, trans_set;
  for (const auto& p : d.places)
    if (!place_set.insert(p.name).second) problems.push_back("duplicate place '" + p.name + "'");
  for (const auto& t : d.transitions)
    if (!trans_set.insert(t).second) problems.push_back("duplicate transition '" + t + "'");
  for (const auto& x : place_set)
    if (trans_set.count(x))
      problems.push_back("'" + x + "' is both a place and a transition: not disjoint");

  Net net;
  net.place_names_.assign(place_set.begin(), place_set.end());
  net.transition_names_.assign(trans_set.begin(), trans_set.end());
  net.pre_.resize(trans_set.size());
  net.post_.resize(trans_set.size());
  net.place_pre_.resize(place_set.size());
  net.place_post_.resize(place_set.size());
  for (const auto& p : d.places)
    if (auto s = net.find_place(p.name)) net.initial_.add(*s, p.tokens);

  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& a : d.arcs) {
    std::string arc = a.from + "->" + a.to;
    if (a.weight == 0) {
      problems.push_back("arc " + arc + " has zero weight");
      continue;
    }
    if (!seen.insert({a.from, a.to}).second) {
      problems.push_back("duplicate arc " + arc);
      continue;
    }
    auto fs = net.find_place(a.from);
    auto ft = net.find_transition(a.from);
    auto ts = net.find_place(a.to);
    auto tt = net.find_transition(a.to);
    if (fs && tt) {
      net.pre_[tt->index].add(*fs, a.weight);
      net.place_post_[fs->index].add(*tt, a.weight);
    } else if (ft && ts) {
      net.post_[ft->index].add(*ts, a.weight);
      net.place_pre_[ts->index].add(*ft, a.weight);
    } else if (!(fs || ft) || !(ts || tt)) {
      problems.push_back("arc " + arc + " refers to an undeclared node");
    } else {
      problems.push_back("arc " + arc + " must connect a place and a transition");
    }
  }
  for (auto t : net.transitions())
    if (net.pre_[t.index].empty())
      problems.push_back("transition '" + net.name(t) + "' has an empty preset");

  if (!problems.empty()) throw InvalidNet(std::move(problems));
  return net;
}

/// Preset of a multiset of transitions: sum of G(t) * pre(t).
inline Marking preset(const Net& net, const Step& g) {
  Marking out;
  for (const auto& [t, n] : g) {
    if (t.index >= net.transition_count()) throw Error("unknown transition in multiset");
    for (const auto& [s, w] : net.pre(t)) out.add(s, n * w);
  }
  return out;
}

inline Marking postset(const Net& net, const Step& g) {
  Marking out;
  for (const auto& [t, n] : g) {
    if (t.index >= net.transition_count()) throw Error("unknown transition in multiset");
    for (const auto& [s, w] : net.post(t)) out.add(s, n * w);
  }
  return out;
}

inline Step preset(const Net& net, const Marking& x) {
  Step out;
  for (const auto& [s, n] : x) {
    if (s.index >= net.place_count()) throw Error("unknown place in multiset");
    for (const auto& [t, w] : net.pre(s)) out.add(t, n * w);
  }
  return out;
}

inline Step postset(const Net& net, const Marking& x) {
  Step out;
  for (const auto& [s, n] : x) {
    if (s.index >= net.place_count()) throw Error("unknown place in multiset");
    for (const auto& [t, w] : net.post(s)) out.add(t, n * w);
  }
  return out;
}

inline bool enabled(const Net& net, const Marking& m, const Step& g) {
  return !g.empty() && leq(preset(net, g), m);
}

inline bool enabled(const Net& net, const Marking& m, TransitionId t) {
  return leq(net.pre(t), m);
}

inline std::string format_marking(const Net& net, const Marking& m);
inline std::string format_step(const Net& net, const Step& g);

inline Marking fire_step(const Net& net, const Marking& m, const Step& g) {
  if (!enabled(net, m, g)) throw NotEnabled(0, "step " + format_step(net, g));
  return (m - preset(net, g)) + postset(net, g);
}

/// Successor marking, without the enabledness check.
inline Marking fire_unchecked(const Net& net, const Marking& m, TransitionId t) {
  return (m - net.pre(t)) + net.post(t);
}

/// Final marking after firing `word` transition by transition from `m`.
inline Marking fire_sequence(const Net& net, const Marking& m, const Word& word) {
  Marking cur = m;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (!enabled(net, cur, word[i])) throw NotEnabled(i + 1, net.name(word[i]));
    cur = fire_unchecked(net, cur, word[i]);
  }
  return cur;
}

inline std::optional<Marking> try_fire_sequence(const Net& net, const Marking& m,
                                                const Word& word) {
  Marking cur = m;
  for (auto t : word) {
    if (!enabled(net, cur, t)) return std::nullopt;
    cur = fire_unchecked(net, cur, t);
  }
  return cur;
}

inline bool is_firing_sequence(const Net& net, const Word& word) {
  return try_fire_sequence(net, net.initial_marking(), word).has_value();
}

inline std::vector<TransitionId> enabled_transitions(const Net& net, const Marking& m) {
  std::vector<TransitionId> out;
  for (auto t : net.transitions())
    if (enabled(net, m, t)) out.push_back(t);
  return out;
}

namespace detail {
inline bool short_names(const Net& net) {
  for (auto t : net.transitions())
    if (net.name(t).size() != 1) return false;
  return true;
}
}  // namespace detail

/// Parses a whitespace-separated list of transition names. When every name
/// is a single character, run-together tokens such as "abdc" are split, and
/// "ε" stands for the empty word, so printed words read back unchanged.
inline Word parse_word(const Net& net, std::string_view text) {
  std::istringstream in{std::string(text)};
  Word w;
  std::string tok;
  while (in >> tok) {
    if (auto t = net.find_transition(tok)) {
      w.push_back(*t);
      continue;
    }
    if (tok == "ε") continue;
    if (!detail::short_names(net)) throw ParseError(0, "unknown transition '" + tok + "' in sequence");
    for (char c : tok) {
      auto t = net.find_transition(std::string(1, c));
      if (!t) throw ParseError(0, "unknown transition '" + std::string(1, c) + "' in sequence");
      w.push_back(*t);
    }
  }
  return w;
}

inline Step step_of(const Word& w) {
  Step g;
  for (auto t : w) g.add(t);
  return g;
}

/// Words print as "abdc" when every transition name is a single character,
/// otherwise space-separated; the empty word prints as "ε".
inline std::string format_word(const Net& net, const Word& w) {
  if (w.empty()) return "ε";
  bool compact = detail::short_names(net);
  std::string out;
  for (auto t : w) {
    if (!compact && !out.empty()) out += ' ';
    out += net.name(t);
  }
  return out;
}

/// Space-separated form accepted by parse_word.
inline std::string format_word_spaced(const Net& net, const Word& w) {
  std::string out;
  for (auto t : w) {
    if (!out.empty()) out += ' ';
    out += net.name(t);
  }
  return out;
}

inline std::string format_marking(const Net& net, const Marking& m) {
  std::string out = "{";
  bool first = true;
  for (const auto& [s, n] : m) {
    if (!first) out += ", ";
    first = false;
    out += net.name(s) + ":" + std::to_string(n);
  }
  return out + "}";
}

/// Steps print as sets, repeating elements with multiplicity: {t,t,u}.
inline std::string format_step(const Net& net, const Step& g) {
  std::string out = "{";
  bool first = true;
  for (const auto& [t, n] : g)
    for (std::size_t i = 0; i < n; ++i) {
      if (!first) out += ",";
      first = false;
      out += net.name(t);
    }
  return out + "}";
}

}  // namespace pnsem
