#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <vector>

#include "net.hpp"

namespace pnsem {

/// Reachable markings found by breadth-first search over single-transition
/// firings, each with one shortest witness sequence.
struct Exploration {
  std::vector<Marking> markings;  // discovery order
  std::vector<Word> witness;      // witness[i] reaches markings[i]
  std::vector<std::size_t> depth;
  std::map<Marking, std::size_t> index;
  bool truncated = false;

  std::size_t size() const { return markings.size(); }
};

/// Breadth-first reachability up to `max_depth` firings. A marking with a
/// place above `max_tokens` is recorded but not expanded. `truncated` is set
/// iff the token bound was exceeded or the depth bound hid an unseen marking.
inline Exploration explore(const Net& net, std::size_t max_depth, std::size_t max_tokens) {
  Exploration ex;
  auto over_tokens = [&](const Marking& m) {
    for (const auto& [s, n] : m)
      if (n > max_tokens) return true;
    return false;
  };
  auto record = [&](const Marking& m, Word w, std::size_t d) {
    ex.index.emplace(m, ex.markings.size());
    ex.markings.push_back(m);
    ex.witness.push_back(std::move(w));
    ex.depth.push_back(d);
  };
  record(net.initial_marking(), {}, 0);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    Marking m = ex.markings[i];
    if (over_tokens(m)) {
      ex.truncated = true;
      continue;
    }
    auto succ = enabled_transitions(net, m);
    if (succ.empty()) continue;
    if (ex.depth[i] >= max_depth) {
      // every marking at depth <= max_depth is already indexed here
      for (auto t : succ)
        if (!ex.index.count(fire_unchecked(net, m, t))) ex.truncated = true;
      continue;
    }
    for (auto t : succ) {
      Marking next = fire_unchecked(net, m, t);
      if (ex.index.count(next)) continue;
      Word w = ex.witness[i];
      w.push_back(t);
      record(next, std::move(w), ex.depth[i] + 1);
      queue.push_back(ex.markings.size() - 1);
    }
  }
  return ex;
}

}  // namespace pnsem
