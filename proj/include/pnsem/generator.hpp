#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "conflict.hpp"
#include "explore.hpp"
#include "net.hpp"

namespace pnsem {

struct GenParams {
  std::size_t place_count = 4;
  std::size_t transition_count = 3;
  double arc_density = 0.3;  // per place/transition pair and direction
  std::size_t max_weight = 1;
  std::size_t max_initial_tokens = 1;
  std::uint64_t seed = 1;
};

inline void check_params(const GenParams& p) {
  if (p.place_count < 1) throw PreconditionError("place count must be at least 1");
  if (p.arc_density < 0.0 || p.arc_density > 1.0)
    throw PreconditionError("arc density must lie in [0,1]");
  if (p.max_weight < 1) throw PreconditionError("max weight must be at least 1");
}

/// Random net, a deterministic function of the parameters. Places are named
/// p0, p1, ... and transitions t0, t1, ...; a transition left without a
/// preplace gets one at random.
inline Net random_net(const GenParams& p) {
  check_params(p);
  std::mt19937_64 rng(p.seed);
  std::bernoulli_distribution arc(p.arc_density);
  std::uniform_int_distribution<std::size_t> weight(1, p.max_weight);
  std::uniform_int_distribution<std::size_t> tokens(0, p.max_initial_tokens);
  std::uniform_int_distribution<std::size_t> any_place(0, p.place_count - 1);

  auto pname = [](std::size_t i) { return "p" + std::to_string(i); };
  auto tname = [](std::size_t i) { return "t" + std::to_string(i); };
  NetDescription d;
  for (std::size_t i = 0; i < p.place_count; ++i) d.places.push_back({pname(i), tokens(rng)});
  for (std::size_t j = 0; j < p.transition_count; ++j) {
    d.transitions.push_back(tname(j));
    bool has_pre = false;
    for (std::size_t i = 0; i < p.place_count; ++i)
      if (arc(rng)) {
        d.arcs.push_back({pname(i), tname(j), weight(rng)});
        has_pre = true;
      }
    if (!has_pre) d.arcs.push_back({pname(any_place(rng)), tname(j), weight(rng)});
    for (std::size_t i = 0; i < p.place_count; ++i)
      if (arc(rng)) d.arcs.push_back({tname(j), pname(i), weight(rng)});
  }
  return validate_net(d);
}

struct Generated {
  std::optional<Net> net;  // empty when attempts were exhausted
  std::size_t attempts = 0;
  std::uint64_t seed = 0;  // seed of the accepted sample
};

namespace detail {
/// Seed for attempt k of a rejection loop started from `seed`.
inline std::uint64_t attempt_seed(std::uint64_t seed, std::size_t k) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Rejection-samples random nets until check_structural holds within bounds.
inline Generated random_structural_conflict_net(const GenParams& p, const Bounds& b,
                                                std::size_t max_attempts) {
  Generated g;
  for (std::size_t k = 0; k < max_attempts; ++k) {
    GenParams q = p;
    q.seed = detail::attempt_seed(p.seed, k);
    Net net = random_net(q);
    g.attempts = k + 1;
    if (check_structural(net, b).holds()) {
      g.net = std::move(net);
      g.seed = q.seed;
      return g;
    }
  }
  return g;
}

/// No place ever holds two tokens within `depth` firings.
inline bool one_safe_within(const Net& net, std::size_t depth) {
  auto ex = explore(net, depth, 1);
  for (const auto& m : ex.markings)
    for (const auto& [s, n] : m)
      if (n > 1) return false;
  return true;
}

inline Generated random_one_safe_net(const GenParams& p, std::size_t depth,
                                     std::size_t max_attempts) {
  Generated g;
  for (std::size_t k = 0; k < max_attempts; ++k) {
    GenParams q = p;
    q.seed = detail::attempt_seed(p.seed, k);
    Net net = random_net(q);
    g.attempts = k + 1;
    if (one_safe_within(net, depth)) {
      g.net = std::move(net);
      g.seed = q.seed;
      return g;
    }
  }
  return g;
}

}  // namespace pnsem
