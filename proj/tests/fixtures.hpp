#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <pnsem/pnsem.hpp>

namespace pnsem::testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string net_path(const std::string& name) {
  return std::string(PNSEM_NETS_DIR) + "/" + name + ".net";
}

/// NET-A, NET-B, NET-C from the shipped fixture files.
inline Net load_net(const std::string& name) { return parse_net(read_file(net_path(name))); }

inline Word word(const Net& net, const std::string& text) { return parse_word(net, text); }

inline Marking marking(const Net& net, std::initializer_list<std::pair<const char*, std::size_t>> m) {
  Marking out;
  for (const auto& [s, n] : m) out.add(net.place(s), n);
  return out;
}

inline Step step(const Net& net, std::initializer_list<std::pair<const char*, std::size_t>> g) {
  Step out;
  for (const auto& [t, n] : g) out.add(net.transition(t), n);
  return out;
}

/// The two maximal processes of NET-A for "a b c": c consumes a's token
/// (oldest-first) or b's token.
inline Process fig1_left(const Net& a) { return build_process(a, word(a, "a b c")); }
inline Process fig1_right(const Net& a) {
  return build_process(a, word(a, "a b c"), TokenPolicy::explicit_choice({1}));
}

/// Uniformly random firing sequence of length <= max_len (stops early at a
/// dead marking).
inline Word random_firing_sequence(const Net& net, std::size_t max_len, std::mt19937_64& rng) {
  Word w;
  Marking m = net.initial_marking();
  for (std::size_t i = 0; i < max_len; ++i) {
    auto en = enabled_transitions(net, m);
    if (en.empty()) break;
    auto t = en[std::uniform_int_distribution<std::size_t>(0, en.size() - 1)(rng)];
    w.push_back(t);
    m = fire_unchecked(net, m, t);
  }
  return w;
}

}  // namespace pnsem::testing
