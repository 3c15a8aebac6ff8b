#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "net.hpp"
#include "process.hpp"

namespace pnsem {

namespace detail {

inline bool is_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

inline bool parse_natural(std::string_view s, std::size_t& out) {
  if (s.empty() || s.size() > 18) return false;
  out = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    out = out * 10 + static_cast<std::size_t>(c - '0');
  }
  return true;
}

inline std::vector<std::string> tokens_of(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream in(body);
  std::vector<std::string> toks;
  std::string tok;
  while (in >> tok) toks.push_back(tok);
  return toks;
}

}  // namespace detail

/// Parses the line-oriented net format:
///
///     place <id> [<tokens>]
///     trans <id>
///     arc <from> <to> [<weight>]
///
/// `#` starts a comment. Names are declared before use. Every problem found
/// is reported with its line number in a single ParseError.
inline Net parse_net(std::string_view text) {
  std::vector<std::string> diag;
  auto report = [&](std::size_t line, const std::string& msg) {
    diag.push_back("line " + std::to_string(line) + ": " + msg);
  };
  NetDescription d;
  std::map<std::string, std::size_t> place_line, trans_line;
  std::set<std::pair<std::string, std::string>> arcs;
  std::set<std::string> has_pre;

  std::istringstream in{std::string(text)};
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tok = detail::tokens_of(line);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    if (kw == "place") {
      if (tok.size() < 2 || tok.size() > 3) {
        report(no, "expected 'place <id> [<tokens>]'");
        continue;
      }
      std::size_t n = 0;
      if (!detail::is_identifier(tok[1])) {
        report(no, "invalid identifier '" + tok[1] + "'");
        continue;
      }
      if (tok.size() == 3 && !detail::parse_natural(tok[2], n)) {
        report(no, "invalid token count '" + tok[2] + "'");
        continue;
      }
      if (place_line.count(tok[1]) || trans_line.count(tok[1])) {
        report(no, "duplicate declaration of '" + tok[1] + "'");
        continue;
      }
      place_line[tok[1]] = no;
      d.places.push_back({tok[1], n});
    } else if (kw == "trans") {
      if (tok.size() != 2) {
        report(no, "expected 'trans <id>'");
        continue;
      }
      if (!detail::is_identifier(tok[1])) {
        report(no, "invalid identifier '" + tok[1] + "'");
        continue;
      }
      if (place_line.count(tok[1]) || trans_line.count(tok[1])) {
        report(no, "duplicate declaration of '" + tok[1] + "'");
        continue;
      }
      trans_line[tok[1]] = no;
      d.transitions.push_back(tok[1]);
    } else if (kw == "arc") {
      if (tok.size() < 3 || tok.size() > 4) {
        report(no, "expected 'arc <from> <to> [<weight>]'");
        continue;
      }
      std::size_t w = 1;
      if (tok.size() == 4 && !detail::parse_natural(tok[3], w)) {
        report(no, "invalid weight '" + tok[3] + "'");
        continue;
      }
      const auto& from = tok[1];
      const auto& to = tok[2];
      bool ok = true;
      for (const auto& id : {from, to})
        if (!place_line.count(id) && !trans_line.count(id)) {
          report(no, "'" + id + "' used before declaration");
          ok = false;
        }
      if (!ok) continue;
      bool pt = place_line.count(from) && trans_line.count(to);
      bool tp = trans_line.count(from) && place_line.count(to);
      if (!pt && !tp) {
        report(no, "arc " + from + " -> " + to + " must connect a place and a transition");
        continue;
      }
      if (w == 0) {
        report(no, "arc " + from + " -> " + to + " has zero weight");
        continue;
      }
      if (!arcs.insert({from, to}).second) {
        report(no, "duplicate arc " + from + " -> " + to);
        continue;
      }
      if (pt) has_pre.insert(to);
      d.arcs.push_back({from, to, w});
    } else {
      report(no, "unknown keyword '" + kw + "'");
    }
  }
  for (const auto& [t, no] : trans_line)
    if (!has_pre.count(t)) report(no, "transition '" + t + "' has an empty preset");
  if (!diag.empty()) {
    std::stable_sort(diag.begin(), diag.end(), [](const std::string& a, const std::string& b) {
      auto num = [](const std::string& s) { return std::stoul(s.substr(5)); };
      return num(a) < num(b);
    });
    throw ParseError(std::move(diag));
  }
  try {
    return validate_net(d);
  } catch (const InvalidNet& e) {
    throw ParseError(e.violations);
  }
}

/// Canonical text: places, then transitions, then arcs, each sorted by name.
/// Zero token counts and unit weights are omitted.
inline std::string write_net(const Net& net) {
  std::ostringstream out;
  for (auto s : net.places()) {
    out << "place " << net.name(s);
    if (auto n = net.initial_marking().count(s)) out << ' ' << n;
    out << '\n';
  }
  for (auto t : net.transitions()) out << "trans " << net.name(t) << '\n';
  auto d = net.describe();
  std::sort(d.arcs.begin(), d.arcs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  for (const auto& a : d.arcs) {
    out << "arc " << a.from << ' ' << a.to;
    if (a.weight != 1) out << ' ' << a.weight;
    out << '\n';
  }
  return out.str();
}

enum class ProcessFormat { structured, graph };

inline std::string occurrence_id(const Process& proc, const PlaceOccurrence& o) {
  return proc.net().name(o.label) + "@" + std::to_string(o.birth);
}
inline std::string occurrence_id(const Process& proc, const TransitionOccurrence& o) {
  return proc.net().name(o.label) + "@" + std::to_string(o.birth);
}

/// Structured form:
///
///     place <id> <label> initial|-
///     trans <id> <label>
///     arc <from-id> <to-id>
///
/// Graph form is Graphviz DOT: circles for place occurrences, boxes for
/// transition occurrences, labelled with their images in the net.
inline std::string export_process(const Process& proc, ProcessFormat format) {
  std::ostringstream out;
  const Net& net = proc.net();
  if (format == ProcessFormat::structured) {
    for (const auto& o : proc.places())
      out << "place " << occurrence_id(proc, o) << ' ' << net.name(o.label) << ' '
          << (o.initial ? "initial" : "-") << '\n';
    for (const auto& o : proc.transitions())
      out << "trans " << occurrence_id(proc, o) << ' ' << net.name(o.label) << '\n';
    for (std::size_t t = 0; t < proc.transition_count(); ++t) {
      for (auto p : proc.inputs(t))
        out << "arc " << occurrence_id(proc, proc.place(p)) << ' '
            << occurrence_id(proc, proc.transition(t)) << '\n';
      for (auto p : proc.outputs(t))
        out << "arc " << occurrence_id(proc, proc.transition(t)) << ' '
            << occurrence_id(proc, proc.place(p)) << '\n';
    }
    return out.str();
  }
  out << "digraph process {\n";
  for (const auto& o : proc.places())
    out << "  \"" << occurrence_id(proc, o) << "\" [shape=circle, label=\"" << net.name(o.label)
        << "\"];\n";
  for (const auto& o : proc.transitions())
    out << "  \"" << occurrence_id(proc, o) << "\" [shape=box, label=\"" << net.name(o.label)
        << "\"];\n";
  for (std::size_t t = 0; t < proc.transition_count(); ++t) {
    for (auto p : proc.inputs(t))
      out << "  \"" << occurrence_id(proc, proc.place(p)) << "\" -> \""
          << occurrence_id(proc, proc.transition(t)) << "\";\n";
    for (auto p : proc.outputs(t))
      out << "  \"" << occurrence_id(proc, proc.transition(t)) << "\" -> \""
          << occurrence_id(proc, proc.place(p)) << "\";\n";
  }
  out << "}\n";
  return out.str();
}

/// Reads the structured export back and validates the result against `net`.
inline Process import_process(const Net& net, std::string_view text) {
  Process proc(net);
  std::map<std::string, std::size_t> places, transitions;
  std::vector<std::string> diag;
  auto report = [&](std::size_t line, const std::string& msg) {
    diag.push_back("line " + std::to_string(line) + ": " + msg);
  };
  auto birth_of = [](const std::string& id, std::size_t fallback) {
    auto at = id.rfind('@');
    std::size_t b = 0;
    if (at != std::string::npos && detail::parse_natural(std::string_view(id).substr(at + 1), b))
      return b;
    return fallback;
  };
  std::size_t counter = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    auto tok = detail::tokens_of(line);
    if (tok.empty()) continue;
    if (tok[0] == "place" && tok.size() == 4) {
      auto s = net.find_place(tok[2]);
      if (!s) {
        report(no, "unknown place '" + tok[2] + "'");
        continue;
      }
      if (places.count(tok[1]) || transitions.count(tok[1])) {
        report(no, "duplicate occurrence '" + tok[1] + "'");
        continue;
      }
      places[tok[1]] = proc.add_place(*s, birth_of(tok[1], counter++), tok[3] == "initial");
    } else if (tok[0] == "trans" && tok.size() == 3) {
      auto t = net.find_transition(tok[2]);
      if (!t) {
        report(no, "unknown transition '" + tok[2] + "'");
        continue;
      }
      if (places.count(tok[1]) || transitions.count(tok[1])) {
        report(no, "duplicate occurrence '" + tok[1] + "'");
        continue;
      }
      transitions[tok[1]] = proc.add_transition(*t, birth_of(tok[1], counter++));
    } else if (tok[0] == "arc" && tok.size() == 3) {
      if (places.count(tok[1]) && transitions.count(tok[2]))
        proc.add_input(places[tok[1]], transitions[tok[2]]);
      else if (transitions.count(tok[1]) && places.count(tok[2]))
        proc.add_output(transitions[tok[1]], places[tok[2]]);
      else
        report(no, "arc " + tok[1] + " -> " + tok[2] + " does not join declared occurrences");
    } else {
      report(no, "unrecognised line");
    }
  }
  if (!diag.empty()) throw ParseError(std::move(diag));
  validate_process(proc);
  return proc;
}

}  // namespace pnsem
