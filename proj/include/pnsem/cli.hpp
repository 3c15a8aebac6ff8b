#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pnsem.hpp"

namespace pnsem::cli {

enum ExitCode : int { ok = 0, negative = 1, unknown = 2, usage = 64, data = 65 };

namespace detail {

struct UsageError : Error {
  using Error::Error;
};

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Net load_net(const std::string& path) {
  try {
    return parse_net(read_text(path));
  } catch (const ParseError& e) {
    std::vector<std::string> d;
    for (const auto& x : e.diagnostics) d.push_back(path + ": " + x);
    throw ParseError(std::move(d));
  }
}

/// How a process is obtained on the command line: from a sequence and a
/// token policy, or from a structured export.
struct ProcessSpec {
  std::string seq;
  std::vector<std::size_t> choice;
  std::string policy = "oldest";
  std::string file;
  bool given() const { return !seq.empty() || !file.empty(); }
};

inline Process make_process(const Net& net, const ProcessSpec& s) {
  if (!s.file.empty()) return import_process(net, read_text(s.file));
  TokenPolicy p = TokenPolicy::oldest_first();
  if (!s.choice.empty())
    p = TokenPolicy::explicit_choice(s.choice);
  else if (s.policy == "newest")
    p = TokenPolicy::newest_first();
  return build_process(net, parse_word(net, s.seq), p);
}

inline void add_process_options(CLI::App* cmd, ProcessSpec& s, const std::string& suffix = "") {
  cmd->add_option("--seq" + suffix, s.seq, "firing sequence, e.g. \"a b c\"");
  cmd->add_option("--choice" + suffix, s.choice,
                  "token choices: index among available tokens, one per ambiguous pick");
  cmd->add_option("--policy" + suffix, s.policy, "token policy without --choice")
      ->check(CLI::IsMember({"oldest", "newest"}));
  cmd->add_option("--proc" + suffix, s.file, "structured process export to read instead");
}

inline std::string marking_name(const Net& net, const Word& sigma, const Marking& m) {
  if (sigma.empty()) return "M0";
  return format_marking(net, m) + " after " + format_word(net, sigma);
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ParseError(0, "cannot write " + path);
  f << text;
}

}  // namespace detail

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`; returns the exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Place/transition net semantics workbench", "pnsem"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  std::string net_path;
  std::size_t depth = 12, tokens = 16, gmax = 4, limit = 10000;
  auto add_net = [&](CLI::App* cmd) { cmd->add_option("net", net_path, "net file")->required(); };
  auto add_bounds = [&](CLI::App* cmd) {
    cmd->add_option("--depth", depth, "firing depth bound")->capture_default_str();
    cmd->add_option("--tokens", tokens, "per-place token bound")->capture_default_str();
  };
  auto bounds = [&] { return Bounds{depth, tokens, gmax}; };

  std::function<int()> action;
  detail::ProcessSpec proc1, proc2;
  std::string seq, seq2, step_text, format = "structured", output, method = "via-traces";
  bool raw = false;

  auto* validate = app.add_subcommand("validate", "check a net file");
  add_net(validate);
  validate->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      out << "valid net: " << net.place_count() << " places, " << net.transition_count()
          << " transitions, initial marking " << format_marking(net, net.initial_marking()) << '\n';
      return ok;
    };
  });

  auto* fire = app.add_subcommand("fire", "fire a sequence or a single step from the initial marking");
  add_net(fire);
  fire->add_option("--seq", seq, "firing sequence");
  fire->add_option("--step", step_text, "step as a list of transitions, e.g. \"a b\"");
  fire->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      try {
        Marking m = net.initial_marking();
        if (!step_text.empty()) m = fire_step(net, m, step_of(parse_word(net, step_text)));
        m = fire_sequence(net, m, parse_word(net, seq));
        out << "marking " << format_marking(net, m) << '\n';
        return ok;
      } catch (const NotEnabled& e) {
        out << "not enabled: " << e.what() << '\n';
        return negative;
      }
    };
  });

  auto* reach = app.add_subcommand("reach", "explore reachable markings");
  add_net(reach);
  add_bounds(reach);
  reach->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      auto ex = explore(net, depth, tokens);
      for (std::size_t i = 0; i < ex.size(); ++i)
        out << "M" << i << ' ' << format_marking(net, ex.markings[i]) << " via "
            << format_word(net, ex.witness[i]) << '\n';
      out << ex.size() << " markings, truncated=" << (ex.truncated ? "true" : "false") << '\n';
      return ex.truncated ? unknown : ok;
    };
  });

  auto* process = app.add_subcommand("process", "build a process and export it");
  add_net(process);
  detail::add_process_options(process, proc1);
  process->add_option("--format", format)->check(CLI::IsMember({"structured", "graph"}));
  process->add_option("--output", output, "write to a file instead of the output stream");
  process->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      Process p = detail::make_process(net, proc1);
      detail::write_output(output,
                           export_process(p, format == "graph" ? ProcessFormat::graph : ProcessFormat::structured),
                           out);
      return ok;
    };
  });

  auto* lin = app.add_subcommand("lin", "linearisations of a process");
  add_net(lin);
  detail::add_process_options(lin, proc1);
  lin->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      auto ls = linearisations(detail::make_process(net, proc1));
      for (const auto& w : ls) out << format_word(net, w) << '\n';
      out << ls.size() << " linearisations\n";
      return ok;
    };
  });

  auto* pi = app.add_subcommand("pi", "processes having a sequence as linearisation");
  add_net(pi);
  pi->add_option("--seq", seq, "firing sequence")->required();
  pi->add_option("--limit", limit, "stop after this many processes")->capture_default_str();
  pi->add_flag("--raw", raw, "keep isomorphic duplicates");
  pi->add_option("--format", format, "also export every process")
      ->check(CLI::IsMember({"structured", "graph"}));
  pi->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      auto members = pi_members(net, parse_word(net, seq), !raw, limit);
      out << members.processes.size() << (raw ? " processes" : " processes up to isomorphism")
          << (members.truncated ? " (limit reached)" : "") << '\n';
      for (std::size_t i = 0; i < members.processes.size(); ++i) {
        const auto& p = members.processes[i];
        out << "process " << i + 1 << ": linearisations";
        for (const auto& w : linearisations(p)) out << ' ' << format_word(net, w);
        out << '\n';
        if (pi->count("--format"))
          out << export_process(p, format == "graph" ? ProcessFormat::graph : ProcessFormat::structured);
      }
      return members.truncated ? unknown : ok;
    };
  });

  auto* swap_equiv = app.add_subcommand("swap-equiv", "swapping equivalence of two processes");
  add_net(swap_equiv);
  detail::add_process_options(swap_equiv, proc1, "1");
  detail::add_process_options(swap_equiv, proc2, "2");
  swap_equiv->add_option("--seq", proc1.seq, "sequence for both processes unless --seq2 is given");
  swap_equiv->add_option("--method", method)->check(CLI::IsMember({"via-traces", "direct-bfs"}));
  swap_equiv->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      if (proc2.seq.empty() && proc2.file.empty()) proc2.seq = proc1.seq;
      if (!proc1.given() || !proc2.given()) throw detail::UsageError("two processes are needed");
      Process a = detail::make_process(net, proc1);
      Process b = detail::make_process(net, proc2);
      bool eq = swap_equivalent(a, b, method == "direct-bfs" ? SwapMethod::direct_bfs : SwapMethod::via_traces);
      out << (eq ? "true" : "false") << '\n';
      return eq ? ok : negative;
    };
  });

  auto* trace_cls = app.add_subcommand("trace-class", "equivalence class of a firing sequence");
  add_net(trace_cls);
  trace_cls->add_option("--seq", seq, "firing sequence")->required();
  trace_cls->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      auto c = trace_class(net, parse_word(net, seq));
      out << "class size " << c.size() << ", representative " << format_word(net, c.representative())
          << '\n';
      for (const auto& w : c.members()) out << format_word(net, w) << '\n';
      return ok;
    };
  });

  auto* trace_eq = app.add_subcommand("trace-equiv", "whether two firing sequences are equivalent");
  add_net(trace_eq);
  trace_eq->add_option("--seq,--seq1", seq, "first sequence")->required();
  trace_eq->add_option("--seq2", seq2, "second sequence")->required();
  trace_eq->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      bool eq = trace_equivalent(net, parse_word(net, seq), parse_word(net, seq2));
      out << (eq ? "true" : "false") << '\n';
      return eq ? ok : negative;
    };
  });

  auto print_runs = [&](const Net& net, const RunEnumeration& e) {
    if (e.maximal.size() == 1) {
      const auto& c = e.classes[e.maximal[0]];
      out << "1 maximal run (" << c.size() << " sequences), representative "
          << format_word(net, c.representative()) << '\n';
    } else {
      out << e.maximal.size() << " maximal runs\n";
      for (auto i : e.maximal)
        out << "run: representative " << format_word(net, e.classes[i].representative()) << " ("
            << e.classes[i].size() << " sequences)\n";
    }
    out << e.classes.size() << " classes, truncated=" << (e.truncated ? "true" : "false")
        << ", verdict " << to_string(e.verdict) << " (" << e.reason << ")\n";
  };

  auto* runs = app.add_subcommand("runs", "maximal runs up to a length bound");
  add_net(runs);
  add_bounds(runs);
  runs->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      auto e = enumerate_runs(net, depth, {12, tokens, gmax});
      print_runs(net, e);
      return e.verdict == Uniqueness::unknown ? unknown : ok;
    };
  });

  auto* rcf = app.add_subcommand("run-conflict-free", "conflict-freeness of a finite run");
  add_net(rcf);
  add_bounds(rcf);
  rcf->add_option("--seq", seq, "largest sequence of the run (default: the unique maximal run)");
  rcf->add_option("--gmax", gmax, "multiplicity bound")->capture_default_str();
  rcf->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      TraceClass top;
      if (!seq.empty()) {
        top = trace_class(net, parse_word(net, seq));
      } else {
        auto e = enumerate_runs(net, depth, {12, tokens, gmax});
        if (e.maximal.size() != 1)
          throw detail::UsageError(std::to_string(e.maximal.size()) +
                                   " maximal runs within the bound; choose one with --seq");
        top = e.classes[e.maximal[0]];
      }
      auto v = run_conflict_free(net, FiniteRun(top), gmax);
      if (v.violated()) {
        out << "violated: sigma=" << format_word(net, v.witness->sigma)
            << ", G=" << format_step(net, v.witness->g) << '\n';
        return negative;
      }
      out << to_string(v.status) << " (gmax " << gmax << ")\n";
      return ok;
    };
  });

  auto* conflicts = app.add_subcommand("conflicts", "reachable semantic conflicts");
  add_net(conflicts);
  add_bounds(conflicts);
  conflicts->add_option("--gmax", gmax, "multiplicity bound")->capture_default_str();
  conflicts->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      auto found = find_conflicts(net, bounds());
      for (const auto& w : found.witnesses)
        out << '(' << format_word(net, w.sigma) << ", " << format_marking(net, w.marking) << ", "
            << format_step(net, w.g) << ")\n";
      out << found.witnesses.size() << " minimal conflicts, truncated="
          << (found.truncated ? "true" : "false") << '\n';
      if (!found.witnesses.empty()) return negative;
      return found.truncated ? unknown : ok;
    };
  });

  auto* structural = app.add_subcommand("structural", "structural conflict net check");
  add_net(structural);
  add_bounds(structural);
  structural->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      auto v = check_structural(net, bounds());
      if (v.violated()) {
        const auto& w = *v.witness;
        std::string shared;
        for (const auto& [s, n] : w.shared) shared += (shared.empty() ? "" : ", ") + net.name(s);
        Step g;
        g.add(w.t);
        g.add(w.u);
        out << "violated: marking " << detail::marking_name(net, w.sigma, w.marking) << ", step "
            << format_step(net, g) << ", shared preplace"
            << (w.shared.support_size() > 1 ? "s " : " ") << shared << '\n';
        return negative;
      }
      out << to_string(v.status) << '\n';
      return v.holds() ? ok : unknown;
    };
  });

  auto* maxp = app.add_subcommand("max-processes", "maximal processes up to swapping");
  add_net(maxp);
  add_bounds(maxp);
  maxp->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      auto m = maximal_processes(net, depth, {12, tokens, gmax});
      out << m.classes.size() << " maximal process" << (m.classes.size() == 1 ? "" : "es")
          << " up to swapping, verdict " << to_string(m.verdict) << " (" << m.reason << ")\n";
      for (std::size_t i = 0; i < m.classes.size(); ++i)
        out << "class: " << format_word(net, m.classes[i].canonical())
            << (m.terminal[i] ? " (no extension)" : "") << '\n';
      return m.verdict == Uniqueness::unknown ? unknown : ok;
    };
  });

  auto* bd = app.add_subcommand("bdify", "swap classes of all prefixes of a process, closed downwards");
  add_net(bd);
  detail::add_process_options(bd, proc1);
  bd->callback([&] {
    action = [&] {
      Net net = detail::load_net(net_path);
      auto run = bdify(detail::make_process(net, proc1));
      out << run.classes.size() << " classes\n";
      for (const auto& c : run.classes) out << format_word(net, c.canonical()) << '\n';
      return ok;
    };
  });

  GenParams gen;
  std::string kind = "any";
  std::size_t attempts = 1000;
  auto* generate = app.add_subcommand("generate", "random net");
  generate->add_option("--places", gen.place_count)->capture_default_str();
  generate->add_option("--transitions", gen.transition_count)->capture_default_str();
  generate->add_option("--density", gen.arc_density)->capture_default_str();
  generate->add_option("--max-weight", gen.max_weight)->capture_default_str();
  generate->add_option("--max-tokens", gen.max_initial_tokens)->capture_default_str();
  generate->add_option("--seed", gen.seed)->capture_default_str();
  generate->add_option("--kind", kind, "any, structural or one-safe")
      ->check(CLI::IsMember({"any", "structural", "one-safe"}));
  generate->add_option("--attempts", attempts, "rejection sampling budget")->capture_default_str();
  add_bounds(generate);
  generate->callback([&] {
    action = [&] {
      try {
        check_params(gen);
      } catch (const PreconditionError& e) {
        throw detail::UsageError(e.what());
      }
      if (kind == "any") {
        out << write_net(random_net(gen));
        return ok;
      }
      auto g = kind == "structural" ? random_structural_conflict_net(gen, bounds(), attempts)
                                    : random_one_safe_net(gen, depth, attempts);
      if (!g.net) {
        err << "no net accepted after " << g.attempts << " attempts\n";
        return unknown;
      }
      out << "# seed " << g.seed << ", accepted after " << g.attempts << " attempts\n"
          << write_net(*g.net);
      return ok;
    };
  });

  std::uint64_t seed = 1;
  std::string witness_dir;
  bool quick = false;
  auto* theorems = app.add_subcommand("theorems", "cross-checking property suite");
  theorems->add_option("--seed", seed)->capture_default_str();
  theorems->add_option("--witness-dir", witness_dir, "write one replayable file per failure");
  theorems->add_flag("--quick", quick, "a tenth of the default instance counts");
  theorems->callback([&] {
    action = [&] {
      SuiteSizes sizes;
      if (quick) sizes = {10, 20, 20, 10, 10, 5};
      bool all = true;
      for (const auto& r : run_suite(seed, sizes)) {
        out << (r.passed() ? "PASS " : "FAIL ") << r.summary() << '\n';
        all = all && r.passed();
        for (std::size_t i = 0; i < r.failures.size(); ++i) {
          if (witness_dir.empty()) {
            err << r.id << " failure " << i + 1 << ":\n" << r.failures[i].witness_file();
            continue;
          }
          std::filesystem::create_directories(witness_dir);
          auto path = std::filesystem::path(witness_dir) / (r.id + "-" + std::to_string(i + 1) + ".net");
          detail::write_output(path.string(), r.failures[i].witness_file(), out);
          err << "witness written to " << path.string() << '\n';
        }
      }
      return all ? ok : negative;
    };
  });

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }
  try {
    return action();
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const ParseError& e) {
    for (const auto& d : e.diagnostics) err << d << '\n';
    return data;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return data;
  }
}

}  // namespace pnsem::cli
