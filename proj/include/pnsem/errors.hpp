#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pnsem {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
inline std::string join_lines(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}
}  // namespace detail

/// A net description violating one or more well-formedness rules.
struct InvalidNet : Error {
  explicit InvalidNet(std::vector<std::string> v)
      : Error("invalid net: " + detail::join_lines(v)), violations(std::move(v)) {}
  std::vector<std::string> violations;
};

/// A candidate process violating one or more process conditions.
struct InvalidProcess : Error {
  explicit InvalidProcess(std::vector<std::string> v)
      : Error("invalid process: " + detail::join_lines(v)), violations(std::move(v)) {}
  std::vector<std::string> violations;
};

/// Firing failed at a 1-based position of a sequence (0 for a single step).
struct NotEnabled : Error {
  NotEnabled(std::size_t pos, std::string what)
      : Error(pos == 0 ? what + " not enabled"
                       : what + " not enabled at position " + std::to_string(pos)),
        position(pos),
        transition(std::move(what)) {}
  std::size_t position;
  std::string transition;
};

/// Text input rejected; one diagnostic per problem, prefixed "line N: " when
/// a line is known.
struct ParseError : Error {
  explicit ParseError(std::vector<std::string> d)
      : Error(detail::join_lines(d)), diagnostics(std::move(d)) {}
  ParseError(std::size_t line_no, const std::string& msg)
      : ParseError(std::vector<std::string>{
            line_no == 0 ? msg : "line " + std::to_string(line_no) + ": " + msg}) {}
  std::vector<std::string> diagnostics;
};

struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace pnsem
