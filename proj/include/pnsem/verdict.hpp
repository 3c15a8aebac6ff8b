#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace pnsem {

/// Outcome of a bounded check: it held everywhere the bounds allowed us to
/// look and the exploration was complete, it was violated (witness attached),
/// or the bounds ran out first.
enum class Status { holds, violated, unknown };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::holds: return "holds-within-bound";
    case Status::violated: return "violated";
    case Status::unknown: return "unknown";
  }
  return "?";
}

struct Bounds {
  std::size_t depth = 12;
  std::size_t tokens = 16;
  std::size_t gmax = 4;
};

template <typename Witness>
struct Verdict {
  Status status = Status::unknown;
  std::optional<Witness> witness;
  Bounds bounds;

  bool holds() const { return status == Status::holds; }
  bool violated() const { return status == Status::violated; }
};

/// Number of maximal runs (or maximal processes up to swapping) as far as a
/// bounded enumeration can tell.
enum class Uniqueness { unique, multiple, unknown };

inline const char* to_string(Uniqueness u) {
  switch (u) {
    case Uniqueness::unique: return "unique";
    case Uniqueness::multiple: return "multiple";
    case Uniqueness::unknown: return "unknown";
  }
  return "?";
}

}  // namespace pnsem
