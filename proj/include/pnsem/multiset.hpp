#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <utility>

namespace pnsem {

/// Finite multiset over an ordered element type.
///
/// Elements with count zero are never stored, so two multisets that differ
/// only in zero entries compare equal. All operations return values in that
/// normal form.
template <typename T>
class Multiset {
public:
  using value_type = std::pair<const T, std::size_t>;
  using const_iterator = typename std::map<T, std::size_t>::const_iterator;

  Multiset() = default;

  Multiset(std::initializer_list<std::pair<T, std::size_t>> entries) {
    for (const auto& [x, n] : entries) add(x, n);
  }

  static Multiset singleton(const T& x, std::size_t n = 1) {
    Multiset m;
    m.add(x, n);
    return m;
  }

  std::size_t count(const T& x) const {
    auto it = entries_.find(x);
    return it == entries_.end() ? 0 : it->second;
  }
  std::size_t operator[](const T& x) const { return count(x); }

  bool contains(const T& x) const { return entries_.count(x) != 0; }
  bool empty() const { return entries_.empty(); }

  /// Cardinality: sum of all counts.
  std::size_t size() const {
    std::size_t total = 0;
    for (const auto& [x, n] : entries_) total += n;
    return total;
  }

  /// Number of distinct elements.
  std::size_t support_size() const { return entries_.size(); }

  void add(const T& x, std::size_t n = 1) {
    if (n == 0) return;
    entries_[x] += n;
  }

  /// Removes up to n copies of x.
  void remove(const T& x, std::size_t n = 1) {
    auto it = entries_.find(x);
    if (it == entries_.end()) return;
    if (it->second <= n)
      entries_.erase(it);
    else
      it->second -= n;
  }

  void set(const T& x, std::size_t n) {
    if (n == 0)
      entries_.erase(x);
    else
      entries_[x] = n;
  }

  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  friend bool operator==(const Multiset&, const Multiset&) = default;
  friend auto operator<=>(const Multiset& a, const Multiset& b) {
    return a.entries_ <=> b.entries_;
  }

private:
  std::map<T, std::size_t> entries_;
};

enum class Combine { sum, monus, union_max };

template <typename T>
Multiset<T> combine(const Multiset<T>& a, const Multiset<T>& b, Combine kind) {
  Multiset<T> out;
  switch (kind) {
    case Combine::sum:
      out = a;
      for (const auto& [x, n] : b) out.add(x, n);
      break;
    case Combine::monus:
      for (const auto& [x, n] : a) {
        std::size_t m = b.count(x);
        if (n > m) out.set(x, n - m);
      }
      break;
    case Combine::union_max:
      out = a;
      for (const auto& [x, n] : b)
        if (n > out.count(x)) out.set(x, n);
      break;
  }
  return out;
}

template <typename T>
Multiset<T> operator+(const Multiset<T>& a, const Multiset<T>& b) {
  return combine(a, b, Combine::sum);
}

template <typename T>
Multiset<T> operator-(const Multiset<T>& a, const Multiset<T>& b) {
  return combine(a, b, Combine::monus);
}

/// Pointwise containment A(x) <= B(x).
template <typename T>
bool leq(const Multiset<T>& a, const Multiset<T>& b) {
  for (const auto& [x, n] : a)
    if (n > b.count(x)) return false;
  return true;
}

template <typename T>
Multiset<T> scale(std::size_t k, const Multiset<T>& a) {
  Multiset<T> out;
  if (k == 0) return out;
  for (const auto& [x, n] : a) out.set(x, k * n);
  return out;
}

/// Restriction to the elements satisfying `keep`, e.g. a set's membership test.
template <typename T, typename Pred>
Multiset<T> restrict_to(const Multiset<T>& a, Pred keep) {
  Multiset<T> out;
  for (const auto& [x, n] : a)
    if (keep(x)) out.set(x, n);
  return out;
}

template <typename T, typename Set>
  requires requires(const Set& s, const T& x) { s.count(x); }
Multiset<T> restrict(const Multiset<T>& a, const Set& domain) {
  return restrict_to(a, [&](const T& x) { return domain.count(x) != 0; });
}

template <typename T>
std::size_t size(const Multiset<T>& a) {
  return a.size();
}

}  // namespace pnsem
