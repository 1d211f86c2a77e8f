#pragma once

// Ground sets, signed elements and oriented simplices.
//
// Elements of a ground set are the integers 1..n in their natural order.
// A signed element is either an element e or its barred copy ~e; barring is
// an involution.  An oriented simplex is a tuple of signed elements with
// pairwise distinct underlying elements, taken up to the equivalence
// generated by  [.., x_i, x_{i+1}, ..] ~ [.., ~x_{i+1}, x_i, ..].
// Every class has exactly one representative with ascending support and at
// most the last entry barred; CanonicalBasis stores it as (support, sign).

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace om {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke a precondition (wrong arity, bad argument). CLI exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// The input is well formed but the requested operation is impossible on it.
/// CLI exit code 1.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed; this is a bug, not bad input.
class InvariantError : public Error {
 public:
  using Error::Error;
};

class GroundSet {
 public:
  explicit GroundSet(int n) : n_(n) {
    if (n < 1) throw UsageError("ground set must have at least one element");
  }
  int size() const noexcept { return n_; }

 private:
  int n_;
};

struct SignedElement {
  int element = 0;
  bool barred = false;

  // Orders 1 < ~1 < 2 < ~2 < ...
  constexpr auto operator<=>(const SignedElement&) const = default;

  constexpr int sign() const noexcept { return barred ? -1 : 1; }
};

constexpr SignedElement involute(SignedElement x) noexcept { return {x.element, !x.barred}; }
constexpr int underlying(SignedElement x) noexcept { return x.element; }
constexpr SignedElement pos(int e) noexcept { return {e, false}; }
constexpr SignedElement bar(int e) noexcept { return {e, true}; }

inline std::string to_string(SignedElement x) {
  return (x.barred ? "~" : "") + std::to_string(x.element);
}

using Simplex = std::vector<SignedElement>;

struct CanonicalBasis {
  std::vector<int> support;  // strictly ascending
  int sign = 1;              // +1 or -1

  auto operator<=>(const CanonicalBasis&) const = default;
};

inline CanonicalBasis operator-(CanonicalBasis b) {
  b.sign = -b.sign;
  return b;
}

/// Canonical form of a tuple, or nullopt when two entries share an
/// underlying element (a degenerate tuple, whose chirotope value is 0).
inline std::optional<CanonicalBasis> normalize(std::span<const SignedElement> tuple) {
  CanonicalBasis out;
  out.support.reserve(tuple.size());
  int sign = 1;
  for (const auto& x : tuple) {
    sign *= x.sign();
    out.support.push_back(x.element);
  }
  // insertion sort, counting transpositions
  auto& s = out.support;
  for (std::size_t i = 1; i < s.size(); ++i) {
    for (std::size_t j = i; j > 0 && s[j - 1] >= s[j]; --j) {
      if (s[j - 1] == s[j]) return std::nullopt;
      std::swap(s[j - 1], s[j]);
      sign = -sign;
    }
  }
  out.sign = sign;
  return out;
}

inline std::optional<CanonicalBasis> normalize(std::initializer_list<SignedElement> tuple) {
  return normalize(std::span<const SignedElement>(tuple.begin(), tuple.size()));
}

/// -[x_1,...,x_{d+1}] = [x_1,...,x_d,~x_{d+1}]
inline Simplex negate_simplex(Simplex s) {
  if (!s.empty()) s.back() = involute(s.back());
  return s;
}

/// Representative tuple of a canonical basis: ascending, last entry barred
/// when the sign is negative.
inline Simplex representative(const CanonicalBasis& b) {
  Simplex s;
  for (int e : b.support) s.push_back(pos(e));
  if (b.sign < 0 && !s.empty()) s.back().barred = true;
  return s;
}

// ---------------------------------------------------------------------------
// Subsets in lexicographic order

inline std::uint64_t binomial(int n, int k) {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, 65>, 65> t{};
    for (int i = 0; i <= 64; ++i) {
      t[i][0] = 1;
      for (int j = 1; j <= i; ++j) t[i][j] = t[i - 1][j - 1] + (j <= i - 1 ? t[i - 1][j] : 0);
    }
    return t;
  }();
  if (k < 0 || n < 0 || k > n || n > 64) return 0;
  return table[n][k];
}

/// Position of an ascending 0-based k-subset of {0..n-1} among all k-subsets
/// in lexicographic order.
inline std::size_t lex_index(std::span<const int> subset, int n) {
  const int k = static_cast<int>(subset.size());
  std::uint64_t idx = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    idx += binomial(n - prev - 1, k - i) - binomial(n - subset[i], k - i);
    prev = subset[i];
  }
  return static_cast<std::size_t>(idx);
}

/// Advances an ascending 0-based subset of {0..n-1} to its lexicographic
/// successor; returns false after the last one.
inline bool next_subset(std::vector<int>& s, int n) {
  const int k = static_cast<int>(s.size());
  int i = k - 1;
  while (i >= 0 && s[i] == n - k + i) --i;
  if (i < 0) return false;
  ++s[i];
  for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  return true;
}

/// Calls f(span<const int>) on every ascending 0-based k-subset of {0..n-1}
/// in lexicographic order.
template <class F>
void for_each_subset(int n, int k, F&& f) {
  if (k < 0 || k > n) return;
  std::vector<int> s(k);
  for (int i = 0; i < k; ++i) s[i] = i;
  do {
    f(std::span<const int>(s));
  } while (next_subset(s, n));
}

/// All ascending (d+1)-subsets of the ground set (1-based), lexicographic.
inline std::vector<std::vector<int>> enumerate_simplices(const GroundSet& ground, int d) {
  std::vector<std::vector<int>> out;
  if (d + 1 < 0) throw UsageError("simplex dimension must be at least -1");
  for_each_subset(ground.size(), d + 1, [&](std::span<const int> s) {
    std::vector<int> v(s.begin(), s.end());
    for (int& e : v) ++e;
    out.push_back(std::move(v));
  });
  return out;
}

}  // namespace om
