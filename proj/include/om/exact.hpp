#pragma once

// Exact integer / rational linear algebra used for realization and for the
// Fourier-Motzkin tope oracle.  No floating point is involved anywhere.

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <utility>
#include <vector>

#include "om/core.hpp"

namespace om {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IntMatrix = std::vector<std::vector<Integer>>;

inline int sign_of(const Integer& x) { return x.sign(); }
inline int sign_of(const Rational& x) { return x.sign(); }

/// Scales a rational row by the (positive) lcm of its denominators.
inline std::vector<Integer> clear_denominators(std::span<const Rational> row) {
  Integer l = 1;
  for (const auto& q : row) {
    const Integer d = boost::multiprecision::denominator(q);
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  std::vector<Integer> out;
  out.reserve(row.size());
  for (const auto& q : row) out.push_back(boost::multiprecision::numerator(q) * (l / boost::multiprecision::denominator(q)));
  return out;
}

namespace detail {

// Fraction-free elimination in place.  Returns (rank, sign of the row
// permutation, last pivot).  For a square full-rank matrix the last pivot
// equals the determinant up to the returned permutation sign.
struct BareissResult {
  int rank = 0;
  int perm_sign = 1;
  Integer last_pivot = 1;
};

inline BareissResult bareiss(IntMatrix& m) {
  BareissResult res;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      std::swap(m[piv], m[r]);
      res.perm_sign = -res.perm_sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) / prev;
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  res.rank = static_cast<int>(r);
  res.last_pivot = prev;
  return res;
}

}  // namespace detail

/// Sign of the determinant of a square integer matrix.
inline int determinant_sign(IntMatrix m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw UsageError("determinant of a non-square matrix");
  if (n == 0) return 1;
  auto res = detail::bareiss(m);
  if (res.rank < static_cast<int>(n)) return 0;
  return res.perm_sign * sign_of(res.last_pivot);
}

inline int matrix_rank(IntMatrix m) { return detail::bareiss(m).rank; }

}  // namespace om
