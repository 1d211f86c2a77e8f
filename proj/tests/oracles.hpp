#pragma once

// Test-only reference implementations.  Nothing here calls into the code
// paths it is used to check: determinants are Leibniz sums over int64,
// chirotope values are looked up through a map built independently, and
// the axiom checker quantifies over every signed tuple literally.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "om/om.hpp"

namespace oracle {

inline int perm_parity(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

/// Leibniz expansion.
inline long long det(const std::vector<std::vector<long long>>& m) {
  const int n = static_cast<int>(m.size());
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  long long total = 0;
  do {
    long long prod = perm_parity(p);
    for (int i = 0; i < n; ++i) prod *= m[i][p[i]];
    total += prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

inline int sgn(long long x) { return (x > 0) - (x < 0); }

/// Lexicographic r-subsets of {1..n}, generated recursively.
inline std::vector<std::vector<int>> lex_subsets(int n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int next) {
    if (static_cast<int>(cur.size()) == r) {
      out.push_back(cur);
      return;
    }
    for (int e = next; e <= n; ++e) {
      cur.push_back(e);
      rec(e + 1);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

/// Chirotope values of integer rows via Leibniz, keyed by support.
inline std::map<std::vector<int>, int> det_signs(const std::vector<std::vector<long long>>& rows) {
  const int n = static_cast<int>(rows.size());
  const int r = static_cast<int>(rows[0].size());
  std::map<std::vector<int>, int> out;
  for (const auto& s : lex_subsets(n, r)) {
    std::vector<std::vector<long long>> m;
    for (int e : s) m.push_back(rows[e - 1]);
    out[s] = sgn(det(m));
  }
  return out;
}

/// Independent evaluation of a sign map on a signed tuple.
class Evaluator {
 public:
  explicit Evaluator(const om::SignMap& m) : n_(m.size()), r_(m.rank) {
    const auto subsets = lex_subsets(n_, r_);
    for (std::size_t i = 0; i < subsets.size(); ++i) values_[subsets[i]] = m.values[i];
  }
  // signed ints: +e or -e (barred)
  int operator()(const std::vector<int>& t) const {
    std::vector<int> u;
    int sign = 1;
    for (int x : t) {
      u.push_back(std::abs(x));
      if (x < 0) sign = -sign;
    }
    std::vector<int> sorted = u;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return 0;
    return sign * perm_parity(u) * values_.at(sorted);
  }
  int n() const { return n_; }
  int r() const { return r_; }

 private:
  int n_, r_;
  std::map<std::vector<int>, int> values_;
};

// All tuples of length k over `alphabet`.
inline void tuples(const std::vector<int>& alphabet, int k, const std::function<bool(const std::vector<int>&)>& f) {
  std::vector<int> t(k);
  std::function<bool(int)> rec = [&](int i) {
    if (i == k) return f(t);
    for (int a : alphabet) {
      t[i] = a;
      if (!rec(i + 1)) return false;
    }
    return true;
  };
  rec(0);
}

/// Axioms C1, C3, C4 checked literally over signed tuples.
inline bool naive_is_chirotope(const om::SignMap& m) {
  Evaluator chi(m);
  const int n = m.size();
  const int r = m.rank;
  std::vector<int> elems, signed_elems;
  for (int e = 1; e <= n; ++e) {
    elems.push_back(e);
    signed_elems.push_back(e);
    signed_elems.push_back(-e);
  }
  // C1
  for (int e = 1; e <= n; ++e) {
    bool found = false;
    tuples(elems, r - 1, [&](const std::vector<int>& rest) {
      std::vector<int> t{e};
      t.insert(t.end(), rest.begin(), rest.end());
      if (chi(t) != 0) found = true;
      return !found;
    });
    if (!found) return false;
  }
  // C3
  bool ok = true;
  std::vector<std::vector<int>> nonzero;
  tuples(elems, r, [&](const std::vector<int>& t) {
    if (chi(t) != 0) nonzero.push_back(t);
    return true;
  });
  for (const auto& x : nonzero) {
    for (const auto& y : nonzero) {
      bool found = false;
      for (int i = 0; i < r && !found; ++i) {
        auto t = x;
        t[r - 1] = y[i];
        found = chi(t) != 0;
      }
      if (!found) return false;
    }
  }
  // C4
  if (r >= 2) {
    tuples(signed_elems, r + 2, [&](const std::vector<int>& v) {
      std::vector<int> x(v.begin(), v.begin() + r);
      const int y1 = v[r], y2 = v[r + 1];
      auto with = [&](int i, int val) {
        auto t = x;
        t[i] = val;
        return t;
      };
      auto tail = [&](int a, int b) {
        auto t = x;
        t[r - 2] = a;
        t[r - 1] = b;
        return t;
      };
      const int p1 = chi(with(r - 2, y1)) * chi(with(r - 1, y2));
      const int p2 = chi(with(r - 2, y2)) * chi(with(r - 1, -y1));
      const int q = chi(x) * chi(tail(y1, y2));
      if (p1 >= 0 && p2 >= 0 && q < 0) ok = false;
      return ok;
    });
  }
  return ok;
}

/// Canonical form by exploring the equivalence class with generator moves
/// [.., x_i, x_{i+1}, ..] -> [.., ~x_{i+1}, x_i, ..] until the ascending
/// representative with at most the last entry barred is reached.
inline std::optional<om::CanonicalBasis> normalize_by_moves(const std::vector<int>& t) {
  std::vector<int> u;
  for (int x : t) u.push_back(std::abs(x));
  std::sort(u.begin(), u.end());
  if (std::adjacent_find(u.begin(), u.end()) != u.end()) return std::nullopt;
  std::set<std::vector<int>> seen{t};
  std::vector<std::vector<int>> stack{t};
  while (!stack.empty()) {
    auto cur = stack.back();
    stack.pop_back();
    bool ascending = true;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (i + 1 < cur.size() && cur[i] < 0) ascending = false;
      if (i > 0 && std::abs(cur[i - 1]) > std::abs(cur[i])) ascending = false;
    }
    if (ascending) return om::CanonicalBasis{u, cur.empty() || cur.back() > 0 ? 1 : -1};
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      auto nxt = cur;
      nxt[i] = -cur[i + 1];
      nxt[i + 1] = cur[i];
      if (seen.insert(nxt).second) stack.push_back(nxt);
    }
  }
  return std::nullopt;
}

/// Random full-rank integer configuration with entries in [lo, hi].
inline std::vector<std::vector<long long>> random_rows(std::mt19937_64& rng, int n, int r, int lo = -5, int hi = 5) {
  std::uniform_int_distribution<int> dist(lo, hi);
  while (true) {
    std::vector<std::vector<long long>> rows(n, std::vector<long long>(r));
    bool zero_row = false;
    for (auto& row : rows) {
      for (auto& x : row) x = dist(rng);
      zero_row |= std::all_of(row.begin(), row.end(), [](long long x) { return x == 0; });
    }
    if (zero_row) continue;
    // full rank: some r x r minor nonzero
    for (const auto& s : lex_subsets(n, r)) {
      std::vector<std::vector<long long>> m;
      for (int e : s) m.push_back(rows[e - 1]);
      if (det(m) != 0) return rows;
    }
  }
}

inline bool is_uniform(const std::vector<std::vector<long long>>& rows) {
  for (const auto& [s, v] : det_signs(rows))
    if (v == 0) return false;
  return true;
}

/// Rank-2 hyperline sequence read off by rotating a line through the
/// origin: the 2n signed vectors +-v_i sorted by angle, equal directions
/// sharing an atom.  Exact: comparisons use half planes and cross products.
inline om::HyperlineSequence rank2_by_angle(const std::vector<std::vector<long long>>& rows) {
  struct Ray {
    long long x, y;
    om::SignedElement e;
  };
  std::vector<Ray> rays;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int e = static_cast<int>(i) + 1;
    rays.push_back({rows[i][0], rows[i][1], om::pos(e)});
    rays.push_back({-rows[i][0], -rows[i][1], om::bar(e)});
  }
  auto half = [](const Ray& r) { return (r.y < 0 || (r.y == 0 && r.x < 0)) ? 1 : 0; };
  auto cross = [](const Ray& a, const Ray& b) { return a.x * b.y - a.y * b.x; };
  std::sort(rays.begin(), rays.end(), [&](const Ray& a, const Ray& b) {
    if (half(a) != half(b)) return half(a) < half(b);
    return cross(a, b) > 0;
  });
  std::vector<std::vector<om::SignedElement>> atoms;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (i == 0 || half(rays[i]) != half(rays[i - 1]) || cross(rays[i - 1], rays[i]) != 0) atoms.emplace_back();
    atoms.back().push_back(rays[i].e);
  }
  return om::make_rank2(std::move(atoms));
}

inline om::SignMap to_map(int n, int r, const std::string& body) {
  om::SignMap m(n, r);
  for (std::size_t i = 0; i < body.size(); ++i) m.values[i] = body[i] == '+' ? 1 : body[i] == '-' ? -1 : 0;
  return m;
}

}  // namespace oracle
