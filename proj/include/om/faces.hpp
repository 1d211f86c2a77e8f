#pragma once

// Combinatorial face data of sphere arrangements.
//
// Explicit arrangements are only modelled in rank 1 (points on S^0) and
// rank 2 (antipodal point pairs on S^1).  In general rank the arrangement is
// represented by its sign vectors: cocircuits are the vertices, covectors
// (compositions of cocircuits) label all cells and topes label the regions.
// For rank 3 the face census V - E + F recovers the Euler characteristic
// of the 2-sphere.

#include <map>
#include <set>

#include "om/chirotope.hpp"
#include "om/hyperline.hpp"

namespace om {

/// d+1 coordinate hyperspheres in S^d, oriented so that [1,...,d+1] has
/// the given sign.
inline Chirotope canonical_arrangement(int d, int sign) {
  if (d < 0) throw UsageError("dimension must be non-negative");
  if (sign != 1 && sign != -1) throw UsageError("sign must be +1 or -1");
  SignMap m(d + 1, d + 1);
  m.values[0] = static_cast<std::int8_t>(sign);
  return Chirotope::unchecked(std::move(m));
}

/// The two classes of n = r coincide with the two canonical arrangements
/// A(r-1,+) and A(r-1,-).
inline FullClass classify_arrangement_full(const Chirotope& chi) { return classify_full(chi); }

// ---------------------------------------------------------------------------
// Rank 1 and rank 2 arrangements

class ArrangementError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct ArrangementR1 {
  std::vector<int> elements;       // labels, ascending
  std::vector<int> positive_side;  // +1 or -1: which point of S^0 is S_i^+

  bool operator==(const ArrangementR1&) const = default;
};

inline ArrangementR1 represent_rank1(const HyperlineSequence& x) {
  if (x.rank != 1) throw UsageError("represent_rank1 needs a rank-1 sequence");
  auto rep = check_hyperline(x);
  if (!rep.ok()) throw InvalidHyperlineSequence(std::move(rep));
  ArrangementR1 a;
  for (auto e : x.rank1().chosen) {
    a.elements.push_back(e.element);
    a.positive_side.push_back(e.barred ? -1 : 1);
  }
  return a;
}

inline HyperlineSequence read_rank1(const ArrangementR1& a) {
  if (a.elements.size() != a.positive_side.size() || a.elements.empty())
    throw ArrangementError("rank-1 arrangement must give one side per element");
  std::vector<SignedElement> chosen;
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    if (a.positive_side[i] != 1 && a.positive_side[i] != -1)
      throw ArrangementError("positive side must be +1 or -1");
    chosen.push_back({a.elements[i], a.positive_side[i] < 0});
  }
  return make_rank1(std::move(chosen));
}

/// Points on S^1 placed at the 2k-th roots of unity.  Element i has its
/// positive point at position a_i and its negative point at a_i + k.
struct ArrangementR2 {
  int period = 0;                // 2k
  std::vector<int> elements;     // labels, ascending
  std::vector<int> position;     // a_i in 0..2k-1

  bool operator==(const ArrangementR2&) const = default;
};

inline ArrangementR2 represent_rank2(const HyperlineSequence& x) {
  if (x.rank != 2) throw UsageError("represent_rank2 needs a rank-2 sequence");
  auto rep = check_hyperline(x);
  if (!rep.ok()) throw InvalidHyperlineSequence(std::move(rep));
  ArrangementR2 a;
  a.period = x.period();
  a.elements = x.ground;
  a.position.assign(x.ground.size(), -1);
  const auto& atoms = x.rank2().atoms;
  for (std::size_t p = 0; p < atoms.size(); ++p)
    for (auto e : atoms[p])
      if (!e.barred) {
        auto it = std::lower_bound(a.elements.begin(), a.elements.end(), e.element);
        a.position[it - a.elements.begin()] = static_cast<int>(p);
      }
  return a;
}

inline HyperlineSequence read_rank2(const ArrangementR2& a) {
  const int p = a.period;
  if (p < 2 || p % 2 != 0) throw ArrangementError("period must be a positive even number");
  if (a.elements.size() != a.position.size() || a.elements.empty())
    throw ArrangementError("rank-2 arrangement must give one position per element");
  const int k = p / 2;
  std::vector<std::vector<SignedElement>> atoms(p);
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    const int ai = a.position[i];
    if (ai < 0 || ai >= p) throw ArrangementError("position " + std::to_string(ai) + " outside C_" + std::to_string(p));
    atoms[ai].push_back(pos(a.elements[i]));
    atoms[(ai + k) % p].push_back(bar(a.elements[i]));
  }
  for (int q = 0; q < p; ++q)
    if (atoms[q].empty())
      throw ArrangementError("position " + std::to_string(q) + " hosts no point; positions are inconsistent with period " +
                             std::to_string(p));
  return make_rank2(std::move(atoms));
}

// ---------------------------------------------------------------------------
// Sign vectors

struct SignVector {
  std::vector<std::int8_t> s;

  int size() const noexcept { return static_cast<int>(s.size()); }
  int operator[](int e) const { return s[e - 1]; }  // 1-based
  bool is_zero() const {
    return std::all_of(s.begin(), s.end(), [](std::int8_t v) { return v == 0; });
  }
  bool full_support() const {
    return std::none_of(s.begin(), s.end(), [](std::int8_t v) { return v == 0; });
  }
  std::vector<int> zero_support() const {
    std::vector<int> z;
    for (int i = 0; i < size(); ++i)
      if (s[i] == 0) z.push_back(i + 1);
    return z;
  }

  auto operator<=>(const SignVector&) const = default;
};

inline SignVector operator-(SignVector v) {
  for (auto& x : v.s) x = static_cast<std::int8_t>(-x);
  return v;
}

inline std::string to_string(const SignVector& v) {
  std::string out;
  for (auto x : v.s) out += x > 0 ? '+' : x < 0 ? '-' : '0';
  return out;
}

inline SignVector sign_vector(std::string_view text) {
  SignVector v;
  for (char c : text) {
    if (c == '+') v.s.push_back(1);
    else if (c == '-') v.s.push_back(-1);
    else if (c == '0') v.s.push_back(0);
    else throw UsageError(std::string("bad sign character '") + c + "'");
  }
  return v;
}

/// (u o v)(e) = u(e) if u(e) != 0, else v(e).
inline SignVector compose(const SignVector& u, const SignVector& v) {
  if (u.size() != v.size()) throw UsageError("composing sign vectors of different length");
  SignVector w = u;
  for (int i = 0; i < w.size(); ++i)
    if (w.s[i] == 0) w.s[i] = v.s[i];
  return w;
}

/// u is a face of w: u o w = w.
inline bool conforms(const SignVector& u, const SignVector& w) {
  for (int i = 0; i < u.size(); ++i)
    if (u.s[i] != 0 && u.s[i] != w.s[i]) return false;
  return true;
}

/// Vertices: for each (r-1)-subset B spanning a hyperplane, +-c_B with
/// c_B(e) = chi([B, e]).  Sorted, closed under negation.
inline std::vector<SignVector> cocircuits(const Chirotope& chi) {
  const auto& m = chi.map();
  const int n = m.size();
  const int r = m.rank;
  std::set<SignVector> pairs;  // normalized: first nonzero entry positive
  std::vector<int> t(r);
  for_each_subset(n, r - 1, [&](std::span<const int> b) {
    for (int i = 0; i < r - 1; ++i) t[i] = b[i] + 1;
    SignVector c;
    c.s.assign(n, 0);
    for (int e = 1; e <= n; ++e) {
      t[r - 1] = e;
      c.s[e - 1] = static_cast<std::int8_t>(m.value_of(t));
    }
    auto first = std::find_if(c.s.begin(), c.s.end(), [](std::int8_t v) { return v != 0; });
    if (first == c.s.end()) return;
    if (*first < 0) c = -c;
    pairs.insert(std::move(c));
  });
  std::vector<SignVector> out;
  for (const auto& c : pairs) {
    out.push_back(c);
    out.push_back(-c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Zero vector plus the composition closure of the cocircuits.  Sorted.
inline std::vector<SignVector> covectors(const Chirotope& chi, bool size_override = false) {
  if (!size_override && chi.size() > 9)
    throw SizeGuardError("covector closure is limited to n <= 9; set the size override to proceed");
  const auto cc = cocircuits(chi);
  std::set<SignVector> all;
  SignVector zero;
  zero.s.assign(chi.size(), 0);
  all.insert(zero);
  std::vector<SignVector> frontier;
  for (const auto& c : cc)
    if (all.insert(c).second) frontier.push_back(c);
  while (!frontier.empty()) {
    std::vector<SignVector> next;
    for (const auto& u : frontier)
      for (const auto& c : cc) {
        auto w = compose(u, c);
        if (all.insert(w).second) next.push_back(std::move(w));
      }
    frontier = std::move(next);
  }
  return {all.begin(), all.end()};
}

inline std::vector<SignVector> topes(const Chirotope& chi, bool size_override = false) {
  std::vector<SignVector> out;
  for (auto& v : covectors(chi, size_override))
    if (v.full_support()) out.push_back(std::move(v));
  return out;
}

struct FaceCensus {
  long vertices = 0;  // V, grade 0
  long edges = 0;     // E, grade 1
  long faces = 0;     // F, grade 2 (topes)
  long euler = 0;     // V - E + F

  bool operator==(const FaceCensus&) const = default;
};

inline std::string to_string(const FaceCensus& c) {
  return "V=" + std::to_string(c.vertices) + " E=" + std::to_string(c.edges) + " F=" + std::to_string(c.faces) +
         " euler=" + std::to_string(c.euler);
}

/// Heights of nonzero covectors: longest chain down to a cocircuit in the
/// face order.  Returned in the order of `nonzero`.
inline std::vector<int> covector_heights(const std::vector<SignVector>& nonzero) {
  std::vector<std::size_t> order(nonzero.size());
  std::iota(order.begin(), order.end(), 0);
  auto support = [&](std::size_t i) { return nonzero[i].size() - static_cast<int>(nonzero[i].zero_support().size()); };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return support(a) < support(b); });
  std::vector<int> h(nonzero.size(), 0);
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t w = order[oi];
    for (std::size_t oj = 0; oj < oi; ++oj) {
      const std::size_t u = order[oj];
      if (support(u) < support(w) && conforms(nonzero[u], nonzero[w])) h[w] = std::max(h[w], h[u] + 1);
    }
  }
  return h;
}

/// Rank-3 cell counts on S^2.  Throws InvariantError unless every nonzero
/// covector has height <= 2, the height-2 covectors are exactly the topes
/// and V - E + F = 2.
inline FaceCensus face_census(const Chirotope& chi, bool size_override = false) {
  if (chi.rank() != 3) throw UsageError("face census is defined for rank 3 only (got rank " + std::to_string(chi.rank()) + ")");
  std::vector<SignVector> nonzero;
  for (auto& v : covectors(chi, size_override))
    if (!v.is_zero()) nonzero.push_back(std::move(v));
  const auto h = covector_heights(nonzero);
  FaceCensus c;
  long full = 0;
  for (std::size_t i = 0; i < nonzero.size(); ++i) {
    if (h[i] > 2) throw InvariantError("covector " + to_string(nonzero[i]) + " has height " + std::to_string(h[i]));
    if (h[i] == 0) ++c.vertices;
    if (h[i] == 1) ++c.edges;
    if (h[i] == 2) ++c.faces;
    if (nonzero[i].full_support()) {
      ++full;
      if (h[i] != 2) throw InvariantError("tope " + to_string(nonzero[i]) + " has height " + std::to_string(h[i]));
    }
  }
  if (full != c.faces) throw InvariantError("height-2 covectors that are not topes");
  c.euler = c.vertices - c.edges + c.faces;
  if (c.euler != 2) throw InvariantError("Euler characteristic " + std::to_string(c.euler) + " != 2");
  return c;
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin tope oracle

namespace detail {

struct Inequality {
  std::vector<Integer> a;  // a . x (> or >=) 0
  bool strict = true;

  auto operator<=>(const Inequality&) const = default;
};

inline void reduce(Inequality& q) {
  Integer g = 0;
  for (const auto& x : q.a) g = boost::multiprecision::gcd(g, x);
  if (g > 1)
    for (auto& x : q.a) x /= g;
}

/// Decides {a_i . x > 0 (or >= 0)} over the rationals by eliminating one
/// variable at a time.  Strictness is carried through each combination.
inline bool fm_feasible(std::vector<Inequality> sys, int vars) {
  for (int k = vars - 1; k >= 0; --k) {
    std::set<Inequality> next;
    std::vector<const Inequality*> lower, upper;
    for (const auto& q : sys) {
      const int s = sign_of(q.a[k]);
      if (s > 0) lower.push_back(&q);
      else if (s < 0) upper.push_back(&q);
      else {
        Inequality z = q;
        z.a.resize(k);
        next.insert(std::move(z));
      }
    }
    for (const auto* p : lower)
      for (const auto* q : upper) {
        Inequality c;
        c.a.resize(k);
        const Integer pk = p->a[k];
        const Integer qk = -q->a[k];
        for (int i = 0; i < k; ++i) c.a[i] = p->a[i] * qk + q->a[i] * pk;
        c.strict = p->strict || q->strict;
        reduce(c);
        next.insert(std::move(c));
      }
    sys.assign(next.begin(), next.end());
    for (const auto& q : sys) {
      if (std::all_of(q.a.begin(), q.a.end(), [](const Integer& x) { return x == 0; }) && q.strict) return false;
    }
  }
  for (const auto& q : sys)
    if (q.strict) return false;  // 0 > 0
  return true;
}

}  // namespace detail

/// All sign vectors s with {s_i <v_i, x> > 0} feasible, decided exactly.
inline std::vector<SignVector> fm_realizable_topes(const VectorConfig& v, bool size_override = false) {
  const int n = v.size();
  const int r = v.dimension();
  if (!size_override && (r > 4 || n > 8))
    throw SizeGuardError("Fourier-Motzkin oracle is limited to r <= 4 and n <= 8");
  // validates rank and nonzero rows
  (void)from_vectors(v);
  std::vector<std::vector<Integer>> rows;
  for (const auto& row : v.rows) rows.push_back(clear_denominators(row));
  std::vector<SignVector> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    SignVector s;
    std::vector<detail::Inequality> sys;
    for (int i = 0; i < n; ++i) {
      const bool neg = (mask >> (n - 1 - i)) & 1;
      s.s.push_back(neg ? -1 : 1);
      detail::Inequality q;
      for (const auto& x : rows[i]) q.a.push_back(neg ? Integer(-x) : x);
      detail::reduce(q);
      sys.push_back(std::move(q));
    }
    if (detail::fm_feasible(std::move(sys), r)) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace om
