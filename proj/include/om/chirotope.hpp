#pragma once

// Chirotopes: sign maps on oriented (r-1)-simplices, the C1-C4 axiom
// checker, realization from exact vector configurations, and minors.
//
// Storage is compact: a SignMap over n elements addresses them as 1..n and
// keeps one value per ascending r-subset, in lexicographic order.  `ids`
// records the original label of each element so that minors of minors stay
// traceable; every user-facing message prints labels, never positions.

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "om/core.hpp"
#include "om/exact.hpp"

namespace om {

inline constexpr int kMaxRank = 16;

struct SignMap {
  int rank = 0;
  std::vector<int> ids;             // label of element i+1, ascending
  std::vector<std::int8_t> values;  // one per ascending rank-subset, lex order

  SignMap() = default;

  /// All-zero map over labels 1..n.
  SignMap(int n, int r) : SignMap(identity_ids(n), r) {}

  SignMap(std::vector<int> labels, int r) : rank(r), ids(std::move(labels)) {
    if (r < 1 || r > kMaxRank) throw UsageError("rank must be in 1.." + std::to_string(kMaxRank));
    if (ids.empty()) throw UsageError("empty ground set");
    if (!std::is_sorted(ids.begin(), ids.end()) ||
        std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw UsageError("element labels must be strictly ascending");
    if (size() > 64) throw UsageError("ground sets larger than 64 elements are not supported");
    values.assign(binomial(size(), r), 0);
  }

  static std::vector<int> identity_ids(int n) {
    if (n < 1) throw UsageError("ground set must have at least one element");
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 1);
    return v;
  }

  int size() const noexcept { return static_cast<int>(ids.size()); }
  int label(int e) const { return ids.at(e - 1); }

  /// Position (1-based) of a label, or 0 when absent.
  int position_of(int lbl) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), lbl);
    return (it != ids.end() && *it == lbl) ? static_cast<int>(it - ids.begin()) + 1 : 0;
  }

  /// Value on an ascending 1-based support.
  int at(std::span<const int> support) const {
    std::array<int, kMaxRank> z{};
    for (std::size_t i = 0; i < support.size(); ++i) z[i] = support[i] - 1;
    return values[lex_index(std::span<const int>(z.data(), support.size()), size())];
  }
  int at(std::initializer_list<int> support) const {
    return at(std::span<const int>(support.begin(), support.size()));
  }

  void set(std::span<const int> support, int v) {
    std::array<int, kMaxRank> z{};
    for (std::size_t i = 0; i < support.size(); ++i) z[i] = support[i] - 1;
    values[lex_index(std::span<const int>(z.data(), support.size()), size())] = static_cast<std::int8_t>(v);
  }
  void set(std::initializer_list<int> support, int v) {
    set(std::span<const int>(support.begin(), support.size()), v);
  }

  /// Value of an unsigned tuple of 1-based elements in any order: zero on
  /// repeats, otherwise the stored value times the sorting parity.
  int value_of(std::span<const int> elems) const {
    std::array<int, kMaxRank> s{};
    const std::size_t k = elems.size();
    for (std::size_t i = 0; i < k; ++i) s[i] = elems[i] - 1;
    int sign = 1;
    for (std::size_t i = 1; i < k; ++i) {
      for (std::size_t j = i; j > 0 && s[j - 1] >= s[j]; --j) {
        if (s[j - 1] == s[j]) return 0;
        std::swap(s[j - 1], s[j]);
        sign = -sign;
      }
    }
    return sign * values[lex_index(std::span<const int>(s.data(), k), size())];
  }

  bool operator==(const SignMap&) const = default;
};

/// Chirotope value of an arbitrary signed tuple.  Degenerate tuples are 0.
inline int evaluate(const SignMap& m, std::span<const SignedElement> sigma) {
  if (static_cast<int>(sigma.size()) != m.rank)
    throw UsageError("tuple length " + std::to_string(sigma.size()) + " does not match rank " +
                     std::to_string(m.rank));
  for (const auto& x : sigma)
    if (x.element < 1 || x.element > m.size())
      throw UsageError("element " + std::to_string(x.element) + " outside the ground set");
  auto nf = normalize(sigma);
  if (!nf) return 0;
  return nf->sign * m.at(nf->support);
}

inline int evaluate(const SignMap& m, std::initializer_list<SignedElement> sigma) {
  return evaluate(m, std::span<const SignedElement>(sigma.begin(), sigma.size()));
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string rule;     // "C1", "C3", "C4", "H2", "structure", ...
  std::string message;  // human readable, with a concrete witness
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> notes;  // non-fatal observations

  bool ok() const noexcept { return violations.empty(); }
  bool violates(std::string_view rule) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.rule == rule; });
  }
  void add(std::string rule, std::string message) {
    violations.push_back({std::move(rule), std::move(message)});
  }
  void merge(const ValidationReport& other, const std::string& prefix = {}) {
    for (const auto& v : other.violations) violations.push_back({v.rule, prefix + v.message});
    for (const auto& n : other.notes) notes.push_back(prefix + n);
  }
};

inline std::string to_string(const ValidationReport& r) {
  std::string out;
  for (const auto& v : r.violations) out += v.message + "\n";
  for (const auto& n : r.notes) out += "note: " + n + "\n";
  return out;
}

struct CheckOptions {
  bool size_override = false;
  bool stop_at_first = false;  // return as soon as one axiom fails
};

class SizeGuardError : public DomainError {
 public:
  using DomainError::DomainError;
};

inline void check_size_guard(int n, int r, bool override_flag) {
  if (!override_flag && (n > 9 || r > 5))
    throw SizeGuardError("axiom checking is limited to n <= 9 and r <= 5 (got n=" + std::to_string(n) +
                         ", r=" + std::to_string(r) + "); set the size override to proceed");
}

namespace detail {

inline std::string label_set(const SignMap& m, std::span<const int> support) {
  std::string s = "{";
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(m.label(support[i]));
  }
  return s + "}";
}

inline std::string label_tuple(const SignMap& m, std::span<const SignedElement> t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += to_string(SignedElement{m.label(t[i].element), t[i].barred});
  }
  return s + "]";
}

inline bool check_c1(const SignMap& m, ValidationReport& rep) {
  std::vector<bool> covered(m.size() + 1, false);
  std::size_t idx = 0;
  for_each_subset(m.size(), m.rank, [&](std::span<const int> s) {
    if (m.values[idx++] != 0)
      for (int e : s) covered[e + 1] = true;
  });
  for (int e = 1; e <= m.size(); ++e) {
    if (!covered[e]) {
      rep.add("C1", "C1 violated, witness element " + std::to_string(m.label(e)));
      return false;
    }
  }
  return true;
}

inline bool check_c3(const SignMap& m, ValidationReport& rep) {
  std::vector<std::vector<int>> bases;
  std::size_t idx = 0;
  for_each_subset(m.size(), m.rank, [&](std::span<const int> s) {
    if (m.values[idx++] != 0) {
      std::vector<int> b(s.begin(), s.end());
      for (int& e : b) ++e;
      bases.push_back(std::move(b));
    }
  });
  const int r = m.rank;
  std::vector<int> t(r);
  for (const auto& x : bases) {
    for (const auto& y : bases) {
      for (int drop = 0; drop < r; ++drop) {
        // x with position `drop` moved last and then replaced
        int w = 0;
        for (int i = 0; i < r; ++i)
          if (i != drop) t[w++] = x[i];
        bool found = false;
        for (int j = 0; j < r && !found; ++j) {
          t[r - 1] = y[j];
          found = m.value_of(t) != 0;
        }
        if (!found) {
          rep.add("C3", "C3 violated, bases " + label_set(m, x) + " and " + label_set(m, y) +
                            ": dropping " + std::to_string(m.label(x[drop])) +
                            " admits no exchange");
          return false;
        }
      }
    }
  }
  return true;
}

// C4 over all x_1..x_r, y_1, y_2 in the signed ground set.  Products of two
// chirotope values are unchanged by reordering or barring x_1..x_{r-2}, and
// barring any one of x_{r-1}, x_r, y_1, y_2 negates all three products at
// once.  So the 2^(r+2) sign patterns collapse to two implications on
// unsigned choices with an ascending prefix:
//   P1 >= 0 and P2 >= 0  =>  Q >= 0,   and   P1 <= 0 and P2 <= 0  =>  Q <= 0.
inline bool check_c4(const SignMap& m, ValidationReport& rep) {
  const int n = m.size();
  const int r = m.rank;
  if (r < 2) return true;
  bool ok = true;
  std::vector<int> prefix_mask(n + 1, 0);
  std::array<int, kMaxRank> t{};
  auto val = [&](int p, int q) {
    t[r - 2] = p;
    t[r - 1] = q;
    return m.value_of(std::span<const int>(t.data(), r));
  };
  for_each_subset(n, r - 2, [&](std::span<const int> prefix) {
    if (!ok) return;
    std::fill(prefix_mask.begin(), prefix_mask.end(), 0);
    for (int i = 0; i < r - 2; ++i) {
      t[i] = prefix[i] + 1;
      prefix_mask[prefix[i] + 1] = 1;
    }
    std::vector<int> free;
    for (int e = 1; e <= n; ++e)
      if (!prefix_mask[e]) free.push_back(e);
    for (int a : free)          // x_{r-1}
      for (int b : free)        // x_r
        for (int c : free)      // y_1
          for (int d : free) {  // y_2
            if (!ok) return;
            const int p1 = val(c, b) * val(a, d);
            const int p2 = val(d, b) * -val(a, c);  // [x.., x_{r-1}, ~y_1]
            const int q = val(a, b) * val(c, d);
            int flip = 0;
            if (p1 >= 0 && p2 >= 0 && q < 0) flip = 1;
            else if (p1 <= 0 && p2 <= 0 && q > 0) flip = -1;
            if (flip == 0) continue;
            Simplex xs;
            for (int i = 0; i < r - 2; ++i) xs.push_back(pos(t[i]));
            xs.push_back(SignedElement{a, flip < 0});
            xs.push_back(pos(b));
            rep.add("C4", "C4 violated, witness x=" + label_tuple(m, xs) +
                              " y1=" + to_string(SignedElement{m.label(c), false}) +
                              " y2=" + to_string(SignedElement{m.label(d), false}));
            ok = false;
          }
  });
  return ok;
}

}  // namespace detail

/// Lists every violated axiom with one concrete witness each (the first in
/// lexicographic search order).  An empty report means `m` is a chirotope.
inline ValidationReport check_chirotope(const SignMap& m, const CheckOptions& opt = {}) {
  check_size_guard(m.size(), m.rank, opt.size_override);
  ValidationReport rep;
  if (m.values.size() != binomial(m.size(), m.rank)) {
    rep.add("structure", "value table has " + std::to_string(m.values.size()) + " entries, expected " +
                             std::to_string(binomial(m.size(), m.rank)));
    return rep;
  }
  if (!detail::check_c1(m, rep) && opt.stop_at_first) return rep;
  if (!detail::check_c3(m, rep) && opt.stop_at_first) return rep;
  detail::check_c4(m, rep);
  return rep;
}

inline bool is_chirotope(const SignMap& m, bool size_override = false) {
  return check_chirotope(m, {size_override, true}).ok();
}

class InvalidChirotope : public DomainError {
 public:
  explicit InvalidChirotope(ValidationReport rep)
      : DomainError("not a chirotope:\n" + to_string(rep)), report_(std::move(rep)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// A SignMap known to satisfy C1-C4.
class Chirotope {
 public:
  /// Runs the axiom checker; throws InvalidChirotope with the report.
  static Chirotope validated(SignMap m, const CheckOptions& opt = {}) {
    auto rep = check_chirotope(m, opt);
    if (!rep.ok()) throw InvalidChirotope(std::move(rep));
    return Chirotope(std::move(m));
  }
  /// For constructions that produce chirotopes by theorem (realization,
  /// contraction, negation).
  static Chirotope unchecked(SignMap m) { return Chirotope(std::move(m)); }

  const SignMap& map() const noexcept { return map_; }
  int rank() const noexcept { return map_.rank; }
  int size() const noexcept { return map_.size(); }
  int at(std::initializer_list<int> s) const { return map_.at(s); }
  int at(std::span<const int> s) const { return map_.at(s); }
  int operator()(std::span<const SignedElement> sigma) const { return evaluate(map_, sigma); }
  int operator()(std::initializer_list<SignedElement> sigma) const { return evaluate(map_, sigma); }

  bool operator==(const Chirotope&) const = default;

 private:
  explicit Chirotope(SignMap m) : map_(std::move(m)) {}
  SignMap map_;
};

// ---------------------------------------------------------------------------
// Realization

class RealizationError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct VectorConfig {
  std::vector<std::vector<Rational>> rows;

  int size() const noexcept { return static_cast<int>(rows.size()); }
  int dimension() const noexcept { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }

  /// Convenience for integer data.
  static VectorConfig from_integers(const std::vector<std::vector<long long>>& data) {
    VectorConfig v;
    for (const auto& row : data) {
      std::vector<Rational> q;
      for (long long x : row) q.emplace_back(x);
      v.rows.push_back(std::move(q));
    }
    return v;
  }
};

/// Chirotope of a vector configuration via exact determinant signs.
inline Chirotope from_vectors(const VectorConfig& v) {
  const int n = v.size();
  const int r = v.dimension();
  if (n == 0 || r == 0) throw RealizationError("empty vector configuration");
  IntMatrix rows;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(v.rows[i].size()) != r)
      throw RealizationError("row " + std::to_string(i + 1) + " has " + std::to_string(v.rows[i].size()) +
                             " entries, expected " + std::to_string(r));
    rows.push_back(clear_denominators(v.rows[i]));
    if (std::all_of(rows.back().begin(), rows.back().end(), [](const Integer& x) { return x == 0; }))
      throw RealizationError("row " + std::to_string(i + 1) + " is the zero vector");
  }
  if (n < r) throw RealizationError("fewer vectors than the dimension");
  if (matrix_rank(rows) != r) throw RealizationError("vectors do not span the full dimension");
  SignMap m(n, r);
  std::size_t idx = 0;
  IntMatrix sub(r);
  for_each_subset(n, r, [&](std::span<const int> s) {
    for (int i = 0; i < r; ++i) sub[i] = rows[s[i]];
    m.values[idx++] = static_cast<std::int8_t>(determinant_sign(sub));
  });
  return Chirotope::unchecked(std::move(m));
}

// ---------------------------------------------------------------------------
// Minors

class DeletionError : public DomainError {
 public:
  using DomainError::DomainError;
};
class ContractionError : public DomainError {
 public:
  using DomainError::DomainError;
};
class NoDeletableElement : public DomainError {
 public:
  using DomainError::DomainError;
};

namespace detail {

inline std::vector<int> sorted_elements(const SignMap& m, std::span<const int> r, const char* what) {
  std::vector<int> s(r.begin(), r.end());
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw UsageError(std::string(what) + " set lists an element twice");
  for (int e : s)
    if (e < 1 || e > m.size())
      throw UsageError(std::string(what) + " element " + std::to_string(e) + " is not in the ground set");
  return s;
}

// Restriction of m to the elements `keep` (ascending, 1-based), same rank.
inline SignMap restrict_to(const SignMap& m, const std::vector<int>& keep) {
  std::vector<int> labels;
  for (int e : keep) labels.push_back(m.label(e));
  SignMap out(std::move(labels), m.rank);
  std::vector<int> orig(m.rank);
  std::size_t idx = 0;
  for_each_subset(static_cast<int>(keep.size()), m.rank, [&](std::span<const int> s) {
    for (int i = 0; i < m.rank; ++i) orig[i] = keep[s[i]];
    out.values[idx++] = static_cast<std::int8_t>(m.at(orig));
  });
  return out;
}

}  // namespace detail

struct DeletionResult {
  SignMap map;
  ValidationReport report;  // deletion need not yield a chirotope
};

/// chi \ R: restriction to supports avoiding R (positions, 1-based).
inline DeletionResult deletion(const Chirotope& chi, std::span<const int> removed, const CheckOptions& opt = {}) {
  const auto& m = chi.map();
  auto rem = detail::sorted_elements(m, removed, "deletion");
  std::vector<int> keep;
  for (int e = 1; e <= m.size(); ++e)
    if (!std::binary_search(rem.begin(), rem.end(), e)) keep.push_back(e);
  if (static_cast<int>(keep.size()) < m.rank)
    throw DeletionError("deleting " + std::to_string(rem.size()) + " element(s) leaves " +
                        std::to_string(keep.size()) + " < rank " + std::to_string(m.rank));
  DeletionResult res{detail::restrict_to(m, keep), {}};
  res.report = check_chirotope(res.map, opt);
  return res;
}

/// Smallest element whose deletion is again a chirotope of the same rank.
inline int find_deletable(const Chirotope& chi, const CheckOptions& opt = {}) {
  if (chi.size() == chi.rank()) throw NoDeletableElement("no element can be deleted when n = r");
  CheckOptions quick = opt;
  quick.stop_at_first = true;
  for (int e = 1; e <= chi.size(); ++e) {
    const int r[] = {e};
    if (deletion(chi, r, quick).report.ok()) return e;
  }
  throw InvariantError("no deletable element found although n > r");
}

/// chi / R for R = {e_1 < ... < e_k}, k < r (positions, 1-based).
inline Chirotope contraction(const Chirotope& chi, std::span<const int> contracted) {
  const auto& m = chi.map();
  auto rs = detail::sorted_elements(m, contracted, "contraction");
  const int k = static_cast<int>(rs.size());
  const int r = m.rank;
  if (k >= r)
    throw ContractionError("cannot contract " + std::to_string(k) + " element(s) in rank " + std::to_string(r));
  // E/R: elements completing R to a nonzero basis
  std::vector<int> rest;
  for (int e = 1; e <= m.size(); ++e)
    if (!std::binary_search(rs.begin(), rs.end(), e)) rest.push_back(e);
  std::vector<bool> in_quotient(m.size() + 1, false);
  std::vector<int> t(r);
  std::copy(rs.begin(), rs.end(), t.begin());
  for_each_subset(static_cast<int>(rest.size()), r - k, [&](std::span<const int> s) {
    for (int i = 0; i < r - k; ++i) t[k + i] = rest[s[i]];
    if (m.value_of(t) != 0)
      for (int i = 0; i < r - k; ++i) in_quotient[rest[s[i]]] = true;
  });
  std::vector<int> keep;
  std::vector<int> labels;
  for (int e : rest)
    if (in_quotient[e]) {
      keep.push_back(e);
      labels.push_back(m.label(e));
    }
  SignMap out(std::move(labels), r - k);
  std::size_t idx = 0;
  for_each_subset(static_cast<int>(keep.size()), r - k, [&](std::span<const int> s) {
    for (int i = 0; i < r - k; ++i) t[k + i] = keep[s[i]];
    out.values[idx++] = static_cast<std::int8_t>(m.value_of(t));
  });
  return Chirotope::unchecked(std::move(out));
}

inline Chirotope negate(const Chirotope& chi) {
  SignMap m = chi.map();
  for (auto& v : m.values) v = static_cast<std::int8_t>(-v);
  return Chirotope::unchecked(std::move(m));
}

enum class FullClass { Plus, Minus };

inline const char* to_string(FullClass c) { return c == FullClass::Plus ? "PlusClass" : "MinusClass"; }

/// For n = r there are exactly two chirotopes, told apart by the sign of
/// the single basis [1,...,r].
inline FullClass classify_full(const Chirotope& chi) {
  if (chi.size() != chi.rank())
    throw UsageError("classification requires n = r (got n=" + std::to_string(chi.size()) +
                     ", r=" + std::to_string(chi.rank()) + ")");
  return chi.map().values.at(0) > 0 ? FullClass::Plus : FullClass::Minus;
}

}  // namespace om
