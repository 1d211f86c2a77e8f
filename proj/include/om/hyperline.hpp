#pragma once

// Hyperline sequences of every rank and their equivalence with chirotopes.
//
//   rank 1   a set X of signed elements with X* = E(X), one sign per element
//   rank 2   a cyclic sequence of atoms X^0..X^{2k-1} with X^{a+k} = ~X^a
//            partitioning E(X) and its barred copy
//   rank r   a set of hyperlines (Y|Z), Y of rank r-2, Z of rank 2, subject
//            to H1-H4
//
// Element ids inside a hyperline sequence are labels.  from_chirotope emits
// the chirotope's labels and to_chirotope compacts E(X) back to 1..n with
// the labels as its id map, so conversions in both directions are
// label-preserving.

#include <map>
#include <memory>
#include <set>
#include <thread>
#include <variant>

#include "om/chirotope.hpp"

namespace om {

struct HyperlineSequence;
using HlsPtr = std::shared_ptr<const HyperlineSequence>;

struct HLRank1 {
  std::vector<SignedElement> chosen;
};

struct HLRank2 {
  std::vector<std::vector<SignedElement>> atoms;  // X^0 .. X^{2k-1}
};

struct Hyperline {
  HlsPtr Y;  // rank r-2: the elements on the hyperline
  HlsPtr Z;  // rank 2: the cyclic order around it
};

struct HyperlineSequence {
  int rank = 0;
  std::vector<int> ground;  // E(X), ascending labels
  std::variant<HLRank1, HLRank2, std::vector<Hyperline>> body;

  const HLRank1& rank1() const { return std::get<HLRank1>(body); }
  const HLRank2& rank2() const { return std::get<HLRank2>(body); }
  const std::vector<Hyperline>& hyperlines() const { return std::get<std::vector<Hyperline>>(body); }
  int period() const { return static_cast<int>(rank2().atoms.size()); }
};

// ---------------------------------------------------------------------------
// Construction helpers.  Ground sets default to the labels that occur.

namespace detail {

inline std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline void sort_atom(std::vector<SignedElement>& a) { std::sort(a.begin(), a.end()); }

}  // namespace detail

inline HyperlineSequence make_rank1(std::vector<SignedElement> chosen, std::vector<int> ground = {}) {
  std::sort(chosen.begin(), chosen.end());
  for (auto x : chosen) ground.push_back(x.element);
  return {1, detail::sorted_unique(std::move(ground)), HLRank1{std::move(chosen)}};
}

inline HyperlineSequence make_rank2(std::vector<std::vector<SignedElement>> atoms, std::vector<int> ground = {}) {
  for (auto& a : atoms) {
    detail::sort_atom(a);
    for (auto x : a) ground.push_back(x.element);
  }
  return {2, detail::sorted_unique(std::move(ground)), HLRank2{std::move(atoms)}};
}

inline HyperlineSequence make_rank_r(int rank, std::vector<Hyperline> hl, std::vector<int> ground = {}) {
  if (rank < 3) throw UsageError("hyperline sets are for rank > 2");
  for (const auto& h : hl) {
    if (!h.Y || !h.Z) throw UsageError("hyperline with a missing component");
    ground.insert(ground.end(), h.Y->ground.begin(), h.Y->ground.end());
    ground.insert(ground.end(), h.Z->ground.begin(), h.Z->ground.end());
  }
  return {rank, detail::sorted_unique(std::move(ground)), std::move(hl)};
}

/// Shorthand for tests and literals: 3 -> element 3, -3 -> ~3.
inline SignedElement se(int v) { return v > 0 ? pos(v) : bar(-v); }

inline std::vector<SignedElement> atom(std::initializer_list<int> xs) {
  std::vector<SignedElement> a;
  for (int v : xs) a.push_back(se(v));
  return a;
}

// ---------------------------------------------------------------------------
// Canonical keys, equality, negation

namespace detail {

inline int code(SignedElement x) { return 2 * x.element + (x.barred ? 1 : 0); }

inline void append_key(const HyperlineSequence& x, std::vector<int>& out);

inline std::vector<int> atom_key(const std::vector<SignedElement>& a) {
  std::vector<int> k;
  for (auto x : a) k.push_back(code(x));
  std::sort(k.begin(), k.end());
  return k;
}

inline void append_key(const HyperlineSequence& x, std::vector<int>& out) {
  out.push_back(x.rank);
  out.push_back(static_cast<int>(x.ground.size()));
  out.insert(out.end(), x.ground.begin(), x.ground.end());
  if (x.rank == 1) {
    auto k = atom_key(x.rank1().chosen);
    out.push_back(static_cast<int>(k.size()));
    out.insert(out.end(), k.begin(), k.end());
  } else if (x.rank == 2) {
    const auto& atoms = x.rank2().atoms;
    const std::size_t p = atoms.size();
    std::vector<std::vector<int>> keys;
    for (const auto& a : atoms) keys.push_back(atom_key(a));
    // smallest rotation
    std::size_t best = 0;
    for (std::size_t s = 1; s < p; ++s) {
      for (std::size_t i = 0; i < p; ++i) {
        const auto& u = keys[(s + i) % p];
        const auto& v = keys[(best + i) % p];
        if (u != v) {
          if (u < v) best = s;
          break;
        }
      }
    }
    out.push_back(static_cast<int>(p));
    for (std::size_t i = 0; i < p; ++i) {
      const auto& k = keys[(best + i) % p];
      out.push_back(static_cast<int>(k.size()));
      out.insert(out.end(), k.begin(), k.end());
    }
  } else {
    std::vector<std::vector<int>> hk;
    for (const auto& h : x.hyperlines()) {
      std::vector<int> k;
      append_key(*h.Y, k);
      append_key(*h.Z, k);
      hk.push_back(std::move(k));
    }
    std::sort(hk.begin(), hk.end());
    hk.erase(std::unique(hk.begin(), hk.end()), hk.end());
    out.push_back(static_cast<int>(hk.size()));
    for (const auto& k : hk) {
      out.push_back(static_cast<int>(k.size()));
      out.insert(out.end(), k.begin(), k.end());
    }
  }
}

}  // namespace detail

/// Canonical key: equal keys <=> equal sequences (rank 2 up to shift,
/// rank > 2 as sets of hyperlines).
inline std::vector<int> canonical_key(const HyperlineSequence& x) {
  std::vector<int> k;
  detail::append_key(x, k);
  return k;
}

inline std::vector<int> canonical_key(const Hyperline& h) {
  std::vector<int> k;
  detail::append_key(*h.Y, k);
  detail::append_key(*h.Z, k);
  return k;
}

inline bool hls_equal(const HyperlineSequence& a, const HyperlineSequence& b) {
  return a.rank == b.rank && canonical_key(a) == canonical_key(b);
}

inline bool operator==(const Hyperline& a, const Hyperline& b) { return canonical_key(a) == canonical_key(b); }

/// -X: barring at rank 1, index reversal a -> -a at rank 2, (Y|-Z) above.
inline HyperlineSequence negate_hls(const HyperlineSequence& x) {
  HyperlineSequence out{x.rank, x.ground, {}};
  if (x.rank == 1) {
    std::vector<SignedElement> c;
    for (auto e : x.rank1().chosen) c.push_back(involute(e));
    std::sort(c.begin(), c.end());
    out.body = HLRank1{std::move(c)};
  } else if (x.rank == 2) {
    const auto& atoms = x.rank2().atoms;
    const std::size_t p = atoms.size();
    std::vector<std::vector<SignedElement>> rev(p);
    for (std::size_t a = 0; a < p; ++a) rev[a] = atoms[(p - a) % p];
    out.body = HLRank2{std::move(rev)};
  } else {
    std::vector<Hyperline> hl;
    for (const auto& h : x.hyperlines())
      hl.push_back({h.Y, std::make_shared<const HyperlineSequence>(negate_hls(*h.Z))});
    out.body = std::move(hl);
  }
  return out;
}

/// (-Y|-Z): the same hyperline with the opposite orientation; it has the
/// same positively oriented bases.
inline Hyperline opposite(const Hyperline& h) {
  return {std::make_shared<const HyperlineSequence>(negate_hls(*h.Y)),
          std::make_shared<const HyperlineSequence>(negate_hls(*h.Z))};
}

// ---------------------------------------------------------------------------
// Indexed view used by bases() and the axiom checker.  Signed elements are
// coded 2*i + bar over the positions i of the top-level ground set.

namespace detail {

struct Node {
  int rank = 0;
  std::uint64_t ground = 0;
  std::vector<char> chosen;    // rank 1: code -> member
  std::vector<int> position;   // rank 2: code -> atom index or -1
  int period = 0;
  std::vector<Node> ys, zs;    // rank > 2
};

class Indexed {
 public:
  explicit Indexed(const HyperlineSequence& x) : labels_(x.ground) {
    if (labels_.size() > 64) throw UsageError("hyperline sequences over more than 64 elements are not supported");
    root_ = build(x);
  }

  const Node& root() const { return root_; }
  int size() const { return static_cast<int>(labels_.size()); }
  int label(int i) const { return labels_[i]; }
  int index_of(int lbl) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), lbl);
    if (it == labels_.end() || *it != lbl) return -1;
    return static_cast<int>(it - labels_.begin());
  }
  int code(SignedElement x) const {
    const int i = index_of(x.element);
    return i < 0 ? -1 : 2 * i + (x.barred ? 1 : 0);
  }
  SignedElement decode(int c) const { return {labels_[c / 2], (c & 1) != 0}; }

 private:
  Node build(const HyperlineSequence& x) const {
    Node n;
    n.rank = x.rank;
    for (int g : x.ground) {
      const int i = index_of(g);
      if (i >= 0) n.ground |= std::uint64_t{1} << i;
    }
    const std::size_t codes = 2 * labels_.size();
    if (x.rank == 1) {
      n.chosen.assign(codes, 0);
      for (auto e : x.rank1().chosen)
        if (int c = code(e); c >= 0) n.chosen[c] = 1;
    } else if (x.rank == 2) {
      n.position.assign(codes, -1);
      const auto& atoms = x.rank2().atoms;
      n.period = static_cast<int>(atoms.size());
      for (std::size_t a = 0; a < atoms.size(); ++a)
        for (auto e : atoms[a])
          if (int c = code(e); c >= 0) n.position[c] = static_cast<int>(a);
    } else {
      for (const auto& h : x.hyperlines()) {
        n.ys.push_back(build(*h.Y));
        n.zs.push_back(build(*h.Z));
      }
    }
    return n;
  }

  std::vector<int> labels_;
  Node root_;
};

inline std::uint64_t mask_of(std::span<const int> codes) {
  std::uint64_t m = 0;
  for (int c : codes) m |= std::uint64_t{1} << (c / 2);
  return m;
}

/// Literal membership: is the coded tuple a positively oriented base?
inline bool is_positive(const Node& n, std::span<const int> t) {
  if (static_cast<int>(t.size()) != n.rank) return false;
  if (n.rank == 1) return n.chosen[t[0]] != 0;
  if (n.rank == 2) {
    if (t[0] / 2 == t[1] / 2) return false;
    const int a = n.position[t[0]];
    const int b = n.position[t[1]];
    if (a < 0 || b < 0 || n.period < 2) return false;
    const int k = n.period / 2;
    const int d = ((b - a) % n.period + n.period) % n.period;
    return d > 0 && d < k;
  }
  const auto prefix = t.first(n.rank - 2);
  const auto tail = t.last(2);
  const std::uint64_t pm = mask_of(prefix);
  for (std::size_t i = 0; i < n.ys.size(); ++i) {
    if ((n.ys[i].ground & pm) != pm) continue;
    if (is_positive(n.ys[i], prefix) && is_positive(n.zs[i], tail)) return true;
  }
  return false;
}

/// All literal positively oriented bases as coded tuples.
inline void literal_bases(const Node& n, int codes, std::vector<std::vector<int>>& out) {
  if (n.rank == 1) {
    for (int c = 0; c < codes; ++c)
      if (n.chosen[c]) out.push_back({c});
  } else if (n.rank == 2) {
    for (int c1 = 0; c1 < codes; ++c1)
      for (int c2 = 0; c2 < codes; ++c2) {
        const int t[2] = {c1, c2};
        if (is_positive(n, t)) out.push_back({c1, c2});
      }
  } else {
    for (std::size_t i = 0; i < n.ys.size(); ++i) {
      std::vector<std::vector<int>> yb, zb;
      literal_bases(n.ys[i], codes, yb);
      literal_bases(n.zs[i], codes, zb);
      for (const auto& y : yb)
        for (const auto& z : zb) {
          if (mask_of(y) & mask_of(z)) continue;  // not a simplex
          auto t = y;
          t.insert(t.end(), z.begin(), z.end());
          out.push_back(std::move(t));
        }
    }
  }
}

// (support as ascending indices, sign)
using CodedBasis = std::pair<std::vector<int>, int>;

inline CodedBasis normalize_coded(std::span<const int> t) {
  CodedBasis b;
  int sign = 1;
  for (int c : t) {
    b.first.push_back(c / 2);
    if (c & 1) sign = -sign;
  }
  auto& s = b.first;
  for (std::size_t i = 1; i < s.size(); ++i)
    for (std::size_t j = i; j > 0 && s[j - 1] > s[j]; --j) {
      std::swap(s[j - 1], s[j]);
      sign = -sign;
    }
  b.second = sign;
  return b;
}

/// Canonical bases computed recursively; equals normalizing every literal
/// base because the canonical form of a concatenation depends only on the
/// canonical forms of its parts.
inline std::set<CodedBasis> canonical_bases(const Node& n, int codes) {
  std::set<CodedBasis> out;
  if (n.rank <= 2) {
    std::vector<std::vector<int>> lit;
    literal_bases(n, codes, lit);
    for (const auto& t : lit) out.insert(normalize_coded(t));
    return out;
  }
  for (std::size_t i = 0; i < n.ys.size(); ++i) {
    const auto yb = canonical_bases(n.ys[i], codes);
    const auto zb = canonical_bases(n.zs[i], codes);
    for (const auto& [ys, ysign] : yb)
      for (const auto& [zs, zsign] : zb) {
        std::vector<int> t;
        for (int e : ys) t.push_back(2 * e);
        for (int e : zs) t.push_back(2 * e);
        std::vector<int> u = t;
        std::sort(u.begin(), u.end());
        if (std::adjacent_find(u.begin(), u.end()) != u.end()) continue;
        auto b = normalize_coded(t);
        b.second *= ysign * zsign;
        out.insert(std::move(b));
      }
  }
  return out;
}

}  // namespace detail

/// Positively oriented bases in canonical form, sorted, over labels.
inline std::vector<CanonicalBasis> bases(const HyperlineSequence& x) {
  detail::Indexed ix(x);
  std::vector<CanonicalBasis> out;
  for (const auto& [s, sign] : detail::canonical_bases(ix.root(), 2 * ix.size())) {
    CanonicalBasis b;
    for (int i : s) b.support.push_back(ix.label(i));
    b.sign = sign;
    out.push_back(std::move(b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Bases of a sign map in the same form (nonzero values only).
inline std::vector<CanonicalBasis> bases(const SignMap& m) {
  std::vector<CanonicalBasis> out;
  std::size_t idx = 0;
  for_each_subset(m.size(), m.rank, [&](std::span<const int> s) {
    const int v = m.values[idx++];
    if (v == 0) return;
    CanonicalBasis b;
    for (int i : s) b.support.push_back(m.ids[i]);
    b.sign = v;
    out.push_back(std::move(b));
  });
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Axiom checker

namespace detail {

inline std::string seq_string(const std::vector<SignedElement>& xs) {
  std::string s = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + to_string(xs[i]);
  return s + "}";
}

inline std::string elems_string(const std::vector<int>& xs) {
  std::string s = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s + "}";
}

inline void check_structure(const HyperlineSequence& x, const std::string& where, ValidationReport& rep);

inline void check_rank1(const HyperlineSequence& x, const std::string& where, ValidationReport& rep) {
  const auto& c = x.rank1().chosen;
  if (c.empty()) {
    rep.add("structure", where + "rank-1 sequence is empty");
    return;
  }
  std::vector<int> und;
  for (auto e : c) und.push_back(e.element);
  std::sort(und.begin(), und.end());
  if (std::adjacent_find(und.begin(), und.end()) != und.end()) {
    rep.add("structure", where + "rank-1 sequence " + seq_string(c) + " contains an element with both signs");
    return;
  }
  if (und != x.ground)
    rep.add("structure", where + "rank-1 sequence " + seq_string(c) + " does not cover its ground set " +
                             elems_string(x.ground));
}

inline void check_rank2(const HyperlineSequence& x, const std::string& where, ValidationReport& rep) {
  const auto& atoms = x.rank2().atoms;
  const std::size_t p = atoms.size();
  if (p < 2 || p % 2 != 0) {
    rep.add("structure", where + "period length " + std::to_string(p) + " is not a positive even number");
    return;
  }
  const std::size_t k = p / 2;
  if (k == 1) rep.notes.push_back(where + "degenerate period: all elements lie in one antipodal atom pair");
  for (std::size_t a = 0; a < p; ++a) {
    if (atoms[a].empty()) {
      rep.add("structure", where + "atom " + std::to_string(a) + " is empty");
      return;
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    std::vector<SignedElement> neg;
    for (auto e : atoms[a]) neg.push_back(involute(e));
    std::sort(neg.begin(), neg.end());
    auto other = atoms[a + k];
    std::sort(other.begin(), other.end());
    if (neg != other) {
      rep.add("antipodality", where + "antipodality violated: atom " + std::to_string(a + k) + " " +
                                  seq_string(other) + " is not the negation of atom " + std::to_string(a) +
                                  " " + seq_string(atoms[a]));
      return;
    }
  }
  std::map<SignedElement, int> seen;
  for (std::size_t a = 0; a < p; ++a)
    for (auto e : atoms[a]) ++seen[e];
  for (const auto& [e, cnt] : seen) {
    if (cnt > 1) {
      rep.add("structure", where + "signed element " + to_string(e) + " occurs in " + std::to_string(cnt) + " atoms");
      return;
    }
    if (!std::binary_search(x.ground.begin(), x.ground.end(), e.element)) {
      rep.add("structure", where + "signed element " + to_string(e) + " is outside the ground set");
      return;
    }
  }
  for (int g : x.ground)
    for (bool b : {false, true})
      if (!seen.count(SignedElement{g, b})) {
        rep.add("structure", where + "signed element " + to_string(SignedElement{g, b}) + " occurs in no atom");
        return;
      }
}

inline void check_structure(const HyperlineSequence& x, const std::string& where, ValidationReport& rep) {
  if (x.rank == 1) {
    if (!std::holds_alternative<HLRank1>(x.body)) rep.add("structure", where + "rank-1 sequence without a rank-1 body");
    else check_rank1(x, where, rep);
  } else if (x.rank == 2) {
    if (!std::holds_alternative<HLRank2>(x.body)) rep.add("structure", where + "rank-2 sequence without atoms");
    else check_rank2(x, where, rep);
  } else if (x.rank > 2) {
    if (!std::holds_alternative<std::vector<Hyperline>>(x.body)) {
      rep.add("structure", where + "rank-" + std::to_string(x.rank) + " sequence without hyperlines");
      return;
    }
    const auto& hl = x.hyperlines();
    if (hl.empty()) rep.add("structure", where + "empty set of hyperlines");
    for (std::size_t i = 0; i < hl.size(); ++i) {
      const std::string w = where + "hyperline " + std::to_string(i) + ": ";
      if (!hl[i].Y || !hl[i].Z) {
        rep.add("structure", w + "missing component");
        continue;
      }
      if (hl[i].Y->rank != x.rank - 2) rep.add("structure", w + "Y has rank " + std::to_string(hl[i].Y->rank));
      if (hl[i].Z->rank != 2) rep.add("structure", w + "Z has rank " + std::to_string(hl[i].Z->rank));
    }
  } else {
    rep.add("structure", where + "rank must be positive");
  }
}

}  // namespace detail

inline ValidationReport check_hyperline(const HyperlineSequence& x, const CheckOptions& opt = {});

namespace detail {

inline void check_axioms(const HyperlineSequence& x, const std::string& where, ValidationReport& rep,
                         const CheckOptions& opt) {
  check_structure(x, where, rep);
  if (!rep.ok() || x.rank <= 2) return;
  const auto& hl = x.hyperlines();

  // components and H1
  for (std::size_t i = 0; i < hl.size(); ++i) {
    const std::string w = where + "hyperline " + std::to_string(i) + ": ";
    check_axioms(*hl[i].Y, w + "Y: ", rep, opt);
    check_structure(*hl[i].Z, w + "Z: ", rep);
    std::vector<int> both;
    std::set_intersection(hl[i].Y->ground.begin(), hl[i].Y->ground.end(), hl[i].Z->ground.begin(),
                          hl[i].Z->ground.end(), std::back_inserter(both));
    std::vector<int> all;
    std::set_union(hl[i].Y->ground.begin(), hl[i].Y->ground.end(), hl[i].Z->ground.begin(),
                   hl[i].Z->ground.end(), std::back_inserter(all));
    if (!both.empty() || all != x.ground) {
      rep.add("H1", where + "H1 violated, hyperline " + std::to_string(i) + ": E(Y)=" +
                        elems_string(hl[i].Y->ground) + ", E(Z)=" + elems_string(hl[i].Z->ground) +
                        ", E(X)=" + elems_string(x.ground));
      if (opt.stop_at_first) return;
    }
  }
  if (!rep.ok()) return;

  std::vector<std::vector<int>> keys, opposite_keys;
  for (const auto& h : hl) {
    keys.push_back(canonical_key(h));
    opposite_keys.push_back(canonical_key(opposite(h)));
  }
  for (std::size_t i = 0; i < hl.size(); ++i)
    if (std::find(keys.begin(), keys.end(), opposite_keys[i]) == keys.end()) {
      rep.notes.push_back(where + "hyperline " + std::to_string(i) + " is listed without its opposite orientation");
      break;
    }

  // H2
  const bool h2_ok = [&] {
    for (std::size_t i = 0; i < hl.size(); ++i) {
      const auto ybases = bases(*hl[i].Y);
      for (std::size_t j = 0; j < hl.size(); ++j) {
        if (keys[i] == keys[j] || keys[i] == opposite_keys[j]) continue;
        const auto& g2 = hl[j].Y->ground;
        for (const auto& b : ybases) {
          if (std::includes(g2.begin(), g2.end(), b.support.begin(), b.support.end())) {
            rep.add("H2", where + "H2 violated, hyperlines " + std::to_string(i) + " and " + std::to_string(j) +
                              " share the Y-base " + elems_string(b.support) + " but differ");
            return false;
          }
        }
      }
    }
    return true;
  }();
  if (!h2_ok && opt.stop_at_first) return;

  Indexed ix(x);
  const int codes = 2 * ix.size();
  const int r = x.rank;

  // H3 on supports
  {
    const auto cb = canonical_bases(ix.root(), codes);
    std::set<std::vector<int>> supports;
    for (const auto& b : cb) supports.insert(b.first);
    bool ok = true;
    for (const auto& bx : supports) {
      for (const auto& by : supports) {
        for (int drop = 0; drop < r && ok; ++drop) {
          bool found = false;
          for (int j = 0; j < r && !found; ++j) {
            std::vector<int> s;
            for (int i = 0; i < r; ++i)
              if (i != drop) s.push_back(bx[i]);
            s.push_back(by[j]);
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end()) continue;
            found = supports.count(s) > 0;
          }
          if (!found) {
            std::vector<int> lx, ly;
            for (int e : bx) lx.push_back(ix.label(e));
            for (int e : by) ly.push_back(ix.label(e));
            rep.add("H3", where + "H3 violated, bases " + elems_string(lx) + " and " + elems_string(ly) +
                              ": dropping " + std::to_string(ix.label(bx[drop])) + " admits no exchange");
            ok = false;
          }
        }
        if (!ok) break;
      }
      if (!ok) break;
    }
    if (!ok && opt.stop_at_first) return;
  }

  // H4 on literal bases
  {
    std::vector<std::vector<int>> lit;
    literal_bases(ix.root(), codes, lit);
    std::sort(lit.begin(), lit.end());
    for (const auto& t : lit) {
      auto u = t;
      u[r - 3] = t[r - 2] ^ 1;
      u[r - 2] = t[r - 3];
      if (!is_positive(ix.root(), u)) {
        std::vector<SignedElement> a, b;
        for (int c : t) a.push_back(ix.decode(c));
        for (int c : u) b.push_back(ix.decode(c));
        std::string sa = "[", sb = "[";
        for (std::size_t i = 0; i < a.size(); ++i) {
          sa += (i ? "," : "") + to_string(a[i]);
          sb += (i ? "," : "") + to_string(b[i]);
        }
        rep.add("H4", where + "H4 violated, " + sa + "] is a positive base but " + sb + "] is not");
        break;
      }
    }
  }
}

}  // namespace detail

/// Structural checks at every level plus H1-H4 with witnesses.
inline ValidationReport check_hyperline(const HyperlineSequence& x, const CheckOptions& opt) {
  check_size_guard(static_cast<int>(x.ground.size()), x.rank, opt.size_override);
  ValidationReport rep;
  detail::check_axioms(x, "", rep, opt);
  return rep;
}

class InvalidHyperlineSequence : public DomainError {
 public:
  explicit InvalidHyperlineSequence(ValidationReport rep)
      : DomainError("not a hyperline sequence:\n" + to_string(rep)), report_(std::move(rep)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Sign map whose positive bases are those of X, over E(X) with labels as
/// ids.  Throws when two bases of X on the same support disagree.
inline SignMap base_sign_map(const HyperlineSequence& x) {
  if (x.ground.empty()) throw DomainError("hyperline sequence over an empty ground set");
  SignMap m(x.ground, x.rank);
  std::vector<int> pos_support;
  for (const auto& b : bases(x)) {
    pos_support.clear();
    for (int l : b.support) pos_support.push_back(m.position_of(l));
    const int cur = m.at(pos_support);
    if (cur != 0 && cur != b.sign)
      throw DomainError("support " + detail::elems_string(b.support) + " carries bases of both signs");
    m.set(pos_support, b.sign);
  }
  return m;
}

inline Chirotope to_chirotope(const HyperlineSequence& x, const CheckOptions& opt = {}) {
  auto rep = check_hyperline(x, opt);
  if (!rep.ok()) throw InvalidHyperlineSequence(std::move(rep));
  return Chirotope::unchecked(base_sign_map(x));
}

// ---------------------------------------------------------------------------
// Chirotope -> hyperline sequence

class ConstructionError : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class Representative { Smallest, Largest };

struct ConvertOptions {
  Representative representative = Representative::Smallest;
  int jobs = 1;
};

namespace detail {

// Signed elements of positions 1..n coded 2*(e-1)+bar.
inline int value2(const SignMap& m, int c1, int c2) {
  const int t[2] = {c1 / 2 + 1, c2 / 2 + 1};
  const int v = m.value_of(t);
  return ((c1 ^ c2) & 1) ? -v : v;
}

inline std::vector<int> successor_atom(const SignMap& m, int z) {
  const int codes = 2 * m.size();
  std::vector<int> out;
  for (int x = 0; x < codes; ++x) {
    if (value2(m, z, x) != 1) continue;
    bool ok = true;
    for (int y = 0; y < codes && ok; ++y)
      if (value2(m, z, y) == 1 && value2(m, x, y) < 0) ok = false;
    if (ok) out.push_back(x);
  }
  return out;
}

inline HyperlineSequence build_rank1(const SignMap& m) {
  std::vector<SignedElement> chosen;
  for (int e = 1; e <= m.size(); ++e) {
    const int v = m.values[e - 1];
    if (v == 1) chosen.push_back(pos(m.label(e)));
    else if (v == -1) chosen.push_back(bar(m.label(e)));
  }
  return make_rank1(std::move(chosen), m.ids);
}

// The iterative construction: X^0 = succ(e), X^{a+1} = succ(x^(a)), until
// e itself shows up in X^{p-1}.
inline HyperlineSequence build_rank2(const SignMap& m, Representative rep) {
  const int e = 0;  // code of the smallest element, unbarred
  const int limit = 2 * m.size();
  std::vector<std::vector<int>> atoms;
  int z = e;
  while (true) {
    auto a = successor_atom(m, z);
    if (a.empty()) throw ConstructionError("rank-2 construction reached an empty atom");
    atoms.push_back(a);
    if (std::find(a.begin(), a.end(), e) != a.end()) break;
    if (static_cast<int>(atoms.size()) >= limit)
      throw ConstructionError("rank-2 construction does not return to its start element");
    z = rep == Representative::Smallest ? a.front() : a.back();
  }
  std::vector<std::vector<SignedElement>> out;
  for (const auto& a : atoms) {
    std::vector<SignedElement> s;
    for (int c : a) s.push_back({m.label(c / 2 + 1), (c & 1) != 0});
    out.push_back(std::move(s));
  }
  return make_rank2(std::move(out), m.ids);
}

inline HyperlineSequence build(const SignMap& m, const ConvertOptions& opt);

// The hyperline spanned by the ascending positions `prefix`, or nullopt
// when the prefix does not extend to a nonzero basis.
inline std::optional<Hyperline> build_hyperline(const SignMap& m, std::span<const int> prefix,
                                                const ConvertOptions& opt) {
  const int n = m.size();
  const int r = m.rank;
  std::vector<int> t(prefix.begin(), prefix.end());
  t.resize(r);
  std::vector<bool> in_prefix(n + 1, false);
  for (int e : prefix) in_prefix[e] = true;

  // E(Z): elements completing the prefix to a nonzero basis
  std::vector<int> ez;
  for (int a = 1; a <= n; ++a) {
    if (in_prefix[a]) continue;
    bool hit = false;
    for (int b = 1; b <= n && !hit; ++b) {
      t[r - 2] = a;
      t[r - 1] = b;
      hit = m.value_of(t) != 0;
    }
    if (hit) ez.push_back(a);
  }
  if (ez.empty()) return std::nullopt;

  std::vector<int> zl, yl, ey;
  for (int a : ez) zl.push_back(m.label(a));
  for (int a = 1; a <= n; ++a)
    if (!std::binary_search(ez.begin(), ez.end(), a)) {
      ey.push_back(a);
      yl.push_back(m.label(a));
    }

  SignMap zmap(zl, 2);
  int z1 = 0, z2 = 0;
  {
    std::size_t idx = 0;
    for_each_subset(static_cast<int>(ez.size()), 2, [&](std::span<const int> s) {
      t[r - 2] = ez[s[0]];
      t[r - 1] = ez[s[1]];
      const int v = m.value_of(t);
      zmap.values[idx++] = static_cast<std::int8_t>(v);
      if (v != 0 && z1 == 0) {
        z1 = v > 0 ? t[r - 2] : t[r - 1];
        z2 = v > 0 ? t[r - 1] : t[r - 2];
      }
    });
  }
  if (z1 == 0) throw ConstructionError("hyperline without a positive rank-2 base");

  if (yl.empty()) throw ConstructionError("hyperline with an empty Y component");
  SignMap ymap(yl, r - 2);
  {
    std::size_t idx = 0;
    std::vector<int> u(r);
    u[r - 2] = z1;
    u[r - 1] = z2;
    for_each_subset(static_cast<int>(ey.size()), r - 2, [&](std::span<const int> s) {
      for (int i = 0; i < r - 2; ++i) u[i] = ey[s[i]];
      ymap.values[idx++] = static_cast<std::int8_t>(m.value_of(u));
    });
  }
  ConvertOptions inner = opt;
  inner.jobs = 1;
  return Hyperline{std::make_shared<const HyperlineSequence>(build(ymap, inner)),
                   std::make_shared<const HyperlineSequence>(build_rank2(zmap, opt.representative))};
}

inline HyperlineSequence build(const SignMap& m, const ConvertOptions& opt) {
  if (m.rank == 1) return build_rank1(m);
  if (m.rank == 2) return build_rank2(m, opt.representative);

  std::vector<std::vector<int>> prefixes;
  for_each_subset(m.size(), m.rank - 2, [&](std::span<const int> s) {
    std::vector<int> p(s.begin(), s.end());
    for (int& e : p) ++e;
    prefixes.push_back(std::move(p));
  });
  std::vector<std::optional<Hyperline>> found(prefixes.size());
  std::vector<std::string> errors(prefixes.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        found[i] = build_hyperline(m, prefixes[i], opt);
      } catch (const Error& ex) {
        errors[i] = ex.what();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min<std::size_t>(opt.jobs, prefixes.size()));
  if (jobs == 1) {
    work(0, prefixes.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (prefixes.size() + jobs - 1) / jobs;
    for (std::size_t j = 0; j < jobs; ++j)
      pool.emplace_back(work, j * chunk, std::min(prefixes.size(), (j + 1) * chunk));
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw ConstructionError(e);

  std::map<std::vector<int>, Hyperline> unique;
  for (const auto& h : found) {
    if (!h) continue;
    unique.emplace(canonical_key(*h), *h);
    auto o = opposite(*h);
    unique.emplace(canonical_key(o), o);
  }
  if (unique.empty()) throw ConstructionError("no prefix extends to a nonzero basis");
  std::vector<Hyperline> hl;
  for (auto& [k, h] : unique) hl.push_back(std::move(h));
  return make_rank_r(m.rank, std::move(hl), m.ids);
}

}  // namespace detail

/// Runs the construction on any sign map.  On maps violating the chirotope
/// axioms it either throws ConstructionError or returns a structure that
/// check_hyperline rejects or whose bases differ from the map's.
inline HyperlineSequence from_sign_map(const SignMap& m, const ConvertOptions& opt = {}) {
  try {
    return detail::build(m, opt);
  } catch (const ConstructionError&) {
    throw;
  } catch (const Error& ex) {
    throw ConstructionError(ex.what());
  }
}

inline HyperlineSequence from_chirotope(const Chirotope& chi, const ConvertOptions& opt = {}) {
  return from_sign_map(chi.map(), opt);
}

// ---------------------------------------------------------------------------
// Minors through the chirotope

/// X \ R_d / R_c with both sets given as labels; deletion happens first.
inline HyperlineSequence minor_hls(const HyperlineSequence& x, std::span<const int> delete_labels,
                                   std::span<const int> contract_labels, const CheckOptions& opt = {}) {
  Chirotope chi = to_chirotope(x, opt);
  auto positions = [](const SignMap& m, std::span<const int> labels) {
    std::vector<int> p;
    for (int l : labels) {
      const int q = m.position_of(l);
      if (q == 0) throw UsageError("element " + std::to_string(l) + " is not in the ground set");
      p.push_back(q);
    }
    return p;
  };
  if (!delete_labels.empty()) {
    auto res = deletion(chi, positions(chi.map(), delete_labels), opt);
    if (!res.report.ok()) throw DeletionError("deletion is not a chirotope:\n" + to_string(res.report));
    chi = Chirotope::unchecked(std::move(res.map));
  }
  if (!contract_labels.empty()) chi = contraction(chi, positions(chi.map(), contract_labels));
  return from_chirotope(chi);
}

}  // namespace om
