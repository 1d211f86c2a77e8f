#pragma once

// Text formats.
//
// ChiFile (chirotope):
//     r n
//     <body>
//     [ids l_1 ... l_n]
//   The body has one character per ascending r-subset of {1..n} in
//   lexicographic order of the sorted tuples: '+', '-' or '0'.  The optional
//   ids line maps positions to original element labels; it is written only
//   when the labels differ from 1..n.
//
// HlsJson (hyperline sequence), element strings "3" and "~3" (barred):
//   {"rank":1,"elements":[...]}
//   {"rank":2,"atoms":[[...],...]}          full period listed
//   {"rank":r,"hyperlines":[{"Y":...,"Z":...},...]}
//
// VecFile (vector configuration): one row per line, comma separated
// integers or fractions p/q.  Floating point literals are rejected.

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "om/faces.hpp"
#include "om/hyperline.hpp"

namespace om {

class ParseError : public UsageError {
 public:
  ParseError(const std::string& where, const std::string& what) : UsageError("parse error at " + where + ": " + what) {}
};

namespace detail {

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(std::move(cur));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline std::string where(std::size_t line, std::size_t col) {
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline long long parse_natural(std::string_view tok, const std::string& at) {
  if (tok.empty() || tok.size() > 9) throw ParseError(at, "expected a positive integer, got '" + std::string(tok) + "'");
  long long v = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') throw ParseError(at, "expected a positive integer, got '" + std::string(tok) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

// Whitespace separated tokens with their 1-based columns.
inline std::vector<std::pair<std::string, std::size_t>> tokens(const std::string& line) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.emplace_back(line.substr(start, i - start), start + 1);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// ChiFile

inline SignMap parse_chi(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError(detail::where(1, 1), "empty input");
  const auto head = detail::tokens(lines[0]);
  if (head.size() != 2) throw ParseError(detail::where(1, 1), "header must be 'r n'");
  const long long r = detail::parse_natural(head[0].first, detail::where(1, head[0].second));
  const long long n = detail::parse_natural(head[1].first, detail::where(1, head[1].second));
  if (r < 1 || r > kMaxRank) throw ParseError(detail::where(1, head[0].second), "rank must be in 1.." + std::to_string(kMaxRank));
  if (n < r || n > 64) throw ParseError(detail::where(1, head[1].second), "need r <= n <= 64");
  if (lines.size() < 2) throw ParseError(detail::where(2, 1), "missing body line");
  const std::string& body = lines[1];
  const std::uint64_t expect = binomial(static_cast<int>(n), static_cast<int>(r));
  for (std::size_t i = 0; i < body.size(); ++i)
    if (body[i] != '+' && body[i] != '-' && body[i] != '0')
      throw ParseError(detail::where(2, i + 1), std::string("unexpected character '") + body[i] + "'");
  if (body.size() != expect)
    throw ParseError(detail::where(2, body.size() + 1),
                     "body has " + std::to_string(body.size()) + " signs, expected C(n,r) = " + std::to_string(expect));
  std::vector<int> ids = SignMap::identity_ids(static_cast<int>(n));
  if (lines.size() >= 3) {
    const auto tok = detail::tokens(lines[2]);
    if (tok.empty() || tok[0].first != "ids") throw ParseError(detail::where(3, 1), "expected 'ids' line");
    if (tok.size() != static_cast<std::size_t>(n) + 1)
      throw ParseError(detail::where(3, 1), "ids line must list exactly n labels");
    for (long long i = 0; i < n; ++i) {
      ids[i] = static_cast<int>(detail::parse_natural(tok[i + 1].first, detail::where(3, tok[i + 1].second)));
      if (ids[i] < 1 || (i > 0 && ids[i] <= ids[i - 1]))
        throw ParseError(detail::where(3, tok[i + 1].second), "labels must be positive and strictly ascending");
    }
  }
  if (lines.size() > 3) throw ParseError(detail::where(4, 1), "unexpected trailing content");
  SignMap m(std::move(ids), static_cast<int>(r));
  for (std::size_t i = 0; i < body.size(); ++i) m.values[i] = body[i] == '+' ? 1 : body[i] == '-' ? -1 : 0;
  return m;
}

inline std::string chi_body(const SignMap& m) {
  std::string body;
  for (auto v : m.values) body += v > 0 ? '+' : v < 0 ? '-' : '0';
  return body;
}

inline std::string serialize_chi(const SignMap& m) {
  std::string out = std::to_string(m.rank) + " " + std::to_string(m.size()) + "\n" + chi_body(m) + "\n";
  if (m.ids != SignMap::identity_ids(m.size())) {
    out += "ids";
    for (int l : m.ids) out += " " + std::to_string(l);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// HlsJson

namespace detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline SignedElement parse_signed(const json& j, const std::string& at) {
  if (!j.is_string()) throw ParseError(at, "element must be a string like \"3\" or \"~3\"");
  std::string s = j.get<std::string>();
  bool barred = false;
  if (!s.empty() && s[0] == '~') {
    barred = true;
    s.erase(0, 1);
  }
  const long long v = parse_natural(s, at);
  if (v < 1) throw ParseError(at, "element labels start at 1");
  return {static_cast<int>(v), barred};
}

inline HyperlineSequence parse_hls_node(const json& j, const std::string& at) {
  if (!j.is_object()) throw ParseError(at, "expected an object");
  if (!j.contains("rank") || !j["rank"].is_number_integer()) throw ParseError(at + "/rank", "missing integer rank");
  const int rank = j["rank"].get<int>();
  if (rank < 1 || rank > kMaxRank) throw ParseError(at + "/rank", "rank out of range");
  if (rank == 1) {
    if (!j.contains("elements") || !j["elements"].is_array()) throw ParseError(at + "/elements", "missing array");
    std::vector<SignedElement> chosen;
    std::size_t i = 0;
    for (const auto& e : j["elements"]) chosen.push_back(parse_signed(e, at + "/elements/" + std::to_string(i++)));
    return make_rank1(std::move(chosen));
  }
  if (rank == 2) {
    if (!j.contains("atoms") || !j["atoms"].is_array()) throw ParseError(at + "/atoms", "missing array");
    std::vector<std::vector<SignedElement>> atoms;
    std::size_t a = 0;
    for (const auto& arr : j["atoms"]) {
      const std::string here = at + "/atoms/" + std::to_string(a++);
      if (!arr.is_array()) throw ParseError(here, "atom must be an array");
      std::vector<SignedElement> atom;
      std::size_t i = 0;
      for (const auto& e : arr) atom.push_back(parse_signed(e, here + "/" + std::to_string(i++)));
      atoms.push_back(std::move(atom));
    }
    return make_rank2(std::move(atoms));
  }
  if (!j.contains("hyperlines") || !j["hyperlines"].is_array()) throw ParseError(at + "/hyperlines", "missing array");
  std::map<std::vector<int>, Hyperline> unique;
  std::size_t i = 0;
  for (const auto& h : j["hyperlines"]) {
    const std::string here = at + "/hyperlines/" + std::to_string(i++);
    if (!h.is_object() || !h.contains("Y") || !h.contains("Z")) throw ParseError(here, "hyperline needs Y and Z");
    Hyperline hl{std::make_shared<const HyperlineSequence>(parse_hls_node(h["Y"], here + "/Y")),
                 std::make_shared<const HyperlineSequence>(parse_hls_node(h["Z"], here + "/Z"))};
    unique.emplace(canonical_key(hl), std::move(hl));
  }
  std::vector<Hyperline> hls;
  for (auto& [k, h] : unique) hls.push_back(std::move(h));
  if (hls.empty()) throw ParseError(at + "/hyperlines", "no hyperlines");
  return make_rank_r(rank, std::move(hls));
}

inline ordered_json signed_list(std::vector<SignedElement> xs) {
  std::sort(xs.begin(), xs.end());
  ordered_json arr = ordered_json::array();
  for (auto x : xs) arr.push_back(to_string(x));
  return arr;
}

// Sign of the lexicographically smallest base support of Y.
inline int leading_orientation(const HyperlineSequence& y) {
  const auto b = bases(y);
  return b.empty() ? 1 : b.front().sign;
}

inline ordered_json hls_to_json(const HyperlineSequence& x) {
  ordered_json j;
  j["rank"] = x.rank;
  if (x.rank == 1) {
    j["elements"] = signed_list(x.rank1().chosen);
  } else if (x.rank == 2) {
    // start the period at the atom holding the smallest signed element
    const auto& atoms = x.rank2().atoms;
    std::size_t start = 0;
    SignedElement best{};
    bool have = false;
    for (std::size_t a = 0; a < atoms.size(); ++a)
      for (auto e : atoms[a])
        if (!have || e < best) {
          best = e;
          start = a;
          have = true;
        }
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < atoms.size(); ++i) arr.push_back(signed_list(atoms[(start + i) % atoms.size()]));
    j["atoms"] = std::move(arr);
  } else {
    // each orientation pair printed together, the orientation whose
    // smallest Y-base is positive first
    struct Entry {
      std::vector<int> pair_key;
      int second;
      const Hyperline* h;
    };
    std::vector<Entry> entries;
    for (const auto& h : x.hyperlines()) {
      const bool first = leading_orientation(*h.Y) > 0;
      entries.push_back({first ? canonical_key(h) : canonical_key(opposite(h)), first ? 0 : 1, &h});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return std::tie(a.pair_key, a.second) < std::tie(b.pair_key, b.second);
    });
    ordered_json arr = ordered_json::array();
    for (const auto& e : entries) {
      ordered_json h;
      h["Y"] = hls_to_json(*e.h->Y);
      h["Z"] = hls_to_json(*e.h->Z);
      arr.push_back(std::move(h));
    }
    j["hyperlines"] = std::move(arr);
  }
  return j;
}

}  // namespace detail

inline HyperlineSequence parse_hls(std::string_view text) {
  detail::json j;
  try {
    j = detail::json::parse(text.begin(), text.end());
  } catch (const detail::json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
  return detail::parse_hls_node(j, "#");
}

inline std::string serialize_hls(const HyperlineSequence& x) { return detail::hls_to_json(x).dump(1) + "\n"; }

// ---------------------------------------------------------------------------
// VecFile

inline VectorConfig parse_vec(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError(detail::where(1, 1), "empty input");
  VectorConfig v;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    std::vector<Rational> row;
    std::size_t start = 0;
    while (true) {
      std::size_t end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      std::string tok = line.substr(start, end - start);
      std::size_t lead = tok.find_first_not_of(" \t");
      std::size_t trail = tok.find_last_not_of(" \t");
      const std::string at = detail::where(li + 1, start + 1);
      if (lead == std::string::npos) throw ParseError(at, "empty entry");
      tok = tok.substr(lead, trail - lead + 1);
      std::string num = tok, den = "1";
      if (auto slash = tok.find('/'); slash != std::string::npos) {
        num = tok.substr(0, slash);
        den = tok.substr(slash + 1);
      }
      bool negative = false;
      if (!num.empty() && (num[0] == '-' || num[0] == '+')) {
        negative = num[0] == '-';
        num.erase(0, 1);
      }
      auto digits = [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
      };
      if (!digits(num) || !digits(den))
        throw ParseError(at, "expected an integer or fraction p/q, got '" + tok + "'");
      Integer p(num), q(den);
      if (q == 0) throw ParseError(at, "zero denominator");
      if (negative) p = -p;
      row.emplace_back(p, q);
      if (end == line.size()) break;
      start = end + 1;
    }
    if (!v.rows.empty() && row.size() != v.rows[0].size())
      throw ParseError(detail::where(li + 1, 1), "row has " + std::to_string(row.size()) + " entries, expected " +
                                                     std::to_string(v.rows[0].size()));
    if (std::all_of(row.begin(), row.end(), [](const Rational& x) { return x == 0; }))
      throw ParseError(detail::where(li + 1, 1), "zero vector");
    v.rows.push_back(std::move(row));
  }
  return v;
}

inline std::string serialize_vec(const VectorConfig& v) {
  std::string out;
  for (const auto& row : v.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += row[i].str();
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG of a rank-2 sequence: 2k ticks around a circle, antipodal atoms
// diametrically opposite, barred labels drawn with an overline.

namespace detail {

inline std::string fixed3(double v) {
  double r = std::round(v * 1000.0) / 1000.0;
  if (r == 0.0) r = 0.0;  // no "-0.000"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", r);
  return buf;
}

}  // namespace detail

inline std::string render_svg(const HyperlineSequence& x) {
  if (x.rank != 2) throw UsageError("render needs a rank-2 hyperline sequence (got rank " + std::to_string(x.rank) + ")");
  auto rep = check_hyperline(x);
  if (!rep.ok()) throw InvalidHyperlineSequence(std::move(rep));
  const auto j = detail::hls_to_json(x);  // canonical rotation
  const auto& atoms = j["atoms"];
  const std::size_t p = atoms.size();
  constexpr double cx = 200, cy = 200, radius = 150;
  const double pi = std::acos(-1.0);
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n";
  s += "<circle cx=\"200\" cy=\"200\" r=\"150\" fill=\"none\" stroke=\"black\"/>\n";
  for (std::size_t a = 0; a < p; ++a) {
    const double deg = 360.0 * static_cast<double>(a) / static_cast<double>(p);
    const double th = 2.0 * pi * static_cast<double>(a) / static_cast<double>(p);
    const double c = std::cos(th), sn = std::sin(th);
    s += "<g class=\"tick\" data-atom=\"" + std::to_string(a) + "\" data-angle=\"" + detail::fixed3(deg) + "\">\n";
    s += "<line x1=\"" + detail::fixed3(cx + (radius - 10) * c) + "\" y1=\"" + detail::fixed3(cy - (radius - 10) * sn) +
         "\" x2=\"" + detail::fixed3(cx + (radius + 10) * c) + "\" y2=\"" + detail::fixed3(cy - (radius + 10) * sn) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + detail::fixed3(cx + (radius + 30) * c) + "\" y=\"" + detail::fixed3(cy - (radius + 30) * sn) +
         "\" text-anchor=\"middle\" dominant-baseline=\"middle\" font-family=\"serif\" font-size=\"16\">";
    bool first = true;
    for (const auto& e : atoms[a]) {
      const std::string lbl = e.get<std::string>();
      if (!first) s += ",";
      first = false;
      if (lbl[0] == '~') s += "<tspan text-decoration=\"overline\">" + lbl.substr(1) + "</tspan>";
      else s += lbl;
    }
    s += "</text>\n</g>\n";
  }
  s += "</svg>\n";
  return s;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

struct EnumerateOptions {
  bool uniform = false;
  int jobs = 1;
  bool size_override = false;
};

/// Bodies of all chirotopes of rank r on n elements, ascending with
/// '-' < '0' < '+'.  Sharding across jobs does not change the output.
inline std::vector<std::string> enumerate_chirotopes(int n, int r, const EnumerateOptions& opt = {}) {
  if (r < 1 || n < r) throw UsageError("enumeration needs 1 <= r <= n");
  const std::uint64_t positions = binomial(n, r);
  if (!opt.size_override && positions > 20)
    throw SizeGuardError("enumeration is limited to C(n,r) <= 20 sign positions (got " + std::to_string(positions) + ")");
  if (positions > 40) throw SizeGuardError("enumeration over more than 40 sign positions is not supported");
  const int base = opt.uniform ? 2 : 3;
  const char* alphabet = opt.uniform ? "-+" : "-0+";
  std::uint64_t total = 1;
  for (std::uint64_t i = 0; i < positions; ++i) total *= base;

  auto scan = [&](std::uint64_t begin, std::uint64_t end, std::vector<std::string>& out) {
    SignMap m(n, r);
    std::string body(positions, '-');
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      std::uint64_t x = idx;
      for (std::uint64_t i = positions; i-- > 0;) {
        const int d = static_cast<int>(x % base);
        x /= base;
        body[i] = alphabet[d];
        m.values[i] = body[i] == '+' ? 1 : body[i] == '-' ? -1 : 0;
      }
      if (is_chirotope(m, true)) out.push_back(body);
    }
  };

  const std::uint64_t jobs = std::max<std::uint64_t>(1, std::min<std::uint64_t>(opt.jobs, total));
  std::vector<std::vector<std::string>> shards(jobs);
  if (jobs == 1) {
    scan(0, total, shards[0]);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + jobs - 1) / jobs;
    for (std::uint64_t j = 0; j < jobs; ++j)
      pool.emplace_back([&, j] { scan(std::min(total, j * chunk), std::min(total, (j + 1) * chunk), shards[j]); });
    for (auto& t : pool) t.join();
  }
  std::vector<std::string> out;
  for (auto& s : shards) out.insert(out.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
  return out;
}

}  // namespace om
