#pragma once

// Command implementations behind the `om` tool.  run() returns the exit
// status: 0 valid, 1 invalid input or domain error, 2 usage or parse error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "om/faces.hpp"
#include "om/hyperline.hpp"
#include "om/io.hpp"

namespace om::cli {

enum class Format { Auto, Chi, Hls, Vec };

inline bool size_override_from_env() {
  const char* v = std::getenv("OM_SIZE_OVERRIDE");
  return v != nullptr && std::string_view(v) == "1";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_output(const std::string& path, const std::string& data, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << data;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << data;
}

inline Format detect(const std::string& text, Format requested) {
  if (requested != Format::Auto) return requested;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return Format::Hls;
  const auto eol = text.find('\n');
  const std::string line = text.substr(0, eol);
  if (line.find(',') != std::string::npos || line.find('/') != std::string::npos) return Format::Vec;
  return Format::Chi;
}

/// Any of the three input formats as a validated chirotope.
inline Chirotope load_chirotope(const std::string& text, Format fmt, const CheckOptions& opt) {
  switch (detect(text, fmt)) {
    case Format::Hls:
      return to_chirotope(parse_hls(text), opt);
    case Format::Vec:
      return from_vectors(parse_vec(text));
    default:
      return Chirotope::validated(parse_chi(text), opt);
  }
}

inline std::vector<int> label_positions(const SignMap& m, const std::vector<int>& labels) {
  std::vector<int> p;
  for (int l : labels) {
    const int q = m.position_of(l);
    if (q == 0) throw UsageError("element " + std::to_string(l) + " is not in the ground set");
    p.push_back(q);
  }
  return p;
}

inline std::vector<int> parse_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }) || tok.size() > 9)
      throw UsageError("bad element list '" + s + "'");
    out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw UsageError("empty element list");
  return out;
}

inline int cmd_check(const std::string& path, Format fmt, std::ostream& out) {
  const CheckOptions opt{size_override_from_env(), false};
  const std::string text = read_file(path);
  const Format f = detect(text, fmt);
  ValidationReport rep;
  std::string what;
  if (f == Format::Hls) {
    const auto x = parse_hls(text);
    rep = check_hyperline(x, opt);
    what = "hyperline sequence of rank " + std::to_string(x.rank) + " on " + std::to_string(x.ground.size()) + " elements";
  } else if (f == Format::Chi) {
    const auto m = parse_chi(text);
    rep = check_chirotope(m, opt);
    what = "chirotope of rank " + std::to_string(m.rank) + " on " + std::to_string(m.size()) + " elements";
  } else {
    throw UsageError("check accepts chi or hls input");
  }
  if (rep.ok()) out << "valid " << what << "\n";
  else out << "invalid " << what << "\n";
  out << to_string(rep);
  return rep.ok() ? 0 : 1;
}

inline int cmd_convert(const std::string& path, const std::string& to, int jobs, const std::string& output,
                       std::ostream& out) {
  const CheckOptions opt{size_override_from_env(), false};
  const Chirotope chi = load_chirotope(read_file(path), Format::Auto, opt);
  std::string data;
  if (to == "chi") data = serialize_chi(chi.map());
  else data = serialize_hls(from_chirotope(chi, ConvertOptions{Representative::Smallest, jobs}));
  write_output(output, data, out);
  return 0;
}

inline int cmd_minor(const std::string& path, const std::string& del, const std::string& con, const std::string& output,
                     std::ostream& out, std::ostream& err) {
  const CheckOptions opt{size_override_from_env(), false};
  Chirotope chi = load_chirotope(read_file(path), Format::Auto, opt);
  if (!del.empty()) {
    std::vector<int> positions;
    if (del == "auto") {
      const int e = find_deletable(chi, opt);
      err << "deleting element " << chi.map().label(e) << "\n";
      positions = {e};
    } else {
      positions = label_positions(chi.map(), parse_list(del));
    }
    auto res = deletion(chi, positions, opt);
    if (!res.report.ok()) {
      write_output(output, serialize_chi(res.map), out);
      err << "deletion is not a chirotope:\n" << to_string(res.report);
      return 1;
    }
    chi = Chirotope::unchecked(std::move(res.map));
  }
  if (!con.empty()) chi = contraction(chi, label_positions(chi.map(), parse_list(con)));
  write_output(output, serialize_chi(chi.map()), out);
  return 0;
}

inline int cmd_faces(const std::string& path, Format fmt, std::ostream& out) {
  const bool ov = size_override_from_env();
  const Chirotope chi = load_chirotope(read_file(path), fmt, {ov, false});
  if (chi.rank() == 3) out << to_string(face_census(chi, ov)) << "\n";
  else out << "note: face census is computed for rank 3 only; listing topes\n";
  const auto t = topes(chi, ov);
  out << "topes " << t.size() << "\n";
  for (const auto& v : t) out << to_string(v) << "\n";
  return 0;
}

inline int cmd_enumerate(int n, int r, bool uniform, bool list, int jobs, std::ostream& out) {
  const auto bodies = enumerate_chirotopes(n, r, {uniform, jobs, size_override_from_env()});
  if (list)
    for (const auto& b : bodies) out << b << "\n";
  out << "count " << bodies.size() << "\n";
  return 0;
}

inline int cmd_render(const std::string& path, const std::string& output, std::ostream& out) {
  const std::string text = read_file(path);
  HyperlineSequence x;
  if (detect(text, Format::Auto) == Format::Hls) x = parse_hls(text);
  else x = from_chirotope(load_chirotope(text, Format::Auto, {size_override_from_env(), false}));
  write_output(output, render_svg(x), out);
  return 0;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Oriented matroids: chirotopes and hyperline sequences in exact arithmetic", "om"};
  app.require_subcommand(1);

  const std::map<std::string, Format> formats{
      {"auto", Format::Auto}, {"chi", Format::Chi}, {"hls", Format::Hls}, {"vec", Format::Vec}};

  std::string path, output, to, del, con;
  Format fmt = Format::Auto;
  int jobs = 1, n = 0, r = 0;
  bool uniform = false, list = false;

  auto* check = app.add_subcommand("check", "validate a chirotope or hyperline sequence");
  check->add_option("path", path, "input file")->required();
  check->add_option("--format", fmt, "chi, hls or auto")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* convert = app.add_subcommand("convert", "convert between chirotope and hyperline sequence");
  convert->add_option("path", path, "input file (chi, hls or vec)")->required();
  convert->add_option("--to", to, "output format")->required()->check(CLI::IsMember({"chi", "hls"}));
  convert->add_option("-o,--output", output, "output file (default stdout)");
  convert->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));

  auto* minor = app.add_subcommand("minor", "deletion and contraction");
  minor->add_option("path", path, "input file")->required();
  minor->add_option("--delete", del, "comma separated labels, or 'auto'");
  minor->add_option("--contract", con, "comma separated labels");
  minor->add_option("-o,--output", output, "output file (default stdout)");

  auto* faces = app.add_subcommand("faces", "face census (rank 3) and topes");
  faces->add_option("path", path, "input file")->required();
  faces->add_option("--format", fmt, "chi, hls, vec or auto")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* enumerate = app.add_subcommand("enumerate", "count all chirotopes of rank r on n elements");
  enumerate->add_option("n", n, "number of elements")->required()->check(CLI::Range(1, 64));
  enumerate->add_option("r", r, "rank")->required()->check(CLI::Range(1, 16));
  enumerate->add_flag("--uniform", uniform, "only sign maps without zeros");
  enumerate->add_flag("--list", list, "print every accepted body");
  enumerate->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));

  auto* render = app.add_subcommand("render", "SVG of a rank-2 hyperline sequence");
  render->add_option("path", path, "input file")->required();
  render->add_option("-o,--output", output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(path, fmt, out);
    if (*convert) return cmd_convert(path, to, jobs, output, out);
    if (*minor) return cmd_minor(path, del, con, output, out, err);
    if (*faces) return cmd_faces(path, fmt, out);
    if (*enumerate) return cmd_enumerate(n, r, uniform, list, jobs, out);
    if (*render) return cmd_render(path, output, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace om::cli
