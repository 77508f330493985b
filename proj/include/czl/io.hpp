#ifndef CZL_IO_HPP
#define CZL_IO_HPP

// Plain-text formats:
//
// Kernel file (key = value, '#' comments):
//   family    = riesz | custom | zero
//   dimension = 2
//   index     = 1              (riesz only)
//   scale     = 1              (optional normalization)
//   density   = v0 v1 ...      (custom only; complex tokens such as 1, -0.5, 0.2+1i, 1i)
//
// Problem file:
//   kernel = <kernel file, relative to the problem file> | <shorthand>
//   h = 1
//   a = 2
//   box = 16x8                 (lateral nodes per axis x depth; 16x16x8 for m = 3)
//   rhs = <csv> | random:<seed> | constant:<value>
//   method = all | dense | iterative | wiener-hopf
//   tol = 1e-10
//
// Kernel shorthands: riesz:<j>:<m>[:<scale>], zero:<m>, one-over-x, rotating[:<scale>].

#include <algorithm>
#include <cctype>
#include <complex>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "czl/error.hpp"
#include "czl/format.hpp"
#include "czl/kernel.hpp"
#include "czl/riemann.hpp"
#include "czl/solver.hpp"

namespace czl::io {

using KeyValues = std::map<std::string, std::string>;

inline std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

inline KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("config line " + std::to_string(lineno) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

inline KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  return parse_key_values(in);
}

inline double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw InputError("not a number: '" + s + "'");
  return v;
}

inline int parse_int(const std::string& s) {
  const double v = parse_double(s);
  if (v != std::floor(v)) throw InputError("not an integer: '" + s + "'");
  return static_cast<int>(v);
}

/// Accepts "2", "-0.5", "1+1i", "2-0.5i", "1i", "-i", "(1,2)".
inline cplx parse_complex(std::string s) {
  s = trim(s);
  if (s.empty()) throw InputError("empty complex value");
  if (s.front() == '(' && s.back() == ')') {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw InputError("bad complex value '" + s + "'");
    return {parse_double(trim(s.substr(1, comma - 1))), parse_double(trim(s.substr(comma + 1, s.size() - comma - 2)))};
  }
  if (s.back() != 'i' && s.back() != 'j') return parse_double(s);
  const std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double(t);
  };
  if (split == std::string::npos) return {0.0, imag_part(body)};
  return {parse_double(body.substr(0, split)), imag_part(body.substr(split))};
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ';' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

using czl::format_complex;

inline Kernel kernel_from_key_values(const KeyValues& kv) {
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw InputError("kernel description: missing '" + key + "'");
    return it->second;
  };
  const std::string family = get("family");
  const int dim = parse_int(get("dimension"));
  const double scale = kv.count("scale") ? parse_double(kv.at("scale")) : 1.0;
  if (family == "riesz") return Kernel::riesz(dim, kv.count("index") ? parse_int(kv.at("index")) : 1, scale);
  if (family == "zero") return kernels::zero(dim);
  if (family == "custom") {
    std::vector<cplx> density;
    for (const std::string& tok : split_list(get("density"))) density.push_back(parse_complex(tok));
    return Kernel::custom(dim, std::move(density), scale);
  }
  throw InputError("kernel description: unknown family '" + family + "'");
}

inline Kernel parse_kernel_shorthand(const std::string& ref) {
  std::vector<std::string> parts;
  std::stringstream ss(ref);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.empty()) throw InputError("empty kernel reference");
  if (parts[0] == "riesz" && (parts.size() == 3 || parts.size() == 4)) {
    return Kernel::riesz(parse_int(parts[2]), parse_int(parts[1]), parts.size() == 4 ? parse_double(parts[3]) : 1.0);
  }
  if (parts[0] == "zero" && parts.size() == 2) return kernels::zero(parse_int(parts[1]));
  if (parts[0] == "one-over-x" && parts.size() == 1) return kernels::one_over_x();
  if (parts[0] == "rotating" && parts.size() <= 2) {
    return kernels::rotating(16, parts.size() == 2 ? parse_double(parts[1]) : 1.0);
  }
  throw InputError("unknown kernel reference '" + ref + "'");
}

/// A kernel reference is a path to a kernel file, or a shorthand.
inline Kernel load_kernel(const std::string& ref, const std::filesystem::path& base = {}) {
  std::filesystem::path path(ref);
  if (!base.empty() && path.is_relative()) path = base / path;
  if (std::filesystem::is_regular_file(path)) return kernel_from_key_values(read_key_values(path));
  return parse_kernel_shorthand(ref);
}

/// t, re, im per line; header optional.
inline void write_periodic_grid(std::ostream& os, const PeriodicGrid& g) {
  os << "t,re,im\n";
  for (std::size_t j = 0; j < g.size(); ++j) {
    os << fmt17(g.t(j)) << ',' << fmt17(g[j].real()) << ',' << fmt17(g[j].imag()) << '\n';
  }
}

inline std::vector<std::vector<double>> read_csv_numbers(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (std::isalpha(static_cast<unsigned char>(line.front()))) continue;  // header
    std::vector<double> row;
    for (const std::string& tok : split_list(line)) row.push_back(parse_double(tok));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline PeriodicGrid read_periodic_grid(std::istream& in) {
  std::vector<cplx> v;
  for (const auto& row : read_csv_numbers(in)) {
    if (row.size() != 3) throw InputError("periodic grid CSV: expected t,re,im");
    v.emplace_back(row[1], row[2]);
  }
  return PeriodicGrid(std::move(v));
}

inline PeriodicGrid read_periodic_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  return read_periodic_grid(in);
}

/// Box grid CSV: lateral coordinates y_1..y_{m-1}, depth y_m, re, im.
inline void write_box_grid(std::ostream& os, const HalfSpaceProblem& p, std::span<const cplx> u) {
  for (int ax = 0; ax < p.dimension(); ++ax) os << 'y' << ax + 1 << ',';
  os << "re,im\n";
  for (std::size_t f = 0; f < u.size(); ++f) {
    for (int c : p.node(f)) os << c << ',';
    os << fmt17(u[f].real()) << ',' << fmt17(u[f].imag()) << '\n';
  }
}

/// Reads a box grid; nodes not listed are zero, nodes outside the box are rejected.
inline std::vector<cplx> read_box_grid(std::istream& in, const HalfSpaceProblem& p) {
  std::vector<cplx> u(p.size(), 0.0);
  const int m = p.dimension();
  for (const auto& row : read_csv_numbers(in)) {
    if (static_cast<int>(row.size()) != m + 2) throw InputError("box grid CSV: expected m coordinates, re, im");
    std::vector<int> y(static_cast<std::size_t>(m));
    for (int ax = 0; ax < m; ++ax) y[static_cast<std::size_t>(ax)] = static_cast<int>(row[static_cast<std::size_t>(ax)]);
    for (int ax = 0; ax < m - 1; ++ax) {
      if (y[static_cast<std::size_t>(ax)] < -p.lateral_half() || y[static_cast<std::size_t>(ax)] >= p.lateral_half()) {
        throw InputError("box grid CSV: lateral coordinate outside the box");
      }
    }
    if (y.back() < 1 || y.back() > p.depth()) throw InputError("box grid CSV: depth coordinate outside 1..D");
    u[p.flat_index(y)] = {row[static_cast<std::size_t>(m)], row[static_cast<std::size_t>(m + 1)]};
  }
  return u;
}

/// Parses "16x8" (m = 2), "16x16x8" (m = 3) or "8" (m = 1) into (L, D).
inline std::pair<int, int> parse_box(const std::string& s, int dimension) {
  std::vector<int> n;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, 'x');) n.push_back(parse_int(trim(p)));
  if (static_cast<int>(n.size()) != dimension) throw InputError("box '" + s + "' does not match dimension " + std::to_string(dimension));
  for (std::size_t i = 0; i + 1 < n.size(); ++i) {
    if (n[i] != n[0] || n[i] % 2 != 0) throw InputError("box: lateral node counts must be equal and even");
  }
  return {n.size() > 1 ? n[0] / 2 : 0, n.back()};
}

inline std::vector<cplx> make_rhs(const std::string& source, const HalfSpaceProblem& p, const std::filesystem::path& base) {
  if (source.rfind("random:", 0) == 0) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(parse_int(source.substr(7))));
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<cplx> v(p.size());
    for (cplx& z : v) {
      const double re = dist(rng);
      z = {re, dist(rng)};
    }
    return v;
  }
  if (source.rfind("constant:", 0) == 0) return std::vector<cplx>(p.size(), parse_complex(source.substr(9)));
  std::filesystem::path path(source);
  if (path.is_relative()) path = base / path;
  std::ifstream in(path);
  if (!in) throw InputError("cannot read right-hand side " + path.string());
  return read_box_grid(in, p);
}

struct ProblemFile {
  std::string kernel;
  double h = 1.0;
  cplx a = 1.0;
  std::string box;
  std::string rhs = "random:1";
  std::string method = "all";
  double tol = 1e-10;
  std::filesystem::path base;
};

inline ProblemFile read_problem_file(const std::filesystem::path& path) {
  const KeyValues kv = read_key_values(path);
  ProblemFile pf;
  pf.base = path.parent_path();
  auto it = kv.find("kernel");
  if (it == kv.end()) throw InputError("problem file: missing 'kernel'");
  pf.kernel = it->second;
  if (kv.count("h")) pf.h = parse_double(kv.at("h"));
  if (kv.count("a")) pf.a = parse_complex(kv.at("a"));
  if (!kv.count("box")) throw InputError("problem file: missing 'box'");
  pf.box = kv.at("box");
  if (kv.count("rhs")) pf.rhs = kv.at("rhs");
  if (kv.count("method")) pf.method = kv.at("method");
  if (kv.count("tol")) pf.tol = parse_double(kv.at("tol"));
  return pf;
}

inline HalfSpaceProblem build_problem(const ProblemFile& pf) {
  Kernel k = load_kernel(pf.kernel, pf.base);
  const auto [half, depth] = parse_box(pf.box, k.dimension());
  HalfSpaceProblem p(std::move(k), pf.h, pf.a, half, depth);
  p.set_rhs(make_rhs(pf.rhs, p, pf.base));
  return p;
}

}  // namespace czl::io

#endif  // CZL_IO_HPP
