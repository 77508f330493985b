// czl: command-line front end for symbols, slice indices, Riemann problems
// and half-space solves.
//
// Exit status: 0 success, 1 input error (or a failed verify), 2 the problem is
// not uniquely solvable (nonzero index).

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "czl/czl.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using czl::cplx;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_obstruction = 2;

struct Common {
  std::string kernel = "riesz:1:2";
  std::vector<double> h{1.0};
  std::string a = "2";
  std::vector<std::string> xi_prime;
  int resolution = 128;
  std::vector<double> radii{16.0, 32.0};
  std::string box;
  double tol = 1e-10;
  std::string out;
};

struct Flags {
  CLI::Option* kernel = nullptr;
  CLI::Option* h = nullptr;
  CLI::Option* a = nullptr;
  CLI::Option* box = nullptr;
  CLI::Option* tol = nullptr;
};

czl::PartialSumPlan plan_of(const Common& c) {
  czl::PartialSumPlan p;
  p.radii = c.radii;
  p.validate();
  return p;
}

/// Opens <out>/<name> for writing, or returns nullopt when no output
/// directory was requested.
std::optional<std::ofstream> open_out(const Common& c, const std::string& name) {
  if (c.out.empty()) return std::nullopt;
  std::error_code ec;
  fs::create_directories(c.out, ec);
  std::ofstream os(fs::path(c.out) / name);
  if (!os) throw czl::InputError("cannot write " + (fs::path(c.out) / name).string());
  return os;
}

std::vector<double> parse_point(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ':');) v.push_back(czl::io::parse_double(czl::io::trim(part)));
  return v;
}

std::string point_label(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ":" : "") + czl::fmt17(v[i]);
  return s;
}

/// Lateral frequencies for slice commands. For m = 2 every xi' is paired
/// with -xi', since the two signs give two different curves.
std::vector<std::vector<double>> lateral_set(const Common& c, int m) {
  std::vector<std::vector<double>> out;
  if (m == 1) return {{}};
  std::vector<std::string> raw = c.xi_prime;
  if (raw.empty()) raw = m == 2 ? std::vector<std::string>{"1", "2"} : std::vector<std::string>{"1:0", "0:1"};
  for (const std::string& s : raw) {
    std::vector<double> p = parse_point(s);
    if (static_cast<int>(p.size()) != m - 1) throw czl::InputError("--xi-prime '" + s + "' must have m-1 components");
    out.push_back(p);
    if (m == 2) out.push_back({-p[0]});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void write_curve_csv(std::ostream& os, const std::string& param, const std::vector<double>& t,
                     const czl::SliceWindingReport& rep) {
  os << param << ",re,im,phase\n";
  for (std::size_t j = 0; j < rep.curve.size(); ++j) {
    os << czl::fmt17(t[j]) << ',' << czl::fmt17(rep.curve[j].real()) << ',' << czl::fmt17(rep.curve[j].imag()) << ','
       << czl::fmt17(rep.phase_trace[j]) << '\n';
  }
}

// ---------------------------------------------------------------- symbol

int run_symbol(const Common& c) {
  const czl::Kernel k = czl::io::load_kernel(c.kernel);
  const cplx a = czl::io::parse_complex(c.a);
  const czl::PartialSumPlan plan = plan_of(c);
  const int m = k.dimension();
  for (double h : c.h) {
    const std::string tag = c.h.size() > 1 ? "_h" + czl::fmt17(h) : "";
    const czl::SymbolGrid grid = czl::sample_symbol_grid(k, a, h, c.resolution, plan);
    std::cout << "symbol grid: m=" << m << " h=" << czl::fmt17(h) << " points=" << grid.values.size()
              << " converged=" << (grid.all_converged() ? "yes" : "no") << '\n';
    if (auto os = open_out(c, "symbol" + tag + ".csv")) grid.write_csv(*os);

    for (const auto& xp : lateral_set(c, m)) {
      const czl::SymbolSlice slice = czl::discrete_symbol_slice(k, a, h, xp, c.resolution, plan);
      const std::string label = m == 1 ? "" : "_xi" + point_label(xp);
      std::cout << "  slice xi'=(" << point_label(xp) << ") closure gap "
                << czl::fmt17(std::abs(slice.values.back() - slice.values.front())) << '\n';
      if (auto os = open_out(c, "slice" + tag + label + ".csv")) {
        *os << "xi_m,re,im\n";
        for (int j = 0; j <= slice.resolution; ++j) {
          const cplx v = slice.values[static_cast<std::size_t>(j)];
          *os << czl::fmt17(slice.xi_m(j)) << ',' << czl::fmt17(v.real()) << ',' << czl::fmt17(v.imag()) << '\n';
        }
      }
      if (auto os = open_out(c, "slice" + tag + label + ".svg")) {
        czl::svg::write_curve(*os, std::span(slice.values).first(slice.values.size() - 1),
                              "a + sigma_h, h=" + czl::fmt17(h) + (m == 1 ? "" : ", xi'=" + point_label(xp)));
      }
    }
  }
  return exit_ok;
}

// ---------------------------------------------------------------- index

int run_index(const Common& c) {
  const czl::Kernel k = czl::io::load_kernel(c.kernel);
  const cplx a = czl::io::parse_complex(c.a);
  const czl::PartialSumPlan plan = plan_of(c);
  const int m = k.dimension();
  const czl::TransmissionReport tr = czl::transmission_check(k, a);
  bool nonzero = false;
  json rep;
  rep["kernel"] = c.kernel;
  rep["a"] = czl::format_complex(a);
  rep["transmission_defect"] = tr.defect;

  auto dump_slice = [&](const czl::SliceWindingReport& w, const std::string& stem, bool discrete) {
    std::vector<double> t(w.curve.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
      t[j] = discrete ? -std::numbers::pi / w.h + 2 * std::numbers::pi / w.h * static_cast<double>(j) / static_cast<double>(t.size())
                      : (j + 1 < t.size() ? std::tan(-std::numbers::pi / 2 + std::numbers::pi * (static_cast<double>(j) + 0.5) /
                                                                           static_cast<double>(t.size() - 1))
                                          : std::numeric_limits<double>::infinity());
    }
    if (auto os = open_out(c, stem + ".csv")) write_curve_csv(*os, discrete ? "xi_m" : "xi_m_cont", t, w);
    if (auto os = open_out(c, stem + ".svg")) {
      czl::svg::write_curve(*os, w.curve,
                            std::string(discrete ? "a + sigma_h" : "a + sigma") + ", xi'=" + point_label(w.xi_prime) +
                                (discrete ? ", h=" + czl::fmt17(w.h) : "") + ", winding " + std::to_string(w.winding));
    }
  };

  if (m == 1) {
    // one slice: the symbol itself over a period; the continuous curve of an
    // odd kernel does not close, so only the discrete winding is reported
    std::cout << "transmission defect " << czl::fmt17(tr.defect) << (tr.passed ? " (pass)" : " (fails)") << '\n';
    for (double h : c.h) {
      const czl::SliceWindingReport w = czl::discrete_winding(k, a, h, {}, c.resolution, plan);
      std::cout << "h=" << czl::fmt17(h) << "  winding " << w.winding << '\n';
      rep["windings"].push_back({{"h", h}, {"winding", w.winding}});
      nonzero = nonzero || w.winding != 0;
      dump_slice(w, "index_h" + czl::fmt17(h), true);
    }
  } else {
    const std::vector<std::vector<double>> xps = lateral_set(c, m);
    const czl::MainTheoremReport mt = czl::main_theorem_report(k, a, c.h, xps, c.resolution, plan);
    mt.write_text(std::cout);
    if (auto os = open_out(c, "index.csv")) mt.write_csv(*os);
    if (auto os = open_out(c, "index.txt")) mt.write_text(*os);
    if (!tr.passed) {
      std::cerr << "czl: transmission property fails, slice curves do not close\n";
      return exit_input;
    }
    for (const czl::AgreementCell& cell : mt.cells) {
      json row{{"xi_prime", cell.xi_prime}, {"h", cell.h}};
      row["winding_h"] = cell.discrete ? json(*cell.discrete) : json(nullptr);
      row["winding_cont"] = cell.continuous ? json(*cell.continuous) : json(nullptr);
      row["equal"] = cell.equal;
      if (!cell.error.empty()) row["error"] = cell.error;
      rep["cells"].push_back(row);
      if ((cell.discrete && *cell.discrete != 0) || (cell.continuous && *cell.continuous != 0)) nonzero = true;
    }
    rep["verdict"] = mt.agrees ? "agrees" : "disagrees";
    if (!c.out.empty()) {
      for (const auto& xp : xps) {
        const std::string label = point_label(xp);
        try {
          dump_slice(czl::continuous_winding(k, a, xp, c.resolution), "index_xi" + label + "_cont", false);
        } catch (const czl::Error&) {
        }
        for (double h : c.h) {
          try {
            dump_slice(czl::discrete_winding(k, a, h, xp, c.resolution, plan),
                       "index_xi" + label + "_h" + czl::fmt17(h), true);
          } catch (const czl::Error&) {
          }
        }
      }
    }
  }
  rep["nonzero_index"] = nonzero;
  if (auto os = open_out(c, "index.json")) *os << rep.dump(2) << '\n';
  if (nonzero) {
    std::cerr << "czl: nonzero winding, the half-space equation is not uniquely solvable\n";
    return exit_obstruction;
  }
  return exit_ok;
}

// ---------------------------------------------------------------- transmission

int run_transmission(const Common& c) {
  const czl::Kernel k = czl::io::load_kernel(c.kernel);
  const cplx a = czl::io::parse_complex(c.a);
  const czl::TransmissionReport tr = czl::transmission_check(k, a);
  std::cout << "south  " << czl::format_complex(tr.sigma_south) << '\n'
            << "north  " << czl::format_complex(tr.sigma_north) << '\n'
            << "defect " << czl::fmt17(tr.defect) << (tr.passed ? "  pass\n" : "  FAIL\n");
  if (auto os = open_out(c, "transmission.json")) {
    json j{{"kernel", c.kernel},
           {"a", czl::format_complex(a)},
           {"sigma_south", czl::format_complex(tr.sigma_south)},
           {"sigma_north", czl::format_complex(tr.sigma_north)},
           {"defect", tr.defect},
           {"passed", tr.passed}};
    *os << j.dump(2) << '\n';
  }
  return exit_ok;
}

// ---------------------------------------------------------------- verify

int run_verify(const Common& c) {
  const std::vector<czl::VerifyRow> rows = czl::run_verification();
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  for (const auto& r : rows) {
    const char* mark = !r.asserted ? "[INFO]" : (r.passed ? "[PASS]" : "[FAIL]");
    std::cout << mark << ' ' << r.name << std::string(width - r.name.size() + 2, ' ') << r.detail << '\n';
  }
  if (auto os = open_out(c, "verify.csv")) {
    *os << "check,status,detail\n";
    for (const auto& r : rows) {
      *os << r.name << ',' << (!r.asserted ? "info" : (r.passed ? "pass" : "fail")) << ",\"" << r.detail << "\"\n";
    }
  }
  const bool ok = czl::verification_passed(rows);
  std::cout << (ok ? "all checks passed\n" : "some checks FAILED\n");
  return ok ? exit_ok : exit_input;
}

// ---------------------------------------------------------------- riemann

int run_riemann(const Common& c, const std::string& g_file, const std::string& rhs_file) {
  if (g_file.empty()) throw czl::InputError("riemann: --G <csv> is required");
  const czl::PeriodicGrid g = czl::io::read_periodic_grid(fs::path(g_file));
  const czl::PeriodicGrid rhs =
      rhs_file.empty() ? czl::PeriodicGrid::constant(g.size(), 1.0) : czl::io::read_periodic_grid(fs::path(rhs_file));
  const czl::RiemannProblem p(g, rhs);
  json rep{{"n", g.size()},
           {"kappa", p.kappa()},
           {"kernel_dimension", std::max(-p.kappa(), 0)},
           {"cokernel_dimension", std::max(p.kappa(), 0)}};
  if (auto os = open_out(c, "G.svg")) czl::svg::write_curve(*os, g.values(), "G, index " + std::to_string(p.kappa()));
  std::cout << "n = " << g.size() << ", kappa = " << p.kappa() << '\n';
  if (p.kappa() != 0) {
    rep["solved"] = false;
    rep["diagnosis"] = "solvability conditions are defined by the index; no unique solution";
    if (auto os = open_out(c, "riemann.json")) *os << rep.dump(2) << '\n';
    const czl::IndexObstruction ob(p.kappa());
    std::cerr << "czl: " << ob.what() << '\n';
    return exit_obstruction;
  }
  const czl::RiemannSolution s = czl::solve_riemann(p);
  rep["solved"] = true;
  rep["residual"] = s.residual;
  std::cout << "residual max |Phi+ - G Phi- - g| = " << czl::fmt17(s.residual) << '\n';
  if (auto os = open_out(c, "phi_plus.csv")) czl::io::write_periodic_grid(*os, s.phi_plus);
  if (auto os = open_out(c, "phi_minus.csv")) czl::io::write_periodic_grid(*os, s.phi_minus);
  if (auto os = open_out(c, "riemann.json")) *os << rep.dump(2) << '\n';
  return exit_ok;
}

// ---------------------------------------------------------------- solve

json report_json(const czl::SolveReport& r) {
  json j{{"method", czl::method_name(r.method)},
         {"residual_max", r.residual_max},
         {"internal_residual", r.internal_residual},
         {"converged", r.converged}};
  if (r.method == czl::SolveMethod::wiener_hopf) {
    j["depth_grid"] = r.iterations;
  } else {
    j["iterations"] = r.iterations;
  }
  if (r.method == czl::SolveMethod::dense) j["rcond"] = r.rcond;
  if (r.method == czl::SolveMethod::wiener_hopf) {
    j["tail"] = r.tail;
    j["resolution_change"] = r.resolution_change;
  }
  return j;
}

double inner_window_distance(const czl::HalfSpaceProblem& p, const std::vector<cplx>& u, const std::vector<cplx>& v) {
  double d = 0.0;
  for (std::size_t f = 0; f < u.size(); ++f) {
    if (p.node(f).back() <= p.depth() / 2) d = std::max(d, std::abs(u[f] - v[f]));
  }
  return d;
}

int run_solve(const Common& c, const Flags& flags, const std::string& problem_file, std::string method,
              const std::string& rhs_override) {
  czl::io::ProblemFile pf;
  if (!problem_file.empty()) {
    pf = czl::io::read_problem_file(problem_file);
  } else {
    pf.kernel = c.kernel;
    pf.h = c.h.front();
    pf.a = czl::io::parse_complex(c.a);
    pf.box = c.box;
  }
  if (flags.kernel->count()) pf.kernel = c.kernel;
  if (flags.h->count()) pf.h = c.h.front();
  if (flags.a->count()) pf.a = czl::io::parse_complex(c.a);
  if (flags.box->count()) pf.box = c.box;
  if (flags.tol->count()) pf.tol = c.tol;
  if (!rhs_override.empty()) pf.rhs = rhs_override;
  if (!method.empty()) pf.method = method;
  if (pf.box.empty()) throw czl::InputError("solve: no box given (--box or problem file)");
  if (!(pf.tol > 0.0)) throw czl::InputError("solve: tolerance must be positive");
  const czl::HalfSpaceProblem p = czl::io::build_problem(pf);
  method = pf.method;
  if (method != "all" && method != "dense" && method != "iterative" && method != "wiener-hopf") {
    throw czl::InputError("solve: unknown method '" + method + "'");
  }

  json rep{{"kernel", pf.kernel}, {"h", pf.h}, {"a", czl::format_complex(pf.a)}, {"box", pf.box}, {"unknowns", p.size()}};
  try {
    czl::solvability_gate(p);
  } catch (const czl::SliceObstruction& e) {
    std::cerr << "czl: " << e.what() << '\n';
    for (const czl::SliceFailure& f : e.failures()) {
      std::cout << "obstructed slice xi'=(" << point_label(f.xi_prime) << ") kappa=" << f.kappa << "  " << f.reason << '\n';
      rep["slice_failures"].push_back({{"xi_prime", f.xi_prime}, {"kappa", f.kappa}, {"reason", f.reason}});
    }
    rep["solved"] = false;
    if (auto os = open_out(c, "report.json")) *os << rep.dump(2) << '\n';
    return exit_obstruction;
  }

  std::vector<czl::SolveReport> done;
  const bool all = method == "all";
  if (method == "dense" || (all && p.size() <= czl::dense_limit)) done.push_back(czl::solve_dense(p));
  if (method == "iterative" || all) done.push_back(czl::solve_truncated(p, pf.tol));
  if (method == "wiener-hopf" || all) done.push_back(czl::solve_wiener_hopf(p, std::max(pf.tol, 1e-8)));

  for (const czl::SolveReport& r : done) {
    const std::string name = czl::method_name(r.method);
    std::cout << name << ": residual_max " << czl::fmt17(r.residual_max);
    if (r.method == czl::SolveMethod::wiener_hopf) {
      // infinite-depth solution, so the box residual measures the truncation
      std::cout << " (box operator), depth grid " << r.iterations << ", resolution change "
                << czl::fmt17(r.resolution_change);
    } else {
      std::cout << ", iterations " << r.iterations;
    }
    std::cout << (r.converged ? "" : "  (NOT converged)") << '\n';
    rep["solves"].push_back(report_json(r));
    if (auto os = open_out(c, "solution_" + name + ".csv")) czl::io::write_box_grid(*os, p, r.solution);
  }
  for (std::size_t i = 0; i < done.size(); ++i) {
    for (std::size_t j = i + 1; j < done.size(); ++j) {
      const double d = inner_window_distance(p, done[i].solution, done[j].solution);
      const std::string pair = std::string(czl::method_name(done[i].method)) + " vs " + czl::method_name(done[j].method);
      std::cout << pair << " (inner window): " << czl::fmt17(d) << '\n';
      rep["cross_validation"].push_back({{"pair", pair}, {"inner_window_max", d}});
    }
  }
  rep["solved"] = true;
  if (auto os = open_out(c, "report.json")) *os << rep.dump(2) << '\n';
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Calderon-Zygmund operators: symbols, indices, Riemann problems, half-space solves"};
  app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file; command-line flags take precedence");

  Common c;
  Flags flags;
  flags.kernel = app.add_option("--kernel", c.kernel, "kernel file or shorthand (riesz:j:m[:scale], zero:m, one-over-x, rotating[:scale])")
                     ->capture_default_str();
  flags.h = app.add_option("--h", c.h, "step or comma-separated step schedule")->delimiter(',')->capture_default_str();
  flags.a = app.add_option("--a", c.a, "complex constant a, e.g. 2, 1+1i")->capture_default_str();
  app.add_option("--xi-prime", c.xi_prime, "lateral frequencies, comma-separated; components joined by ':'")->delimiter(',');
  app.add_option("--resolution", c.resolution, "samples per period")->capture_default_str()->check(CLI::Range(2, 1 << 20));
  app.add_option("--N", c.radii, "physical truncation radii of the cube partial sums")->delimiter(',')->capture_default_str();
  flags.box = app.add_option("--box", c.box, "box nodes, lateral x depth (e.g. 16x8)");
  flags.tol = app.add_option("--tol", c.tol, "relative tolerance")->capture_default_str();
  app.add_option("--out", c.out, "output directory for CSV, SVG and JSON files");

  auto* symbol = app.add_subcommand("symbol", "tabulate the discrete symbol on the period cube and along slices");
  auto* index = app.add_subcommand("index", "slice windings, discrete against continuous");
  auto* transmission = app.add_subcommand("transmission", "compare the continuous symbol at the two poles");
  auto* verify = app.add_subcommand("verify", "run the built-in verification corpus");
  auto* riemann = app.add_subcommand("riemann", "solve a periodic Riemann problem Phi+ = G Phi- + g");
  std::string g_file, rhs_file;
  riemann->add_option("--G", g_file, "coefficient samples (csv t,re,im)");
  riemann->add_option("--g", rhs_file, "right-hand side samples (csv t,re,im); default 1");
  auto* solve = app.add_subcommand("solve", "solve the discrete half-space equation");
  std::string problem_file, method, rhs_override;
  solve->add_option("--problem", problem_file, "problem file")->check(CLI::ExistingFile);
  solve->add_option("--method", method, "all | dense | iterative | wiener-hopf");
  solve->add_option("--rhs", rhs_override, "rhs csv | random:<seed> | constant:<value>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (!(c.tol > 0.0)) throw czl::InputError("--tol must be positive");
    if (c.h.empty()) throw czl::InputError("--h: empty schedule");
    if (*symbol) return run_symbol(c);
    if (*index) return run_index(c);
    if (*transmission) return run_transmission(c);
    if (*verify) return run_verify(c);
    if (*riemann) return run_riemann(c, g_file, rhs_file);
    if (*solve) return run_solve(c, flags, problem_file, method, rhs_override);
  } catch (const czl::IndexObstruction& e) {
    std::cerr << "czl: " << e.what() << '\n';
    return exit_obstruction;
  } catch (const czl::SliceObstruction& e) {
    std::cerr << "czl: " << e.what() << '\n';
    return exit_obstruction;
  } catch (const std::exception& e) {
    std::cerr << "czl: " << e.what() << '\n';
    return exit_input;
  }
  return exit_input;
}
