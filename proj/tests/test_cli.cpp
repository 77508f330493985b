#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "czl/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status = -1;
  std::string output;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(CZL_CLI) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string fixture(const std::string& name) { return std::string(CZL_FIXTURES) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("czl_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, SolveZeroKernelHalvesRhs) {
  const fs::path out = scratch("solve_zero");
  const CliRun r = run("solve --problem " + fixture("zero_a2.problem") + " --out " + out.string());
  ASSERT_EQ(r.status, 0) << r.output;
  std::ifstream rhs_in(fixture("zero_a2_rhs.csv"));
  std::ifstream sol_in(out / "solution_dense.csv");
  const auto rhs = czl::io::read_csv_numbers(rhs_in);
  const auto sol = czl::io::read_csv_numbers(sol_in);
  ASSERT_EQ(rhs.size(), sol.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    EXPECT_EQ(sol[i][0], rhs[i][0]);
    EXPECT_EQ(sol[i][1], rhs[i][1]);
    EXPECT_EQ(sol[i][2], rhs[i][2] / 2);
    EXPECT_EQ(sol[i][3], rhs[i][3] / 2);
  }
  EXPECT_TRUE(fs::exists(out / "report.json"));
  EXPECT_TRUE(fs::exists(out / "solution_wiener-hopf.csv"));
}

TEST(Cli, RiemannLoopExitsTwo) {
  const fs::path out = scratch("riemann_loop");
  const CliRun r = run("riemann --G " + fixture("G_loop.csv") + " --out " + out.string());
  EXPECT_EQ(r.status, 2) << r.output;
  EXPECT_NE(r.output.find("kappa = 1"), std::string::npos);
  const std::string rep = slurp(out / "riemann.json");
  EXPECT_NE(rep.find("\"kappa\": 1"), std::string::npos);
  EXPECT_NE(rep.find("\"cokernel_dimension\": 1"), std::string::npos);
  EXPECT_NE(slurp(out / "G.svg").find("<polyline"), std::string::npos);
}

TEST(Cli, RiemannIndexZeroSolves) {
  const fs::path out = scratch("riemann_zero");
  fs::create_directories(out);
  {
    std::ofstream g(out / "G.csv");
    g << "t,re,im\n";
    for (int j = 0; j < 64; ++j) {
      const double t = -M_PI + 2 * M_PI * j / 64;
      const std::complex<double> v = 2.0 + std::polar(1.0, t);
      g << t << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
  const CliRun r = run("riemann --G " + (out / "G.csv").string() + " --out " + out.string());
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(fs::exists(out / "phi_plus.csv"));
}

TEST(Cli, VerifyPasses) {
  const CliRun r = run("verify");
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("[PASS] scaling identity"), std::string::npos);
  EXPECT_NE(r.output.find("[PASS] monotone convergence"), std::string::npos);
  EXPECT_NE(r.output.find("[PASS] projection complementarity"), std::string::npos);
  EXPECT_NE(r.output.find("[PASS] discrete vs continuous winding"), std::string::npos);
}

TEST(Cli, SymbolOutputsAreDeterministic) {
  const fs::path a = scratch("symbol_a"), b = scratch("symbol_b");
  const std::string args = "symbol --kernel riesz:1:2 --a 1+1i --h 0.5 --resolution 16 --N 4,8 --xi-prime 1 --out ";
  ASSERT_EQ(run(args + a.string()).status, 0);
  ASSERT_EQ(run(args + b.string()).status, 0);
  for (const char* f : {"symbol.csv", "slice_xi1.csv", "slice_xi-1.csv", "slice_xi1.svg"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  EXPECT_EQ(slurp(a / "symbol.csv").substr(0, 24), "xi_1,xi_2,re,im,N,flags\n");
}

TEST(Cli, IndexReportsAgreement) {
  const fs::path out = scratch("index_riesz");
  const CliRun r = run("index --kernel riesz:1:2 --a 2 --h 1,0.5 --xi-prime 1 --resolution 64 --out " + out.string());
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("verdict: agrees"), std::string::npos);
  EXPECT_NE(slurp(out / "index.csv").find("xi_prime,h,winding_h,winding_cont,equal"), std::string::npos);
  EXPECT_NE(slurp(out / "index_xi1_h0.5.svg").find("<circle"), std::string::npos);
}

TEST(Cli, IndexNonzeroWindingExitsTwo) {
  const CliRun r = run("index --kernel " + fixture("looping.kernel") + " --a 0.3 --h 1 --xi-prime 1 --resolution 128");
  EXPECT_EQ(r.status, 2) << r.output;
}

TEST(Cli, TransmissionReport) {
  const CliRun r = run("transmission --kernel one-over-x --a 0");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.output.find("FAIL"), std::string::npos);
}

TEST(Cli, SolveGateExitsTwo) {
  const fs::path out = scratch("gate");
  const CliRun r = run("solve --problem " + fixture("gate.problem") + " --out " + out.string());
  EXPECT_EQ(r.status, 2) << r.output;
  EXPECT_NE(r.output.find("kappa=1"), std::string::npos);
  EXPECT_NE(slurp(out / "report.json").find("slice_failures"), std::string::npos);
}

TEST(Cli, FlagsOverrideConfig) {
  const fs::path a = scratch("cfg_a"), b = scratch("cfg_b");
  ASSERT_EQ(run("symbol --config " + fixture("symbol.cfg") + " --xi-prime 1 --N 4,8 --out " + a.string()).status, 0);
  ASSERT_EQ(run("symbol --kernel riesz:1:2 --a 1+1i --h 0.5 --resolution 32 --xi-prime 1 --N 4,8 --out " + b.string()).status, 0);
  EXPECT_EQ(slurp(a / "symbol.csv"), slurp(b / "symbol.csv"));
  const fs::path c = scratch("cfg_c");
  ASSERT_EQ(run("symbol --config " + fixture("symbol.cfg") + " --a 3 --xi-prime 1 --N 4,8 --out " + c.string()).status, 0);
  EXPECT_NE(slurp(a / "symbol.csv"), slurp(c / "symbol.csv"));
}

TEST(Cli, InputErrorsExitOne) {
  EXPECT_EQ(run("symbol --kernel nosuchfile.kernel").status, 1);
  EXPECT_EQ(run("frobnicate").status, 1);
  EXPECT_EQ(run("solve --kernel riesz:1:2").status, 1);
  EXPECT_EQ(run("symbol --tol -1").status, 1);
  EXPECT_EQ(run("riemann").status, 1);
}
