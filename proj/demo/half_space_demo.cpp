// Walks one half-space problem through the library: the slice index test,
// then the three solvers and how far apart they land.

#include <cstdio>
#include <vector>

#include "czl/czl.hpp"

int main() {
  const czl::Kernel k = czl::Kernel::riesz(2, 1);
  const czl::cplx a = 2.0;

  const std::vector<double> steps{1.0, 0.5};
  const std::vector<std::vector<double>> lateral{{1.0}, {-1.0}};
  const czl::MainTheoremReport table = czl::main_theorem_report(k, a, steps, lateral, 128);
  std::printf("slice windings (discrete vs continuous): %s\n", table.agrees ? "agree" : "disagree");

  czl::HalfSpaceProblem p(k, 0.5, a, 8, 8);
  std::vector<czl::cplx> v(p.size(), 0.0);
  v[p.flat_index(std::vector<int>{0, 1})] = 1.0;  // point load next to the boundary
  p.set_rhs(v);

  const czl::SolveReport dense = czl::solve_dense(p);
  const czl::SolveReport iter = czl::solve_truncated(p, 1e-12);
  const czl::SolveReport wh = czl::solve_wiener_hopf(p);
  double d_it = 0.0, d_wh = 0.0;
  for (std::size_t f = 0; f < p.size(); ++f) {
    d_it = std::max(d_it, std::abs(dense.solution[f] - iter.solution[f]));
    if (p.node(f).back() <= p.depth() / 2) d_wh = std::max(d_wh, std::abs(dense.solution[f] - wh.solution[f]));
  }
  std::printf("dense      residual %.3e\n", dense.residual_max);
  std::printf("iterative  residual %.3e after %d steps, off dense by %.3e\n", iter.residual_max, iter.iterations, d_it);
  std::printf("wiener-hopf (infinite depth) off the depth-8 box by %.3e near the boundary\n", d_wh);

  // a + sigma winding once around the origin on some slices
  try {
    czl::HalfSpaceProblem bad(czl::kernels::rotating(), 1.0, czl::cplx(0.0, 0.3), 8, 8);
    czl::solvability_gate(bad);
  } catch (const czl::SliceObstruction& e) {
    std::printf("rotating kernel, a = 0.3i: %s\n", e.what());
  }
}
