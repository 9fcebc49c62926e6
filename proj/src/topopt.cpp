#include "trussopt/topopt.hpp"

#include <cmath>

namespace trussopt {

void check_params(const TopOptParams& p) {
  if (!(p.volfrac > 0 && p.volfrac <= 1)) throw TopOptError("volfrac must lie in (0, 1]");
  if (!(p.penal >= 1)) throw TopOptError("penal must be at least 1");
  if (!(p.rmin >= 1)) throw TopOptError("rmin must be at least 1");
  if (!(p.move > 0 && p.move < 1)) throw TopOptError("move must lie in (0, 1)");
  if (p.max_iters < 1) throw TopOptError("max_iters must be positive");
  if (!(p.xmin > 0 && p.xmin < p.volfrac + 1e-15)) throw TopOptError("xmin must lie in (0, volfrac]");
}

ComplianceSensitivity compliance_and_sensitivity(PlateSolver& solver, const Grid& grid,
                                                 const Eigen::MatrixXd& x, double penal) {
  Eigen::VectorXd scale(grid.elements());
  for (int ex = 0; ex < grid.nelx; ++ex)
    for (int ey = 0; ey < grid.nely; ++ey) scale[ex * grid.nely + ey] = std::pow(x(ey, ex), penal);
  const Eigen::VectorXd u = solver.solve(scale);
  const auto& ke = solver.element_matrix();

  ComplianceSensitivity out;
  out.dc.resize(grid.nely, grid.nelx);
  Eigen::Matrix<double, 8, 1> ue;
  for (int ex = 0; ex < grid.nelx; ++ex)
    for (int ey = 0; ey < grid.nely; ++ey) {
      const auto ed = grid.edof(ex, ey);
      for (int a = 0; a < 8; ++a) ue[a] = u[ed[std::size_t(a)]];
      const double ce = ue.dot(ke * ue);
      const double xe = x(ey, ex);
      out.c += std::pow(xe, penal) * ce;
      out.dc(ey, ex) = -penal * std::pow(xe, penal - 1) * ce;
    }
  return out;
}

ComplianceSensitivity compliance_and_sensitivity(const PlateProblem& problem, const Eigen::MatrixXd& x,
                                                 double penal) {
  PlateSolver solver(problem);
  return compliance_and_sensitivity(solver, problem.grid(), x, penal);
}

Eigen::MatrixXd oc_update(const Eigen::MatrixXd& x, const Eigen::MatrixXd& dc, double volfrac,
                          double move, double xmin) {
  const Eigen::MatrixXd lower = (x.array() - move).max(xmin).matrix();
  const Eigen::MatrixXd upper = (x.array() + move).min(1.0).matrix();
  const Eigen::ArrayXXd drive = (-dc.array()).max(0.0).sqrt() * x.array();
  auto trial = [&](double lambda) -> Eigen::MatrixXd {
    return (drive / std::sqrt(lambda)).max(lower.array()).min(upper.array()).matrix();
  };
  if (volfrac > upper.mean() + 1e-12 || volfrac < lower.mean() - 1e-12)
    throw TopOptError("volume target cannot be met within the move limits");

  double l1 = 0.0, l2 = 1e5;
  while (trial(l2).mean() > volfrac) {
    l2 *= 10.0;
    if (l2 > 1e300) throw TopOptError("OC bisection failed to bracket the multiplier");
  }
  for (int it = 0; it < 400 && (l2 - l1) > 1e-12 * (l1 + l2); ++it) {
    const double lmid = 0.5 * (l1 + l2);
    if (trial(lmid).mean() > volfrac) l1 = lmid;
    else l2 = lmid;
  }
  return trial(l2);
}

DensityField optimize(const PlateProblem& problem, const TopOptParams& params) {
  check_params(params);
  const Grid grid = problem.grid();
  PlateSolver solver(problem);

  DensityField out;
  out.x = Eigen::MatrixXd::Constant(grid.nely, grid.nelx, params.volfrac);
  double change = 1.0;
  while (change > params.tol && out.iterations < params.max_iters) {
    ++out.iterations;
    const Eigen::MatrixXd xold = out.x;
    ComplianceSensitivity cs = compliance_and_sensitivity(solver, grid, out.x, params.penal);
    const Eigen::MatrixXd dcf = sensitivity_filter(out.x, cs.dc, params.rmin);
    out.x = oc_update(out.x, dcf, params.volfrac, params.move, params.xmin);
    change = (out.x - xold).cwiseAbs().maxCoeff();
    out.compliance = cs.c;
    out.compliance_history.push_back(cs.c);
    out.volume_history.push_back(out.x.mean());
  }
  out.converged = change <= params.tol;
  return out;
}

PlateProblem mbb_half_beam(int nelx, int nely) {
  PlateProblem p;
  p.nelx = nelx;
  p.nely = nely;
  p.dx = p.dy = 1.0;
  p.thickness = 1.0;
  p.material = {"unit", 1e-3, 0.3, 1.0, 2.0};  // E * 1e3 = 1
  const Grid g = p.grid();
  for (int j = 0; j <= nely; ++j) p.fixed_dofs.push_back(2 * g.node(0, j));
  p.fixed_dofs.push_back(2 * g.node(nelx, nely) + 1);
  p.loads.push_back({g.node(0, 0), 0.0, -1.0});
  return p;
}

}  // namespace trussopt
