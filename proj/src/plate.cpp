#include "trussopt/plate.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace trussopt {

Eigen::Matrix<double, 8, 8> q4_stiffness(const Material& material, double thickness,
                                         Idealization kind, double a, double b) {
  return q4_stiffness<double>(material.E * 1e3, material.nu, thickness, a, b, kind);
}

Eigen::VectorXd PlateProblem::load_vector() const {
  const Grid g = grid();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(g.dofs());
  for (const auto& l : loads) {
    if (l.node < 0 || l.node >= g.nodes()) throw PlateError("load on unknown node " + std::to_string(l.node));
    f[2 * l.node] += l.fx;
    f[2 * l.node + 1] += l.fy;
  }
  return f;
}

struct PlateSolver::Impl {
  Eigen::SparseMatrix<double> K;
  // per element, value slots of the 64 (a, b) couplings; -1 where a DOF is fixed
  std::vector<std::array<int, 64>> slots;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> llt;
};

PlateSolver::PlateSolver(const PlateProblem& problem)
    : grid_(problem.grid()), impl_(std::make_unique<Impl>()) {
  if (problem.nelx < 1 || problem.nely < 1) throw PlateError("mesh needs at least one element per direction");
  if (!(problem.thickness > 0)) throw PlateError("plate thickness must be positive");
  ke_ = q4_stiffness(problem.material, problem.thickness, problem.idealization, problem.dx, problem.dy);
  f_ = problem.load_vector();

  free_index_.assign(std::size_t(grid_.dofs()), 0);
  for (int d : problem.fixed_dofs) {
    if (d < 0 || d >= grid_.dofs()) throw PlateError("fixed DOF out of range: " + std::to_string(d));
    free_index_[std::size_t(d)] = -1;
  }
  int nf = 0;
  for (auto& fi : free_index_)
    if (fi == 0) fi = nf++;
    else fi = -1;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(std::size_t(grid_.elements()) * 64);
  for (int ex = 0; ex < grid_.nelx; ++ex)
    for (int ey = 0; ey < grid_.nely; ++ey) {
      const auto ed = grid_.edof(ex, ey);
      for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
          const int fa = free_index_[std::size_t(ed[std::size_t(a)])];
          const int fb = free_index_[std::size_t(ed[std::size_t(b)])];
          if (fa >= 0 && fb >= 0) trip.emplace_back(fa, fb, 1.0);
        }
    }
  impl_->K.resize(nf, nf);
  impl_->K.setFromTriplets(trip.begin(), trip.end());
  impl_->K.makeCompressed();

  impl_->slots.resize(std::size_t(grid_.elements()));
  const double* base = impl_->K.valuePtr();
  for (int ex = 0; ex < grid_.nelx; ++ex)
    for (int ey = 0; ey < grid_.nely; ++ey) {
      const auto ed = grid_.edof(ex, ey);
      auto& s = impl_->slots[std::size_t(ex * grid_.nely + ey)];
      for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
          const int fa = free_index_[std::size_t(ed[std::size_t(a)])];
          const int fb = free_index_[std::size_t(ed[std::size_t(b)])];
          s[std::size_t(a * 8 + b)] = (fa >= 0 && fb >= 0) ? int(&impl_->K.coeffRef(fa, fb) - base) : -1;
        }
    }
  impl_->llt.analyzePattern(impl_->K);
}

PlateSolver::~PlateSolver() = default;

Eigen::VectorXd PlateSolver::solve(const Eigen::VectorXd& element_scale) {
  if (element_scale.size() != grid_.elements()) throw PlateError("element scale size mismatch");
  auto& K = impl_->K;
  double* v = K.valuePtr();
  std::fill(v, v + K.nonZeros(), 0.0);
  for (int e = 0; e < grid_.elements(); ++e) {
    const auto& s = impl_->slots[std::size_t(e)];
    const double w = element_scale[e];
    for (int k = 0; k < 64; ++k)
      if (s[std::size_t(k)] >= 0) v[s[std::size_t(k)]] += w * ke_(k / 8, k % 8);
  }
  impl_->llt.factorize(K);
  const auto& D = impl_->llt.vectorD();
  if (impl_->llt.info() != Eigen::Success ||
      (D.size() > 0 && !(D.minCoeff() > 1e-12 * D.cwiseAbs().maxCoeff())))
    throw PlateError("unstable plate: stiffness matrix is singular");

  Eigen::VectorXd ff(K.rows());
  for (std::size_t d = 0; d < free_index_.size(); ++d)
    if (free_index_[d] >= 0) ff[free_index_[d]] = f_[Eigen::Index(d)];
  const Eigen::VectorXd uf = impl_->llt.solve(ff);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(grid_.dofs());
  for (std::size_t d = 0; d < free_index_.size(); ++d)
    if (free_index_[d] >= 0) u[Eigen::Index(d)] = uf[free_index_[d]];
  return u;
}

DisplacementField solve_plate(const PlateProblem& problem) {
  return solve_plate(problem, Eigen::VectorXd::Ones(problem.grid().elements()));
}

DisplacementField solve_plate(const PlateProblem& problem, const Eigen::VectorXd& element_scale) {
  PlateSolver solver(problem);
  return {problem.grid(), solver.solve(element_scale)};
}

}  // namespace trussopt
