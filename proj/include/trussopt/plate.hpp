#pragma once

#include "trussopt/model.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

namespace trussopt {

enum class Idealization { plane_stress, plane_strain };

class PlateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> elasticity_matrix(Scalar E, Scalar nu, Idealization kind) {
  Eigen::Matrix<Scalar, 3, 3> D = Eigen::Matrix<Scalar, 3, 3>::Zero();
  if (kind == Idealization::plane_stress) {
    const Scalar f = E / (Scalar(1) - nu * nu);
    D << f, f * nu, 0, f * nu, f, 0, 0, 0, f * (Scalar(1) - nu) / Scalar(2);
  } else {
    if (!(nu < Scalar(0.5))) throw PlateError("plane strain requires nu < 0.5");
    const Scalar f = E / ((Scalar(1) + nu) * (Scalar(1) - Scalar(2) * nu));
    D << f * (Scalar(1) - nu), f * nu, 0, f * nu, f * (Scalar(1) - nu), 0, 0, 0,
        f * (Scalar(1) - Scalar(2) * nu) / Scalar(2);
  }
  return D;
}

// Bilinear quad of width a and height b, 2x2 Gauss. Node order is
// counter-clockwise from the lower-left corner, DOFs (ux, uy) per node.
template <typename Scalar>
Eigen::Matrix<Scalar, 8, 8> q4_stiffness(Scalar E, Scalar nu, Scalar thickness, Scalar a, Scalar b,
                                         Idealization kind) {
  const Eigen::Matrix<Scalar, 3, 3> D = elasticity_matrix(E, nu, kind);
  const Scalar xi_n[4] = {-1, 1, 1, -1};
  const Scalar eta_n[4] = {-1, -1, 1, 1};
  const Scalar g = Scalar(1) / std::sqrt(Scalar(3));
  Eigen::Matrix<Scalar, 8, 8> K = Eigen::Matrix<Scalar, 8, 8>::Zero();
  for (Scalar xi : {-g, g})
    for (Scalar eta : {-g, g}) {
      Eigen::Matrix<Scalar, 3, 8> B = Eigen::Matrix<Scalar, 3, 8>::Zero();
      for (int n = 0; n < 4; ++n) {
        const Scalar dx = xi_n[n] * (Scalar(1) + eta_n[n] * eta) / Scalar(4) * Scalar(2) / a;
        const Scalar dy = eta_n[n] * (Scalar(1) + xi_n[n] * xi) / Scalar(4) * Scalar(2) / b;
        B(0, 2 * n) = dx;
        B(1, 2 * n + 1) = dy;
        B(2, 2 * n) = dy;
        B(2, 2 * n + 1) = dx;
      }
      K += B.transpose() * D * B * (thickness * a * b / Scalar(4));
    }
  return K;
}

// E in N/mm^2 scaled to kN/m^2 so that K is in kN/m for lengths in m.
Eigen::Matrix<double, 8, 8> q4_stiffness(const Material& material, double thickness,
                                         Idealization kind, double a, double b);

// Structured grid numbered as in the 99-line code: nodes column by column,
// top to bottom; elements likewise. Element (ex, ey) has ey counted from the top.
struct Grid {
  int nelx = 1, nely = 1;

  int nodes() const { return (nelx + 1) * (nely + 1); }
  int dofs() const { return 2 * nodes(); }
  int elements() const { return nelx * nely; }
  int node(int i, int j) const { return i * (nely + 1) + j; }
  int column(int n) const { return n / (nely + 1); }
  int row(int n) const { return n % (nely + 1); }
  // DOFs of element (ex, ey) in q4_stiffness node order (LL, LR, UR, UL).
  std::array<int, 8> edof(int ex, int ey) const {
    const int n1 = node(ex, ey), n2 = node(ex + 1, ey);
    const int ll = n1 + 1, lr = n2 + 1, ur = n2, ul = n1;
    return {2 * ll, 2 * ll + 1, 2 * lr, 2 * lr + 1, 2 * ur, 2 * ur + 1, 2 * ul, 2 * ul + 1};
  }
};

struct PointLoad {
  int node = 0;
  double fx = 0.0, fy = 0.0;  // kN
};

struct PlateProblem {
  int nelx = 1, nely = 1;
  double dx = 1.0, dy = 1.0;  // element size, m
  double thickness = 1.0;     // m
  Material material;
  Idealization idealization = Idealization::plane_stress;
  std::vector<PointLoad> loads;
  std::vector<int> fixed_dofs;

  Grid grid() const { return {nelx, nely}; }
  // Node coordinates with the origin at the lower-left corner, y up.
  Eigen::Vector2d node_position(int n) const {
    const Grid g = grid();
    return {g.column(n) * dx, (nely - g.row(n)) * dy};
  }
  Eigen::VectorXd load_vector() const;
};

struct DisplacementField {
  Grid grid;
  Eigen::VectorXd u;  // m, (ux, uy) per node
  Eigen::Vector2d at(int node) const { return u.segment<2>(2 * node); }
};

// Assembles and factors repeatedly on a fixed sparsity pattern; the
// ordering is computed once. Not thread-safe, one instance per thread.
class PlateSolver {
 public:
  explicit PlateSolver(const PlateProblem& problem);
  ~PlateSolver();
  PlateSolver(const PlateSolver&) = delete;
  PlateSolver& operator=(const PlateSolver&) = delete;

  const Eigen::Matrix<double, 8, 8>& element_matrix() const { return ke_; }
  const Eigen::VectorXd& loads() const { return f_; }
  // element_scale is indexed ex * nely + ey.
  Eigen::VectorXd solve(const Eigen::VectorXd& element_scale);

 private:
  struct Impl;
  Grid grid_;
  Eigen::Matrix<double, 8, 8> ke_;
  Eigen::VectorXd f_;
  std::vector<int> free_index_;  // -1 for fixed DOFs
  std::unique_ptr<Impl> impl_;
};

DisplacementField solve_plate(const PlateProblem& problem);

// Scales element stiffness e (index ex * nely + ey) by element_scale[e].
DisplacementField solve_plate(const PlateProblem& problem, const Eigen::VectorXd& element_scale);

}  // namespace trussopt
