#pragma once

#include "trussopt/plate.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace trussopt {

struct TopOptParams {
  double volfrac = 0.5;
  double penal = 3.0;
  double rmin = 1.5;  // element widths
  double move = 0.2;
  int max_iters = 200;
  double tol = 0.01;
  double xmin = 1e-3;
};

class TopOptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check_params(const TopOptParams& p);

// Densities are stored nely x nelx, row 0 at the top, as x(ely, elx) in the
// 99-line code; the flat element index ex * nely + ey is column-major order.
struct DensityField {
  Eigen::MatrixXd x;
  int iterations = 0;
  double compliance = 0.0;
  bool converged = false;
  std::vector<double> compliance_history;
  std::vector<double> volume_history;
};

struct ComplianceSensitivity {
  double c = 0.0;
  Eigen::MatrixXd dc;
};

ComplianceSensitivity compliance_and_sensitivity(PlateSolver& solver, const Grid& grid,
                                                 const Eigen::MatrixXd& x, double penal);
ComplianceSensitivity compliance_and_sensitivity(const PlateProblem& problem, const Eigen::MatrixXd& x,
                                                 double penal);

// Mesh-independency filter; a radius below one element leaves dc untouched.
template <typename DerivedX, typename DerivedDc>
Eigen::MatrixXd sensitivity_filter(const Eigen::MatrixBase<DerivedX>& x,
                                   const Eigen::MatrixBase<DerivedDc>& dc, double rmin) {
  const Eigen::Index nely = x.rows(), nelx = x.cols();
  Eigen::MatrixXd out(nely, nelx);
  const int reach = static_cast<int>(std::floor(rmin));
  for (Eigen::Index i = 0; i < nelx; ++i)
    for (Eigen::Index j = 0; j < nely; ++j) {
      double sum = 0.0, acc = 0.0;
      for (Eigen::Index k = std::max<Eigen::Index>(i - reach, 0); k <= std::min<Eigen::Index>(i + reach, nelx - 1); ++k)
        for (Eigen::Index l = std::max<Eigen::Index>(j - reach, 0); l <= std::min<Eigen::Index>(j + reach, nely - 1); ++l) {
          const double w = std::max(0.0, rmin - std::hypot(double(i - k), double(j - l)));
          sum += w;
          acc += w * x(l, k) * dc(l, k);
        }
      out(j, i) = sum > 0 ? acc / (x(j, i) * sum) : dc(j, i);
    }
  return out;
}

Eigen::MatrixXd oc_update(const Eigen::MatrixXd& x, const Eigen::MatrixXd& dc, double volfrac,
                          double move, double xmin = 1e-3);

DensityField optimize(const PlateProblem& problem, const TopOptParams& params);

// 99-line MBB half-beam: symmetry line on the left, unit load down at the
// top-left node, roller at the bottom-right node, unit modulus.
PlateProblem mbb_half_beam(int nelx, int nely);

}  // namespace trussopt
