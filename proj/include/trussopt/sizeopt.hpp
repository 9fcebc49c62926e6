#pragma once

#include "trussopt/is800.hpp"
#include "trussopt/model.hpp"

#include <Eigen/Core>

#include <stdexcept>
#include <vector>

namespace trussopt::sizeopt {

// Radius of gyration as a function of continuous area: r = kappa * A,
// anchored at the lightest catalogue section (thickness held, leg scaled).
// A modelling approximation, reported as such.
struct RadiusModel {
  double kappa = 0.0;  // mm per mm^2
  double operator()(double area) const { return kappa * area; }
  double derivative(double) const { return kappa; }
  static RadiusModel calibrate(const is800::SectionLibrary& lib);
};

struct Settings {
  int max_iters = 2000;
  double constraint_tol = 1e-3;  // relative feasibility accepted at the result
  double step_tol = 1e-10;
  double theta0 = 1.0;           // push-off factor
  double ct_start = 0.05, ct_min = 1e-4;
};

struct SizeOptProblem {
  TrussModel model;
  Eigen::VectorXd start, lower, upper;  // mm^2, member order
  RadiusModel radius;
  double tension_limit = 350.0, compression_limit = 180.0;
  Settings settings;
};

class SizeOptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Start at the IS 800 areas, bounds [10 mm^2, 10 x start].
SizeOptProblem make_problem(const TrussModel& model, const is800::DesignReport& design,
                            const is800::SectionLibrary& lib = is800::SectionLibrary::standard());

struct Objective {
  double weight = 0.0;  // mm^2 m (unit density)
  Eigen::VectorXd gradient;
};

Objective objective_weight(const TrussModel& model, const Eigen::VectorXd& areas);

// Rows 0..m-1 stress (N/mm^2), rows m..2m-1 slenderness; g <= 0 feasible.
struct ConstraintValues {
  Eigen::VectorXd g;
  Eigen::MatrixXd jacobian;  // d g / d A
  Eigen::VectorXd forces;    // envelope forces at these areas, kN
  bool determinate = false;
};

ConstraintValues constraint_values(const SizeOptProblem& problem, const Eigen::VectorXd& areas);

struct SizeOptResult {
  Eigen::VectorXd areas;  // mm^2
  double weight = 0.0;
  std::vector<bool> stress_active, slenderness_active, at_bound;
  std::vector<double> history;
  int iterations = 0;
  bool converged = false;
  double max_violation = 0.0;  // relative
};

SizeOptResult optimize_sizes(const SizeOptProblem& problem);

// Dense simplex for max c'z, A z <= b, z >= 0 with b >= 0 (Bland's rule).
Eigen::VectorXd simplex_max(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace trussopt::sizeopt
