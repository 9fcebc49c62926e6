#pragma once

#include "trussopt/model.hpp"

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace trussopt {

// Axial bar stiffness for direction cosines (c, s); k = EA/L.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> bar_stiffness(Scalar k, Scalar c, Scalar s) {
  Eigen::Matrix<Scalar, 4, 1> t;
  t << -c, -s, c, s;
  return k * t * t.transpose();
}

struct Reaction {
  int node = 0;
  int axis = 0;  // 0 = x, 1 = y
  double value = 0.0;  // kN
};

struct AnalysisResult {
  std::string combination;
  Eigen::VectorXd displacements;  // m, (ux, uy) per node in model order
  Eigen::VectorXd forces;         // kN, tension positive, model member order
  std::vector<Reaction> reactions;

  Eigen::Vector2d displacement(std::size_t node_index) const {
    return displacements.segment<2>(2 * Eigen::Index(node_index));
  }
};

class MechanismError : public std::runtime_error {
 public:
  MechanismError(int node, int axis, const std::string& what)
      : std::runtime_error(what), node_(node), axis_(axis) {}
  int node() const { return node_; }
  int axis() const { return axis_; }

 private:
  int node_, axis_;
};

// Axial stiffness EA/L in kN/m.
double axial_stiffness(const TrussModel& model, const Member& m, double area_m2);

Eigen::Matrix4d element_stiffness(const Member& member, const TrussModel& model);

AnalysisResult solve_static(const TrussModel& model, const LoadCombination& combination);

// Same analysis with member areas (m^2, member order) replacing the section areas.
AnalysisResult solve_static(const TrussModel& model, const LoadCombination& combination,
                            const Eigen::VectorXd& areas);

std::vector<AnalysisResult> solve_all(const TrussModel& model);

std::vector<Eigen::Vector2d> deflected_shape(const TrussModel& model, const AnalysisResult& result,
                                             double scale);

// Per member, the force of largest magnitude across results, sign kept.
Eigen::VectorXd envelope_forces(const std::vector<AnalysisResult>& results);

}  // namespace trussopt
