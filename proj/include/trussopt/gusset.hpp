#pragma once

#include "trussopt/is800.hpp"
#include "trussopt/model.hpp"
#include "trussopt/topopt.hpp"
#include "trussopt/truss.hpp"

#include <Eigen/Core>

#include <array>
#include <stdexcept>
#include <vector>

namespace trussopt::gusset {

struct GussetMember {
  int member = 0;
  Eigen::Vector2d direction = Eigen::Vector2d::UnitX();  // joint -> far end
  double force = 0.0;        // kN, tension positive
  double footprint = 0.05;   // m, weld strip width
  double weld_length = 0.05; // m, strip depth measured in from the plate edge
};

// Square-ish plate centred on the joint; every member axis passes through
// the centroid.
struct GussetProblem {
  int joint = 0;
  double side = 0.15;  // m
  int nelx = 60, nely = 60;
  std::vector<GussetMember> members;
  double volfrac = 0.4;
  Material material;
  double thickness = 0.01;  // m

  double dx() const { return side / nelx; }
  double dy() const { return side / nely; }
  Grid grid() const { return {nelx, nely}; }
  // Coordinates relative to the centroid; exact under left-right mirroring.
  Eigen::Vector2d node_position(int n) const {
    const Grid g = grid();
    return {(2 * g.column(n) - nelx) * dx() / 2, (nely - 2 * g.row(n)) * dy() / 2};
  }
};

struct GussetParams {
  TopOptParams topopt{0.4};
  int nelx = 60, nely = 60;
  double thickness = 0.01;           // m
  double footprint_per_leg = 2.0;    // footprint = this x connected leg
  double default_footprint = 0.05;   // m, when no design is available
  double side_factor = 3.0;          // plate side = factor x largest footprint
};

class GussetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Node sets per member; a node claimed by two strips goes to the nearer axis.
std::vector<std::vector<int>> weld_node_sets(const GussetProblem& p);
std::vector<int> weld_nodes(const GussetProblem& p, std::size_t member);

// Member loads only, kN per DOF on the plate grid.
Eigen::VectorXd distribute_forces(const GussetProblem& p);

// Centroid node (both DOFs) and the node just below it (x DOF).
std::array<int, 3> minimal_bcs(const GussetProblem& p);
int centroid_node(const GussetProblem& p);

PlateProblem plate_problem(const GussetProblem& p);

GussetProblem build_problem(const TrussModel& model, int joint, const Eigen::VectorXd& forces,
                            const is800::DesignReport* design, const GussetParams& params);

struct GussetResult {
  GussetProblem problem;
  DensityField field;
};

GussetResult optimize_gusset(const TrussModel& model, int joint, const Eigen::VectorXd& forces,
                             const is800::DesignReport* design, const GussetParams& params);

// One plate per joint with at least two members; joints run concurrently.
std::vector<GussetResult> optimize_all(const TrussModel& model, const Eigen::VectorXd& forces,
                                       const is800::DesignReport* design, const GussetParams& params,
                                       unsigned threads = 0);

// Mean |a - mirror(b)| with mirroring about the vertical centre line.
double mirror_difference(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
inline double mirror_asymmetry(const Eigen::MatrixXd& x) { return mirror_difference(x, x); }

}  // namespace trussopt::gusset
