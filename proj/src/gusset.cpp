#include "trussopt/gusset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace trussopt::gusset {

namespace {

// Distance from the centroid to the plate boundary along unit direction d.
double edge_distance(const GussetProblem& p, const Eigen::Vector2d& d) {
  const double hx = p.side / 2, hy = p.dy() * p.nely / 2;
  double s = std::numeric_limits<double>::infinity();
  if (std::abs(d.x()) > 1e-15) s = std::min(s, hx / std::abs(d.x()));
  if (std::abs(d.y()) > 1e-15) s = std::min(s, hy / std::abs(d.y()));
  return s;
}

}  // namespace

std::vector<std::vector<int>> weld_node_sets(const GussetProblem& p) {
  const Grid g = p.grid();
  const double tol = 1e-9 * p.side;
  const std::size_t nm = p.members.size();
  std::vector<std::vector<int>> sets(nm);
  for (int n = 0; n < g.nodes(); ++n) {
    const Eigen::Vector2d x = p.node_position(n);
    std::size_t owner = nm;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < nm; ++k) {
      const auto& m = p.members[k];
      const Eigen::Vector2d d = m.direction;
      const double s = x.dot(d);
      const double q = std::abs(d.x() * x.y() - d.y() * x.x());
      if (q > m.footprint / 2 + tol) continue;
      if (s < edge_distance(p, d) - m.weld_length - tol) continue;
      if (q < best - tol) {
        best = q;
        owner = k;
      }
    }
    if (owner < nm) sets[owner].push_back(n);
  }
  for (std::size_t k = 0; k < nm; ++k)
    if (sets[k].empty())
      throw GussetError("joint " + std::to_string(p.joint) + ", member " + std::to_string(p.members[k].member) +
                        ": weld footprint holds no grid node, mesh too coarse");
  return sets;
}

std::vector<int> weld_nodes(const GussetProblem& p, std::size_t member) {
  return weld_node_sets(p).at(member);
}

Eigen::VectorXd distribute_forces(const GussetProblem& p) {
  const auto sets = weld_node_sets(p);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(p.grid().dofs());
  for (std::size_t k = 0; k < p.members.size(); ++k) {
    // tension pulls the plate outward along the member, compression pushes in
    const Eigen::Vector2d share = p.members[k].force * p.members[k].direction / double(sets[k].size());
    for (int n : sets[k]) f.segment<2>(2 * n) += share;
  }
  return f;
}

int centroid_node(const GussetProblem& p) {
  // odd element counts have no centre node: take the lower-left candidate
  const int i = p.nelx / 2;
  const int j = (p.nely + 1) / 2;
  return p.grid().node(i, j);
}

std::array<int, 3> minimal_bcs(const GussetProblem& p) {
  if (p.nely < 2 || p.nelx < 1) throw GussetError("gusset mesh needs at least 2 elements vertically");
  const Grid g = p.grid();
  const int c = centroid_node(p);
  const int below = g.node(g.column(c), g.row(c) + 1);
  return {2 * c, 2 * c + 1, 2 * below};
}

PlateProblem plate_problem(const GussetProblem& p) {
  PlateProblem pp;
  pp.nelx = p.nelx;
  pp.nely = p.nely;
  pp.dx = p.dx();
  pp.dy = p.dy();
  pp.thickness = p.thickness;
  pp.material = p.material;
  const Eigen::VectorXd f = distribute_forces(p);
  for (int n = 0; n < p.grid().nodes(); ++n)
    if (f[2 * n] != 0.0 || f[2 * n + 1] != 0.0) pp.loads.push_back({n, f[2 * n], f[2 * n + 1]});
  const auto bc = minimal_bcs(p);
  pp.fixed_dofs.assign(bc.begin(), bc.end());
  return pp;
}

GussetProblem build_problem(const TrussModel& model, int joint, const Eigen::VectorXd& forces,
                            const is800::DesignReport* design, const GussetParams& params) {
  GussetProblem p;
  p.joint = joint;
  p.nelx = params.nelx;
  p.nely = params.nely;
  p.volfrac = params.topopt.volfrac;
  p.thickness = params.thickness;
  const Node& jn = model.node(joint);
  double widest = 0.0;
  for (std::size_t k = 0; k < model.members.size(); ++k) {
    const Member& m = model.members[k];
    if (m.node_i != joint && m.node_j != joint) continue;
    const int far = m.node_i == joint ? m.node_j : m.node_i;
    GussetMember gm;
    gm.member = m.id;
    gm.direction = (model.node(far).position() - jn.position()).normalized();
    gm.force = forces.size() ? forces[Eigen::Index(k)] : 0.0;
    gm.footprint = params.default_footprint;
    if (design && k < design->members.size())
      gm.footprint = params.footprint_per_leg * design->members[k].section.L / 1000.0;
    gm.weld_length = gm.footprint;
    widest = std::max(widest, gm.footprint);
    p.material = model.material(m.material);
    p.members.push_back(gm);
  }
  if (p.members.size() < 2) throw GussetError("joint " + std::to_string(joint) + " has fewer than two members");
  for (std::size_t a = 0; a < p.members.size(); ++a)
    for (std::size_t b = a + 1; b < p.members.size(); ++b)
      if (p.members[a].direction.dot(p.members[b].direction) > 1 - 1e-12)
        throw GussetError("joint " + std::to_string(joint) + ": members " + std::to_string(p.members[a].member) +
                          " and " + std::to_string(p.members[b].member) + " share a direction");
  p.side = params.side_factor * widest;
  return p;
}

GussetResult optimize_gusset(const TrussModel& model, int joint, const Eigen::VectorXd& forces,
                             const is800::DesignReport* design, const GussetParams& params) {
  GussetResult r;
  r.problem = build_problem(model, joint, forces, design, params);
  TopOptParams tp = params.topopt;
  tp.volfrac = r.problem.volfrac;
  r.field = optimize(plate_problem(r.problem), tp);
  return r;
}

std::vector<GussetResult> optimize_all(const TrussModel& model, const Eigen::VectorXd& forces,
                                       const is800::DesignReport* design, const GussetParams& params,
                                       unsigned threads) {
  std::vector<int> joints;
  for (const auto& n : model.nodes) {
    int count = 0;
    for (const auto& m : model.members) count += (m.node_i == n.id) + (m.node_j == n.id);
    if (count >= 2) joints.push_back(n.id);
  }
  std::vector<GussetResult> out(joints.size());
  std::vector<std::exception_ptr> errors(joints.size());
  std::atomic<std::size_t> next{0};
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, unsigned(std::max<std::size_t>(joints.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t k; (k = next++) < joints.size();) {
          try {
            out[k] = optimize_gusset(model, joints[k], forces, design, params);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

double mirror_difference(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw GussetError("density fields differ in size");
  if (a.size() == 0) return 0.0;
  return (a - b.rowwise().reverse()).cwiseAbs().mean();
}

}  // namespace trussopt::gusset
