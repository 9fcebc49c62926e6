#include "trussopt/truss.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace trussopt {

double axial_stiffness(const TrussModel& model, const Member& m, double area_m2) {
  const double L = model.length(m);
  if (!(L > 0)) throw ModelError("member " + std::to_string(m.id) + ": zero length");
  // E in N/mm^2 -> kN/m^2
  return model.material(m.material).E * 1e3 * area_m2 / L;
}

Eigen::Matrix4d element_stiffness(const Member& member, const TrussModel& model) {
  const double k = axial_stiffness(model, member, model.section(member.section).area);
  const Eigen::Vector2d d = model.direction(member);
  return bar_stiffness(k, d.x(), d.y());
}

namespace {

Eigen::VectorXd section_areas(const TrussModel& model) {
  Eigen::VectorXd a(Eigen::Index(model.members.size()));
  for (std::size_t k = 0; k < model.members.size(); ++k)
    a[Eigen::Index(k)] = model.section(model.members[k].section).area;
  return a;
}

}  // namespace

AnalysisResult solve_static(const TrussModel& model, const LoadCombination& combination) {
  return solve_static(model, combination, section_areas(model));
}

AnalysisResult solve_static(const TrussModel& model, const LoadCombination& combination,
                            const Eigen::VectorXd& areas) {
  const Eigen::Index ndof = 2 * Eigen::Index(model.nodes.size());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(ndof, ndof);

  std::vector<Eigen::Index> idx(model.members.size() * 2);
  for (std::size_t e = 0; e < model.members.size(); ++e) {
    const Member& m = model.members[e];
    const Eigen::Index i = Eigen::Index(model.node_index(m.node_i));
    const Eigen::Index j = Eigen::Index(model.node_index(m.node_j));
    const Eigen::Vector2d d = model.direction(m);
    const Eigen::Matrix4d ke = bar_stiffness(axial_stiffness(model, m, areas[Eigen::Index(e)]), d.x(), d.y());
    const Eigen::Index dofs[4] = {2 * i, 2 * i + 1, 2 * j, 2 * j + 1};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) K(dofs[a], dofs[b]) += ke(a, b);
  }

  // free DOF numbering after eliminating restrained rows/columns
  std::vector<Eigen::Index> free;
  for (std::size_t n = 0; n < model.nodes.size(); ++n) {
    if (!model.nodes[n].restrains_x()) free.push_back(2 * Eigen::Index(n));
    if (!model.nodes[n].restrains_y()) free.push_back(2 * Eigen::Index(n) + 1);
  }
  const Eigen::Index nf = Eigen::Index(free.size());
  const Eigen::VectorXd f = model.load_vector(combination);

  Eigen::MatrixXd Kff(nf, nf);
  Eigen::VectorXd ff(nf);
  for (Eigen::Index a = 0; a < nf; ++a) {
    ff[a] = f[free[std::size_t(a)]];
    for (Eigen::Index b = 0; b < nf; ++b) Kff(a, b) = K(free[std::size_t(a)], free[std::size_t(b)]);
  }

  Eigen::VectorXd u = Eigen::VectorXd::Zero(ndof);
  if (nf > 0) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Kff);
    const Eigen::VectorXd D = ldlt.vectorD();
    const double scale = std::max(Kff.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    // recover the original DOF of every pivot through the diagonal pivoting
    Eigen::VectorXi perm = Eigen::VectorXi::LinSpaced(nf, 0, int(nf) - 1);
    perm = ldlt.transpositionsP() * perm;
    for (Eigen::Index k = 0; k < nf; ++k) {
      if (!(D[k] > 1e-10 * scale)) {
        const Eigen::Index dof = free[std::size_t(perm[k])];
        const Node& n = model.nodes[std::size_t(dof / 2)];
        const int axis = int(dof % 2);
        throw MechanismError(n.id, axis,
                             "mechanism / unstable structure: near-zero pivot at node " +
                                 std::to_string(n.id) + (axis == 0 ? " ux" : " uy"));
      }
    }
    const Eigen::VectorXd uf = ldlt.solve(ff);
    for (Eigen::Index a = 0; a < nf; ++a) u[free[std::size_t(a)]] = uf[a];
  }

  AnalysisResult r;
  r.combination = combination.name;
  r.displacements = u;
  r.forces.resize(Eigen::Index(model.members.size()));
  for (std::size_t e = 0; e < model.members.size(); ++e) {
    const Member& m = model.members[e];
    const Eigen::Vector2d d = model.direction(m);
    const Eigen::Vector2d ui = r.displacement(model.node_index(m.node_i));
    const Eigen::Vector2d uj = r.displacement(model.node_index(m.node_j));
    r.forces[Eigen::Index(e)] = axial_stiffness(model, m, areas[Eigen::Index(e)]) * d.dot(uj - ui);
  }

  const Eigen::VectorXd residual = K * u - f;
  for (std::size_t n = 0; n < model.nodes.size(); ++n) {
    const Node& nd = model.nodes[n];
    if (nd.restrains_x()) r.reactions.push_back({nd.id, 0, residual[2 * Eigen::Index(n)]});
    if (nd.restrains_y()) r.reactions.push_back({nd.id, 1, residual[2 * Eigen::Index(n) + 1]});
  }
  return r;
}

std::vector<AnalysisResult> solve_all(const TrussModel& model) {
  std::vector<AnalysisResult> out;
  for (const auto& c : model.combinations) out.push_back(solve_static(model, c));
  return out;
}

std::vector<Eigen::Vector2d> deflected_shape(const TrussModel& model, const AnalysisResult& result,
                                             double scale) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(model.nodes.size());
  for (std::size_t n = 0; n < model.nodes.size(); ++n)
    pts.push_back(model.nodes[n].position() + scale * result.displacement(n));
  return pts;
}

Eigen::VectorXd envelope_forces(const std::vector<AnalysisResult>& results) {
  if (results.empty()) return {};
  Eigen::VectorXd env = results.front().forces;
  for (const auto& r : results)
    for (Eigen::Index k = 0; k < env.size(); ++k)
      if (std::abs(r.forces[k]) > std::abs(env[k])) env[k] = r.forces[k];
  return env;
}

}  // namespace trussopt
