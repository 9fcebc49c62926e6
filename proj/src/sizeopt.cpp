#include "trussopt/sizeopt.hpp"

#include "trussopt/truss.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace trussopt::sizeopt {

RadiusModel RadiusModel::calibrate(const is800::SectionLibrary& lib) {
  const auto& s = lib.sections().front();  // smallest area
  return {s.r_min / s.area};
}

SizeOptProblem make_problem(const TrussModel& model, const is800::DesignReport& design,
                            const is800::SectionLibrary& lib) {
  if (design.members.size() != model.members.size()) throw SizeOptError("design does not match the model");
  SizeOptProblem p;
  p.model = model;
  const Eigen::Index m = Eigen::Index(model.members.size());
  p.start.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) p.start[k] = design.members[std::size_t(k)].total_area();
  p.lower = Eigen::VectorXd::Constant(m, 10.0);
  p.upper = 10.0 * p.start;
  p.radius = RadiusModel::calibrate(lib);
  return p;
}

Objective objective_weight(const TrussModel& model, const Eigen::VectorXd& areas) {
  Objective o;
  o.gradient.resize(areas.size());
  for (Eigen::Index k = 0; k < areas.size(); ++k) o.gradient[k] = model.length(model.members[std::size_t(k)]);
  o.weight = o.gradient.dot(areas);
  return o;
}

namespace {

bool is_determinate(const TrussModel& model) {
  return int(model.members.size()) == 2 * int(model.nodes.size()) - model.constrained_dofs();
}

Eigen::VectorXd envelope_at(const TrussModel& model, const Eigen::VectorXd& areas_mm2) {
  std::vector<AnalysisResult> rs;
  for (const auto& c : model.combinations) rs.push_back(solve_static(model, c, areas_mm2 * 1e-6));
  return envelope_forces(rs);
}

struct RawG {
  Eigen::VectorXd g, den;
};

RawG raw_constraints(const SizeOptProblem& p, const Eigen::VectorXd& A, const Eigen::VectorXd& F) {
  const Eigen::Index m = A.size();
  RawG r{Eigen::VectorXd(2 * m), Eigen::VectorXd(2 * m)};
  for (Eigen::Index k = 0; k < m; ++k) {
    const Member& mem = p.model.members[std::size_t(k)];
    const double fy = p.model.material(mem.material).fy;
    const double limit = F[k] > 0 ? p.tension_limit : p.compression_limit;
    r.g[k] = std::abs(F[k]) * 1000.0 / A[k] - fy;
    r.g[m + k] = p.model.length(mem) * 1000.0 / p.radius(A[k]) - limit;
    r.den[k] = fy;
    r.den[m + k] = limit;
  }
  return r;
}

}  // namespace

ConstraintValues constraint_values(const SizeOptProblem& p, const Eigen::VectorXd& A) {
  const Eigen::Index m = A.size();
  if ((A.array() <= 0).any()) throw SizeOptError("areas must be positive");
  ConstraintValues cv;
  cv.determinate = is_determinate(p.model);
  cv.forces = p.model.combinations.empty() ? Eigen::VectorXd::Zero(m) : envelope_at(p.model, A);
  cv.g = raw_constraints(p, A, cv.forces).g;
  cv.jacobian = Eigen::MatrixXd::Zero(2 * m, m);
  if (cv.determinate) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const double L = p.model.length(p.model.members[std::size_t(k)]);
      const double r = p.radius(A[k]);
      cv.jacobian(k, k) = -std::abs(cv.forces[k]) * 1000.0 / (A[k] * A[k]);
      cv.jacobian(m + k, k) = -L * 1000.0 * p.radius.derivative(A[k]) / (r * r);
    }
  } else {
    for (Eigen::Index k = 0; k < m; ++k) {
      Eigen::VectorXd Ah = A;
      const double h = 1e-6 * A[k];
      Ah[k] += h;
      const Eigen::VectorXd gh = raw_constraints(p, Ah, envelope_at(p.model, Ah)).g;
      cv.jacobian.col(k) = (gh - cv.g) / h;
    }
  }
  return cv;
}

Eigen::VectorXd simplex_max(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const Eigen::Index m = A.rows(), n = A.cols();
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  T.topLeftCorner(m, n) = A;
  T.block(0, n, m, m).setIdentity();
  T.topRightCorner(m, 1) = b;
  T.bottomLeftCorner(1, n) = -c.transpose();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[std::size_t(i)] = n + i;
  constexpr double tiny = 1e-12;

  for (int guard = 0; guard < 10000; ++guard) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j)
      if (T(m, j) < -tiny) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (T(i, enter) <= tiny) continue;
      const double ratio = T(i, n + m) / T(i, enter);
      const bool tie = leave >= 0 && std::abs(ratio - best) <= tiny;
      if (leave < 0 || (ratio < best && !tie) ||
          (tie && basis[std::size_t(i)] < basis[std::size_t(leave)])) {
        best = std::min(best, ratio);
        leave = i;
      }
    }
    if (leave < 0) throw SizeOptError("direction-finding subproblem is unbounded");
    T.row(leave) /= T(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i)
      if (i != leave && T(i, enter) != 0.0) T.row(i) -= T(i, enter) * T.row(leave);
    basis[std::size_t(leave)] = enter;
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[std::size_t(i)] < n) z[basis[std::size_t(i)]] = T(i, n + m);
  return z;
}

namespace {

struct Eval {
  double f = 0;
  Eigen::VectorXd grad, g, den;  // g normalised by den
  Eigen::MatrixXd J;             // normalised
};

Eval evaluate(const SizeOptProblem& p, const Eigen::VectorXd& x) {
  Eval e;
  const Objective o = objective_weight(p.model, x);
  e.f = o.weight;
  e.grad = o.gradient;
  const ConstraintValues cv = constraint_values(p, x);
  e.den = raw_constraints(p, x, cv.forces).den;
  e.g = cv.g.cwiseQuotient(e.den);
  e.J = e.den.cwiseInverse().asDiagonal() * cv.jacobian;
  return e;
}

double max_violation(const SizeOptProblem& p, const Eigen::VectorXd& x) {
  const ConstraintValues cv = constraint_values(p, x);
  const Eigen::VectorXd den = raw_constraints(p, x, cv.forces).den;
  return cv.g.cwiseQuotient(den).maxCoeff();
}

}  // namespace

SizeOptResult optimize_sizes(const SizeOptProblem& p) {
  const Eigen::Index m = Eigen::Index(p.model.members.size());
  const Settings& st = p.settings;
  if (p.start.size() != m || p.lower.size() != m || p.upper.size() != m)
    throw SizeOptError("bounds and start must have one entry per member");
  if ((p.lower.array() <= 0).any() || (p.upper.array() < p.lower.array()).any())
    throw SizeOptError("bounds must satisfy 0 < lower <= upper");

  SizeOptResult res;
  if (m == 0) {
    res.converged = true;
    return res;
  }
  Eigen::VectorXd x = p.start.cwiseMax(p.lower).cwiseMin(p.upper);
  for (int k = 0; k < 60 && max_violation(p, x) > 0; ++k) x = (1.25 * x).cwiseMin(p.upper);
  if (max_violation(p, x) > 0) throw SizeOptError("infeasible problem: no feasible start within the bounds");

  const Eigen::VectorXd scale = p.start.cwiseMax(p.lower);
  int stalled = 0;
  double ct_scale = 1.0;
  Eval e = evaluate(p, x);
  res.history.push_back(e.f);
  for (int it = 0; it < st.max_iters; ++it) {
    res.iterations = it + 1;
    const double ct = std::max(st.ct_min, ct_scale * st.ct_start * std::pow(0.95, it));
    std::vector<Eigen::Index> active;
    for (Eigen::Index j = 0; j < e.g.size(); ++j)
      if (e.g[j] >= -ct) active.push_back(j);
    const Eigen::VectorXd gf = e.grad.cwiseProduct(scale) / e.grad.cwiseProduct(scale).cwiseAbs().maxCoeff();
    std::vector<bool> at_lo(static_cast<std::size_t>(m)), at_hi(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
      at_lo[std::size_t(i)] = x[i] <= p.lower[i] * (1 + 1e-12);
      at_hi[std::size_t(i)] = x[i] >= p.upper[i] * (1 - 1e-12);
    }

    // direction-finding LP over z = (s+, s-, beta)
    const Eigen::Index na = Eigen::Index(active.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(na + 1 + 2 * m, 2 * m + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(na + 1 + 2 * m);
    for (Eigen::Index a = 0; a < na; ++a) {
      const Eigen::Index j = active[std::size_t(a)];
      const Eigen::RowVectorXd row = e.J.row(j).cwiseProduct(scale.transpose());
      const double nrm = std::max(row.cwiseAbs().maxCoeff(), 1e-300);
      const double theta = std::min(50.0, st.theta0 * std::pow(1.0 + e.g[j] / ct, 2));
      A.block(a, 0, 1, m) = row / nrm;
      A.block(a, m, 1, m) = -row / nrm;
      A(a, 2 * m) = theta;
    }
    A.block(na, 0, 1, m) = gf.transpose();
    A.block(na, m, 1, m) = -gf.transpose();
    A(na, 2 * m) = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      A(na + 1 + i, i) = 1.0;
      b[na + 1 + i] = at_hi[std::size_t(i)] ? 0.0 : 1.0;
      A(na + 1 + m + i, m + i) = 1.0;
      b[na + 1 + m + i] = at_lo[std::size_t(i)] ? 0.0 : 1.0;
    }
    Eigen::VectorXd cobj = Eigen::VectorXd::Zero(2 * m + 1);
    cobj[2 * m] = 1.0;
    Eigen::VectorXd z = simplex_max(A, b, cobj);
    const double beta = z[2 * m];
    // The max-beta vertex is often degenerate and leaves slack members idle,
    // which jams the iteration. Re-solve rewarding descent and keep it if it
    // gives up at most half of beta.
    if (beta >= 1e-9) {
      cobj.head(m) = -1e-3 * gf;
      cobj.segment(m, m) = 1e-3 * gf;
      const Eigen::VectorXd zt = simplex_max(A, b, cobj);
      if (zt[2 * m] >= 0.5 * beta) z = zt;
    }
    const Eigen::VectorXd s = z.head(m) - z.segment(m, m);
    if (beta < 1e-9 || s.cwiseAbs().maxCoeff() < 1e-14) {
      // nothing usable inside this band may only mean the band is too wide
      if (ct > st.ct_min) {
        ct_scale *= 0.1;
        continue;
      }
      res.converged = true;
      break;
    }

    const Eigen::VectorXd dx = s.cwiseProduct(scale);
    double amax = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (dx[i] > 0) amax = std::min(amax, (p.upper[i] - x[i]) / dx[i]);
      if (dx[i] < 0) amax = std::min(amax, (p.lower[i] - x[i]) / dx[i]);
    }
    auto feasible = [&](double a) { return max_violation(p, x + a * dx) <= 0.0; };
    double alpha = amax;
    if (!feasible(amax)) {
      double lo = 0.0, hi = amax;
      for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++k) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
      }
      alpha = lo;
    }
    x = (x + alpha * dx).cwiseMax(p.lower).cwiseMin(p.upper);
    const double fprev = e.f;
    e = evaluate(p, x);
    res.history.push_back(e.f);
    stalled = (fprev - e.f <= st.step_tol * std::abs(fprev)) ? stalled + 1 : 0;
    if (stalled >= 5 && ct <= st.ct_min) {
      res.converged = true;
      break;
    }
  }

  // Land exactly on the near-active constraints by projected Newton steps.
  for (int k = 0; k < 30; ++k) {
    std::vector<Eigen::Index> act;
    for (Eigen::Index j = 0; j < e.g.size(); ++j)
      if (e.g[j] >= -st.constraint_tol) act.push_back(j);
    if (act.empty()) break;
    Eigen::MatrixXd Ja(Eigen::Index(act.size()), m);
    Eigen::VectorXd ga(Eigen::Index(act.size()));
    for (std::size_t a = 0; a < act.size(); ++a) {
      Ja.row(Eigen::Index(a)) = e.J.row(act[a]);
      ga[Eigen::Index(a)] = e.g[act[a]];
    }
    // one constraint per variable keeps the system well posed
    const Eigen::VectorXd step = Ja.completeOrthogonalDecomposition().solve(ga);
    const Eigen::VectorXd xn = (x - step).cwiseMax(p.lower).cwiseMin(p.upper);
    const Eval en = evaluate(p, xn);
    if (en.g.maxCoeff() > 1e-12 || en.f > e.f + 1e-12 * std::abs(e.f)) break;
    const bool done = (xn - x).cwiseAbs().maxCoeff() <= 1e-13 * x.cwiseAbs().maxCoeff();
    x = xn;
    e = en;
    if (done) break;
  }

  res.areas = x;
  res.weight = e.f;
  res.max_violation = std::max(0.0, e.g.maxCoeff());
  res.stress_active.resize(std::size_t(m));
  res.slenderness_active.resize(std::size_t(m));
  res.at_bound.resize(std::size_t(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    res.stress_active[std::size_t(i)] = e.g[i] >= -st.constraint_tol;
    res.slenderness_active[std::size_t(i)] = e.g[m + i] >= -st.constraint_tol;
    res.at_bound[std::size_t(i)] = x[i] <= p.lower[i] * (1 + 1e-9) || x[i] >= p.upper[i] * (1 - 1e-9);
  }
  return res;
}

}  // namespace trussopt::sizeopt
