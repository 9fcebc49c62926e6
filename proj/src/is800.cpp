#include "trussopt/is800.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <tuple>

namespace trussopt::is800 {

extern const char* const standard_library_csv;  // generated from data/angles.csv

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& s, int line, int col) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw DesignError("section library line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": not a number: '" + s + "'");
  return v;
}

std::string fmt_leg(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string AngleSection::size() const { return fmt_leg(L) + " x " + fmt_leg(B) + " x " + fmt_leg(t); }

SectionLibrary SectionLibrary::parse(std::string_view text) {
  SectionLibrary lib;
  std::istringstream in{std::string(text)};
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(t);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(trim(c));
    if (cols.size() != 7)
      throw DesignError("section library line " + std::to_string(ln) + ": expected 7 columns, got " +
                        std::to_string(cols.size()));
    AngleSection s;
    s.designation = cols[0];
    s.L = to_double(cols[1], ln, 2);
    s.B = to_double(cols[2], ln, 3);
    s.t = to_double(cols[3], ln, 4);
    s.area = to_double(cols[4], ln, 5);
    s.r_min = to_double(cols[5], ln, 6);
    s.weight = to_double(cols[6], ln, 7);
    if (!(s.L >= s.B && s.B > 0 && s.t > 0 && s.area > 0 && s.r_min > 0))
      throw DesignError("section library line " + std::to_string(ln) + ": invalid section " + s.designation);
    lib.sections_.push_back(s);
  }
  std::stable_sort(lib.sections_.begin(), lib.sections_.end(), [](const AngleSection& a, const AngleSection& b) {
    return std::tie(a.area, a.L, a.B, a.t) < std::tie(b.area, b.L, b.B, b.t);
  });
  if (lib.sections_.empty()) throw DesignError("section library is empty");
  return lib;
}

SectionLibrary SectionLibrary::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DesignError("cannot open section library " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

const SectionLibrary& SectionLibrary::standard() {
  static const SectionLibrary lib = parse(standard_library_csv);
  return lib;
}

const AngleSection& SectionLibrary::lightest() const {
  return *std::min_element(sections_.begin(), sections_.end(), [](const AngleSection& a, const AngleSection& b) {
    return a.weight < b.weight;
  });
}

const AngleSection& SectionLibrary::find(const std::string& designation) const {
  for (const auto& s : sections_)
    if (s.designation == designation) return s;
  throw DesignError("unknown section " + designation);
}

TensionStrengths tension_checks(const AngleSection& s, const Material& m, double weld_size) {
  TensionStrengths r;
  const double An = s.area;  // welded: no holes
  r.yield = 0.91 * s.area * m.fy / 1000.0;
  r.rupture = 0.8 * 0.8 * An * m.fu / 1000.0;
  const double ws = weld_strength(weld_size, m.fu);
  r.weld_length = ws > 0 ? r.yield * 1000.0 / ws : 0.0;
  r.Avg = r.Avn = s.t * r.weld_length;
  r.Atg = r.Atn = s.t * s.L;
  r.Tb1 = (0.525 * r.Avg * m.fy + 0.72 * r.Atn * m.fu) / 1000.0;
  r.Tb2 = (0.416 * r.Avn * m.fu + 0.91 * r.Atg * m.fy) / 1000.0;
  r.block_shear = std::min(r.Tb1, r.Tb2);
  r.governing = std::min({r.yield, r.rupture, r.block_shear});
  return r;
}

namespace {

BucklingTerms buckling(double lambda, double fy) {
  BucklingTerms b;
  b.lambda = lambda;
  b.phi = 0.5 * (1.0 + alpha_angle * (lambda - 0.2) + lambda * lambda);
  const double disc = b.phi * b.phi - lambda * lambda;
  if (disc < 0) throw DesignError("buckling curve: phi^2 < lambda^2");
  b.c = b.phi + std::sqrt(disc);
  b.fcd = (fy / gamma_m0) / b.c;
  return b;
}

}  // namespace

CompressionChain compression_chain(const AngleSection& s, double Lo, const Material& m) {
  CompressionChain ch;
  const double eps = epsilon(m.fy);
  const double ref = eps * std::sqrt(std::numbers::pi * std::numbers::pi * m.E / 250.0);
  ch.lambda_vv = (Lo * 1000.0 / s.r_min) / ref;
  ch.lambda_phi = ((s.L + s.B) / (2.0 * s.t)) / ref;
  auto lam = [&](double k1, double k2, double k3) {
    return std::sqrt(k1 + k2 * ch.lambda_vv * ch.lambda_vv + k3 * ch.lambda_phi * ch.lambda_phi);
  };
  ch.hinged = buckling(lam(0.7, 0.6, 5.0), m.fy);
  ch.hinged.k1 = 0.7, ch.hinged.k2 = 0.6, ch.hinged.k3 = 5.0;
  ch.fixed = buckling(lam(0.2, 0.35, 20.0), m.fy);
  ch.fixed.k1 = 0.2, ch.fixed.k2 = 0.35, ch.fixed.k3 = 20.0;
  const double lambda_e = ch.hinged.lambda - (ch.hinged.lambda - ch.fixed.lambda) * (0.15 / 0.35);
  ch.interpolated = buckling(lambda_e, m.fy);
  return ch;
}

double compression_fcd(const AngleSection& s, double Lo, const Material& m, EndCondition end) {
  const CompressionChain ch = compression_chain(s, Lo, m);
  switch (end) {
    case EndCondition::hinged: return ch.hinged.fcd;
    case EndCondition::fixed: return ch.fixed.fcd;
    case EndCondition::interpolated: break;
  }
  return ch.interpolated.fcd;
}

Classification classify_section(const AngleSection& s, double eps) {
  Classification c;
  c.b_t = s.B / s.t;
  c.d_t = s.L / s.t;
  c.bd_t = (s.L + s.B) / s.t;
  c.limit_leg = 15.7 * eps;
  c.limit_sum = 25.0 * eps;
  const bool ok = c.b_t <= c.limit_leg && c.d_t <= c.limit_leg && c.bd_t <= c.limit_sum;
  c.cls = ok ? SectionClass::fully_effective : SectionClass::slender;
  return c;
}

DesignReportEntry design_member(double F, double Lo, const Material& material, Config config,
                                const SectionLibrary& lib, const DesignParams& params, int member_id) {
  DesignReportEntry e;
  e.member = member_id;
  e.force = F;
  e.length = Lo;
  e.config = config;
  e.angles = config == Config::twin ? 2 : 1;
  e.weld_strength = weld_strength(params.weld_size, material.fu);

  if (std::abs(F) < params.zero_force) {
    e.mode = Mode::zero_force;
    e.section = lib.lightest();
    e.slenderness = Lo * 1000.0 / e.section.r_min;
    return e;
  }
  e.angle_force = std::abs(F) / e.angles;

  if (F > 0) {
    e.mode = Mode::tension;
    e.trial_area = e.angle_force * 1000.0 / (material.fy / gamma_m0);
    e.slenderness_limit = params.tension_slenderness;
    for (const auto& s : lib.sections()) {
      if (s.area < e.trial_area) continue;
      const TensionStrengths ts = tension_checks(s, material, params.weld_size);
      const double sr = Lo * 1000.0 / s.r_min;
      if (ts.governing >= e.angle_force && sr <= e.slenderness_limit) {
        e.section = s;
        e.tension = ts;
        e.capacity = ts.governing;
        e.slenderness = sr;
        return e;
      }
    }
  } else {
    e.mode = Mode::compression;
    e.trial_area = e.angle_force * 1000.0 / params.assumed_fcd;
    e.slenderness_limit = params.compression_slenderness;
    const double eps = epsilon(material.fy);
    for (const auto& s : lib.sections()) {
      if (s.area < e.trial_area) continue;
      const Classification cl = classify_section(s, eps);
      if (cl.cls != SectionClass::fully_effective) continue;
      const CompressionChain ch = compression_chain(s, Lo, material);
      const double cap = ch.interpolated.fcd * s.area / 1000.0;
      const double sr = Lo * 1000.0 / s.r_min;
      if (cap >= e.angle_force && sr <= e.slenderness_limit) {
        e.section = s;
        e.classification = cl;
        e.compression = ch;
        e.capacity = cap;
        e.slenderness = sr;
        return e;
      }
    }
  }
  throw DesignError("member " + std::to_string(member_id) + ": no library section satisfies the " +
                    to_string(e.mode) + " checks for F = " + std::to_string(F) + " kN");
}

DesignReport design_truss(const TrussModel& model, const std::vector<AnalysisResult>& results,
                          const SectionLibrary& lib, const DesignParams& params) {
  DesignReport rep;
  const Eigen::VectorXd env = envelope_forces(results);
  const auto classes = classify_members(model);
  for (std::size_t k = 0; k < model.members.size(); ++k) {
    const Member& m = model.members[k];
    const Material& mat = model.material(m.material);
    if (rep.material.empty()) rep.material = mat.name;
    const double F = env.size() ? env[Eigen::Index(k)] : 0.0;
    const Config cfg = classes.at(m.id) == MemberClass::peripheral ? Config::twin : Config::single;
    rep.members.push_back(design_member(F, model.length(m), mat, cfg, lib, params, m.id));
  }
  return rep;
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::tension: return "tension";
    case Mode::compression: return "compression";
    case Mode::zero_force: break;
  }
  return "zero force";
}

}  // namespace trussopt::is800
