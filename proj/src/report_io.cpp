#include "trussopt/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace trussopt::io {

namespace {

constexpr const char* nodes_cols = "id,x,y,support,roller_axis,DLx,DLy,LLx,LLy,WLx,WLy";
constexpr const char* materials_cols = "name,E,nu,fy,fu";
constexpr const char* sections_cols = "name,area";
constexpr const char* members_cols = "id,ni,nj,material,section,classification";
constexpr const char* combos_cols = "name,fdl,fll,fwl";

std::string f2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v + 0.0);  // + 0.0 folds -0 into 0
  return buf;
}

void check_name(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_of(",\n\r") != std::string::npos || s.front() == '[' || s.front() == '#' ||
      s.front() == ' ' || s.back() == ' ')
    throw ModelError(std::string(what) + " name cannot be stored: '" + s + "'");
}

std::string support_name(Support s) {
  switch (s) {
    case Support::hinged: return "hinged";
    case Support::roller_x:
    case Support::roller_y: return "roller";
    case Support::free: break;
  }
  return "free";
}

std::string class_name(MemberClass c) {
  switch (c) {
    case MemberClass::peripheral: return "peripheral";
    case MemberClass::interior: return "interior";
    case MemberClass::automatic: break;
  }
  return "auto";
}

std::string strip(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto p = line.find(',', start);
    out.push_back(strip(std::string_view(line).substr(start, p == std::string::npos ? std::string::npos : p - start)));
    if (p == std::string::npos) break;
    start = p + 1;
  }
  return out;
}

struct Row {
  int line;
  std::vector<std::string> cells;

  const std::string& at(std::size_t col) const { return cells[col]; }
  double num(std::size_t col) const {
    const std::string& s = cells[col];
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
      throw ParseError(line, int(col) + 1, "expected a number, got '" + s + "'");
    return v;
  }
  int integer(std::size_t col) const {
    const std::string& s = cells[col];
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
      throw ParseError(line, int(col) + 1, "expected an integer, got '" + s + "'");
    return v;
  }
  const std::string& name(std::size_t col) const {
    if (cells[col].empty()) throw ParseError(line, int(col) + 1, "empty name");
    return cells[col];
  }
};

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string serialize(const TrussModel& model) {
  std::ostringstream os;
  auto num = [](double v) { return format_number(v); };
  os << model_header << "\n[NODES]\n" << nodes_cols << "\n";
  for (const auto& n : model.nodes) {
    const char* axis = n.support == Support::roller_x ? "x" : n.support == Support::roller_y ? "y" : "-";
    os << n.id << ',' << num(n.x) << ',' << num(n.y) << ',' << support_name(n.support) << ',' << axis;
    for (const auto& l : n.loads) os << ',' << num(l.x()) << ',' << num(l.y());
    os << '\n';
  }
  os << "[MATERIALS]\n" << materials_cols << "\n";
  for (const auto& m : model.materials) {
    check_name(m.name, "material");
    os << m.name << ',' << num(m.E) << ',' << num(m.nu) << ',' << num(m.fy) << ',' << num(m.fu) << '\n';
  }
  os << "[SECTIONS]\n" << sections_cols << "\n";
  for (const auto& s : model.sections) {
    check_name(s.name, "section");
    os << s.name << ',' << num(s.area) << '\n';
  }
  os << "[MEMBERS]\n" << members_cols << "\n";
  for (const auto& m : model.members)
    os << m.id << ',' << m.node_i << ',' << m.node_j << ',' << m.material << ',' << m.section << ','
       << class_name(m.classification) << '\n';
  os << "[COMBOS]\n" << combos_cols << "\n";
  for (const auto& c : model.combinations) {
    check_name(c.name, "combination");
    os << c.name << ',' << num(c.factor_dl) << ',' << num(c.factor_ll) << ',' << num(c.factor_wl) << '\n';
  }
  return os.str();
}

TrussModel parse_model(std::string_view text) {
  static const std::map<std::string, std::pair<std::string, std::size_t>> layout = {
      {"[NODES]", {nodes_cols, 11}},   {"[MATERIALS]", {materials_cols, 5}}, {"[SECTIONS]", {sections_cols, 2}},
      {"[MEMBERS]", {members_cols, 6}}, {"[COMBOS]", {combos_cols, 4}}};

  TrussModel model;
  std::string section;
  bool expect_columns = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int ln = 0;
  while (std::getline(in, raw)) {
    ++ln;
    const std::string line = strip(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# truss model v", 0) == 0) {
        if (line != model_header) throw ParseError(ln, 1, "unsupported model version '" + line + "'");
      }
      continue;
    }
    if (line[0] == '[') {
      if (!layout.count(line)) throw ParseError(ln, 1, "unknown section header " + line);
      section = line;
      expect_columns = true;
      continue;
    }
    if (section.empty()) throw ParseError(ln, 1, "data before any section header");
    const auto& [cols, ncols] = layout.at(section);
    if (expect_columns) {
      if (line != cols) throw ParseError(ln, 1, "expected column header '" + cols + "'");
      expect_columns = false;
      continue;
    }
    Row row{ln, split(line)};
    if (row.cells.size() != ncols)
      throw ParseError(ln, int(std::min(row.cells.size(), ncols)) + 1,
                       "expected " + std::to_string(ncols) + " columns, got " + std::to_string(row.cells.size()));

    if (section == "[NODES]") {
      Node n;
      n.id = row.integer(0);
      n.x = row.num(1);
      n.y = row.num(2);
      const std::string& sup = row.at(3);
      const std::string& axis = row.at(4);
      if (sup == "free") n.support = Support::free;
      else if (sup == "hinged") n.support = Support::hinged;
      else if (sup == "roller") {
        if (axis == "x") n.support = Support::roller_x;
        else if (axis == "y") n.support = Support::roller_y;
        else throw ParseError(ln, 5, "roller needs roller_axis x or y");
      } else throw ParseError(ln, 4, "unknown support '" + sup + "'");
      if (sup != "roller" && axis != "-" && !axis.empty())
        throw ParseError(ln, 5, "roller_axis given for a non-roller support");
      for (int c = 0; c < 3; ++c) n.loads[std::size_t(c)] = {row.num(5 + 2 * std::size_t(c)), row.num(6 + 2 * std::size_t(c))};
      model.nodes.push_back(n);
    } else if (section == "[MATERIALS]") {
      model.materials.push_back({row.name(0), row.num(1), row.num(2), row.num(3), row.num(4)});
    } else if (section == "[SECTIONS]") {
      model.sections.push_back({row.name(0), row.num(1)});
    } else if (section == "[MEMBERS]") {
      Member m;
      m.id = row.integer(0);
      m.node_i = row.integer(1);
      m.node_j = row.integer(2);
      m.material = row.name(3);
      m.section = row.name(4);
      const std::string& c = row.at(5);
      if (c == "auto" || c.empty()) m.classification = MemberClass::automatic;
      else if (c == "peripheral") m.classification = MemberClass::peripheral;
      else if (c == "interior") m.classification = MemberClass::interior;
      else throw ParseError(ln, 6, "unknown classification '" + c + "'");
      model.members.push_back(m);
    } else {
      model.combinations.push_back({row.name(0), row.num(1), row.num(2), row.num(3)});
    }
  }
  if (expect_columns) throw ParseError(ln, 1, "section " + section + " has no column header");
  return model;
}

std::string member_block(const is800::DesignReportEntry& e) {
  using namespace is800;
  std::ostringstream os;
  const int n = e.angles;
  const char* cfg = n == 2 ? "double angle" : "single angle";
  const std::string sz = e.section.size();
  os << "Member " << e.member << " (" << to_string(e.mode) << ")\n";
  os << "  Design force F = " << f2(e.force) << " kN, length Lo = " << f2(e.length) << " m\n";
  if (e.mode == Mode::zero_force) {
    os << "  Zero-force member: minimum-weight section " << sz << " assigned (" << f2(e.section.weight)
       << " kg/m), all checks trivially satisfied\n";
    os << "Provide " << n << " angle " << sz << " with weld size 4 mm\n";
    return os.str();
  }
  os << "  Configuration: " << cfg << ", force per angle " << f2(e.angle_force) << " kN\n";
  os << "  Required area per angle: " << f2(e.trial_area) << " mm2\n";
  os << "  Weld strength (w*0.7*0.462*fu): " << f2(e.weld_strength) << " N/mm\n";
  os << "  Section " << sz << ": Ag = " << f2(e.section.area) << " mm2, rmin = " << f2(e.section.r_min) << " mm\n";
  if (e.tension) {
    const auto& t = *e.tension;
    os << "  An = " << f2(e.section.area) << " mm2 (welded, no holes)\n";
    os << "  Yield of gross area (0.91*Ag*fy)/1000 = " << f2(t.yield) << " kN\n";
    os << "  Rupture of net area (0.8*0.8*An*fu)/1000 = " << f2(t.rupture) << " kN\n";
    os << "  Weld length to develop yield = " << f2(t.weld_length) << " mm; Avg = Avn = " << f2(t.Avg)
       << " mm2, Atg = Atn = " << f2(t.Atg) << " mm2\n";
    os << "  Block shear Tb1 = (0.525*Avg*fy + 0.72*Atn*fu)/1000 = " << f2(t.Tb1) << " kN\n";
    os << "  Block shear Tb2 = (0.416*Avn*fu + 0.91*Atg*fy)/1000 = " << f2(t.Tb2) << " kN\n";
    os << "  Block shear strength = " << f2(t.block_shear) << " kN\n";
    os << "  Tensile strength " << f2(t.governing) << " kN >= " << f2(e.angle_force) << " kN\n";
  }
  if (e.classification) {
    const auto& c = *e.classification;
    os << "  Classification: b/t = " << f2(c.b_t) << " <= " << f2(c.limit_leg) << ", d/t = " << f2(c.d_t)
       << " <= " << f2(c.limit_leg) << ", (b+d)/t = " << f2(c.bd_t) << " <= " << f2(c.limit_sum)
       << ": fully effective\n";
  }
  if (e.compression) {
    const auto& ch = *e.compression;
    os << "  lambda_vv = " << f2(ch.lambda_vv) << ", lambda_phi = " << f2(ch.lambda_phi)
       << " (alpha = 0.49, gamma_m0 = 1.10)\n";
    auto terms = [&](const char* label, const BucklingTerms& b, const char* lam) {
      os << "  " << label;
      if (b.k1 > 0) os << " k1 = " << f2(b.k1) << " k2 = " << f2(b.k2) << " k3 = " << f2(b.k3) << ";";
      os << " " << lam << " = " << f2(b.lambda) << ", phi = " << f2(b.phi) << ", c = " << f2(b.c)
         << ", f_cd = " << f2(b.fcd) << " N/mm2\n";
    };
    terms("Hinged ends:", ch.hinged, "lambda_eh");
    terms("Fixed ends:", ch.fixed, "lambda_ef");
    terms("Interpolated (0.15/0.35):", ch.interpolated, "lambda_e");
    os << "  Design compressive force f_cd*Ag = " << f2(e.capacity) << " kN >= " << f2(e.angle_force) << " kN\n";
  }
  os << "  Slenderness: Le = 1.0*Lo = " << f2(e.length) << " m, Le*1000/rmin = " << f2(e.slenderness)
     << " <= " << f2(e.slenderness_limit) << "\n";
  os << "Provide " << n << " angle " << sz << " with weld size 4 mm along all three edges\n";
  return os.str();
}

std::string design_report_text(const is800::DesignReport& report) {
  std::ostringstream os;
  os << "IS 800:2007 limit state design of truss members\n";
  os << "Welded angle sections, fillet weld 4 mm\n";
  for (const auto& e : report.members) os << '\n' << member_block(e);
  return os.str();
}

std::string density_image(const Eigen::MatrixXd& x, int upscale) {
  if (upscale < 1) upscale = 1;
  const Eigen::Index h = x.rows() * upscale, w = x.cols() * upscale;
  std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  out.reserve(out.size() + std::size_t(w * h));
  for (Eigen::Index r = 0; r < h; ++r)
    for (Eigen::Index c = 0; c < w; ++c) {
      const double v = std::clamp(x(r / upscale, c / upscale), 0.0, 1.0);
      out.push_back(char(static_cast<unsigned char>(std::lround(255.0 * (1.0 - v)))));
    }
  return out;
}

Eigen::MatrixXd read_pgm(std::string_view bytes) {
  std::istringstream in{std::string(bytes)};
  std::string magic;
  int w = 0, h = 0, maxv = 0;
  in >> magic >> w >> h >> maxv;
  if (magic != "P5" || w <= 0 || h <= 0 || maxv != 255) throw std::runtime_error("not an 8-bit P5 image");
  in.get();
  const std::size_t start = std::size_t(in.tellg());
  if (bytes.size() - start < std::size_t(w) * std::size_t(h)) throw std::runtime_error("PGM pixel data truncated");
  Eigen::MatrixXd g(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) g(r, c) = static_cast<unsigned char>(bytes[start + std::size_t(r * w + c)]);
  return g;
}

std::vector<ComparisonRow> comparison_table(const is800::DesignReport& design,
                                            const sizeopt::SizeOptResult& opt) {
  if (Eigen::Index(design.members.size()) != opt.areas.size())
    throw std::invalid_argument("comparison table: design and optimisation cover different members");
  std::vector<ComparisonRow> rows;
  for (std::size_t k = 0; k < design.members.size(); ++k) {
    const auto& e = design.members[k];
    ComparisonRow r;
    r.member = e.member;
    r.force = e.force;
    r.length = e.length;
    r.designation = std::to_string(e.angles) + " x " + e.section.designation;
    r.gross_area = e.total_area();
    r.optimized_area = opt.areas[Eigen::Index(k)];
    rows.push_back(r);
  }
  return rows;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << "member,force_kN,length_m,section,Ag_mm2,optimized_area_mm2\n";
  for (const auto& r : rows)
    // lengths are cut, not rounded, to two decimals as in the published table
    os << r.member << ',' << f2(r.force) << ',' << f2(std::trunc(r.length * 100 + 1e-9) / 100) << ',' << r.designation << ',' << f2(r.gross_area)
       << ',' << f2(r.optimized_area) << '\n';
  return os.str();
}

std::string forces_csv(const TrussModel& model, const std::vector<AnalysisResult>& results) {
  std::ostringstream os;
  os << "member";
  for (const auto& r : results) os << ',' << r.combination;
  os << '\n';
  for (std::size_t k = 0; k < model.members.size(); ++k) {
    os << model.members[k].id;
    for (const auto& r : results) os << ',' << format_number(r.forces[Eigen::Index(k)]);
    os << '\n';
  }
  return os.str();
}

}  // namespace trussopt::io
