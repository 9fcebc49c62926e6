#include "trussopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

namespace trussopt {

namespace {

template <typename Range, typename Pred>
auto find_or_throw(const Range& r, Pred pred, const std::string& what) {
  auto it = std::find_if(r.begin(), r.end(), pred);
  if (it == r.end()) throw std::out_of_range(what);
  return it;
}

using Edge = std::pair<std::size_t, std::size_t>;
Edge edge_key(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

}  // namespace

std::size_t TrussModel::node_index(int id) const {
  auto it = find_or_throw(nodes, [id](const Node& n) { return n.id == id; },
                          "unknown node " + std::to_string(id));
  return static_cast<std::size_t>(it - nodes.begin());
}

std::size_t TrussModel::member_index(int id) const {
  auto it = find_or_throw(members, [id](const Member& m) { return m.id == id; },
                          "unknown member " + std::to_string(id));
  return static_cast<std::size_t>(it - members.begin());
}

const Material& TrussModel::material(const std::string& name) const {
  return *find_or_throw(materials, [&](const Material& m) { return m.name == name; },
                        "unknown material " + name);
}

const CrossSection& TrussModel::section(const std::string& name) const {
  return *find_or_throw(sections, [&](const CrossSection& s) { return s.name == name; },
                        "unknown section " + name);
}

const LoadCombination& TrussModel::combination(const std::string& name) const {
  return *find_or_throw(combinations, [&](const LoadCombination& c) { return c.name == name; },
                        "unknown combination " + name);
}

double TrussModel::length(const Member& m) const {
  return (node(m.node_j).position() - node(m.node_i).position()).norm();
}

Eigen::Vector2d TrussModel::direction(const Member& m) const {
  Eigen::Vector2d d = node(m.node_j).position() - node(m.node_i).position();
  return d / d.norm();
}

int TrussModel::constrained_dofs() const {
  int n = 0;
  for (const auto& nd : nodes) n += int(nd.restrains_x()) + int(nd.restrains_y());
  return n;
}

Eigen::VectorXd TrussModel::load_vector(const LoadCombination& c) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(2 * Eigen::Index(nodes.size()));
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& n = nodes[k];
    f.segment<2>(2 * Eigen::Index(k)) = c.factor_dl * n.load(LoadCase::dl) +
                                        c.factor_ll * n.load(LoadCase::ll) +
                                        c.factor_wl * n.load(LoadCase::wl);
  }
  return f;
}

std::vector<LoadCombination> default_combinations() {
  return {{"1.5(DL+LL)", 1.5, 1.5, 0.0},
          {"1.2(DL+LL+WL)", 1.2, 1.2, 1.2},
          {"1.5WL+0.9DL", 0.9, 0.0, 1.5}};
}

std::vector<std::string> validate(const TrussModel& model) {
  std::vector<std::string> v;
  if (model.members.empty()) v.push_back("structure has no members");

  std::set<int> node_ids;
  for (const auto& n : model.nodes) {
    if (n.id <= 0) v.push_back("node " + std::to_string(n.id) + ": id must be positive");
    if (!node_ids.insert(n.id).second) v.push_back("duplicate node id " + std::to_string(n.id));
    if (!std::isfinite(n.x) || !std::isfinite(n.y))
      v.push_back("node " + std::to_string(n.id) + ": non-finite coordinates");
    for (const auto& l : n.loads)
      if (!l.allFinite()) v.push_back("node " + std::to_string(n.id) + ": non-finite load");
  }

  std::set<std::string> mat_names;
  for (const auto& m : model.materials) {
    const std::string p = "material " + m.name + ": ";
    if (!mat_names.insert(m.name).second) v.push_back("duplicate material " + m.name);
    if (!(m.E > 0)) v.push_back(p + "E must be positive");
    if (!(m.nu >= 0 && m.nu < 0.5)) v.push_back(p + "nu must lie in [0, 0.5)");
    if (!(m.fy > 0 && m.fy < m.fu)) v.push_back(p + "require 0 < fy < fu");
  }
  std::set<std::string> sec_names;
  for (const auto& s : model.sections) {
    if (!sec_names.insert(s.name).second) v.push_back("duplicate section " + s.name);
    if (!(s.area > 0)) v.push_back("section " + s.name + ": area must be positive");
  }

  std::set<int> member_ids;
  std::vector<const Member*> sound;  // members whose references resolve
  for (const auto& m : model.members) {
    const std::string p = "member " + std::to_string(m.id) + ": ";
    if (m.id <= 0) v.push_back(p + "id must be positive");
    if (!member_ids.insert(m.id).second) v.push_back("duplicate member id " + std::to_string(m.id));
    bool ok = true;
    for (int nid : {m.node_i, m.node_j}) {
      if (!node_ids.count(nid)) {
        v.push_back(p + "unknown node " + std::to_string(nid));
        ok = false;
      }
    }
    if (m.node_i == m.node_j) {
      v.push_back(p + "both ends on node " + std::to_string(m.node_i));
      ok = false;
    }
    if (!mat_names.count(m.material)) v.push_back(p + "unknown material " + m.material);
    if (!sec_names.count(m.section)) v.push_back(p + "unknown section " + m.section);
    if (ok && !(model.length(m) > 0)) {
      v.push_back(p + "zero length");
      ok = false;
    }
    if (ok) sound.push_back(&m);
  }

  for (const auto& c : model.combinations) {
    if (c.factor_dl == 0 && c.factor_ll == 0 && c.factor_wl == 0)
      v.push_back("combination " + c.name + ": all factors are zero");
    if (!std::isfinite(c.factor_dl) || !std::isfinite(c.factor_ll) || !std::isfinite(c.factor_wl))
      v.push_back("combination " + c.name + ": non-finite factor");
  }

  if (model.constrained_dofs() < 3) v.push_back("insufficient supports");

  if (!model.members.empty() && !model.nodes.empty()) {
    // union-find over the resolvable members
    std::vector<std::size_t> parent(model.nodes.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    if (node_ids.size() == model.nodes.size()) {
      for (const Member* m : sound)
        parent[find(model.node_index(m->node_i))] = find(model.node_index(m->node_j));
      std::set<std::size_t> roots;
      for (std::size_t k = 0; k < parent.size(); ++k) roots.insert(find(k));
      if (roots.size() > 1) v.push_back("structure is not connected");
    }
  }
  return v;
}

TrussModel split_member(const TrussModel& model, int member_id) {
  auto mi = model.members.begin();
  for (; mi != model.members.end() && mi->id != member_id; ++mi) {
  }
  if (mi == model.members.end()) throw ModelError("unknown member " + std::to_string(member_id));

  TrussModel out = model;
  int new_node = 1, new_member = 1;
  for (const auto& n : model.nodes) new_node = std::max(new_node, n.id + 1);
  for (const auto& m : model.members) new_member = std::max(new_member, m.id + 1);

  const Member old = *mi;
  Node mid;
  mid.id = new_node;
  const Eigen::Vector2d p = 0.5 * (model.node(old.node_i).position() + model.node(old.node_j).position());
  mid.x = p.x();
  mid.y = p.y();
  out.nodes.push_back(mid);

  Member& first = out.members[static_cast<std::size_t>(mi - model.members.begin())];
  first.node_j = new_node;
  Member second = old;
  second.id = new_member;
  second.node_i = new_node;
  out.members.push_back(second);
  return out;
}

namespace {

// Walks the outer face of one connected component, keeping the exterior on
// the same side; returns the undirected edges visited.
void trace_outer_face(const std::vector<Eigen::Vector2d>& pts,
                      const std::vector<std::vector<std::size_t>>& adj, std::size_t start,
                      std::set<Edge>& on_face) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto angle = [&](std::size_t a, std::size_t b) {
    Eigen::Vector2d d = pts[b] - pts[a];
    return std::atan2(d.y(), d.x());
  };
  auto next_ccw = [&](std::size_t u, double ref) {
    std::size_t best = adj[u].front();
    double best_delta = 10.0;
    for (std::size_t w : adj[u]) {
      double delta = std::fmod(angle(u, w) - ref + 2 * two_pi, two_pi);
      if (delta <= 1e-12) delta = two_pi;
      if (delta < best_delta) {
        best_delta = delta;
        best = w;
      }
    }
    return best;
  };
  if (adj[start].empty()) return;

  const std::size_t first = next_ccw(start, -std::numbers::pi / 2);
  std::size_t prev = start, cur = first;
  on_face.insert(edge_key(start, first));
  std::size_t guard = 0, edges = 0;
  for (const auto& a : adj) edges += a.size();
  while (guard++ <= edges + 2) {
    std::size_t nxt = next_ccw(cur, angle(cur, prev));
    if (cur == start && nxt == first) break;
    on_face.insert(edge_key(cur, nxt));
    prev = cur;
    cur = nxt;
  }
}

}  // namespace

std::map<int, MemberClass> classify_members(const TrussModel& model) {
  std::vector<Eigen::Vector2d> pts;
  for (const auto& n : model.nodes) pts.push_back(n.position());
  std::vector<std::vector<std::size_t>> adj(pts.size());
  for (const auto& m : model.members) {
    std::size_t a = model.node_index(m.node_i), b = model.node_index(m.node_j);
    if (std::find(adj[a].begin(), adj[a].end(), b) == adj[a].end()) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }

  std::set<Edge> on_face;
  std::vector<bool> seen(pts.size(), false);
  for (std::size_t s = 0; s < pts.size(); ++s) {
    if (seen[s] || adj[s].empty()) continue;
    // collect component, start from its lowest (then leftmost) node
    std::vector<std::size_t> stack{s}, comp;
    seen[s] = true;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (std::size_t w : adj[u])
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    std::size_t start = *std::min_element(comp.begin(), comp.end(), [&](std::size_t a, std::size_t b) {
      return std::pair(pts[a].y(), pts[a].x()) < std::pair(pts[b].y(), pts[b].x());
    });
    trace_outer_face(pts, adj, start, on_face);
  }

  std::map<int, MemberClass> out;
  for (const auto& m : model.members) {
    if (m.classification != MemberClass::automatic) {
      out[m.id] = m.classification;
      continue;
    }
    auto key = edge_key(model.node_index(m.node_i), model.node_index(m.node_j));
    out[m.id] = on_face.count(key) ? MemberClass::peripheral : MemberClass::interior;
  }
  return out;
}

}  // namespace trussopt
