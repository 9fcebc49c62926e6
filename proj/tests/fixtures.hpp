#pragma once

#include "trussopt/model.hpp"

#include <cmath>

namespace trussopt::fixtures {

// 8 m span Pratt-like truss, 2 kN uplift at the three top nodes.
inline TrussModel verification_truss() {
  const double h = 2.31;
  TrussModel m;
  auto node = [&](int id, double x, double y, Support s = Support::free) {
    Node n;
    n.id = id;
    n.x = x;
    n.y = y;
    n.support = s;
    m.nodes.push_back(n);
  };
  node(1, 0, 0, Support::hinged);
  node(2, 2, 0);
  node(3, 4, 0);
  node(4, 6, 0);
  node(5, 8, 0, Support::roller_y);
  node(6, 2, h / 2);
  node(7, 4, h);
  node(8, 6, h / 2);
  for (int id : {6, 7, 8}) m.nodes[m.node_index(id)].load(LoadCase::dl) = {0.0, 2.0};
  const int conn[13][2] = {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 7}, {1, 6}, {6, 7},
                           {5, 8}, {8, 7}, {2, 6}, {3, 6}, {3, 8}, {4, 8}};
  for (int k = 0; k < 13; ++k) {
    Member mem;
    mem.id = k + 1;
    mem.node_i = conn[k][0];
    mem.node_j = conn[k][1];
    m.members.push_back(mem);
  }
  m.materials.push_back(Material{});
  m.sections.push_back(CrossSection{});
  m.combinations.push_back({"DL", 1.0, 0.0, 0.0});
  return m;
}

// Demonstration truss: 5 m span, 1 m rise, `load` kN down at each top node.
inline TrussModel demonstration_truss(double load = 10.0) {
  TrussModel m;
  const double xs[7] = {0, 5.0 / 3, 10.0 / 3, 5, 1.25, 2.5, 3.75};
  const double ys[7] = {0, 0, 0, 0, 0.5, 1.0, 0.5};
  for (int k = 0; k < 7; ++k) {
    Node n;
    n.id = k + 1;
    n.x = xs[k];
    n.y = ys[k];
    if (k == 0) n.support = Support::hinged;
    if (k == 3) n.support = Support::roller_y;
    if (k >= 4) n.load(LoadCase::dl) = {0.0, -load};
    m.nodes.push_back(n);
  }
  const int conn[11][2] = {{1, 2}, {2, 3}, {3, 4}, {1, 5}, {5, 6}, {5, 2},
                           {2, 6}, {6, 7}, {6, 3}, {3, 7}, {7, 4}};
  for (int k = 0; k < 11; ++k) {
    Member mem;
    mem.id = k + 1;
    mem.node_i = conn[k][0];
    mem.node_j = conn[k][1];
    m.members.push_back(mem);
  }
  m.materials.push_back(Material{});
  m.sections.push_back(CrossSection{});
  m.combinations.push_back({"DL", 1.0, 0.0, 0.0});
  return m;
}

}  // namespace trussopt::fixtures
