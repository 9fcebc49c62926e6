#pragma once

#include <Eigen/Core>

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace trussopt {

// Roller variants are named by the direction they restrain.
enum class Support { free, roller_x, roller_y, hinged };
enum class LoadCase { dl = 0, ll = 1, wl = 2 };
enum class MemberClass { automatic, peripheral, interior };

struct Node {
  int id = 0;
  double x = 0.0, y = 0.0;  // m
  Support support = Support::free;
  std::array<Eigen::Vector2d, 3> loads{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
                                       Eigen::Vector2d::Zero()};  // kN, indexed by LoadCase

  Eigen::Vector2d position() const { return {x, y}; }
  Eigen::Vector2d& load(LoadCase c) { return loads[static_cast<int>(c)]; }
  const Eigen::Vector2d& load(LoadCase c) const { return loads[static_cast<int>(c)]; }
  bool restrains_x() const { return support == Support::hinged || support == Support::roller_x; }
  bool restrains_y() const { return support == Support::hinged || support == Support::roller_y; }
  bool operator==(const Node&) const = default;
};

// Stresses in N/mm^2.
struct Material {
  std::string name = "steel";
  double E = 2.0e5;
  double nu = 0.3;
  double fy = 250.0;
  double fu = 410.0;
  bool operator==(const Material&) const = default;
};

struct CrossSection {
  std::string name = "default";
  double area = 0.01;  // m^2
  bool operator==(const CrossSection&) const = default;
};

struct Member {
  int id = 0;
  int node_i = 0, node_j = 0;
  std::string material = "steel";
  std::string section = "default";
  MemberClass classification = MemberClass::automatic;
  bool operator==(const Member&) const = default;
};

struct LoadCombination {
  std::string name;
  double factor_dl = 0.0, factor_ll = 0.0, factor_wl = 0.0;
  bool operator==(const LoadCombination&) const = default;
};

struct TrussModel {
  std::vector<Node> nodes;
  std::vector<Member> members;
  std::vector<Material> materials;
  std::vector<CrossSection> sections;
  std::vector<LoadCombination> combinations;

  bool operator==(const TrussModel&) const = default;

  // Lookups throw std::out_of_range on unknown ids/names.
  std::size_t node_index(int id) const;
  const Node& node(int id) const { return nodes[node_index(id)]; }
  std::size_t member_index(int id) const;
  const Member& member(int id) const { return members[member_index(id)]; }
  const Material& material(const std::string& name) const;
  const CrossSection& section(const std::string& name) const;
  const LoadCombination& combination(const std::string& name) const;

  double length(const Member& m) const;
  // Unit vector from node_i to node_j.
  Eigen::Vector2d direction(const Member& m) const;
  int constrained_dofs() const;
  // Factored nodal load of one combination, 2 entries per node in node order.
  Eigen::VectorXd load_vector(const LoadCombination& c) const;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> validate(const TrussModel& model);

TrussModel split_member(const TrussModel& model, int member_id);

// Peripheral members lie on the outer face of the planar member graph;
// explicit per-member classifications win.
std::map<int, MemberClass> classify_members(const TrussModel& model);

// The three combinations offered by default in the input form.
std::vector<LoadCombination> default_combinations();

}  // namespace trussopt
