#include "fixtures.hpp"
#include "trussopt/model.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace trussopt;
using ::testing::ElementsAre;
using ::testing::IsEmpty;

namespace {

TrussModel triangle() {
  TrussModel m;
  m.nodes = {{1, 0, 0, Support::hinged}, {2, 4, 0, Support::roller_y}, {3, 2, 1.5}};
  m.members = {{1, 1, 2}, {2, 2, 3}, {3, 3, 1}};
  m.materials = {Material{}};
  m.sections = {CrossSection{}};
  m.combinations = {{"DL", 1, 0, 0}};
  return m;
}

double total_length(const TrussModel& m) {
  double s = 0;
  for (const auto& mem : m.members) s += m.length(mem);
  return s;
}

}  // namespace

TEST(Validate, DegenerateModelListsBothProblems) {
  TrussModel m;
  m.nodes = {{1, 0, 0}};
  EXPECT_THAT(validate(m), ElementsAre("structure has no members", "insufficient supports"));
}

TEST(Validate, VerificationTrussIsClean) { EXPECT_THAT(validate(fixtures::verification_truss()), IsEmpty()); }

TEST(Validate, DanglingNodeReference) {
  TrussModel m = triangle();
  m.members[0].node_j = 99;
  const auto v = validate(m);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front(), "member 1: unknown node 99");
}

TEST(Validate, MaterialInvariants) {
  TrussModel m = triangle();
  m.materials[0].nu = 0.5;
  m.materials[0].fu = 200;
  const auto v = validate(m);
  EXPECT_THAT(v, ElementsAre("material steel: nu must lie in [0, 0.5)", "material steel: require 0 < fy < fu"));
}

TEST(Validate, DisconnectedStructure) {
  TrussModel m = triangle();
  m.nodes.push_back({4, 10, 0});
  m.nodes.push_back({5, 11, 0});
  m.members.push_back({4, 4, 5});
  EXPECT_THAT(validate(m), ElementsAre("structure is not connected"));
}

TEST(Validate, AllZeroCombination) {
  TrussModel m = triangle();
  m.combinations.push_back({"none", 0, 0, 0});
  EXPECT_THAT(validate(m), ElementsAre("combination none: all factors are zero"));
}

TEST(SplitMember, MidpointAndHalves) {
  TrussModel m;
  m.nodes = {{1, 0, 0, Support::hinged}, {2, 2, 0, Support::roller_y}};
  m.members = {{1, 1, 2}};
  const TrussModel s = split_member(m, 1);
  ASSERT_EQ(s.nodes.size(), 3u);
  const Node& mid = s.nodes.back();
  EXPECT_EQ(mid.id, 3);
  EXPECT_DOUBLE_EQ(mid.x, 1.0);
  EXPECT_DOUBLE_EQ(mid.y, 0.0);
  EXPECT_EQ(mid.support, Support::free);
  for (const auto& l : mid.loads) EXPECT_TRUE(l.isZero());
  ASSERT_EQ(s.members.size(), 2u);
  for (const auto& mem : s.members) EXPECT_DOUBLE_EQ(s.length(mem), 1.0);
}

TEST(SplitMember, PreservesLengthAndProperties) {
  TrussModel m = fixtures::demonstration_truss();
  m.sections.push_back({"heavy", 0.02});
  m.members[4].section = "heavy";
  m.members[4].classification = MemberClass::interior;
  const TrussModel s = split_member(m, 5);
  EXPECT_NEAR(total_length(s), total_length(m), 1e-12 * total_length(m));
  EXPECT_EQ(s.member(5).section, "heavy");
  EXPECT_EQ(s.members.back().section, "heavy");
  EXPECT_EQ(s.members.back().classification, MemberClass::interior);
  EXPECT_THAT(validate(s), IsEmpty());
}

TEST(SplitMember, TwiceGivesThreeCollinearMembers) {
  TrussModel m;
  m.nodes = {{1, 0, 0, Support::hinged}, {2, 3, 1.5, Support::roller_y}};
  m.members = {{1, 1, 2}};
  const TrussModel s = split_member(split_member(m, 1), 1);
  ASSERT_EQ(s.members.size(), 3u);
  EXPECT_EQ(s.nodes.size(), 4u);
  const Eigen::Vector2d d = m.direction(m.members[0]);
  for (const auto& mem : s.members) {
    const Eigen::Vector2d e = s.direction(mem);
    EXPECT_NEAR(std::abs(d.x() * e.y() - d.y() * e.x()), 0.0, 1e-15);
  }
  EXPECT_NEAR(total_length(s), total_length(m), 1e-12);
}

TEST(SplitMember, UnknownMember) { EXPECT_THROW(split_member(triangle(), 42), ModelError); }

TEST(Classify, DemonstrationTrussMatchesAngleAssignment) {
  const auto c = classify_members(fixtures::demonstration_truss());
  for (int id : {1, 2, 3, 4, 5, 8, 11}) EXPECT_EQ(c.at(id), MemberClass::peripheral) << "member " << id;
  for (int id : {6, 7, 9, 10}) EXPECT_EQ(c.at(id), MemberClass::interior) << "member " << id;
}

TEST(Classify, TriangleIsAllPeripheral) {
  for (const auto& [id, cls] : classify_members(triangle())) EXPECT_EQ(cls, MemberClass::peripheral) << id;
}

TEST(Classify, UserOverrideWins) {
  TrussModel m = fixtures::demonstration_truss();
  m.members[0].classification = MemberClass::interior;
  m.members[5].classification = MemberClass::peripheral;
  const auto c = classify_members(m);
  EXPECT_EQ(c.at(1), MemberClass::interior);
  EXPECT_EQ(c.at(6), MemberClass::peripheral);
}

TEST(Classify, InvariantUnderRigidMotion) {
  const TrussModel base = fixtures::verification_truss();
  const auto ref = classify_members(base);
  for (double angle : {0.3, 1.9, std::numbers::pi, -2.4}) {
    TrussModel moved = base;
    const double c = std::cos(angle), s = std::sin(angle);
    for (auto& n : moved.nodes) {
      const double x = n.x, y = n.y;
      n.x = c * x - s * y + 17.5;
      n.y = s * x + c * y - 3.25;
    }
    EXPECT_EQ(classify_members(moved), ref) << "angle " << angle;
  }
}

TEST(Classify, VerificationTrussChordsOnly) {
  const auto c = classify_members(fixtures::verification_truss());
  for (int id : {1, 2, 3, 4, 6, 7, 8, 9}) EXPECT_EQ(c.at(id), MemberClass::peripheral) << id;
  for (int id : {5, 10, 11, 12, 13}) EXPECT_EQ(c.at(id), MemberClass::interior) << id;
}

TEST(Model, LoadVectorCombinesFactors) {
  TrussModel m = triangle();
  m.nodes[2].load(LoadCase::dl) = {0, -2};
  m.nodes[2].load(LoadCase::ll) = {0, -1};
  m.nodes[2].load(LoadCase::wl) = {3, 0};
  const Eigen::VectorXd f = m.load_vector({"c", 1.5, 1.5, 0.9});
  EXPECT_DOUBLE_EQ(f[4], 2.7);
  EXPECT_DOUBLE_EQ(f[5], -4.5);
  EXPECT_EQ(m.constrained_dofs(), 3);
}

TEST(Model, DefaultCombinations) {
  const auto c = default_combinations();
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].name, "1.5(DL+LL)");
  EXPECT_DOUBLE_EQ(c[2].factor_wl, 1.5);
  EXPECT_DOUBLE_EQ(c[2].factor_dl, 0.9);
}

TEST(Model, LookupsThrowOnUnknown) {
  const TrussModel m = triangle();
  EXPECT_THROW(m.node(7), std::out_of_range);
  EXPECT_THROW(m.material("oak"), std::out_of_range);
}
