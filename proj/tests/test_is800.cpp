#include "fixtures.hpp"
#include "trussopt/is800.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <string>

using namespace trussopt;
using namespace trussopt::is800;

namespace {

// Worked-example values are printed to two decimals; compare the same way.
std::string r2(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2f", v);
  return b;
}

const AngleSection& isa(const std::string& size) { return SectionLibrary::standard().find("ISA " + size); }

// Reconstructed length of the demonstration top-chord members.
const double Lo_top = std::hypot(1.25, 0.5);

}  // namespace

TEST(Library, ShipsAllCatalogueEntries) {
  const auto& lib = SectionLibrary::standard();
  EXPECT_EQ(lib.sections().size(), 136u);
  for (std::size_t k = 1; k < lib.sections().size(); ++k)
    EXPECT_LE(lib.sections()[k - 1].area, lib.sections()[k].area);
  EXPECT_EQ(lib.lightest().designation, "ISA 20 x 20 x 4");
}

TEST(Library, PrintedSections) {
  EXPECT_DOUBLE_EQ(isa("20 x 20 x 4").area, 145);
  EXPECT_DOUBLE_EQ(isa("20 x 20 x 4").r_min, 12.74);
  EXPECT_DOUBLE_EQ(isa("25 x 25 x 5").area, 225);
  EXPECT_DOUBLE_EQ(isa("40 x 25 x 3").area, 188);
  EXPECT_EQ(isa("40 x 25 x 3").size(), "40 x 25 x 3");
  EXPECT_THROW(SectionLibrary::standard().find("ISA 1 x 1 x 1"), DesignError);
}

TEST(Library, ParseErrorsCarryLine) {
  try {
    SectionLibrary::parse("# header\nISA 20 x 20 x 4,20,20,4,abc,12.74,1.1\n");
    FAIL();
  } catch (const DesignError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Weld, Strength) {
  EXPECT_EQ(r2(weld_strength(4, 410)), "530.38");
  EXPECT_EQ(weld_strength(0, 410), 0.0);
  EXPECT_EQ(r2(weld_strength(8, 410)), "1060.75");
  EXPECT_DOUBLE_EQ(weld_strength(8, 410), 2 * weld_strength(4, 410));
}

TEST(Tension, WorkedExampleMemberOne) {
  const auto t = tension_checks(isa("20 x 20 x 4"), Material{}, 4.0);
  EXPECT_EQ(r2(t.yield), "32.99");
  EXPECT_EQ(r2(t.rupture), "38.05");
  EXPECT_EQ(r2(t.Tb1), "56.27");
  EXPECT_EQ(r2(t.Tb2), "60.63");
  EXPECT_EQ(r2(t.block_shear), "56.27");
  EXPECT_EQ(r2(t.governing), "32.99");
}

TEST(Tension, YieldLinearInFy) {
  Material m;
  const double y1 = tension_checks(isa("50 x 50 x 6"), m, 4).yield;
  m.fy *= 2;
  m.fu *= 2;
  EXPECT_DOUBLE_EQ(tension_checks(isa("50 x 50 x 6"), m, 4).yield, 2 * y1);
}

TEST(Compression, WorkedExampleChain) {
  // Lo = 1.3463 m is the member-4 length; 1.35 m printed in the text is its rounding
  const auto c = compression_chain(isa("20 x 20 x 4"), Lo_top, Material{});
  EXPECT_EQ(r2(c.lambda_vv), "1.19");
  EXPECT_EQ(r2(c.lambda_phi), "0.06");
  EXPECT_EQ(r2(c.hinged.lambda), "1.25");
  EXPECT_EQ(r2(c.hinged.phi), "1.54");
  EXPECT_EQ(r2(c.hinged.c), "2.44");
  EXPECT_EQ(r2(c.hinged.fcd), "93.24");
  EXPECT_EQ(r2(c.fixed.lambda), "0.87");
  EXPECT_EQ(r2(c.fixed.fcd), "140.42");
  EXPECT_EQ(r2(c.interpolated.lambda), "1.09");
  EXPECT_EQ(r2(c.interpolated.phi), "1.31");
  EXPECT_EQ(r2(c.interpolated.fcd), "111.52");
  EXPECT_EQ(r2(c.interpolated.fcd * 145 / 1000), "16.17");
  EXPECT_NEAR(compression_fcd(isa("20 x 20 x 4"), Lo_top, Material{}, EndCondition::fixed), c.fixed.fcd, 1e-12);
}

TEST(Compression, FourDigitIntermediates) {
  const auto c = compression_chain(isa("20 x 20 x 4"), Lo_top, Material{});
  EXPECT_NEAR(c.lambda_vv, 1.1893, 5e-5);
  EXPECT_NEAR(c.lambda_phi, 0.0563, 5e-5);
  EXPECT_NEAR(c.hinged.lambda, 1.2508, 5e-5);
  EXPECT_NEAR(c.hinged.phi, 1.5397, 5e-5);
  EXPECT_NEAR(c.fixed.lambda, 0.8708, 5e-5);
  EXPECT_NEAR(c.interpolated.lambda, 1.0879, 5e-5);
  EXPECT_NEAR(c.interpolated.phi, 1.3093, 5e-5);
}

TEST(Classification, Examples) {
  const auto c = classify_section(isa("20 x 20 x 4"), epsilon(250));
  EXPECT_EQ(r2(c.b_t), "5.00");
  EXPECT_EQ(r2(c.d_t), "5.00");
  EXPECT_EQ(r2(c.bd_t), "10.00");
  EXPECT_EQ(c.cls, SectionClass::fully_effective);
  EXPECT_EQ(epsilon(250), 1.0);
  const AngleSection thin{"ISA 100 x 100 x 5", 100, 100, 5, 975, 20, 7.7};
  EXPECT_EQ(section_classification(thin, 1.0), SectionClass::slender);
}

TEST(DesignMember, TableRows) {
  const Material m;
  const auto e1 = design_member(37.50, 5.0 / 3, m, Config::twin);
  EXPECT_EQ(e1.section.designation, "ISA 20 x 20 x 4");
  EXPECT_DOUBLE_EQ(e1.total_area(), 290);
  EXPECT_EQ(e1.mode, Mode::tension);
  const auto e4 = design_member(-40.38, Lo_top, m, Config::twin);
  EXPECT_EQ(e4.section.designation, "ISA 25 x 25 x 5");
  EXPECT_DOUBLE_EQ(e4.total_area(), 450);
  EXPECT_EQ(e4.mode, Mode::compression);
  EXPECT_GE(e4.capacity, e4.angle_force);
}

TEST(DesignMember, ZeroForceGetsLightest) {
  const auto e = design_member(0.0, 2.0, Material{}, Config::single);
  EXPECT_EQ(e.mode, Mode::zero_force);
  EXPECT_EQ(e.section, SectionLibrary::standard().lightest());
  EXPECT_TRUE(e.strength_ok && e.slenderness_ok && e.class_ok);
}

TEST(DesignMember, InfeasibleNamesMember) {
  try {
    design_member(-5000.0, 12.0, Material{}, Config::single, SectionLibrary::standard(), {}, 17);
    FAIL();
  } catch (const DesignError& e) {
    EXPECT_NE(std::string(e.what()).find("member 17"), std::string::npos) << e.what();
  }
}

TEST(DesignMember, MonotoneInForce) {
  for (double sign : {1.0, -1.0})
    for (double Lo : {0.8, 1.6, 2.5}) {
      double prev = 0;
      for (double F = 1; F <= 400; F *= 1.3) {
        const double a = design_member(sign * F, Lo, Material{}, Config::twin).section.area;
        EXPECT_GE(a, prev) << "F " << sign * F << " Lo " << Lo;
        prev = a;
      }
    }
}

TEST(DesignMember, ReportedCapacityCoversForce) {
  for (double F : {-80.0, -12.0, 5.0, 60.0, 150.0}) {
    const auto e = design_member(F, 1.2, Material{}, Config::twin);
    EXPECT_GE(e.capacity, e.angle_force) << F;
    EXPECT_LE(e.slenderness, e.slenderness_limit) << F;
  }
}

TEST(DesignTruss, DemonstrationSections) {
  const TrussModel m = fixtures::demonstration_truss(10);
  const auto rep = design_truss(m, solve_all(m));
  const char* expect[11] = {"2 x ISA 20 x 20 x 4", "2 x ISA 20 x 20 x 4", "2 x ISA 20 x 20 x 4",
                            "2 x ISA 25 x 25 x 5", "2 x ISA 40 x 25 x 3", "1 x ISA 20 x 20 x 4",
                            "1 x ISA 20 x 20 x 4", "2 x ISA 40 x 25 x 3", "1 x ISA 20 x 20 x 4",
                            "1 x ISA 20 x 20 x 4", "2 x ISA 25 x 25 x 5"};
  const double area[11] = {290, 290, 290, 450, 376, 145, 145, 376, 145, 145, 450};
  ASSERT_EQ(rep.members.size(), 11u);
  for (int k = 0; k < 11; ++k) {
    const auto& e = rep.members[std::size_t(k)];
    EXPECT_EQ(std::to_string(e.angles) + " x " + e.section.designation, expect[k]) << "member " << k + 1;
    EXPECT_DOUBLE_EQ(e.total_area(), area[k]) << "member " << k + 1;
  }
}

TEST(DesignTruss, ZeroLoadsGiveLightestEverywhere) {
  const TrussModel m = fixtures::demonstration_truss(0);
  for (const auto& e : design_truss(m, solve_all(m)).members) {
    EXPECT_EQ(e.mode, Mode::zero_force);
    EXPECT_EQ(e.section, SectionLibrary::standard().lightest());
  }
}

TEST(DesignTruss, MirrorMembersMatch) {
  const TrussModel m = fixtures::demonstration_truss(10);
  const auto rep = design_truss(m, solve_all(m));
  for (auto [a, b] : {std::pair{4, 11}, {5, 8}, {6, 10}, {7, 9}, {1, 3}})
    EXPECT_EQ(rep.members[std::size_t(a - 1)].section, rep.members[std::size_t(b - 1)].section) << a << "/" << b;
}
