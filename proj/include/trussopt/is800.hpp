#pragma once

#include "trussopt/model.hpp"
#include "trussopt/truss.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trussopt::is800 {

struct AngleSection {
  std::string designation;  // "ISA 20 x 20 x 4"
  double L = 0, B = 0, t = 0;  // mm, L >= B
  double area = 0;             // mm^2
  double r_min = 0;            // mm
  double weight = 0;           // kg/m
  bool operator==(const AngleSection&) const = default;
  // "20 x 20 x 4"
  std::string size() const;
};

class DesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sorted by ascending area; ties by longer then shorter leg, then thickness.
class SectionLibrary {
 public:
  static SectionLibrary parse(std::string_view text);
  static SectionLibrary load(const std::string& path);
  // The library shipped with the engine.
  static const SectionLibrary& standard();

  const std::vector<AngleSection>& sections() const { return sections_; }
  const AngleSection& lightest() const;
  const AngleSection& find(const std::string& designation) const;

 private:
  std::vector<AngleSection> sections_;
};

constexpr double gamma_m0 = 1.1;
constexpr double alpha_angle = 0.49;

inline double epsilon(double fy) { return std::sqrt(250.0 / fy); }

// Design strength of a fillet weld per mm run, N/mm.
inline double weld_strength(double weld_size, double fu) { return weld_size * 0.7 * 0.462 * fu; }

struct TensionStrengths {
  double yield = 0, rupture = 0;  // kN
  double weld_length = 0;         // mm, sized to develop the yield capacity
  double Avg = 0, Avn = 0, Atg = 0, Atn = 0;  // mm^2
  double Tb1 = 0, Tb2 = 0, block_shear = 0;   // kN
  double governing = 0;                       // kN
};

// Single-angle strengths; the connected leg is the longer one.
TensionStrengths tension_checks(const AngleSection& s, const Material& m, double weld_size);

enum class EndCondition { hinged, fixed, interpolated };

struct BucklingTerms {
  double k1 = 0, k2 = 0, k3 = 0;
  double lambda = 0, phi = 0, c = 0, fcd = 0;
};

struct CompressionChain {
  double lambda_vv = 0, lambda_phi = 0;
  BucklingTerms hinged, fixed, interpolated;  // interpolated.lambda is lambda_e
};

// Lo in m.
CompressionChain compression_chain(const AngleSection& s, double Lo, const Material& m);
double compression_fcd(const AngleSection& s, double Lo, const Material& m, EndCondition end);

enum class SectionClass { fully_effective, slender };

struct Classification {
  double b_t = 0, d_t = 0, bd_t = 0;
  double limit_leg = 0, limit_sum = 0;
  SectionClass cls = SectionClass::fully_effective;
};

Classification classify_section(const AngleSection& s, double eps);
inline SectionClass section_classification(const AngleSection& s, double eps) {
  return classify_section(s, eps).cls;
}

enum class Mode { tension, compression, zero_force };
enum class Config { single, twin };

struct DesignParams {
  double weld_size = 4.0;         // mm
  double assumed_fcd = 90.0;      // N/mm^2, compression trial area
  double tension_slenderness = 350.0;
  double compression_slenderness = 180.0;
  double zero_force = 1e-6;       // kN
};

struct DesignReportEntry {
  int member = 0;
  double force = 0;   // kN, tension positive
  double length = 0;  // m
  Mode mode = Mode::zero_force;
  Config config = Config::single;
  AngleSection section;
  int angles = 1;
  double angle_force = 0;     // kN carried by each angle
  double trial_area = 0;      // mm^2
  double weld_strength = 0;   // N/mm
  std::optional<TensionStrengths> tension;
  std::optional<Classification> classification;
  std::optional<CompressionChain> compression;
  double capacity = 0;        // kN per angle
  double slenderness = 0;
  double slenderness_limit = 0;
  bool strength_ok = true, slenderness_ok = true, class_ok = true;

  double total_area() const { return angles * section.area; }
};

struct DesignReport {
  std::string material;
  std::vector<DesignReportEntry> members;
};

// Picks the first library section, scanning upward from the trial area,
// that passes every check. Lo in m, F in kN.
DesignReportEntry design_member(double F, double Lo, const Material& material, Config config,
                                const SectionLibrary& lib = SectionLibrary::standard(),
                                const DesignParams& params = {}, int member_id = 0);

DesignReport design_truss(const TrussModel& model, const std::vector<AnalysisResult>& results,
                          const SectionLibrary& lib = SectionLibrary::standard(),
                          const DesignParams& params = {});

std::string to_string(Mode m);

}  // namespace trussopt::is800
