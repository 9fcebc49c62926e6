#pragma once

#include "trussopt/model.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace trussopt::advisor {

struct Suggestion {
  std::string type;  // "fink", "pratt", "howe", "warren_verticals", "compound_pratt"
  double span = 0, height = 0;  // m
  int panels = 0;               // bottom-chord panels
  TrussModel model;
};

class AdvisorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Generators take the span and rise; panel counts below the minimum are raised.
// Every model: hinged left support, roller (y) at the right, 1 kN dead load
// down at each loaded chord node, default combinations.
TrussModel fink(double span, double height);
TrussModel pratt(double span, double height, int panels);
TrussModel howe(double span, double height, int panels);
TrussModel warren_verticals(double span, double height, int panels);
TrussModel compound_pratt(double span, double height, int panels);

// Rule table: span <= 10 m fink, pratt, howe; <= 20 m pratt, warren with
// verticals; beyond that compound pratt. Panels ceil(span / 2 m), rise span / 6.
std::vector<Suggestion> advise(double span);

}  // namespace trussopt::advisor
