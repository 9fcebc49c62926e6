#pragma once

#include "trussopt/is800.hpp"
#include "trussopt/model.hpp"
#include "trussopt/sizeopt.hpp"
#include "trussopt/topopt.hpp"
#include "trussopt/truss.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trussopt::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

inline constexpr std::string_view model_header = "# truss model v1";

std::string serialize(const TrussModel& model);
TrussModel parse_model(std::string_view text);

// Shortest representation that parses back to the same double.
std::string format_number(double v);

std::string design_report_text(const is800::DesignReport& report);
std::string member_block(const is800::DesignReportEntry& e);

// Binary PGM (P5), dark = material; `upscale` repeats each element as a block.
std::string density_image(const Eigen::MatrixXd& x, int upscale = 1);
inline std::string density_image(const DensityField& f, int upscale = 1) { return density_image(f.x, upscale); }
// Inverse of density_image for upscale 1: pixel rows back to a grey-level matrix.
Eigen::MatrixXd read_pgm(std::string_view bytes);

struct ComparisonRow {
  int member = 0;
  double force = 0;      // kN
  double length = 0;     // m
  std::string designation;  // "2 x ISA 20 x 20 x 4"
  double gross_area = 0;    // mm^2, all angles
  double optimized_area = 0;  // mm^2
};

std::vector<ComparisonRow> comparison_table(const is800::DesignReport& design,
                                            const sizeopt::SizeOptResult& opt);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

// One column of member forces (kN) per combination.
std::string forces_csv(const TrussModel& model, const std::vector<AnalysisResult>& results);

}  // namespace trussopt::io
