#pragma once

#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "relspec/daily.hpp"
#include "relspec/eigensys.hpp"
#include "relspec/selfnorm.hpp"

namespace relspec {

struct AnalysisOptions {
  int order = 41;
  int min_days = 360;
  double epsilon = 0.01;
  std::vector<double> angles{std::numbers::pi / 16, std::numbers::pi / 8,
                             std::numbers::pi / 4, 2 * std::numbers::pi / 5};
  int eigenfunctions = 5;  // tested j = 1..eigenfunctions
  int eigenvalues = 12;    // tested j = 1..eigenvalues
  std::vector<double> divisors{50, 100, 200};
  std::vector<double> alphas{0.10, 0.05, 0.01};
  int nu_k = 20;
  bool center = true;  // center curves before the scan and within segments
};

/// Squared-distance threshold for eigenfunctions at geometric angle phi.
inline double angle_threshold(double phi) { return 2.0 - 2.0 * std::cos(phi); }

struct RelevanceCell {
  int j = 0;
  double threshold = 0.0;
  double statistic = 0.0;
  double normalizer = 0.0;
  double ratio = 0.0;
  double p_value = 0.0;             // P(W <= ratio)
  std::vector<bool> reject;         // one per alpha, same order as options
  std::string label;                // "TRUE" or "FALSE>99%" style
  std::vector<std::string> warnings;

  bool retained() const { return label == "TRUE"; }
};

struct AnalysisReport {
  AnalysisOptions options;
  std::vector<int> years;
  std::vector<int> excluded_years;
  int k_hat = 0;
  double theta_hat = 0.0;
  int split_year = 0;  // last year of the first segment
  EigenSystem pre;
  EigenSystem post;
  // [angle][j-1] and [divisor][j-1]
  std::vector<std::vector<RelevanceCell>> eigenfunction_cells;
  std::vector<std::vector<RelevanceCell>> eigenvalue_cells;
  std::vector<std::string> warnings;
};

AnalysisReport analyze(const YearlyCurves& curves, const AnalysisOptions& options,
                       const PivotDistribution& pivot);

/// Writes report.json, eigenfunction_relevance.csv, eigenvalue_relevance.csv,
/// relevance_cells.csv, eigenvalues.csv, eigenfunctions.csv and report.txt.
void write_report(const std::filesystem::path& out_dir, const AnalysisReport& report);

std::string format_report(const AnalysisReport& report);

}  // namespace relspec
