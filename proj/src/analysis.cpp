#include "relspec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "relspec/changepoint.hpp"
#include "relspec/error.hpp"

namespace relspec {

namespace {

RelevanceCell make_cell(const DiffPath& path, double normalizer, double threshold,
                        const AnalysisOptions& options, const PivotDistribution& pivot) {
  RelevanceCell cell;
  cell.j = path.j;
  cell.threshold = threshold;
  double weakest_alpha = 0.0;
  double strongest_rejected = 1.0;
  for (double alpha : options.alphas) {
    const TestResult r =
        decide(path, normalizer, threshold, pivot, alpha, TestMode::kRelevant);
    cell.statistic = r.statistic;
    cell.normalizer = r.normalizer;
    cell.ratio = r.ratio;
    cell.p_value = r.p_value;
    cell.warnings = r.warnings;
    cell.reject.push_back(r.reject);
    weakest_alpha = std::max(weakest_alpha, alpha);
    if (r.reject) strongest_rejected = std::min(strongest_rejected, alpha);
  }
  if (strongest_rejected >= 1.0) {
    cell.label = "TRUE";
  } else {
    std::ostringstream s;
    s << "FALSE>" << std::round((1.0 - strongest_rejected) * 100.0) << "%";
    cell.label = s.str();
  }
  return cell;
}

}  // namespace

AnalysisReport analyze(const YearlyCurves& curves, const AnalysisOptions& options,
                       const PivotDistribution& pivot) {
  const FunctionalSample& sample = curves.coeffs;
  if (sample.size() < 8) {
    throw Error(ErrorCode::kInvalidArgument,
                "analysis needs at least 8 years, got " + std::to_string(sample.size()));
  }
  if (options.alphas.empty()) throw Error(ErrorCode::kInvalidArgument, "empty alpha grid");
  const int max_j = std::max(options.eigenfunctions, options.eigenvalues);
  if (max_j > sample.dimension()) {
    throw Error(ErrorCode::kOutOfRange, "more eigenpairs requested than basis functions");
  }

  AnalysisReport report;
  report.options = options;
  report.years = curves.years;
  report.excluded_years = curves.excluded_years;

  FunctionalSample scan = sample;
  if (options.center) scan.rows.rowwise() -= sample.rows.colwise().mean();
  const ChangePointEstimate cp = estimate_changepoint(scan, options.epsilon);
  report.k_hat = cp.k_hat;
  report.theta_hat = cp.theta_hat;
  report.split_year = curves.years[cp.k_hat - 1];
  const SplitSample split = split_at(sample, cp.k_hat);
  const bool testable = split.pre.size() >= 2 && split.post.size() >= 2;
  if (!testable) {
    report.warnings.push_back(
        "estimated change leaves a segment with a single year; all cells retained");
  }

  const int p = std::min(sample.dimension(), max_j + 1);
  report.pre = eigendecompose(sequential_kernel(split.pre, 1.0, options.center), p);
  report.post = eigendecompose(sequential_kernel(split.post, 1.0, options.center), p);
  for (int i = 0; i < report.post.count(); ++i) {
    align_sign(report.post.eigenfunctions.col(i), report.pre.eigenfunctions.col(i));
  }

  const NuMeasure nu(options.nu_k);
  auto path_for = [&](int j, PathKind kind) {
    if (testable) return diff_path(split, j, nu, kind, options.center);
    DiffPath empty;
    empty.j = j;
    empty.kind = kind;
    empty.lambdas = nu.path_grid();
    empty.values.assign(empty.lambdas.size(), 0.0);
    return empty;
  };
  std::vector<DiffPath> fun_paths;
  for (int j = 1; j <= options.eigenfunctions; ++j) {
    fun_paths.push_back(path_for(j, PathKind::kEigenfunction));
  }
  for (double phi : options.angles) {
    std::vector<RelevanceCell> row;
    for (const DiffPath& path : fun_paths) {
      row.push_back(make_cell(path, self_normalizer(path, nu), angle_threshold(phi), options,
                              pivot));
    }
    report.eigenfunction_cells.push_back(std::move(row));
  }

  std::vector<DiffPath> val_paths;
  for (int j = 1; j <= options.eigenvalues; ++j) {
    val_paths.push_back(path_for(j, PathKind::kEigenvalue));
  }
  for (double divisor : options.divisors) {
    std::vector<RelevanceCell> row;
    for (const DiffPath& path : val_paths) {
      const double tau = report.pre.eigenvalues(path.j - 1);
      row.push_back(make_cell(path, self_normalizer(path, nu), std::max(0.0, tau / divisor),
                              options, pivot));
    }
    report.eigenvalue_cells.push_back(std::move(row));
  }

  for (const auto* paths : {&fun_paths, &val_paths}) {
    for (const DiffPath& path : *paths) {
      for (const auto& w : path.warnings) {
        const std::string msg = std::string(to_string(path.kind)) + " test j=" +
                                std::to_string(path.j) + ": " + w;
        if (std::find(report.warnings.begin(), report.warnings.end(), msg) ==
            report.warnings.end()) {
          report.warnings.push_back(msg);
        }
      }
    }
  }
  return report;
}

namespace {

nlohmann::json cell_json(const RelevanceCell& c) {
  return {{"j", c.j},           {"threshold", c.threshold}, {"statistic", c.statistic},
          {"normalizer", c.normalizer}, {"ratio", c.ratio}, {"p_value", c.p_value},
          {"reject", c.reject}, {"label", c.label},        {"warnings", c.warnings}};
}

nlohmann::json matrix_json(const std::vector<std::vector<RelevanceCell>>& m) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : m) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    out.push_back(r);
  }
  return out;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << std::setprecision(12);
  return out;
}

}  // namespace

std::string format_report(const AnalysisReport& r) {
  std::ostringstream s;
  s << "years: " << r.years.front() << "-" << r.years.back() << " (" << r.years.size()
    << " retained";
  if (!r.excluded_years.empty()) {
    s << ", excluded:";
    for (int y : r.excluded_years) s << " " << y;
  }
  s << ")\n";
  s << "estimated change: k_hat=" << r.k_hat << " theta_hat=" << std::setprecision(4)
    << r.theta_hat << " (last year of first segment: " << r.split_year << ")\n\n";

  s << "eigenvalues (first segment / second segment)\n";
  for (int i = 0; i < std::min(r.pre.count(), r.options.eigenvalues); ++i) {
    s << "  j=" << std::setw(2) << i + 1 << "  " << std::setw(12) << r.pre.eigenvalues(i)
      << "  " << std::setw(12) << r.post.eigenvalues(i) << "\n";
  }

  s << "\neigenfunction relevance (TRUE = no relevant change at alpha="
    << *std::max_element(r.options.alphas.begin(), r.options.alphas.end()) << ")\n";
  s << std::setw(12) << "angle";
  for (int j = 1; j <= r.options.eigenfunctions; ++j) s << std::setw(12) << ("i=" + std::to_string(j));
  s << "\n";
  for (std::size_t a = 0; a < r.eigenfunction_cells.size(); ++a) {
    std::ostringstream angle;
    angle << std::setprecision(4) << r.options.angles[a] / std::numbers::pi << "pi";
    s << std::setw(12) << angle.str();
    for (const auto& c : r.eigenfunction_cells[a]) s << std::setw(12) << c.label;
    s << "\n";
  }

  s << "\neigenvalue relevance (threshold tau_j/divisor)\n";
  s << std::setw(10) << "divisor";
  for (int j = 1; j <= r.options.eigenvalues; ++j) s << std::setw(11) << ("j=" + std::to_string(j));
  s << "\n";
  for (std::size_t d = 0; d < r.eigenvalue_cells.size(); ++d) {
    s << std::setw(10) << r.options.divisors[d];
    for (const auto& c : r.eigenvalue_cells[d]) s << std::setw(11) << c.label;
    s << "\n";
  }
  if (!r.warnings.empty()) {
    s << "\nwarnings:\n";
    for (const auto& w : r.warnings) s << "  " << w << "\n";
  }
  return s.str();
}

void write_report(const std::filesystem::path& out_dir, const AnalysisReport& r) {
  std::filesystem::create_directories(out_dir);
  const auto& o = r.options;

  nlohmann::json doc{
      {"options",
       {{"order", o.order},
        {"min_days", o.min_days},
        {"epsilon", o.epsilon},
        {"angles", o.angles},
        {"eigenfunctions", o.eigenfunctions},
        {"eigenvalues", o.eigenvalues},
        {"divisors", o.divisors},
        {"alphas", o.alphas},
        {"nu_k", o.nu_k},
        {"center", o.center}}},
      {"years", r.years},
      {"excluded_years", r.excluded_years},
      {"k_hat", r.k_hat},
      {"theta_hat", r.theta_hat},
      {"split_year", r.split_year},
      {"eigenvalues_pre", to_vector(r.pre.eigenvalues)},
      {"eigenvalues_post", to_vector(r.post.eigenvalues)},
      {"eigenfunction_thresholds", [&] {
         std::vector<double> t;
         for (double phi : o.angles) t.push_back(angle_threshold(phi));
         return t;
       }()},
      {"eigenfunction_relevance", matrix_json(r.eigenfunction_cells)},
      {"eigenvalue_relevance", matrix_json(r.eigenvalue_cells)},
      {"warnings", r.warnings}};
  open_out(out_dir / "report.json") << doc.dump(2) << "\n";
  open_out(out_dir / "report.txt") << format_report(r);

  {
    auto out = open_out(out_dir / "eigenfunction_relevance.csv");
    out << "angle,delta_v";
    for (int j = 1; j <= o.eigenfunctions; ++j) out << ",j" << j;
    out << "\n";
    for (std::size_t a = 0; a < r.eigenfunction_cells.size(); ++a) {
      out << o.angles[a] << "," << angle_threshold(o.angles[a]);
      for (const auto& c : r.eigenfunction_cells[a]) out << "," << c.label;
      out << "\n";
    }
  }
  {
    auto out = open_out(out_dir / "eigenvalue_relevance.csv");
    out << "divisor";
    for (int j = 1; j <= o.eigenvalues; ++j) out << ",j" << j;
    out << "\n";
    for (std::size_t d = 0; d < r.eigenvalue_cells.size(); ++d) {
      out << o.divisors[d];
      for (const auto& c : r.eigenvalue_cells[d]) out << "," << c.label;
      out << "\n";
    }
  }
  {
    auto out = open_out(out_dir / "relevance_cells.csv");
    out << "test,row,j,threshold,statistic,normalizer,ratio,p_value,label\n";
    auto dump = [&](const char* test, const auto& matrix, const std::vector<double>& keys) {
      for (std::size_t i = 0; i < matrix.size(); ++i) {
        for (const auto& c : matrix[i]) {
          out << test << "," << keys[i] << "," << c.j << "," << c.threshold << ","
              << c.statistic << "," << c.normalizer << "," << c.ratio << "," << c.p_value
              << "," << c.label << "\n";
        }
      }
    };
    dump("eigenfunction", r.eigenfunction_cells, o.angles);
    dump("eigenvalue", r.eigenvalue_cells, o.divisors);
  }
  {
    auto out = open_out(out_dir / "eigenvalues.csv");
    out << "j,pre,post\n";
    for (int i = 0; i < r.pre.count(); ++i) {
      out << i + 1 << "," << r.pre.eigenvalues(i) << "," << r.post.eigenvalues(i) << "\n";
    }
  }
  {
    // Eigenfunctions evaluated on the 365-day grid.
    auto out = open_out(out_dir / "eigenfunctions.csv");
    const int shown = std::min(r.pre.count(), o.eigenfunctions);
    out << "t";
    for (int j = 1; j <= shown; ++j) out << ",v" << j << "_pre,v" << j << "_post";
    out << "\n";
    const int order = static_cast<int>(r.pre.eigenfunctions.rows());
    for (int d = 0; d < 365; ++d) {
      const double x = (d + 0.5) / 365.0;
      out << x;
      for (int j = 0; j < shown; ++j) {
        double pre = 0.0;
        double post = 0.0;
        for (int k = 0; k < order; ++k) {
          const double f = fourier_value(order, k, x);
          pre += r.pre.eigenfunctions(k, j) * f;
          post += r.post.eigenfunctions(k, j) * f;
        }
        out << "," << pre << "," << post;
      }
      out << "\n";
    }
  }
}

}  // namespace relspec
