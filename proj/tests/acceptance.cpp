// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Pass criterion numbers to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "relspec/analysis.hpp"
#include "relspec/changepoint.hpp"
#include "relspec/covkern.hpp"
#include "relspec/daily.hpp"
#include "relspec/datagen.hpp"
#include "relspec/eigensys.hpp"
#include "relspec/harness.hpp"
#include "relspec/selfnorm.hpp"

using namespace relspec;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "FAILED " << what << "; ";
    }
  }
};

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string fmtg(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const PivotDistribution& default_pivot() {
  static const PivotDistribution p =
      simulate_pivot(20, kDefaultPivotReplicates, kDefaultPivotSeed);
  return p;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// 1. Pivot quantiles against the tabulated values.
void pivot_quantiles(Outcome& o) {
  struct Row {
    int k;
    double q99, q95, q90;
  };
  for (const Row& row : {Row{20, 16.479, 9.895, 7.097}, Row{30, 16.248, 9.925, 7.149}}) {
    const auto start = std::chrono::steady_clock::now();
    const PivotDistribution p = simulate_pivot_serial(row.k, 500000, kDefaultPivotSeed);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double got[] = {p.quantile(0.99), p.quantile(0.95), p.quantile(0.90)};
    const double want[] = {row.q99, row.q95, row.q90};
    o.detail << "K=" << row.k << " q=(" << fmt(got[0], 3) << "," << fmt(got[1], 3) << ","
             << fmt(got[2], 3) << ") " << fmt(secs, 1) << "s; ";
    for (int i = 0; i < 3; ++i) {
      o.check(rel_err(got[i], want[i]) <= 0.02,
              "K=" + std::to_string(row.k) + " quantile " + fmt(got[i], 3) + " vs " + fmt(want[i], 3));
    }
    o.check(secs < 30.0, "serial runtime over 30 s");
  }
}

// 2. Closed-form squared kernel distances.
void kernel_distances(Outcome& o) {
  const double sum_tau_sq = 1.0 + 1.0 / 16 + 1.0 / 81 + 1.0 / 256;
  for (double e : {0.1, 0.5, 1.0}) {
    DGPSpec spec;
    spec.break_kind = BreakKind::kEigenvalueShift;
    spec.magnitude = e;
    const auto [c1, c2] = population_kernels(spec);
    const double d = kernel_distance_sq(c1, c2);
    // The formula E * sum_{k<=4} tau_k^2 at 1e-6 relative, and the printed
    // constant 1.07875 at the five decimals it is given to.
    o.check(rel_err(d, e * sum_tau_sq) <= 1e-6, "E=" + fmt(e, 1) + " vs E*sum tau^2");
    o.check(std::abs(d / e - 1.07875) <= 5e-6, "E=" + fmt(e, 1) + " vs 1.07875*E");
  }
  o.detail << "eigenvalue shift: d/E=" << fmt(sum_tau_sq, 7) << "; ";
  for (double phi : {std::numbers::pi / 8, std::numbers::pi / 4}) {
    DGPSpec spec;
    spec.break_kind = BreakKind::kRotation;
    spec.magnitude = phi;
    const auto [c1, c2] = population_kernels(spec);
    const double d = kernel_distance_sq(c1, c2);
    const double stated = 5.0 * (1.0 - std::cos(phi)) / 2.0;
    o.detail << "rotation phi=" << fmt(phi, 4) << ": " << fmt(d, 6) << " vs 5(1-cos)/2="
             << fmt(stated, 6) << "; ";
    o.check(rel_err(d, stated) <= 1e-6, "rotation phi=" + fmt(phi, 4) + " vs 5(1-cos phi)/2");
  }
}

// 3. Eigen recovery from Mercer expansions.
void eigen_oracle(Outcome& o) {
  const int order = 21;
  Eigen::VectorXd tau(order);
  for (int k = 0; k < order; ++k) tau(k) = 1.0 / ((k + 1.0) * (k + 1.0));
  const EigenSystem ec =
      eigendecompose({tau.asDiagonal().toDenseMatrix(), Representation::kCoefficient}, order);
  const double coef_err = (ec.eigenvalues - tau).cwiseAbs().maxCoeff();
  double coef_fun = 0.0;
  for (int k = 0; k < order; ++k) {
    coef_fun = std::max(coef_fun, aligned_distance(ec.eigenfunction(k),
                                                   Eigen::VectorXd::Unit(order, k), 1.0));
  }

  const FourierBasis basis = fourier_basis(order, 200);
  const Eigen::MatrixXd& f = basis.eval();
  const Eigen::MatrixXd grid_kernel = f * tau.asDiagonal() * f.transpose();
  const EigenSystem eg = eigendecompose({grid_kernel, Representation::kGrid}, order);
  const double grid_err = (eg.eigenvalues - tau).cwiseAbs().maxCoeff();
  double grid_fun = 0.0;
  for (int k = 0; k < order; ++k) {
    grid_fun = std::max(grid_fun,
                        aligned_distance(GridFunction(eg.eigenfunction(k)), basis.element(k)));
  }
  o.detail << "coef eigenvalues " << fmtg(coef_err) << ", grid eigenvalues " << fmtg(grid_err)
           << ", eigenfunctions " << fmtg(std::max(coef_fun, grid_fun)) << "; ";
  o.check(coef_err <= 1e-8, "coefficient eigenvalues");
  o.check(grid_err <= 1e-6, "grid eigenvalues");
  o.check(coef_fun <= 1e-6 && grid_fun <= 1e-6, "eigenfunctions");
}

ExperimentConfig eigenvalue_config() {
  ExperimentConfig c;
  c.name = "acceptance_eigenvalue";
  c.kind = PathKind::kEigenvalue;
  c.break_kind = BreakKind::kEigenvalueShift;
  c.j = 1;
  c.delta = 0.1;
  c.epsilon = 0.05;
  c.sample_sizes = {600};
  c.replicates = 4000;
  c.seed = 4;
  return c;
}

ExperimentConfig eigenfunction_config() {
  ExperimentConfig c = eigenvalue_config();
  c.name = "acceptance_eigenfunction";
  c.kind = PathKind::kEigenfunction;
  c.break_kind = BreakKind::kRotation;
  c.seed = 5;
  return c;
}

// 4. Level at the boundary of the eigenvalue hypothesis.
void boundary_level(Outcome& o) {
  ExperimentConfig c = eigenvalue_config();
  c.magnitudes = {0.1};
  const RejectionRow r = run_experiment(c, default_pivot()).rows.front();
  o.detail << "E=0.1 N=600 rate=" << fmt(r.rate) << " (se " << fmt(r.se) << "); ";
  o.check(r.rate >= 0.03 && r.rate <= 0.07, "rate outside [0.03, 0.07]");
}

void power_shape(Outcome& o, const ExperimentConfig& base, double interior,
                 double boundary, const std::string& label, bool check_boundary) {
  ExperimentConfig c = base;
  c.magnitudes = {interior};
  const RejectionRow in = run_experiment(c, default_pivot()).rows.front();
  o.detail << label << " interior rate=" << fmt(in.rate) << "; ";
  o.check(in.rate <= 0.05 + 2 * in.se, label + " interior rate above 0.05 + 2 SE");

  c.magnitudes = default_magnitudes(base.break_kind, base.j, base.delta);
  const RejectionTable t = run_experiment(c, default_pivot());
  o.detail << label << " grid rates=(";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    o.detail << (i ? "," : "") << fmt(t.rows[i].rate, 3);
    if (i == 0) continue;
    const RejectionRow& a = t.rows[i - 1];
    const RejectionRow& b = t.rows[i];
    const double slack = 2 * std::max(a.se, b.se);
    o.check(b.rate >= a.rate - slack, label + " rate decreases at magnitude " + fmt(b.magnitude));
  }
  o.detail << "); ";
  if (check_boundary) {
    c.magnitudes = {boundary};
    const RejectionRow at = run_experiment(c, default_pivot()).rows.front();
    o.detail << label << " boundary rate=" << fmt(at.rate) << "; ";
    o.check(at.rate >= 0.03 && at.rate <= 0.07, label + " boundary rate outside [0.03, 0.07]");
  }
}

// 5. Interior null and monotone power for both tests.
void interior_and_power(Outcome& o) {
  power_shape(o, eigenvalue_config(), 0.01, 0.1, "eigenvalue", false);
  power_shape(o, eigenfunction_config(), std::acos(0.995), std::acos(0.95), "eigenfunction",
              true);
}

// 6. Change-point localization improves with N.
void changepoint_rate(Outcome& o) {
  double previous = 1.0;
  for (int n : {200, 400, 600, 800}) {
    std::vector<double> err;
    for (int rep = 0; rep < 500; ++rep) {
      DGPSpec spec;
      spec.n = n;
      spec.break_kind = BreakKind::kEigenvalueShift;
      spec.magnitude = 0.5;
      spec.seed = replicate_seed(6, n, 0.5, rep);
      err.push_back(std::abs(estimate_changepoint(generate(spec), 0.05).theta_hat - 0.5));
    }
    std::nth_element(err.begin(), err.begin() + 250, err.end());
    const double median = err[250];
    o.detail << "N=" << n << " median=" << fmt(median) << "; ";
    if (n == 800) {
      o.check(median < previous, "median does not decrease from N=200 to N=800");
      o.check(median <= 0.02, "median at N=800 above 0.02");
    }
    if (n == 200) previous = median;
  }
}

// 7. Trimming: boundary mass under no change and stable power.
void epsilon_sensitivity(Outcome& o) {
  const int reps = 10000;
  const int n = 400;
  int boundary0 = 0;
  int outside5 = 0;
  std::vector<double> th0(reps), th5(reps);
#pragma omp parallel for schedule(dynamic, 16)
  for (int rep = 0; rep < reps; ++rep) {
    DGPSpec spec;
    spec.n = n;
    spec.seed = replicate_seed(7, n, 0.0, rep);
    const FunctionalSample s = generate(spec);
    th0[rep] = estimate_changepoint(s, 0.0).theta_hat;
    th5[rep] = estimate_changepoint(s, 0.05).theta_hat;
  }
  for (int rep = 0; rep < reps; ++rep) {
    if (th0[rep] < 0.05 || th0[rep] >= 0.95) ++boundary0;
    if (th5[rep] < 0.05 || th5[rep] > 0.95) ++outside5;
  }
  const double freq0 = static_cast<double>(boundary0) / reps;
  o.detail << "no change: eps=0 outer-bin freq=" << fmt(freq0) << ", eps=0.05 outside="
           << outside5 << "; ";
  o.check(freq0 > 0.10, "eps=0 boundary frequency not above 10%");
  o.check(outside5 == 0, "eps=0.05 estimates outside [0.05, 0.95]");

  ExperimentConfig c = eigenfunction_config();
  c.sample_sizes = {n};
  c.magnitudes = {2 * std::acos(0.95)};
  const std::vector<double> eps{0.0, 0.05};
  const auto sweep = epsilon_sweep(c, eps, default_pivot());
  const RejectionRow& a = sweep[0].table.rows.front();
  const RejectionRow& b = sweep[1].table.rows.front();
  const double se = std::max(a.se, b.se);
  o.detail << "power at phi=" << fmt(c.magnitudes[0], 3) << ": eps=0 " << fmt(a.rate)
           << ", eps=0.05 " << fmt(b.rate) << " (se " << fmt(se) << "); ";
  o.check(a.rate > 0.0 && a.rate < 1.0, "power saturated; difference check uninformative");
  o.check(std::abs(a.rate - b.rate) < 3 * se, "power differs by 3 SE or more");
}

// 8. Brute-force oracles.
void brute_force(Outcome& o) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  double cusum_worst = 0.0;
  for (int n = 2; n <= 20; ++n) {
    for (int dim : {1, 3, 7}) {
      Eigen::MatrixXd x(n, dim);
      for (auto& v : x.reshaped()) v = normal(rng);
      const FunctionalSample s = FunctionalSample::coefficients(x);
      const std::vector<double> scan = cusum_scan(s);
      for (int k = 1; k < n; ++k) {
        double total = 0.0;
        for (int a = 0; a < dim; ++a) {
          for (int b = 0; b < dim; ++b) {
            double pre = 0.0, post = 0.0;
            for (int i = 0; i < k; ++i) pre += x(i, a) * x(i, b);
            for (int i = k; i < n; ++i) post += x(i, a) * x(i, b);
            const double diff = pre / k - post / (n - k);
            total += diff * diff;
          }
        }
        const double oracle = static_cast<double>(k) * (n - k) / (static_cast<double>(n) * n) * total;
        cusum_worst = std::max(cusum_worst, std::abs(scan[k - 1] - oracle));
      }
    }
  }
  o.check(cusum_worst <= 1e-10, "cusum streaming vs brute force");

  double norm_worst = 0.0;
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  for (int k : {2, 10, 20, 30}) {
    const NuMeasure nu(k);
    for (int trial = 0; trial < 50; ++trial) {
      DiffPath p;
      p.lambdas = nu.path_grid();
      for (std::size_t i = 0; i < p.lambdas.size(); ++i) p.values.push_back(unif(rng));
      double sum = 0.0;
      for (int l = 1; l < k; ++l) {
        const double lam = static_cast<double>(l) / k;
        sum += lam * lam * lam * lam * (p.values[l - 1] - p.values.back()) *
               (p.values[l - 1] - p.values.back());
      }
      norm_worst = std::max(norm_worst, std::abs(self_normalizer(p, nu) - std::sqrt(sum / (k - 1))));
    }
  }
  o.check(norm_worst <= 1e-12, "self-normalizer vs direct sum");

  // Pivot whose type-7 quantiles at 0.90, 0.95, 0.99 are the tabulated K=20 values.
  std::vector<double> w(101);
  for (int i = 0; i <= 100; ++i) w[i] = (i - 50) * 0.1;
  const double table[] = {7.097, 9.895, 16.479};
  const int at[] = {90, 95, 99};
  w[90] = 7.097;
  for (int i = 91; i < 95; ++i) w[i] = 7.097 + (i - 90) * (9.895 - 7.097) / 5;
  w[95] = 9.895;
  for (int i = 96; i < 99; ++i) w[i] = 9.895 + (i - 95) * (16.479 - 9.895) / 4;
  w[99] = 16.479;
  w[100] = 20.0;
  const PivotDistribution pivot(20, 101, 0, w);
  const double alphas[] = {0.10, 0.05, 0.01};
  int decisions = 0;
  bool decide_ok = true;
  for (int q = 0; q < 3; ++q) {
    decide_ok = decide_ok && pivot.quantile(1.0 - alphas[q]) == table[at[q] == 90 ? 0 : at[q] == 95 ? 1 : 2];
    for (double stat : {0.2, 0.5, 0.9, 1.2, 1.6, 2.0, 2.5}) {
      DiffPath p;
      p.lambdas = NuMeasure(20).path_grid();
      p.values.assign(20, stat);
      const double delta = 0.1;
      const double normalizer = 0.1;
      const double ratio = (stat - delta) / normalizer;
      const bool expect = ratio > table[q];
      const TestResult r = decide(p, normalizer, delta, pivot, alphas[q], TestMode::kRelevant);
      decide_ok = decide_ok && r.reject == expect && std::abs(r.ratio - ratio) <= 1e-12;
      ++decisions;
    }
  }
  o.check(decide_ok, "decide vs hand-computed ratios");
  o.detail << "cusum max err " << fmtg(cusum_worst) << ", normalizer max err "
           << fmtg(norm_worst) << ", " << decisions << " decisions checked; ";
}

YearlyCurves daily_dataset(const std::filesystem::path& dir, BreakKind kind, double phi,
                           std::uint64_t seed) {
  DGPSpec spec;
  spec.n = 123;
  spec.order = 41;
  spec.theta0 = 92.0 / 123.0;
  spec.break_kind = kind;
  spec.magnitude = phi;
  spec.seed = seed;
  const auto path = dir / ("daily_" + std::to_string(seed) + ".csv");
  write_daily_csv(path, generate(spec), 1896, 9.0);
  YearlyCurves curves = ingest_daily(path, 41);
  std::filesystem::remove(path);
  return curves;
}

// 9. End-to-end daily pipeline on synthetic data.
void daily_pipeline(Outcome& o) {
  const auto dir = std::filesystem::temp_directory_path() / "relspec_acceptance";
  std::filesystem::create_directories(dir);
  const AnalysisOptions opts;
  const double phi = std::numbers::pi / 3;
  const int runs = 20;
  std::vector<int> flagged(opts.angles.size(), 0);
  int located = 0;
  bool shape_ok = true;
  for (int run = 0; run < runs; ++run) {
    const YearlyCurves curves = daily_dataset(dir, BreakKind::kRotation, phi, 9000 + run);
    const AnalysisReport r = analyze(curves, opts, default_pivot());
    shape_ok = shape_ok && curves.coeffs.size() == 123 &&
               r.eigenfunction_cells.size() == opts.angles.size() &&
               r.eigenvalue_cells.size() == opts.divisors.size();
    for (const auto& row : r.eigenfunction_cells) shape_ok = shape_ok && row.size() == 5;
    for (const auto& row : r.eigenvalue_cells) shape_ok = shape_ok && row.size() == 12;
    if (std::abs(r.k_hat - 92) <= 2) ++located;
    for (std::size_t a = 0; a < opts.angles.size(); ++a) {
      if (!r.eigenfunction_cells[a][0].retained()) ++flagged[a];
    }
  }
  o.check(shape_ok, "report shape");
  o.detail << "rotation: estimate within 2 years of 92 in " << located << "/" << runs
           << ", j=1 flagged per angle (";
  for (std::size_t a = 0; a < opts.angles.size(); ++a) {
    o.detail << (a ? "," : "") << flagged[a];
    if (angle_threshold(opts.angles[a]) < angle_threshold(phi)) {
      o.check(2 * flagged[a] > runs, "j=1 not flagged at angle " + fmt(opts.angles[a], 4));
    }
  }
  o.detail << ")/" << runs << "; ";

  int all_retained = 0;
  int worst_cells = 0;
  for (int run = 0; run < runs; ++run) {
    const YearlyCurves curves = daily_dataset(dir, BreakKind::kNone, 0.0, 9100 + run);
    const AnalysisReport r = analyze(curves, opts, default_pivot());
    int rejected = 0;
    for (const auto* m : {&r.eigenfunction_cells, &r.eigenvalue_cells}) {
      for (const auto& row : *m) {
        for (const auto& cell : row) {
          if (cell.reject[0]) ++rejected;
        }
      }
    }
    if (rejected == 0) ++all_retained;
    worst_cells = std::max(worst_cells, rejected);
  }
  o.detail << "no break: all cells retained at alpha=0.10 in " << all_retained << "/" << runs
           << " (most rejections in one run " << worst_cells << "); ";
  o.check(all_retained * 10 >= runs * 9, "no-break runs retaining all cells below 90%");
  std::filesystem::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"pivot quantiles", pivot_quantiles},
      {"closed-form kernel distances", kernel_distances},
      {"eigen oracle", eigen_oracle},
      {"boundary level, eigenvalue test", boundary_level},
      {"interior null and power shape", interior_and_power},
      {"change-point rate", changepoint_rate},
      {"epsilon sensitivity", epsilon_sensitivity},
      {"brute-force oracles", brute_force},
      {"daily pipeline", daily_pipeline},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.contains(id)) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s) [%.1fs]: %s\n", o.pass ? "PASS" : "FAIL", id,
                criteria[i].first, secs, o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
