// relspec: self-normalized tests for relevant changes in the eigensystem of
// covariance operators of functional time series.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relspec/analysis.hpp"
#include "relspec/config.hpp"
#include "relspec/daily.hpp"
#include "relspec/datagen.hpp"
#include "relspec/error.hpp"
#include "relspec/harness.hpp"
#include "relspec/selfnorm.hpp"

namespace fs = std::filesystem;
using namespace relspec;

namespace {

fs::path resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("RELSPEC_OUT_DIR"); env && *env) return env;
  return "out";
}

PivotDistribution load_pivot(const std::string& cache, int k, std::int64_t replicates,
                             std::uint64_t seed, int workers) {
  return cached_pivot(cache.empty() ? fs::path() : fs::path(cache), k, replicates, seed,
                      workers);
}

std::string format_magnitude(double m) {
  std::ostringstream s;
  s << std::setprecision(6) << m;
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-normalized tests for relevant changes in eigenvalues and "
               "eigenfunctions of functional time series"};
  app.require_subcommand(1);

  std::uint64_t seed = kDefaultPivotSeed;
  std::string out_dir_flag;
  std::string quantile_cache;
  int workers = 0;

  // quantiles
  auto* quantiles = app.add_subcommand("quantiles", "Simulate the pivot W and write a quantile cache");
  int q_k = 20;
  std::int64_t q_reps = kDefaultPivotReplicates;
  std::string q_out;
  quantiles->add_option("--k", q_k, "Number of nu support points plus one")->check(CLI::Range(2, 100000));
  quantiles->add_option("--replicates", q_reps, "Monte-Carlo replicates")->check(CLI::PositiveNumber);
  quantiles->add_option("--seed", seed, "Random seed");
  quantiles->add_option("--out", q_out, "Cache file (default <out-dir>/pivot_K<k>.csv)");
  quantiles->add_option("--out-dir", out_dir_flag, "Output directory");
  quantiles->add_option("--workers", workers, "OpenMP threads (0 = default)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run a rejection-probability experiment");
  std::string config_path;
  std::uint64_t sim_seed = 0;
  simulate->add_option("config", config_path, "JSON job file")->required()->check(CLI::ExistingFile);
  auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "Override the experiment master seed");
  simulate->add_option("--out-dir", out_dir_flag, "Output directory");
  simulate->add_option("--workers", workers, "OpenMP threads (0 = default)");
  simulate->add_option("--quantile-cache", quantile_cache, "Pivot quantile cache file");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a synthetic functional sample");
  DGPSpec spec;
  std::string g_break = "none";
  std::string g_dep = "iid";
  std::string g_out = "sample.csv";
  std::string g_daily;
  int g_first_year = 1900;
  double g_offset = 0.0;
  gen->add_option("--n", spec.n, "Number of curves")->check(CLI::Range(4, 10000000));
  gen->add_option("--order", spec.order, "Fourier basis order (odd)");
  gen->add_option("--theta0", spec.theta0, "Break fraction");
  gen->add_option("--break", g_break, "none | eigenvalue_shift | rotation")
      ->check(CLI::IsMember({"none", "eigenvalue_shift", "rotation"}));
  gen->add_option("--magnitude", spec.magnitude, "E for eigenvalue shifts, angle for rotations");
  gen->add_option("--dependence", g_dep, "iid | fma1")->check(CLI::IsMember({"iid", "fma1"}));
  gen->add_option("--seed", spec.seed, "Random seed")->required();
  gen->add_option("--out", g_out, "Coefficient CSV");
  gen->add_option("--daily", g_daily, "Also write a date,value CSV with one curve per year");
  gen->add_option("--first-year", g_first_year, "First calendar year of --daily output");
  gen->add_option("--offset", g_offset, "Constant added to every daily value");

  // analyze
  auto* an = app.add_subcommand("analyze", "Relevance analysis of a daily date,value series");
  std::string csv_path;
  AnalysisOptions opts;
  std::int64_t a_reps = kDefaultPivotReplicates;
  std::vector<double> angle_fractions;
  an->add_option("csv", csv_path, "Daily CSV with header date,value")->required()->check(CLI::ExistingFile);
  an->add_option("--order", opts.order, "Fourier basis order (odd)");
  an->add_option("--min-days", opts.min_days, "Minimum valid readings per year");
  an->add_option("--epsilon", opts.epsilon, "Change-point boundary trim");
  an->add_option("--angles", angle_fractions, "Angles as multiples of pi (default 1/16 1/8 1/4 2/5)");
  an->add_option("--eigenfunctions", opts.eigenfunctions, "Test eigenfunctions 1..n");
  an->add_option("--eigenvalues", opts.eigenvalues, "Test eigenvalues 1..n");
  an->add_option("--divisors", opts.divisors, "Eigenvalue thresholds tau_j / divisor");
  an->add_option("--alphas", opts.alphas, "Significance levels for the relevance classes");
  an->add_option("--k", opts.nu_k, "nu support size K");
  an->add_option("--replicates", a_reps, "Pivot replicates");
  an->add_option("--seed", seed, "Pivot seed");
  an->add_option("--out-dir", out_dir_flag, "Output directory");
  an->add_option("--workers", workers, "OpenMP threads (0 = default)");
  an->add_option("--quantile-cache", quantile_cache, "Pivot quantile cache file");

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path out_dir = resolve_out_dir(out_dir_flag);

    if (*quantiles) {
      fs::create_directories(out_dir);
      const fs::path path = q_out.empty() ? out_dir / ("pivot_K" + std::to_string(q_k) + ".csv")
                                          : fs::path(q_out);
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      const PivotDistribution pivot = simulate_pivot(q_k, q_reps, seed, workers);
      write_quantile_cache(path, pivot);
      std::cout << "K=" << q_k << " R=" << q_reps << " seed=" << seed << "\n"
                << std::fixed << std::setprecision(3)
                << "q0.99=" << pivot.quantile(0.99) << " q0.95=" << pivot.quantile(0.95)
                << " q0.90=" << pivot.quantile(0.90) << "\nwrote " << path.string() << "\n";
      return 0;
    }

    if (*simulate) {
      SimulationJob job = load_simulation_job(config_path);
      if (*sim_seed_opt) job.experiment.seed = sim_seed;
      const PivotDistribution pivot = load_pivot(quantile_cache, job.experiment.nu_k,
                                                 job.pivot_replicates, job.pivot_seed, workers);
      fs::create_directories(out_dir);
      const std::string stem = job.experiment.name;
      auto emit = [&](const RejectionTable& table, const std::string& tag) {
        write_rejection_csv(out_dir / (stem + tag + ".csv"), table);
        write_rejection_json(out_dir / (stem + tag + ".json"), table);
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
          const auto& row = table.rows[i];
          write_histogram_csv(out_dir / (stem + tag + "_theta_N" + std::to_string(row.n) + "_m" +
                                         format_magnitude(row.magnitude) + ".csv"),
                              table.theta_histograms[i]);
        }
        std::cout << "N,magnitude,rate,se,mean_theta_hat" << tag << "\n";
        for (const auto& row : table.rows) {
          std::cout << row.n << "," << row.magnitude << "," << row.rate << "," << row.se << ","
                    << row.mean_theta_hat << "\n";
        }
      };
      if (job.epsilons.empty()) {
        emit(run_experiment(job.experiment, pivot, workers, job.histogram_bins), "");
      } else {
        for (const auto& sweep :
             epsilon_sweep(job.experiment, job.epsilons, pivot, job.histogram_bins, workers)) {
          emit(sweep.table, "_eps" + format_magnitude(sweep.epsilon));
        }
      }
      return 0;
    }

    if (*gen) {
      spec.dependence = g_dep == "fma1" ? Dependence::kFma1 : Dependence::kIid;
      spec.break_kind = g_break == "rotation"           ? BreakKind::kRotation
                        : g_break == "eigenvalue_shift" ? BreakKind::kEigenvalueShift
                                                        : BreakKind::kNone;
      const FunctionalSample sample = generate(spec);
      write_sample_csv(g_out, sample);
      if (!g_daily.empty()) write_daily_csv(g_daily, sample, g_first_year, g_offset);
      std::cout << "wrote " << sample.size() << " curves to " << g_out << "\n";
      return 0;
    }

    if (*an) {
      if (!angle_fractions.empty()) {
        opts.angles.clear();
        for (double f : angle_fractions) opts.angles.push_back(f * std::numbers::pi);
      }
      const YearlyCurves curves = ingest_daily(csv_path, opts.order, opts.min_days);
      const PivotDistribution pivot = load_pivot(quantile_cache, opts.nu_k, a_reps, seed, workers);
      const AnalysisReport report = analyze(curves, opts, pivot);
      write_report(out_dir, report);
      std::cout << format_report(report) << "\nwrote report to " << out_dir.string() << "\n";
      return 0;
    }
  } catch (const relspec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
