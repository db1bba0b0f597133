#include "relspec/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <string>

#include "relspec/changepoint.hpp"
#include "relspec/config.hpp"
#include "relspec/error.hpp"
#include "relspec/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace relspec {

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw Error(ErrorCode::kConfig, "field '" + field + "': " + msg);
  };
  if (order < 1 || order % 2 == 0) fail("order", "must be odd and positive");
  if (!(theta0 > 0.0 && theta0 < 1.0)) fail("theta0", "must lie in (0,1)");
  if (j < 1 || j > order) fail("j", "must lie in [1, order]");
  if (!(delta >= 0.0)) fail("delta", "must be >= 0");
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha", "must lie in (0,1)");
  if (!(epsilon >= 0.0 && epsilon < 0.5)) fail("epsilon", "must lie in [0, 0.5)");
  if (nu_k < 2) fail("nu_k", "must be >= 2");
  if (magnitudes.empty()) fail("magnitudes", "grid is empty");
  if (sample_sizes.empty()) fail("sample_sizes", "list is empty");
  for (int n : sample_sizes) {
    if (n < 4) fail("sample_sizes", "each N must be >= 4");
  }
  if (replicates < 1) fail("replicates", "must be >= 1");
  if (break_kind == BreakKind::kEigenvalueShift) {
    for (double m : magnitudes) {
      if (!(m >= 0.0 && m <= 1.0)) fail("magnitudes", "eigenvalue shifts must lie in [0,1]");
    }
  }
}

std::uint64_t ExperimentConfig::hash() const {
  // FNV-1a over the canonical JSON echo.
  const std::string text = to_json(*this).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double boundary_magnitude(BreakKind kind, int j, double delta) {
  switch (kind) {
    case BreakKind::kEigenvalueShift: {
      if (j < 1 || j > 4) {
        throw Error(ErrorCode::kOutOfRange, "eigenvalue shifts only move eigenvalues 1..4");
      }
      const double j4 = static_cast<double>(j) * j * j * j;
      return delta * j4;
    }
    case BreakKind::kRotation:
      if (j < 1 || j > 2) {
        throw Error(ErrorCode::kOutOfRange, "rotations only move eigenfunctions 1 and 2");
      }
      if (delta > 4.0) throw Error(ErrorCode::kOutOfRange, "delta above the maximum of 4");
      return std::acos(1.0 - delta / 2.0);
    case BreakKind::kNone:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, "no boundary without a break");
}

std::vector<double> default_magnitudes(BreakKind kind, int j, double delta) {
  const double top = 4.0 * boundary_magnitude(kind, j, delta);
  std::vector<double> out(9);
  for (int i = 0; i < 9; ++i) {
    out[i] = top * i / 8.0;
    if (kind == BreakKind::kEigenvalueShift) out[i] = std::min(out[i], 1.0);
  }
  return out;
}

std::uint64_t replicate_seed(std::uint64_t master, int n, double magnitude, int replicate) {
  return stream_seed({master, static_cast<std::uint64_t>(n), double_key(magnitude),
                      static_cast<std::uint64_t>(replicate)});
}

ReplicateOutcome run_replicate(const ExperimentConfig& config, int n, double magnitude,
                               int replicate, const PivotDistribution& pivot) {
  DGPSpec spec;
  spec.n = n;
  spec.order = config.order;
  spec.theta0 = config.theta0;
  spec.dependence = config.dependence;
  spec.break_kind = config.break_kind;
  spec.magnitude = magnitude;
  spec.seed = replicate_seed(config.seed, n, magnitude, replicate);
  const FunctionalSample sample = generate(spec);

  const ChangePointEstimate cp = estimate_changepoint(sample, config.epsilon);
  const SplitSample split = split_at(sample, cp.k_hat);
  const NuMeasure nu(config.nu_k);
  ReplicateOutcome out;
  out.theta_hat = cp.theta_hat;
  if (split.pre.size() < 2 || split.post.size() < 2) {
    // A one-observation segment carries no sequential information.
    out.reject = false;
    out.ratio = 0.0;
    out.p_value = pivot.cdf(0.0);
    return out;
  }
  const TestResult r = relevance_test(split, config.j, config.kind, config.delta, nu, pivot,
                                      config.alpha, config.mode, config.center);
  out.reject = r.reject;
  out.ratio = r.ratio;
  out.p_value = r.p_value;
  return out;
}

namespace {

[[noreturn]] void rethrow_with_context(const ExperimentConfig& config, int n,
                                       double magnitude, int replicate,
                                       const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument,
              "replicate " + std::to_string(replicate) + " (N=" + std::to_string(n) +
                  ", magnitude=" + std::to_string(magnitude) + ", seed=" +
                  std::to_string(replicate_seed(config.seed, n, magnitude, replicate)) +
                  ") failed: " + what);
}

}  // namespace

std::vector<ReplicateOutcome> simulate_cell(const ExperimentConfig& config, int n,
                                            double magnitude,
                                            const PivotDistribution& pivot, int workers) {
  const int reps = config.replicates;
  std::vector<ReplicateOutcome> outcomes(reps);
  std::vector<std::optional<std::string>> errors(reps);
#ifdef _OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
#endif
  for (int r = 0; r < reps; ++r) {
    try {
      outcomes[r] = run_replicate(config, n, magnitude, r, pivot);
    } catch (const std::exception& e) {
      errors[r] = e.what();
    }
  }
  (void)workers;
  for (int r = 0; r < reps; ++r) {
    if (errors[r]) rethrow_with_context(config, n, magnitude, r, *errors[r]);
  }
  return outcomes;
}

std::vector<ReplicateOutcome> simulate_cell_serial(const ExperimentConfig& config, int n,
                                                   double magnitude,
                                                   const PivotDistribution& pivot) {
  std::vector<ReplicateOutcome> outcomes;
  outcomes.reserve(config.replicates);
  for (int r = 0; r < config.replicates; ++r) {
    try {
      outcomes.push_back(run_replicate(config, n, magnitude, r, pivot));
    } catch (const std::exception& e) {
      rethrow_with_context(config, n, magnitude, r, e.what());
    }
  }
  return outcomes;
}

RejectionRow summarize(int n, double magnitude, std::span<const ReplicateOutcome> outcomes,
                       const ExperimentConfig& config) {
  RejectionRow row;
  row.n = n;
  row.magnitude = magnitude;
  row.replicates = static_cast<int>(outcomes.size());
  long rejections = 0;
  double theta_sum = 0.0;
  for (const auto& o : outcomes) {
    rejections += o.reject ? 1 : 0;
    theta_sum += o.theta_hat;
  }
  const double reps = static_cast<double>(outcomes.size());
  row.rate = rejections / reps;
  row.se = std::sqrt(row.rate * (1.0 - row.rate) / reps);
  row.mean_theta_hat = theta_sum / reps;
  row.config_hash = config.hash();
  row.seed = config.seed;
  return row;
}

Histogram unit_histogram(std::span<const double> values, int bins) {
  if (bins < 1) throw Error(ErrorCode::kInvalidArgument, "histogram needs >= 1 bin");
  Histogram h;
  h.edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) h.edges[b] = static_cast<double>(b) / bins;
  h.counts.assign(bins, 0);
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) continue;
    const int b = std::min(bins - 1, static_cast<int>(std::floor(v * bins)));
    ++h.counts[b];
  }
  return h;
}

namespace {

template <typename CellRunner>
RejectionTable tabulate(const ExperimentConfig& config, int histogram_bins,
                        CellRunner&& run_cell) {
  config.validate();
  RejectionTable table;
  table.config = config;
  for (int n : config.sample_sizes) {
    for (double m : config.magnitudes) {
      const std::vector<ReplicateOutcome> outcomes = run_cell(n, m);
      table.rows.push_back(summarize(n, m, outcomes, config));
      std::vector<double> thetas;
      thetas.reserve(outcomes.size());
      for (const auto& o : outcomes) thetas.push_back(o.theta_hat);
      table.theta_histograms.push_back(unit_histogram(thetas, histogram_bins));
    }
  }
  return table;
}

}  // namespace

RejectionTable run_experiment(const ExperimentConfig& config,
                              const PivotDistribution& pivot, int workers,
                              int histogram_bins) {
  return tabulate(config, histogram_bins, [&](int n, double m) {
    return simulate_cell(config, n, m, pivot, workers);
  });
}

RejectionTable run_experiment_serial(const ExperimentConfig& config,
                                     const PivotDistribution& pivot,
                                     int histogram_bins) {
  return tabulate(config, histogram_bins, [&](int n, double m) {
    return simulate_cell_serial(config, n, m, pivot);
  });
}

std::vector<SweepResult> epsilon_sweep(const ExperimentConfig& config,
                                       std::span<const double> epsilons,
                                       const PivotDistribution& pivot, int histogram_bins,
                                       int workers) {
  std::vector<SweepResult> out;
  for (double eps : epsilons) {
    ExperimentConfig c = config;
    c.epsilon = eps;
    out.push_back({eps, run_experiment(c, pivot, workers, histogram_bins)});
  }
  return out;
}

void write_rejection_csv(const std::filesystem::path& path, const RejectionTable& table) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "N,magnitude,rate,se,mean_theta_hat,replicates\n" << std::setprecision(10);
  for (const auto& r : table.rows) {
    out << r.n << ',' << r.magnitude << ',' << r.rate << ',' << r.se << ','
        << r.mean_theta_hat << ',' << r.replicates << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

void write_rejection_json(const std::filesystem::path& path, const RejectionTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"N", r.n},
                    {"magnitude", r.magnitude},
                    {"rate", r.rate},
                    {"se", r.se},
                    {"mean_theta_hat", r.mean_theta_hat},
                    {"replicates", r.replicates},
                    {"config_hash", r.config_hash},
                    {"seed", r.seed}});
  }
  const nlohmann::json doc{{"config", to_json(table.config)},
                           {"config_hash", table.config.hash()},
                           {"rows", rows}};
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

void write_histogram_csv(const std::filesystem::path& path, const Histogram& hist) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "bin_left,bin_right,count\n";
  for (std::size_t b = 0; b < hist.counts.size(); ++b) {
    out << hist.edges[b] << ',' << hist.edges[b + 1] << ',' << hist.counts[b] << '\n';
  }
}

}  // namespace relspec
