#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "relspec/datagen.hpp"
#include "relspec/selfnorm.hpp"

namespace relspec {

struct ExperimentConfig {
  std::string name = "experiment";
  // Data-generating template; the break magnitude comes from `magnitudes`.
  int order = 21;
  double theta0 = 0.5;
  Dependence dependence = Dependence::kIid;
  BreakKind break_kind = BreakKind::kEigenvalueShift;
  // Test.
  PathKind kind = PathKind::kEigenvalue;
  int j = 1;
  double delta = 0.1;
  TestMode mode = TestMode::kRelevant;
  double alpha = 0.05;
  double epsilon = 0.05;
  int nu_k = 20;
  bool center = false;
  // Design.
  std::vector<double> magnitudes;
  std::vector<int> sample_sizes{200, 400, 600};
  int replicates = 4000;
  std::uint64_t seed = 1;

  void validate() const;
  /// Stable hash of every field, recorded with each result row.
  std::uint64_t hash() const;
};

/// Magnitude at which the population change equals delta: E = delta j^4 for
/// eigenvalue shifts (j <= 4), phi = arccos(1 - delta / 2) for rotations
/// (j <= 2).
double boundary_magnitude(BreakKind kind, int j, double delta);

/// Nine equispaced magnitudes on [0, 4 * boundary] (E capped at 1).
std::vector<double> default_magnitudes(BreakKind kind, int j, double delta);

std::uint64_t replicate_seed(std::uint64_t master, int n, double magnitude, int replicate);

struct ReplicateOutcome {
  bool reject = false;
  double theta_hat = 0.0;
  double ratio = 0.0;
  double p_value = 0.0;
};

/// One replicate: generate, estimate the change, test.
ReplicateOutcome run_replicate(const ExperimentConfig& config, int n, double magnitude,
                               int replicate, const PivotDistribution& pivot);

/// All replicates of one design cell in replicate order. OpenMP-parallel;
/// the result is identical for every worker count.
std::vector<ReplicateOutcome> simulate_cell(const ExperimentConfig& config, int n,
                                            double magnitude,
                                            const PivotDistribution& pivot,
                                            int workers = 0);
std::vector<ReplicateOutcome> simulate_cell_serial(const ExperimentConfig& config, int n,
                                                   double magnitude,
                                                   const PivotDistribution& pivot);

struct RejectionRow {
  int n = 0;
  double magnitude = 0.0;
  double rate = 0.0;
  double se = 0.0;
  double mean_theta_hat = 0.0;
  int replicates = 0;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

RejectionRow summarize(int n, double magnitude, std::span<const ReplicateOutcome> outcomes,
                       const ExperimentConfig& config);

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges
  std::vector<long> counts;
};

/// Equal-width bins on [0,1]; the last bin is closed.
Histogram unit_histogram(std::span<const double> values, int bins);

struct RejectionTable {
  ExperimentConfig config;
  std::vector<RejectionRow> rows;
  std::vector<Histogram> theta_histograms;  // one per row
};

RejectionTable run_experiment(const ExperimentConfig& config,
                              const PivotDistribution& pivot, int workers = 0,
                              int histogram_bins = 20);
RejectionTable run_experiment_serial(const ExperimentConfig& config,
                                     const PivotDistribution& pivot,
                                     int histogram_bins = 20);

struct SweepResult {
  double epsilon = 0.0;
  RejectionTable table;
};

/// run_experiment once per epsilon. Replicate seeds do not depend on epsilon,
/// so every epsilon sees the same samples.
std::vector<SweepResult> epsilon_sweep(const ExperimentConfig& config,
                                       std::span<const double> epsilons,
                                       const PivotDistribution& pivot,
                                       int histogram_bins = 20, int workers = 0);

/// CSV columns: N, magnitude, rate, se, mean_theta_hat, replicates.
void write_rejection_csv(const std::filesystem::path& path, const RejectionTable& table);
/// Config echo plus rows with their reproduction recipe.
void write_rejection_json(const std::filesystem::path& path, const RejectionTable& table);
/// CSV columns: bin_left, bin_right, count.
void write_histogram_csv(const std::filesystem::path& path, const Histogram& hist);

}  // namespace relspec
