#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "relspec/covkern.hpp"

namespace relspec {

/// Discrete uniform measure on {l/K : l = 1..K-1}.
class NuMeasure {
 public:
  explicit NuMeasure(int k = 20);

  int k() const { return k_; }
  double weight() const { return 1.0 / (k_ - 1); }
  std::vector<double> points() const;
  /// Support points followed by lambda = 1.
  std::vector<double> path_grid() const;

 private:
  int k_;
};

enum class PathKind { kEigenvalue, kEigenfunction };

const char* to_string(PathKind kind);

/// Sequential squared differences between the two segments, evaluated on the
/// support of nu plus lambda = 1 (always the last entry).
struct DiffPath {
  std::vector<double> lambdas;
  std::vector<double> values;
  int j = 1;  // 1-based eigen index
  PathKind kind = PathKind::kEigenvalue;
  std::vector<std::string> warnings;

  double statistic() const { return values.back(); }
};

/// For each lambda: squared difference of the j-th eigenvalues, or squared
/// sign-aligned distance of the j-th eigenfunctions, of the sequential kernels
/// of both segments. The eigenfunction of a zero kernel is taken as the zero
/// function.
DiffPath diff_path(const SplitSample& split, int j, const NuMeasure& nu,
                   PathKind kind, bool center);

/// [ sum_l w_l lambda_l^4 (path(lambda_l) - path(1))^2 ]^(1/2).
double self_normalizer(const DiffPath& path, const NuMeasure& nu);

/// Sorted Monte-Carlo sample of the pivot
///   W = B(1) / [ int lambda^2 (B(lambda) - lambda B(1))^2 nu(dlambda) ]^(1/2).
class PivotDistribution {
 public:
  PivotDistribution(int k, std::int64_t replicates, std::uint64_t seed,
                    std::vector<double> sorted_sample);

  int k() const { return k_; }
  std::int64_t replicates() const { return replicates_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<double>& sample() const { return sample_; }

  /// Linearly interpolated empirical quantile (Hyndman-Fan type 7).
  double quantile(double p) const;
  /// Empirical P(W <= x).
  double cdf(double x) const;

 private:
  int k_;
  std::int64_t replicates_;
  std::uint64_t seed_;
  std::vector<double> sample_;
};

/// Replicates are grouped in fixed blocks, each with its own counter-derived
/// engine, so the result does not depend on the number of workers.
inline constexpr std::int64_t kPivotBlock = 4096;
inline constexpr std::uint64_t kDefaultPivotSeed = 20190815;
inline constexpr std::int64_t kDefaultPivotReplicates = 500000;

/// OpenMP version; workers <= 0 uses the runtime default.
PivotDistribution simulate_pivot(int k, std::int64_t replicates,
                                 std::uint64_t seed, int workers = 0);
/// Single-threaded reference.
PivotDistribution simulate_pivot_serial(int k, std::int64_t replicates,
                                        std::uint64_t seed);

/// One draw of W from Brownian motion sampled at 1/K, ..., (K-1)/K, 1.
double pivot_draw(int k, std::span<const double> increments);

enum class TestMode { kRelevant, kEquivalence };

struct TestResult {
  double statistic = 0.0;
  double normalizer = 0.0;
  double delta = 0.0;
  double ratio = 0.0;
  double quantile = 0.0;
  double alpha = 0.05;
  TestMode mode = TestMode::kRelevant;
  bool reject = false;
  double p_value = 0.0;  // P(W <= ratio)
  std::vector<std::string> warnings;
};

inline constexpr double kDegenerateNormalizer = 1e-12;

/// Relevant mode rejects iff (statistic - delta) / normalizer > q_{1-alpha};
/// equivalence mode rejects iff it is < q_alpha. A normalizer below 1e-12
/// retains with a warning.
TestResult decide(const DiffPath& path, double normalizer, double delta,
                  const PivotDistribution& pivot, double alpha, TestMode mode);

/// Convenience: path, normalizer and decision in one call.
TestResult relevance_test(const SplitSample& split, int j, PathKind kind,
                          double delta, const NuMeasure& nu,
                          const PivotDistribution& pivot, double alpha,
                          TestMode mode, bool center);

/// Quantile cache: a CSV of the pivot quantiles at probabilities i/10000
/// with a header line recording (K, R, seed).
void write_quantile_cache(const std::filesystem::path& path,
                          const PivotDistribution& pivot);
PivotDistribution read_quantile_cache(const std::filesystem::path& path);

/// Reads the cache when its key matches (K, R, seed), otherwise simulates and
/// (when `path` is non-empty) rewrites it.
PivotDistribution cached_pivot(const std::filesystem::path& path, int k,
                               std::int64_t replicates, std::uint64_t seed,
                               int workers = 0);

}  // namespace relspec
