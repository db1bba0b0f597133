#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "relspec/error.hpp"
#include "relspec/rng.hpp"
#include "relspec/selfnorm.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace relspec {

PivotDistribution::PivotDistribution(int k, std::int64_t replicates,
                                     std::uint64_t seed,
                                     std::vector<double> sorted_sample)
    : k_(k), replicates_(replicates), seed_(seed), sample_(std::move(sorted_sample)) {
  if (sample_.empty()) throw Error(ErrorCode::kInvalidArgument, "empty pivot sample");
  if (!std::is_sorted(sample_.begin(), sample_.end())) {
    throw Error(ErrorCode::kInvalidArgument, "pivot sample must be sorted");
  }
}

double PivotDistribution::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kOutOfRange, "probability outside [0,1]");
  const double h = p * static_cast<double>(sample_.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sample_.size()) return sample_.back();
  const double frac = h - static_cast<double>(lo);
  return sample_[lo] + frac * (sample_[lo + 1] - sample_[lo]);
}

double PivotDistribution::cdf(double x) const {
  const auto it = std::upper_bound(sample_.begin(), sample_.end(), x);
  return static_cast<double>(it - sample_.begin()) / static_cast<double>(sample_.size());
}

double pivot_draw(int k, std::span<const double> increments) {
  // increments[i] is B((i+1)/K) - B(i/K).
  double b1 = 0.0;
  for (int i = 0; i < k; ++i) b1 += increments[i];
  double b = 0.0;
  double sum = 0.0;
  for (int l = 1; l < k; ++l) {
    b += increments[l - 1];
    const double lam = static_cast<double>(l) / k;
    const double bridge = b - lam * b1;
    sum += lam * lam * bridge * bridge;
  }
  return b1 / std::sqrt(sum / (k - 1));
}

namespace {

void check_pivot_args(int k, std::int64_t replicates) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "pivot needs K >= 2");
  if (replicates < 1) throw Error(ErrorCode::kInvalidArgument, "pivot needs R >= 1");
}

void simulate_block(int k, std::uint64_t seed, std::int64_t block,
                    std::int64_t begin, std::int64_t end, double* out) {
  Engine engine = make_engine(stream_seed({seed, static_cast<std::uint64_t>(k),
                                           static_cast<std::uint64_t>(block)}));
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(k)));
  std::vector<double> increments(k);
  for (std::int64_t r = begin; r < end; ++r) {
    for (double& x : increments) x = normal(engine);
    out[r] = pivot_draw(k, increments);
  }
}

}  // namespace

PivotDistribution simulate_pivot(int k, std::int64_t replicates,
                                 std::uint64_t seed, int workers) {
  check_pivot_args(k, replicates);
  std::vector<double> sample(replicates);
  const std::int64_t blocks = (replicates + kPivotBlock - 1) / kPivotBlock;
#ifdef _OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::int64_t begin = b * kPivotBlock;
    const std::int64_t end = std::min(replicates, begin + kPivotBlock);
    simulate_block(k, seed, b, begin, end, sample.data());
  }
  (void)workers;
  std::sort(sample.begin(), sample.end());
  return {k, replicates, seed, std::move(sample)};
}

PivotDistribution simulate_pivot_serial(int k, std::int64_t replicates,
                                        std::uint64_t seed) {
  check_pivot_args(k, replicates);
  std::vector<double> sample;
  sample.reserve(replicates);
  std::vector<double> increments(k);
  for (std::int64_t b = 0; b * kPivotBlock < replicates; ++b) {
    Engine engine = make_engine(stream_seed({seed, static_cast<std::uint64_t>(k),
                                             static_cast<std::uint64_t>(b)}));
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(k)));
    const std::int64_t end = std::min(replicates, (b + 1) * kPivotBlock);
    for (std::int64_t r = b * kPivotBlock; r < end; ++r) {
      for (double& x : increments) x = normal(engine);
      sample.push_back(pivot_draw(k, increments));
    }
  }
  std::sort(sample.begin(), sample.end());
  return {k, replicates, seed, std::move(sample)};
}

namespace {

constexpr int kCacheResolution = 10000;

}  // namespace

void write_quantile_cache(const std::filesystem::path& path,
                          const PivotDistribution& pivot) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "# pivot K=" << pivot.k() << " R=" << pivot.replicates()
      << " seed=" << pivot.seed() << "\n";
  out << "probability,quantile\n";
  out << std::setprecision(17);
  for (int i = 0; i <= kCacheResolution; ++i) {
    const double p = static_cast<double>(i) / kCacheResolution;
    out << std::defaultfloat << p << "," << pivot.quantile(p) << "\n";
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

PivotDistribution read_quantile_cache(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  int k = 0;
  long long replicates = 0;
  unsigned long long seed = 0;
  if (std::sscanf(line.c_str(), "# pivot K=%d R=%lld seed=%llu", &k, &replicates,
                  &seed) != 3) {
    throw Error(ErrorCode::kParse, path.string() + ": missing cache key line");
  }
  std::getline(in, line);
  if (line != "probability,quantile") {
    throw Error(ErrorCode::kParse, path.string() + ": unexpected header '" + line + "'");
  }
  std::vector<double> quantiles;
  int lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(lineno));
    }
    try {
      quantiles.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(lineno));
    }
  }
  return {k, replicates, seed, std::move(quantiles)};
}

PivotDistribution cached_pivot(const std::filesystem::path& path, int k,
                               std::int64_t replicates, std::uint64_t seed,
                               int workers) {
  if (!path.empty() && std::filesystem::exists(path)) {
    PivotDistribution cached = read_quantile_cache(path);
    if (cached.k() == k && cached.replicates() == replicates && cached.seed() == seed) {
      return cached;
    }
  }
  PivotDistribution fresh = simulate_pivot(k, replicates, seed, workers);
  if (!path.empty()) write_quantile_cache(path, fresh);
  return fresh;
}

}  // namespace relspec
