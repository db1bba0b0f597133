#include "relspec/selfnorm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relspec/eigensys.hpp"
#include "relspec/error.hpp"

namespace relspec {

NuMeasure::NuMeasure(int k) : k_(k) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "nu needs K >= 2");
}

std::vector<double> NuMeasure::points() const {
  std::vector<double> out(k_ - 1);
  for (int l = 1; l < k_; ++l) out[l - 1] = static_cast<double>(l) / k_;
  return out;
}

std::vector<double> NuMeasure::path_grid() const {
  std::vector<double> out = points();
  out.push_back(1.0);
  return out;
}

const char* to_string(PathKind kind) {
  return kind == PathKind::kEigenvalue ? "eigenvalue" : "eigenfunction";
}

namespace {

double eigenfunction_gap_sq(const CovKernel& c1, const EigenSystem& e1,
                            const CovKernel& c2, const EigenSystem& e2, int index) {
  const bool zero1 = c1.is_zero();
  const bool zero2 = c2.is_zero();
  if (zero1 && zero2) return 0.0;
  if (zero1 || zero2) return 1.0;
  const double d = aligned_distance(e1.eigenfunction(index), e2.eigenfunction(index),
                                    e1.weight());
  return d * d;
}

}  // namespace

DiffPath diff_path(const SplitSample& split, int j, const NuMeasure& nu,
                   PathKind kind, bool center) {
  if (split.pre.size() < 2 || split.post.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "each segment needs at least two observations");
  }
  const int dim = split.pre.sample->dimension();
  if (j < 1 || j > dim) {
    throw Error(ErrorCode::kOutOfRange,
                "eigen index " + std::to_string(j) + " exceeds the " +
                    std::to_string(dim) + " available eigenpairs");
  }
  DiffPath path;
  path.j = j;
  path.kind = kind;
  path.lambdas = nu.path_grid();
  path.values.reserve(path.lambdas.size());

  const auto pre = sequential_kernels(split.pre, path.lambdas, center);
  const auto post = sequential_kernels(split.post, path.lambdas, center);
  const int index = j - 1;
  const int p_max = std::min(dim, j + 1);
  for (std::size_t i = 0; i < path.lambdas.size(); ++i) {
    const EigenSystem e1 = eigendecompose(pre[i], p_max);
    const EigenSystem e2 = eigendecompose(post[i], p_max);
    if (kind == PathKind::kEigenvalue) {
      const double gap = e1.eigenvalues(index) - e2.eigenvalues(index);
      path.values.push_back(gap * gap);
    } else {
      path.values.push_back(eigenfunction_gap_sq(pre[i], e1, post[i], e2, index));
    }
    if (i + 1 == path.lambdas.size()) {
      if (e1.degenerate_gap(index)) {
        path.warnings.push_back("eigenvalue " + std::to_string(j) +
                                " of the first segment is not separated");
      }
      if (e2.degenerate_gap(index)) {
        path.warnings.push_back("eigenvalue " + std::to_string(j) +
                                " of the second segment is not separated");
      }
    }
  }
  return path;
}

double self_normalizer(const DiffPath& path, const NuMeasure& nu) {
  const std::vector<double> support = nu.points();
  if (path.lambdas.size() != support.size() + 1 || path.lambdas.back() != 1.0) {
    throw Error(ErrorCode::kDimension, "path grid does not match nu");
  }
  const double at_one = path.statistic();
  double sum = 0.0;
  for (std::size_t l = 0; l < support.size(); ++l) {
    if (path.lambdas[l] != support[l]) {
      throw Error(ErrorCode::kDimension, "path grid does not match nu");
    }
    const double lam2 = support[l] * support[l];
    const double dev = path.values[l] - at_one;
    sum += lam2 * lam2 * dev * dev;
  }
  return std::sqrt(nu.weight() * sum);
}

TestResult decide(const DiffPath& path, double normalizer, double delta,
                  const PivotDistribution& pivot, double alpha, TestMode mode) {
  if (delta < 0.0) throw Error(ErrorCode::kInvalidArgument, "threshold must be >= 0");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "alpha must lie in (0,1)");
  }
  TestResult r;
  r.statistic = path.statistic();
  r.normalizer = normalizer;
  r.delta = delta;
  r.alpha = alpha;
  r.mode = mode;
  r.warnings = path.warnings;
  r.quantile = pivot.quantile(mode == TestMode::kRelevant ? 1.0 - alpha : alpha);

  if (normalizer < kDegenerateNormalizer) {
    r.warnings.push_back("degenerate self-normalizer; retaining the null");
    const double diff = r.statistic - delta;
    r.ratio = diff > 0 ? INFINITY : (diff < 0 ? -INFINITY : 0.0);
    r.p_value = pivot.cdf(r.ratio);
    r.reject = false;
    return r;
  }
  r.ratio = (r.statistic - delta) / normalizer;
  r.p_value = pivot.cdf(r.ratio);
  r.reject = mode == TestMode::kRelevant ? r.ratio > r.quantile : r.ratio < r.quantile;
  return r;
}

TestResult relevance_test(const SplitSample& split, int j, PathKind kind,
                          double delta, const NuMeasure& nu,
                          const PivotDistribution& pivot, double alpha,
                          TestMode mode, bool center) {
  const DiffPath path = diff_path(split, j, nu, kind, center);
  return decide(path, self_normalizer(path, nu), delta, pivot, alpha, mode);
}

}  // namespace relspec
