#include "relspec/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relspec/error.hpp"

namespace relspec {

namespace {

double weighted_norm_sq(const Eigen::MatrixXd& diff, double weight) {
  return weight * weight * diff.squaredNorm();
}

Eigen::MatrixXd second_moment_sum(const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(rows.cols(), rows.cols());
  sum.selfadjointView<Eigen::Lower>().rankUpdate(rows.transpose());
  return sum.selfadjointView<Eigen::Lower>();
}

}  // namespace

double cusum_objective(const FunctionalSample& sample, int k) {
  const int n = sample.size();
  if (k < 1 || k > n - 1) {
    throw Error(ErrorCode::kOutOfRange,
                "CUSUM index " + std::to_string(k) + " outside [1, " +
                    std::to_string(n - 1) + "]");
  }
  const Eigen::MatrixXd head = second_moment_sum(sample.rows.topRows(k));
  const Eigen::MatrixXd tail = second_moment_sum(sample.rows.bottomRows(n - k));
  const Eigen::MatrixXd diff = head / k - tail / (n - k);
  const double scale = static_cast<double>(k) * (n - k) / (static_cast<double>(n) * n);
  return scale * weighted_norm_sq(diff, sample.weight());
}

std::vector<double> cusum_scan(const FunctionalSample& sample) {
  const int n = sample.size();
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "CUSUM needs at least two observations");
  }
  const int dim = sample.dimension();
  const double w = sample.weight();
  const Eigen::MatrixXd total = second_moment_sum(sample.rows);

  std::vector<double> f(n - 1);
  Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd diff(dim, dim);
  for (int k = 1; k < n; ++k) {
    const auto x = sample.rows.row(k - 1);
    partial.noalias() += x.transpose() * x;
    diff = partial / k - (total - partial) / (n - k);
    const double scale = static_cast<double>(k) * (n - k) / (static_cast<double>(n) * n);
    f[k - 1] = scale * weighted_norm_sq(diff, w);
  }
  return f;
}

ChangePointEstimate estimate_changepoint(const FunctionalSample& sample,
                                         double epsilon) {
  const int n = sample.size();
  if (!(epsilon >= 0.0 && epsilon < 0.5)) {
    throw Error(ErrorCode::kOutOfRange, "boundary trim epsilon must lie in [0, 0.5)");
  }
  if (n < 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "change-point estimation needs N >= 4, got " + std::to_string(n));
  }
  const int lo = std::max(1, static_cast<int>(std::ceil(n * epsilon - 1e-9)));
  const int hi = std::min(n - 1, static_cast<int>(std::floor(n * (1.0 - epsilon) + 1e-9)));

  const std::vector<double> f = cusum_scan(sample);
  ChangePointEstimate out;
  out.epsilon = epsilon;
  out.k_min = lo;
  out.objective.assign(f.begin() + (lo - 1), f.begin() + hi);
  // max_element returns the first maximizer: smallest k wins ties.
  const auto best = std::max_element(out.objective.begin(), out.objective.end());
  out.k_hat = lo + static_cast<int>(best - out.objective.begin());
  out.theta_hat = static_cast<double>(out.k_hat) / n;
  return out;
}

}  // namespace relspec
