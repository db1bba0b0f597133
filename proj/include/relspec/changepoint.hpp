#pragma once

#include <vector>

#include "relspec/funcspace.hpp"

namespace relspec {

struct ChangePointEstimate {
  int k_hat = 0;
  double theta_hat = 0.0;
  int k_min = 0;                  // first k of the search range
  std::vector<double> objective;  // f(k) for k = k_min, k_min + 1, ...
  double epsilon = 0.0;

  int k_max() const { return k_min + static_cast<int>(objective.size()) - 1; }
  double max_objective() const { return objective[k_hat - k_min]; }
};

/// CUSUM objective
///   f(k) = k (N - k) / N^2 * || S_k / k - (S_N - S_k) / (N - k) ||^2
/// where S_k is the partial sum of outer products X_n (x) X_n and the norm is
/// the L2 norm of kernels on [0,1]^2. Requires 1 <= k <= N - 1.
double cusum_objective(const FunctionalSample& sample, int k);

/// f(1), ..., f(N - 1) from one pass of cumulative second-moment sums.
std::vector<double> cusum_scan(const FunctionalSample& sample);

/// Smallest maximizer of f over ceil(N eps) <= k <= floor(N (1 - eps)),
/// clipped to [1, N - 1]. Requires N >= 4 and 0 <= eps < 0.5.
ChangePointEstimate estimate_changepoint(const FunctionalSample& sample,
                                         double epsilon);

}  // namespace relspec
