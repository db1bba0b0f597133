#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "relspec/funcspace.hpp"

namespace relspec {

/// Symmetric second-moment kernel on either the M-point grid or the
/// T-dimensional coefficient space. `weight()` is the quadrature weight that
/// turns matrix sums into integrals (1/M on the grid, 1 for coefficients).
struct CovKernel {
  Eigen::MatrixXd matrix;
  Representation rep = Representation::kCoefficient;

  int dimension() const { return static_cast<int>(matrix.rows()); }
  double weight() const { return quadrature_weight(rep, dimension()); }
  bool is_zero() const { return matrix.isZero(0.0); }

  static CovKernel zero(Representation rep, int dimension);
};

/// Observations [begin, end) of a parent sample.
struct Segment {
  const FunctionalSample* sample = nullptr;
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
  auto rows() const { return sample->rows.middleRows(begin, size()); }
};

/// A sample partitioned at the estimated change: `pre` holds observations
/// 1..k_hat and `post` the rest.
struct SplitSample {
  Segment pre;
  Segment post;
  double theta_hat = 0.0;
};

SplitSample split_at(const FunctionalSample& sample, int k_hat);

/// floor(n * lambda) guarded against representation error, so that
/// lambda = l/K with n divisible by K keeps every sample.
int sequential_count(int n, double lambda);

/// Average of the first floor(n lambda) outer products of the segment. With
/// `center`, observations are centered by the mean of the whole segment. A
/// zero count yields the zero kernel.
CovKernel sequential_kernel(const Segment& segment, double lambda, bool center);

/// sequential_kernel at every lambda of a non-decreasing grid, computed in
/// one incremental pass over the segment.
std::vector<CovKernel> sequential_kernels(const Segment& segment,
                                          std::span<const double> lambdas,
                                          bool center);

/// Quadrature value of the double integral of (c1 - c2)^2.
double kernel_distance_sq(const CovKernel& c1, const CovKernel& c2);

Segment whole(const FunctionalSample& sample);

}  // namespace relspec
