#include "relspec/covkern.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relspec/error.hpp"

namespace relspec {

CovKernel CovKernel::zero(Representation rep, int dimension) {
  return {Eigen::MatrixXd::Zero(dimension, dimension), rep};
}

Segment whole(const FunctionalSample& sample) {
  return {&sample, 0, sample.size()};
}

SplitSample split_at(const FunctionalSample& sample, int k_hat) {
  const int n = sample.size();
  if (k_hat < 1 || k_hat >= n) {
    throw Error(ErrorCode::kOutOfRange,
                "split index " + std::to_string(k_hat) + " leaves an empty segment of " +
                    std::to_string(n) + " observations");
  }
  return {{&sample, 0, k_hat}, {&sample, k_hat, n}, static_cast<double>(k_hat) / n};
}

int sequential_count(int n, double lambda) {
  const int count = static_cast<int>(std::floor(n * lambda + 1e-9));
  return std::clamp(count, 0, n);
}

namespace {

void check_segment(const Segment& segment) {
  if (segment.sample == nullptr || segment.size() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "empty segment");
  }
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "lambda outside [0,1]");
  }
}

}  // namespace

CovKernel sequential_kernel(const Segment& segment, double lambda, bool center) {
  const double grid[] = {lambda};
  return sequential_kernels(segment, grid, center).front();
}

std::vector<CovKernel> sequential_kernels(const Segment& segment,
                                          std::span<const double> lambdas,
                                          bool center) {
  check_segment(segment);
  const auto rows = segment.rows();
  const int dim = static_cast<int>(rows.cols());
  const Representation rep = segment.sample->rep;

  Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(dim);
  if (center) mean = rows.colwise().mean();

  std::vector<CovKernel> out;
  out.reserve(lambdas.size());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(dim, dim);
  int used = 0;
  double previous = 0.0;
  for (double lambda : lambdas) {
    check_lambda(lambda);
    if (lambda < previous) {
      throw Error(ErrorCode::kInvalidArgument, "lambda grid must be non-decreasing");
    }
    previous = lambda;
    const int count = sequential_count(segment.size(), lambda);
    if (count > used) {
      const Eigen::MatrixXd block =
          rows.middleRows(used, count - used).rowwise() - mean;
      sum.selfadjointView<Eigen::Lower>().rankUpdate(block.transpose());
      used = count;
    }
    if (used == 0) {
      out.push_back(CovKernel::zero(rep, dim));
    } else {
      Eigen::MatrixXd kernel = sum.selfadjointView<Eigen::Lower>();
      kernel /= used;
      out.push_back({std::move(kernel), rep});
    }
  }
  return out;
}

double kernel_distance_sq(const CovKernel& c1, const CovKernel& c2) {
  if (c1.rep != c2.rep || c1.dimension() != c2.dimension()) {
    throw Error(ErrorCode::kDimension, "kernels live on different spaces");
  }
  const double w = c1.weight();
  return w * w * (c1.matrix - c2.matrix).squaredNorm();
}

}  // namespace relspec
