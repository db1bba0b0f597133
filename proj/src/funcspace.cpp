#include "relspec/funcspace.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "relspec/error.hpp"

namespace relspec {

std::vector<double> midpoint_nodes(int grid_size) {
  std::vector<double> nodes(grid_size);
  for (int m = 0; m < grid_size; ++m) nodes[m] = midpoint_node(m, grid_size);
  return nodes;
}

GridFunction::GridFunction(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw Error(ErrorCode::kDimension, "grid function needs at least 2 nodes");
  }
  if (!values_.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "grid function has non-finite values");
  }
}

GridFunction GridFunction::constant(int grid_size, double value) {
  return GridFunction(Eigen::VectorXd::Constant(grid_size, value));
}

double fourier_value(int order, int k, double x) {
  const int half = (order - 1) / 2;
  if (k == 0) return 1.0;
  const double two_pi = 2.0 * std::numbers::pi;
  if (k <= half) return std::numbers::sqrt2 * std::sin(two_pi * k * x);
  return std::numbers::sqrt2 * std::cos(two_pi * (k - half) * x);
}

Eigen::MatrixXd FourierBasis::design(std::span<const double> nodes) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(nodes.size()), order());
  for (std::size_t d = 0; d < nodes.size(); ++d) {
    for (int k = 0; k < order(); ++k) {
      out(static_cast<Eigen::Index>(d), k) = fourier_value(order(), k, nodes[d]);
    }
  }
  return out;
}

FourierBasis fourier_basis(int order, int grid_size) {
  if (order < 1 || order % 2 == 0) {
    throw Error(ErrorCode::kInvalidOrder,
                "Fourier basis order must be odd and positive, got " +
                    std::to_string(order));
  }
  if (grid_size < 2 || grid_size < 2 * (order - 1)) {
    throw Error(ErrorCode::kResolution,
                "grid of " + std::to_string(grid_size) +
                    " nodes cannot resolve order " + std::to_string(order));
  }
  Eigen::MatrixXd eval(grid_size, order);
  for (int m = 0; m < grid_size; ++m) {
    const double x = midpoint_node(m, grid_size);
    for (int k = 0; k < order; ++k) eval(m, k) = fourier_value(order, k, x);
  }
  return FourierBasis(std::move(eval));
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  if (f.grid_size() != g.grid_size()) {
    throw Error(ErrorCode::kDimension, "inner product of functions on different grids");
  }
  return f.values().dot(g.values()) / f.grid_size();
}

double norm(const GridFunction& f) { return std::sqrt(inner_product(f, f)); }

GridFunction synthesize(const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                        const FourierBasis& basis) {
  if (coeffs.size() != basis.order()) {
    throw Error(ErrorCode::kDimension,
                "coefficient row of length " + std::to_string(coeffs.size()) +
                    " for basis of order " + std::to_string(basis.order()));
  }
  return GridFunction(basis.eval() * coeffs);
}

Eigen::VectorXd project(std::span<const double> samples,
                        std::span<const double> nodes,
                        const FourierBasis& basis) {
  if (samples.size() != nodes.size()) {
    throw Error(ErrorCode::kDimension, "samples and nodes differ in length");
  }
  const auto count = static_cast<int>(samples.size());
  if (count < basis.order()) {
    throw Error(ErrorCode::kProjection,
                std::to_string(count) + " samples cannot determine " +
                    std::to_string(basis.order()) + " coefficients");
  }
  for (double x : nodes) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw Error(ErrorCode::kProjection, "node outside [0,1]");
    }
  }
  const Eigen::MatrixXd design = basis.design(nodes);
  const Eigen::Map<const Eigen::VectorXd> y(samples.data(), count);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < basis.order()) {
    throw Error(ErrorCode::kProjection, "rank-deficient design matrix");
  }
  return qr.solve(y);
}

FunctionalSample FunctionalSample::coefficients(Eigen::MatrixXd coeffs) {
  return {std::move(coeffs), Representation::kCoefficient};
}

FunctionalSample FunctionalSample::grid(Eigen::MatrixXd values) {
  return {std::move(values), Representation::kGrid};
}

double FunctionalSample::weight() const {
  return quadrature_weight(rep, dimension());
}

double quadrature_weight(Representation rep, int dimension) {
  return rep == Representation::kGrid ? 1.0 / dimension : 1.0;
}

FunctionalSample to_grid(const FunctionalSample& coeffs,
                         const FourierBasis& basis) {
  if (coeffs.rep != Representation::kCoefficient) {
    throw Error(ErrorCode::kInvalidArgument, "sample is already on a grid");
  }
  if (coeffs.dimension() != basis.order()) {
    throw Error(ErrorCode::kDimension, "sample order differs from basis order");
  }
  return FunctionalSample::grid(coeffs.rows * basis.eval().transpose());
}

}  // namespace relspec
