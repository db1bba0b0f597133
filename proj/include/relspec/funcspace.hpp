#pragma once

// Discretized L2[0,1]: midpoint-grid functions, the real Fourier basis and
// the maps between sample space and coefficient space.

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace relspec {

/// Midpoint node t_m = (m - 1/2) / M for m = 1..M (zero-based index here).
inline double midpoint_node(int index, int grid_size) {
  return (index + 0.5) / grid_size;
}

std::vector<double> midpoint_nodes(int grid_size);

/// A function on [0,1] sampled at M midpoint nodes.
class GridFunction {
 public:
  explicit GridFunction(Eigen::VectorXd values);

  static GridFunction constant(int grid_size, double value);

  int grid_size() const { return static_cast<int>(values_.size()); }
  const Eigen::VectorXd& values() const { return values_; }

 private:
  Eigen::VectorXd values_;
};

/// Evaluates the k-th (zero-based) element of the real Fourier basis of odd
/// order T at x. Ordering: 1, sqrt2 sin(2 pi x), ..., sqrt2 sin(pi (T-1) x),
/// sqrt2 cos(2 pi x), ..., sqrt2 cos(pi (T-1) x).
double fourier_value(int order, int k, double x);

class FourierBasis {
 public:
  int order() const { return static_cast<int>(eval_.cols()); }
  int grid_size() const { return static_cast<int>(eval_.rows()); }

  /// M x T matrix of basis values at the midpoint nodes.
  const Eigen::MatrixXd& eval() const { return eval_; }

  GridFunction element(int k) const { return GridFunction(eval_.col(k)); }

  /// Basis values at arbitrary nodes, one row per node.
  Eigen::MatrixXd design(std::span<const double> nodes) const;

 private:
  friend FourierBasis fourier_basis(int order, int grid_size);
  explicit FourierBasis(Eigen::MatrixXd eval) : eval_(std::move(eval)) {}

  Eigen::MatrixXd eval_;
};

/// Requires odd order >= 1 and grid_size >= max(2, 2 (order - 1)).
FourierBasis fourier_basis(int order, int grid_size);

/// Midpoint quadrature of the integral of f g over [0,1].
double inner_product(const GridFunction& f, const GridFunction& g);

double norm(const GridFunction& f);

GridFunction synthesize(const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                        const FourierBasis& basis);

/// Least-squares coefficients of `samples` observed at `nodes` (in [0,1]).
Eigen::VectorXd project(std::span<const double> samples,
                        std::span<const double> nodes,
                        const FourierBasis& basis);

enum class Representation { kGrid, kCoefficient };

/// N observations of a random function, one per row. In coefficient mode the
/// columns are Fourier coefficients a_{n,1..T} (the exact finite-dimensional
/// representation); in grid mode they are values at M midpoint nodes.
struct FunctionalSample {
  Eigen::MatrixXd rows;
  Representation rep = Representation::kCoefficient;

  static FunctionalSample coefficients(Eigen::MatrixXd coeffs);
  static FunctionalSample grid(Eigen::MatrixXd values);

  int size() const { return static_cast<int>(rows.rows()); }
  int dimension() const { return static_cast<int>(rows.cols()); }

  /// Quadrature weight: 1/M on the grid, 1 in coefficient space.
  double weight() const;
};

/// Synthesizes every coefficient row onto the basis grid.
FunctionalSample to_grid(const FunctionalSample& coeffs,
                         const FourierBasis& basis);

double quadrature_weight(Representation rep, int dimension);

}  // namespace relspec
