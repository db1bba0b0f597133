#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "relspec/funcspace.hpp"

namespace relspec::testing {

// Rows sqrt(T tau_k) e_k cycling through k = 1..T. Every block of T
// consecutive rows has second moment exactly diag(tau).
inline Eigen::MatrixXd cyclic_rows(const std::vector<double>& tau, int rows) {
  const int t = static_cast<int>(tau.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, t);
  for (int n = 0; n < rows; ++n) out(n, n % t) = std::sqrt(t * tau[n % t]);
  return out;
}

inline std::vector<double> inverse_squares(int order) {
  std::vector<double> tau(order);
  for (int k = 0; k < order; ++k) tau[k] = 1.0 / ((k + 1.0) * (k + 1.0));
  return tau;
}

// Rotates coordinates 1 and 2 of every row by phi.
inline Eigen::MatrixXd rotate_rows(Eigen::MatrixXd rows, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  for (int n = 0; n < rows.rows(); ++n) {
    const double a1 = rows(n, 0);
    const double a2 = rows(n, 1);
    rows(n, 0) = c * a1 - s * a2;
    rows(n, 1) = s * a1 + c * a2;
  }
  return rows;
}

inline FunctionalSample stack(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return FunctionalSample::coefficients(out);
}

}  // namespace relspec::testing
