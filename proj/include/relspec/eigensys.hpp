#pragma once

#include <Eigen/Dense>

#include "relspec/covkern.hpp"
#include "relspec/funcspace.hpp"

namespace relspec {

/// Leading eigenpairs of the integral operator of a covariance kernel.
/// Eigenfunctions are stored as columns in the kernel's representation and
/// have unit quadrature norm.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;      // descending
  Eigen::MatrixXd eigenfunctions;   // one column per eigenvalue
  Representation rep = Representation::kCoefficient;

  int count() const { return static_cast<int>(eigenvalues.size()); }
  double weight() const {
    return quadrature_weight(rep, static_cast<int>(eigenfunctions.rows()));
  }
  auto eigenfunction(int index) const { return eigenfunctions.col(index); }

  /// True when eigenvalue `index` (zero-based) is within 1e-10 * tau_1 of a
  /// neighbour, i.e. its eigenfunction is not identifiable.
  bool degenerate_gap(int index) const;
};

/// Full symmetric decomposition; returns the `p_max` largest eigenpairs.
/// Each eigenfunction is flipped so its first non-negligible coordinate is
/// positive.
EigenSystem eigendecompose(const CovKernel& kernel, int p_max);

/// min(|v - u|, |v + u|) = sqrt(2 - 2 |<v,u>|) for unit functions.
double aligned_distance(const GridFunction& v, const GridFunction& u);

/// Same, for unit vectors in a representation with quadrature weight `weight`.
double aligned_distance(const Eigen::Ref<const Eigen::VectorXd>& v,
                        const Eigen::Ref<const Eigen::VectorXd>& u,
                        double weight);

/// Flips the sign of `v` so that its inner product with `reference` is >= 0.
void align_sign(Eigen::Ref<Eigen::VectorXd> v,
                const Eigen::Ref<const Eigen::VectorXd>& reference);

}  // namespace relspec
