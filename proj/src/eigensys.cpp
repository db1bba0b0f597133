#include "relspec/eigensys.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relspec/error.hpp"

namespace relspec {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kUnitTolerance = 1e-6;

void check_symmetric(const Eigen::MatrixXd& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asymmetry = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(asymmetry <= kSymmetryTolerance * scale)) {
    throw Error(ErrorCode::kNotSymmetric,
                "kernel asymmetry " + std::to_string(asymmetry));
  }
}

}  // namespace

bool EigenSystem::degenerate_gap(int index) const {
  if (count() == 0) return false;
  const double tol = 1e-10 * std::max(std::abs(eigenvalues(0)), 1e-300);
  if (index > 0 && eigenvalues(index - 1) - eigenvalues(index) < tol) return true;
  if (index + 1 < count() && eigenvalues(index) - eigenvalues(index + 1) < tol) {
    return true;
  }
  return false;
}

EigenSystem eigendecompose(const CovKernel& kernel, int p_max) {
  const int dim = kernel.dimension();
  if (p_max < 1 || p_max > dim) {
    throw Error(ErrorCode::kOutOfRange,
                "requested " + std::to_string(p_max) + " eigenpairs of a " +
                    std::to_string(dim) + "-dimensional kernel");
  }
  check_symmetric(kernel.matrix);

  const double w = kernel.weight();
  EigenSystem out;
  out.rep = kernel.rep;
  out.eigenvalues.resize(p_max);
  out.eigenfunctions.resize(dim, p_max);

  // The solver returns ascending eigenvalues and Euclidean-unit vectors.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kernel.matrix);
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  const double rescale = 1.0 / std::sqrt(w);
  for (int j = 0; j < p_max; ++j) {
    const int src = dim - 1 - j;
    out.eigenvalues(j) = values(src) * w;
    Eigen::VectorXd v = vectors.col(src) * rescale;
    const double cutoff = 1e-8 * v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) > cutoff) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    out.eigenfunctions.col(j) = v;
  }
  return out;
}

double aligned_distance(const Eigen::Ref<const Eigen::VectorXd>& v,
                        const Eigen::Ref<const Eigen::VectorXd>& u,
                        double weight) {
  if (v.size() != u.size()) {
    throw Error(ErrorCode::kDimension, "functions of different dimension");
  }
  const double nv = weight * v.squaredNorm();
  const double nu = weight * u.squaredNorm();
  if (std::abs(std::sqrt(nv) - 1.0) > kUnitTolerance ||
      std::abs(std::sqrt(nu) - 1.0) > kUnitTolerance) {
    throw Error(ErrorCode::kNormalization, "aligned distance needs unit-norm functions");
  }
  const double cosine = std::min(1.0, std::abs(weight * v.dot(u)));
  return std::sqrt(2.0 - 2.0 * cosine);
}

double aligned_distance(const GridFunction& v, const GridFunction& u) {
  if (v.grid_size() != u.grid_size()) {
    throw Error(ErrorCode::kDimension, "functions on different grids");
  }
  return aligned_distance(v.values(), u.values(), 1.0 / v.grid_size());
}

void align_sign(Eigen::Ref<Eigen::VectorXd> v,
                const Eigen::Ref<const Eigen::VectorXd>& reference) {
  if (v.dot(reference) < 0) v = -v;
}

}  // namespace relspec
