#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "relspec/covkern.hpp"
#include "relspec/funcspace.hpp"

namespace relspec {

enum class Dependence { kIid, kFma1 };
enum class BreakKind { kNone, kEigenvalueShift, kRotation };
enum class Innovation { kGaussian, kStudentT };

struct DGPSpec {
  int n = 400;
  int order = 21;
  double theta0 = 0.5;
  std::vector<double> tau;  // empty: tau_k = 1 / k^2
  Dependence dependence = Dependence::kIid;
  BreakKind break_kind = BreakKind::kNone;
  double magnitude = 0.0;  // E for eigenvalue shifts, angle phi for rotations
  double psi = -1.0;  // fMA(1) entry variance; negative = calibrated default
  Innovation innovation = Innovation::kGaussian;
  double student_df = 5.0;  // only for kStudentT; rescaled to unit variance
  std::uint64_t seed = 0;

  std::vector<double> eigenvalues() const;
  void validate() const;
};

/// Default tau_k = 1 / k^2, k = 1..order.
std::vector<double> inverse_square_eigenvalues(int order);

/// Entry variance psi of the fMA(1) operator, calibrated so that the expected
/// entrywise l1 norm sum |Psi_lk| equals one: psi = pi / (2 T^4).
double fma_entry_variance(int order);

/// Coefficient rows a_1..a_N, with the configured break applied.
FunctionalSample generate(const DGPSpec& spec);

/// Coefficient rows without any break, also returning the realized Psi
/// (zero in the i.i.d. case).
std::pair<FunctionalSample, Eigen::MatrixXd> generate_with_operator(const DGPSpec& spec);

/// Rows n > floor(N theta0) get coordinates 1..4 scaled by sqrt(1 - sqrt(E)).
FunctionalSample apply_eigenvalue_break(FunctionalSample series, double e, double theta0);

/// Rows n > floor(N theta0) get the first two coordinates rotated by phi.
FunctionalSample apply_rotation_break(FunctionalSample series, double phi, double theta0);

/// Population kernels (coefficient mode) before and after the break.
std::pair<CovKernel, CovKernel> population_kernels(const DGPSpec& spec);

/// Index of the first post-break row, floor(N theta0).
int break_index(int n, double theta0);

}  // namespace relspec
