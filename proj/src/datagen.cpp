#include "relspec/datagen.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "relspec/error.hpp"
#include "relspec/rng.hpp"

namespace relspec {

std::vector<double> inverse_square_eigenvalues(int order) {
  std::vector<double> tau(order);
  for (int k = 1; k <= order; ++k) tau[k - 1] = 1.0 / (static_cast<double>(k) * k);
  return tau;
}

double fma_entry_variance(int order) {
  const double t2 = static_cast<double>(order) * order;
  return std::numbers::pi / (2.0 * t2 * t2);
}

std::vector<double> DGPSpec::eigenvalues() const {
  return tau.empty() ? inverse_square_eigenvalues(order) : tau;
}

void DGPSpec::validate() const {
  if (n < 4) throw Error(ErrorCode::kInvalidArgument, "DGP needs N >= 4");
  if (order < 1 || order % 2 == 0) {
    throw Error(ErrorCode::kInvalidOrder, "DGP basis order must be odd and positive");
  }
  if (!(theta0 > 0.0 && theta0 < 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "theta0 must lie in (0,1)");
  }
  const std::vector<double> t = eigenvalues();
  if (static_cast<int>(t.size()) != order) {
    throw Error(ErrorCode::kDimension, "tau must have one entry per basis function");
  }
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!(t[k] > 0.0) || (k > 0 && t[k] > t[k - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "tau must be positive and non-increasing");
    }
  }
  if (break_kind == BreakKind::kEigenvalueShift && !(magnitude >= 0.0 && magnitude <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "eigenvalue shift E must lie in [0,1]");
  }
  if (innovation == Innovation::kStudentT && !(student_df > 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "Student-t innovations need df > 2");
  }
}

int break_index(int n, double theta0) {
  return static_cast<int>(std::floor(n * theta0 + 1e-9));
}

std::pair<FunctionalSample, Eigen::MatrixXd> generate_with_operator(const DGPSpec& spec) {
  spec.validate();
  const int t = spec.order;
  const std::vector<double> tau = spec.eigenvalues();
  Engine engine = make_engine(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::student_t_distribution<double> student(spec.student_df);
  const double t_scale = std::sqrt((spec.student_df - 2.0) / spec.student_df);
  auto draw = [&]() {
    return spec.innovation == Innovation::kGaussian ? normal(engine)
                                                    : t_scale * student(engine);
  };

  double psi = 0.0;
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(t, t);
  if (spec.dependence == Dependence::kFma1) {
    psi = spec.psi < 0.0 ? fma_entry_variance(t) : spec.psi;
    const double sd = std::sqrt(psi);
    for (int l = 0; l < t; ++l)
      for (int k = 0; k < t; ++k) op(l, k) = sd * normal(engine);
  }

  // eps_0 .. eps_N, each ~ N(0, diag(tau)).
  Eigen::MatrixXd eps(spec.n + 1, t);
  for (int n = 0; n <= spec.n; ++n)
    for (int k = 0; k < t; ++k) eps(n, k) = std::sqrt(tau[k]) * draw();

  Eigen::MatrixXd rows = eps.bottomRows(spec.n);
  if (spec.dependence == Dependence::kFma1) {
    rows += eps.topRows(spec.n) * op.transpose();
    rows /= std::sqrt(1.0 + psi);
  }
  return {FunctionalSample::coefficients(std::move(rows)), std::move(op)};
}

FunctionalSample generate(const DGPSpec& spec) {
  FunctionalSample series = generate_with_operator(spec).first;
  switch (spec.break_kind) {
    case BreakKind::kNone:
      return series;
    case BreakKind::kEigenvalueShift:
      return apply_eigenvalue_break(std::move(series), spec.magnitude, spec.theta0);
    case BreakKind::kRotation:
      return apply_rotation_break(std::move(series), spec.magnitude, spec.theta0);
  }
  return series;
}

FunctionalSample apply_eigenvalue_break(FunctionalSample series, double e, double theta0) {
  if (!(e >= 0.0 && e <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "eigenvalue shift E must lie in [0,1]");
  }
  const int first = break_index(series.size(), theta0);
  const int cols = std::min(4, series.dimension());
  const double factor = std::sqrt(1.0 - std::sqrt(e));
  series.rows.block(first, 0, series.size() - first, cols) *= factor;
  return series;
}

FunctionalSample apply_rotation_break(FunctionalSample series, double phi, double theta0) {
  if (series.dimension() < 2) {
    throw Error(ErrorCode::kDimension, "rotation needs at least two coordinates");
  }
  const int first = break_index(series.size(), theta0);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  for (int n = first; n < series.size(); ++n) {
    const double a1 = series.rows(n, 0);
    const double a2 = series.rows(n, 1);
    series.rows(n, 0) = c * a1 - s * a2;
    series.rows(n, 1) = s * a1 + c * a2;
  }
  return series;
}

std::pair<CovKernel, CovKernel> population_kernels(const DGPSpec& spec) {
  spec.validate();
  const std::vector<double> tau = spec.eigenvalues();
  const int t = spec.order;
  Eigen::MatrixXd before = Eigen::Map<const Eigen::VectorXd>(tau.data(), t).asDiagonal();
  Eigen::MatrixXd after = before;
  switch (spec.break_kind) {
    case BreakKind::kNone:
      break;
    case BreakKind::kEigenvalueShift: {
      const double factor = 1.0 - std::sqrt(spec.magnitude);
      for (int k = 0; k < std::min(4, t); ++k) after(k, k) *= factor;
      break;
    }
    case BreakKind::kRotation: {
      Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(t, t);
      const double c = std::cos(spec.magnitude);
      const double s = std::sin(spec.magnitude);
      rot(0, 0) = c;
      rot(0, 1) = -s;
      rot(1, 0) = s;
      rot(1, 1) = c;
      after = rot * before * rot.transpose();
      break;
    }
  }
  return {CovKernel{before, Representation::kCoefficient},
          CovKernel{after, Representation::kCoefficient}};
}

}  // namespace relspec
