#include "relspec/changepoint.hpp"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "relspec/datagen.hpp"
#include "relspec/error.hpp"

namespace relspec {
namespace {

// Independent oracle: explicit averages of outer products, squared Frobenius norm.
double brute_objective(const Eigen::MatrixXd& x, int k) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  double total = 0.0;
  for (int s = 0; s < d; ++s) {
    for (int t = 0; t < d; ++t) {
      double pre = 0.0, post = 0.0;
      for (int i = 0; i < k; ++i) pre += x(i, s) * x(i, t);
      for (int i = k; i < n; ++i) post += x(i, s) * x(i, t);
      const double diff = pre / k - post / (n - k);
      total += diff * diff;
    }
  }
  return static_cast<double>(k) * (n - k) / (static_cast<double>(n) * n) * total;
}

Eigen::MatrixXd random_rows(int n, int d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, d);
  for (auto& v : x.reshaped()) v = normal(rng);
  return x;
}

TEST(Cusum, IdenticalFunctionsGiveZero) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(12, 4);
  const FunctionalSample s = FunctionalSample::coefficients(x);
  for (double f : cusum_scan(s)) EXPECT_EQ(f, 0.0);
}

TEST(Cusum, StreamingMatchesBruteForceForSmallN) {
  for (int n = 2; n <= 20; ++n) {
    const Eigen::MatrixXd x = random_rows(n, 5, 100 + n);
    const FunctionalSample s = FunctionalSample::coefficients(x);
    const std::vector<double> scan = cusum_scan(s);
    ASSERT_EQ(static_cast<int>(scan.size()), n - 1);
    for (int k = 1; k < n; ++k) {
      const double oracle = brute_objective(x, k);
      EXPECT_NEAR(scan[k - 1], oracle, 1e-10) << "N=" << n << " k=" << k;
      EXPECT_NEAR(cusum_objective(s, k), oracle, 1e-10);
    }
  }
}

TEST(Cusum, GridModeUsesQuadratureWeight) {
  const Eigen::MatrixXd coeffs = random_rows(15, 7, 3);
  const FourierBasis basis = fourier_basis(7, 24);
  const FunctionalSample c = FunctionalSample::coefficients(coeffs);
  const FunctionalSample g = to_grid(c, basis);
  for (int k = 1; k < 15; ++k) EXPECT_NEAR(cusum_objective(c, k), cusum_objective(g, k), 1e-10);
}

TEST(Cusum, SignFlipInvariance) {
  const Eigen::MatrixXd x = random_rows(30, 4, 4);
  const auto a = cusum_scan(FunctionalSample::coefficients(x));
  const auto b = cusum_scan(FunctionalSample::coefficients(-x));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(Cusum, NoiselessPlantedBreakPeaksAtMidpoint) {
  // Every observation's outer product equals its segment's kernel: u u' before,
  // (1 - sqrt(0.9)) u u' after.
  Eigen::RowVectorXd u(21);
  for (int k = 0; k < 21; ++k) u(k) = 1.0 / (k + 1.0);
  Eigen::MatrixXd x(400, 21);
  const double scale = std::sqrt(1.0 - std::sqrt(0.9));
  for (int n = 0; n < 400; ++n) x.row(n) = n < 200 ? u : Eigen::RowVectorXd(scale * u);
  const FunctionalSample s = FunctionalSample::coefficients(x);
  const std::vector<double> scan = cusum_scan(s);
  const int argmax = static_cast<int>(std::max_element(scan.begin(), scan.end()) - scan.begin()) + 1;
  EXPECT_EQ(argmax, 200);
  const double jump = (1.0 - scale * scale) * u.squaredNorm();
  EXPECT_NEAR(scan[199], 0.25 * jump * jump, 1e-12);
  EXPECT_EQ(estimate_changepoint(s, 0.0).k_hat, 200);
}

TEST(Estimate, RangeRespectsEpsilon) {
  DGPSpec spec;
  spec.n = 400;
  spec.seed = 8;
  const FunctionalSample s = generate(spec);
  const ChangePointEstimate e = estimate_changepoint(s, 0.05);
  EXPECT_EQ(e.k_min, 20);
  EXPECT_EQ(e.k_max(), 380);
  EXPECT_GE(e.k_hat, 20);
  EXPECT_LE(e.k_hat, 380);
  EXPECT_DOUBLE_EQ(e.theta_hat, e.k_hat / 400.0);
  const ChangePointEstimate full = estimate_changepoint(s, 0.0);
  EXPECT_EQ(full.k_min, 1);
  EXPECT_EQ(full.k_max(), 399);
  for (double f : full.objective) EXPECT_GE(f, 0.0);
}

TEST(Estimate, RestrictionNeverIncreasesMaximum) {
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const FunctionalSample s = FunctionalSample::coefficients(random_rows(60, 5, seed));
    double last = std::numeric_limits<double>::infinity();
    for (double eps : {0.0, 0.05, 0.1, 0.2, 0.3, 0.45}) {
      const double m = estimate_changepoint(s, eps).max_objective();
      EXPECT_LE(m, last);
      last = m;
    }
  }
}

TEST(Estimate, TiesResolveToSmallestIndex) {
  // Alternating pattern gives f(k) symmetric around N/2 for this 4-row sample.
  Eigen::MatrixXd x(4, 1);
  x << 1.0, 0.0, 0.0, 1.0;
  const FunctionalSample s = FunctionalSample::coefficients(x);
  const std::vector<double> scan = cusum_scan(s);
  ASSERT_DOUBLE_EQ(scan[0], scan[2]);
  ASSERT_GT(scan[0], scan[1]);
  EXPECT_EQ(estimate_changepoint(s, 0.0).k_hat, 1);
}

TEST(Estimate, Errors) {
  const FunctionalSample s = FunctionalSample::coefficients(random_rows(10, 2, 1));
  EXPECT_THROW(estimate_changepoint(s, 0.5), Error);
  EXPECT_THROW(estimate_changepoint(s, -0.1), Error);
  EXPECT_THROW(estimate_changepoint(FunctionalSample::coefficients(random_rows(3, 2, 1)), 0.0),
               Error);
  EXPECT_THROW(cusum_objective(s, 0), Error);
  EXPECT_THROW(cusum_objective(s, 10), Error);
}

TEST(Estimate, LocatesLargeEigenvalueBreak) {
  std::vector<double> err;
  for (int rep = 0; rep < 500; ++rep) {
    DGPSpec spec;
    spec.n = 400;
    spec.break_kind = BreakKind::kEigenvalueShift;
    spec.magnitude = 0.5;
    spec.seed = 5000 + rep;
    err.push_back(std::abs(estimate_changepoint(generate(spec), 0.05).theta_hat - 0.5));
  }
  std::nth_element(err.begin(), err.begin() + 250, err.end());
  EXPECT_LE(err[250], 0.02);
}

TEST(Estimate, WithoutBreakFavoursBoundaryWhenUntrimmed) {
  int boundary = 0;
  const int reps = 500;
  for (int rep = 0; rep < reps; ++rep) {
    DGPSpec spec;
    spec.n = 200;
    spec.seed = 9000 + rep;
    const double th = estimate_changepoint(generate(spec), 0.0).theta_hat;
    if (th < 0.05 || th > 0.95) ++boundary;
  }
  EXPECT_GT(boundary, reps / 10);
}

}  // namespace
}  // namespace relspec
