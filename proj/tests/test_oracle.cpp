#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "fnr/oracle.hpp"

using namespace fnr;

TEST(BuildFoguel, SingleLevel) {
  const auto m = build_foguel(1.0, 1).dense();
  ASSERT_EQ(m.rows(), 2);
  EXPECT_EQ(m(0, 0), cplx(0.0));
  EXPECT_EQ(m(0, 1), cplx(1.0));
  EXPECT_EQ(m(1, 0), cplx(0.0));
  EXPECT_EQ(m(1, 1), cplx(0.0));
}

TEST(BuildFoguel, TwoLevelsShiftTranscription) {
  const auto m = build_foguel(1.0, 2).dense();
  ASSERT_EQ(m.rows(), 4);
  // S* in the top-left block: single 1 at (1, 2) in 1-based indexing
  EXPECT_EQ(m(0, 1), cplx(1.0));
  EXPECT_EQ(m(1, 0), cplx(0.0));
  // S in the bottom-right block: S e_1 = e_2
  EXPECT_EQ(m(3, 2), cplx(1.0));
  EXPECT_EQ(m(2, 3), cplx(0.0));
  // lower-left block vanishes
  for (int i = 2; i < 4; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_EQ(m(i, j), cplx(0.0));
}

TEST(BuildFoguel, CouplingBlockIsAIdentity) {
  const cplx a(0.0, 2.0);
  const auto m = build_foguel(a, 3).dense();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(m(i, 3 + j), i == j ? a : cplx(0.0));
}

TEST(BuildFoguel, SparsityAndNorm) {
  for (std::size_t n : {1u, 2u, 5u, 40u}) {
    const auto op = build_foguel(cplx(0.3, -0.4), n);
    EXPECT_EQ(op.nonzero_count(), 3 * n - 2);
    EXPECT_EQ(build_foguel(0.0, n).nonzero_count(), 2 * n - 2);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op.dense());
    EXPECT_LE(svd.singularValues()(0), op.norm_bound() + 1e-12);
  }
  EXPECT_THROW(build_foguel(1.0, 0), std::invalid_argument);
}

TEST(HermitianRotation, ExactlyHermitianAndMatchesDefinition) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const cplx a(u(rng), u(rng));
    const double theta = u(rng);
    const auto op = build_foguel(a, 7);
    const auto h = hermitian_rotation(op, theta).dense();
    const Eigen::MatrixXcd adj = h.adjoint();
    EXPECT_TRUE(h == adj);  // exact, entry by entry
    for (Eigen::Index i = 0; i < h.rows(); ++i) EXPECT_EQ(h(i, i).imag(), 0.0);
    const cplx w = std::polar(1.0, theta);
    const Eigen::MatrixXcd f = op.dense();
    const Eigen::MatrixXcd expected = (std::conj(w) * f + w * f.adjoint()) / 2.0;
    EXPECT_LE((h - expected).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(OracleLambdaMax, TwoByTwo) {
  EXPECT_NEAR(oracle_lambda_max(0.0, 1.0, 1), 0.5, 1e-14);
  EXPECT_NEAR(oracle_lambda_max(0.0, 1.0, 1, EigenMethod::Dense), 0.5, 1e-14);
}

TEST(OracleLambdaMax, ChebyshevSpectrumWhenAIsZero) {
  for (std::size_t n : {1u, 2u, 3u, 10u, 57u, 300u})
    for (double theta : {0.0, 0.4, -2.0, pi / 2.0}) {
      const double expected = std::cos(pi / static_cast<double>(n + 1));
      EXPECT_NEAR(oracle_lambda_max(theta, 0.0, n), expected, 1e-12) << n << " " << theta;
    }
}

TEST(OracleLambdaMax, BandedAgreesWithDense) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const cplx a(u(rng), u(rng));
    const double theta = 2.0 * u(rng);
    const std::size_t n = 1 + rng() % 64;
    EXPECT_NEAR(oracle_lambda_max(theta, a, n), oracle_lambda_max(theta, a, n, EigenMethod::Dense), 1e-11)
        << n << " " << a << " " << theta;
  }
}

TEST(OracleLambdaMax, DensePathLimited) {
  EXPECT_THROW(oracle_lambda_max(0.0, 1.0, 65, EigenMethod::Dense), std::invalid_argument);
}

TEST(OracleLambdaMax, ResidualBelowThreshold) {
  const auto res = top_eigenvalue(hermitian_rotation(build_foguel(1.0, 400), 0.7));
  EXPECT_LE(res.residual, 1e-11);
  EXPECT_GT(res.iterations, 0);
}

TEST(OracleLambdaMax, NonConvergenceReported) {
  try {
    top_eigenvalue(hermitian_rotation(build_foguel(1.0, 50), 0.3), EigenMethod::Banded, 0.0);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 50);
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(OracleLambdaMax, MonotoneInNAndBelowClosedForm) {
  for (double theta = -pi; theta < pi; theta += 2.0 * pi / 36.0) {
    double previous = -1.0;
    for (std::size_t n : {1u, 2u, 4u, 8u, 25u, 50u, 100u, 200u}) {
      const double v = oracle_lambda_max(theta, 1.0, n);
      EXPECT_GE(v, previous - 1e-12) << theta << " " << n;
      EXPECT_LE(v, lambda_max(theta, 0.5) + 1e-12) << theta << " " << n;
      previous = v;
    }
  }
}

TEST(OracleLambdaMax, ApproachesNumericalRadius) {
  const double v = oracle_lambda_max(0.0, 1.0, 400);
  EXPECT_LT(v, 1.5);
  EXPECT_GT(v, 1.5 - 5e-3);
}

TEST(OracleLambdaMax, PhaseInvariance) {
  for (double phase : {pi / 7.0, 1.0, -2.5})
    for (double theta : {0.0, 0.9, 2.0, -1.3}) {
      EXPECT_NEAR(oracle_lambda_max(theta, std::polar(1.0, phase), 120), oracle_lambda_max(theta, 1.0, 120), 1e-10);
    }
}

TEST(OracleFRange, Examples) {
  const auto first = oracle_f_range(2.0, 0.0, 100000);
  EXPECT_NEAR(first.lo, -6.0, 1e-7);
  EXPECT_NEAR(first.hi, 10.0, 1e-7);
  const auto vertical = oracle_f_range(1.5, pi / 2.0, 100000);
  EXPECT_NEAR(vertical.lo, -2.0, 1e-7);
  EXPECT_NEAR(vertical.hi, 0.0, 1e-7);
  const auto closed = f_range(1.2, 1.0);
  const auto grid = oracle_f_range(1.2, 1.0, 100000);
  EXPECT_NEAR(grid.lo, closed.lo, 1e-7);
  EXPECT_NEAR(grid.hi, closed.hi, 1e-7);
  EXPECT_THROW(oracle_f_range(1.2, 1.0, 999), std::invalid_argument);
}

TEST(OracleFRange, TableMatchesDirectScan) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> angle(-pi, pi), lam(0.5, 4.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double theta = angle(rng);
    const FRangeTable table(theta, 4000);
    for (int q = 0; q < 20; ++q) {
      const double lambda = lam(rng);
      const auto a = table.range(lambda);
      const auto b = oracle_f_range(lambda, theta, 4000);
      EXPECT_NEAR(a.lo, b.lo, 1e-13);
      EXPECT_NEAR(a.hi, b.hi, 1e-13);
    }
  }
}

TEST(OracleViaCondition, Examples) {
  const auto grid = default_lambda_grid(0.5);
  EXPECT_NEAR(oracle_lambda_max_via_condition(0.0, 0.5, grid), 1.5, 1e-4);
  EXPECT_NEAR(oracle_lambda_max_via_condition(pi / 2.0, 0.5, grid), std::sqrt(1.25), 1e-4);
  EXPECT_NEAR(oracle_lambda_max_via_condition(pi / 3.0, 0.5, grid), lambda_max(pi / 3.0, 0.5), 1e-4);
}

TEST(OracleViaCondition, EmptyGridRejected) {
  const std::vector<double> grid;
  EXPECT_THROW(oracle_lambda_max_via_condition(0.0, 0.5, grid), std::runtime_error);
}

TEST(OracleBoundary, InsideClosedForm) {
  for (const auto& p : oracle_boundary(1.0, 200, 360))
    EXPECT_NE(contains(p.x, p.y, 0.5, 720, 1e-2).where, Location::Exterior);
}

TEST(OracleBoundary, UnitCircleWhenAIsZero) {
  for (const auto& p : oracle_boundary(0.0, 200, 360)) {
    const double rho = std::hypot(p.x, p.y);
    EXPECT_LT(rho, 1.0);
    EXPECT_GT(rho, 1.0 - 1e-3);
  }
}

TEST(OracleBoundary, PhaseOfAIsIrrelevant) {
  const auto base = oracle_boundary(1.0, 200, 360);
  const auto rotated = oracle_boundary(std::polar(1.0, 2.1), 200, 360);
  ASSERT_EQ(base.size(), rotated.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_NEAR(base[i].x, rotated[i].x, 1e-9);
    EXPECT_NEAR(base[i].y, rotated[i].y, 1e-9);
  }
}

TEST(OracleBoundary, Preconditions) {
  EXPECT_THROW(oracle_boundary(1.0, 49, 360), std::invalid_argument);
  EXPECT_THROW(oracle_boundary(1.0, 200, 89), std::invalid_argument);
}
