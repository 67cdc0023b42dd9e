#include <gtest/gtest.h>

#include <revprime/expsum.hpp>

#include "oracle_values.hpp"

using namespace revprime;

TEST(Constants, ThetaEtaOmega) {
  EXPECT_NEAR(theta_lower_bound(2), oracle::kThetaLower2, 1e-15);
  EXPECT_GT(theta_lower_bound(2), 1.0 / 8);
  EXPECT_NEAR(eta_first_branch(2), oracle::kEtaFirst2, 1e-15);
  EXPECT_NEAR(eta_tilde(2), oracle::kEtaTilde2, 1e-14);
  EXPECT_NEAR(eta_tilde(10), oracle::kEtaTilde10, 1e-14);
  EXPECT_NEAR(omega_g(2), oracle::kOmega2, 1e-14);
  EXPECT_NEAR(gamma_ceiling(2), oracle::kGammaCeiling2, 1e-16);
  for (unsigned g = 2; g <= 200; ++g) {  // past 200 the margin is below double rounding
    const double gd = g;
    ASSERT_GT(eta_tilde(g), 0.2075187);
    ASSERT_LT(eta_tilde(g), 0.5 - 1 / (4 * gd * gd * gd * std::log(gd)));
    ASSERT_GT(theta_lower_bound(g), 1 / (gd * gd * gd));
    ASSERT_LT(gamma_ceiling(g), 0.05);
  }
}

TEST(Phi, ZeroSeedClosedForm) {
  const ExpSumContext es(zero_seed(5));
  EXPECT_NEAR(es.phi(0, 0, 0.0), 5.0, 1e-13);
  const ExpSumContext two(zero_seed(2));
  EXPECT_NEAR(two.phi(3, 1, 0.5), 0.0, 1e-15);
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const double b = rng.uniform();
    const double want = std::fabs(std::sin(M_PI * 5 * b) / std::sin(M_PI * b));
    ASSERT_NEAR(es.phi(2, 1, b), want, 1e-11);
  }
}

TEST(F, DirectMatchesOracle) {
  const ExpSumContext rev(reverse_seed(10, 6, Coefficient::rational(1, 7)));
  EXPECT_NEAR(std::abs(rev.F_direct(4, 1, 0.3)), oracle::kFRev10L6a17lam4j1b03, 1e-14);
  EXPECT_NEAR(rev.F_abs_product(4, 1, 0.3), oracle::kFRev10L6a17lam4j1b03, 1e-14);
  const ExpSumContext sod(sod_seed(3, Coefficient::rational(1, 4)));
  const complex F = sod.F_direct(5, 0, 0.1);
  EXPECT_NEAR(F.real(), oracle::kFSod3a14lam5b01Re, 1e-14);
  EXPECT_NEAR(F.imag(), oracle::kFSod3a14lam5b01Im, 1e-14);
}

TEST(F, TrivialCases) {
  const ExpSumContext es(random_seed(3, 8));
  EXPECT_NEAR(std::abs(es.F_direct(0, 2, 0.77) - complex(1, 0)), 0.0, 1e-15);
  const ExpSumContext z(zero_seed(3));
  for (std::uint64_t h = 1; h < 27; ++h) ASSERT_NEAR(std::abs(z.F_direct(3, 0, h / 27.0)), 0.0, 1e-13);
  EXPECT_NEAR(z.F_abs_product(7, 0, 0.0), 1.0, 1e-13);
  // periodic in beta
  EXPECT_NEAR(std::abs(es.F_direct(4, 1, 0.3) - es.F_direct(4, 1, 1.3)), 0.0, 1e-12);
}

TEST(F, BudgetIsEnforced) {
  const ExpSumContext es(zero_seed(10), 1000);
  EXPECT_NO_THROW(es.F_direct(3, 0, 0.1));
  EXPECT_THROW(es.F_direct(4, 0, 0.1), cost_budget_error);
}

TEST(F, ProductFormulaAndRecursionSweep) {
  Rng rng(42);
  for (unsigned g : {2u, 3u, 10u}) {
    for (int c = 0; c < 60; ++c) {
      const Seed s = c % 3 == 0 ? random_seed(g, rng.next())
                     : c % 3 == 1 ? reverse_seed(g, 12, Coefficient::rational(rng.integer(1, 30), 31))
                                  : sod_seed(g, rng.uniform());
      const ExpSumContext es(s);
      const auto lam = static_cast<unsigned>(rng.integer(1, g == 10 ? 4 : 9));
      const auto j = static_cast<std::uint64_t>(rng.integer(0, 3));
      const double beta = rng.uniform();
      ASSERT_NEAR(std::abs(es.F_direct(lam, j, beta)), es.F_abs_product(lam, j, beta), 1e-10);
      const double rec = es.F_abs_product(lam - 1, j + 1, frac_mul(beta, g)) * es.phi(0, j, beta) / g;
      ASSERT_NEAR(es.F_abs_product(lam, j, beta), rec, 1e-12);
    }
  }
}

TEST(F, ProductRouteScalesToHugeLambda) {
  const ExpSumContext es(reverse_seed(2, 100000, Coefficient::rational(1, 3)));
  const double v = es.F_abs_product(100000, 0, 0.123);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GE(v, 0.0);
  EXPECT_LE(v, 1.0);
  EXPECT_TRUE(std::isfinite(es.F_log_abs_product(100000, 0, 0.123)));
}

TEST(F, RationalArgumentMatchesReal) {
  const ExpSumContext es(random_seed(3, 4));
  EXPECT_NEAR(es.F_abs_rational(6, 1, 5, 13), es.F_abs_product(6, 1, 5.0 / 13), 1e-12);
}

TEST(Gamma, Examples) {
  EXPECT_EQ(ExpSumContext(zero_seed(7)).gamma(3, 1), 0.0);
  EXPECT_NEAR(ExpSumContext(sod_seed(5, Coefficient::rational(1, 4))).gamma(0, 0), 0.0, 1e-18);
  const ExpSumContext a13(reverse_seed(2, 10, Coefficient::rational(1, 3)));
  EXPECT_NEAR(a13.gamma(3, 0), oracle::kGammaRev2L10a13i3, 1e-18);
  const ExpSumContext a15(reverse_seed(2, 10, Coefficient::rational(1, 5)));
  EXPECT_NEAR(a15.gamma(3, 0), oracle::kGammaRev2L10a15i3, 1e-16);
  // the ceiling is attained at g = 2
  const ExpSumContext a16(reverse_seed(2, 12, Coefficient::rational(1, 6)));
  EXPECT_NEAR(a16.gamma(10, 0), gamma_ceiling(2), 1e-16);
}

TEST(Sigma, ShiftIdentityAndValue) {
  const ExpSumContext es(reverse_seed(10, 8, Coefficient::rational(1, 7)));
  EXPECT_EQ(es.sigma(0, 2), 0.0);
  EXPECT_NEAR(es.sigma(6, 0), oracle::kSigmaRev10L8a17lam6, 1e-17);
  for (unsigned lam = 1; lam < 12; ++lam)
    EXPECT_NEAR(es.sigma(lam, 0) - es.sigma(lam - 1, 1), es.gamma(0, 0), 1e-15);
  const auto pre = es.sigma_prefix(10, 1);
  for (unsigned lam = 0; lam <= 10; ++lam) EXPECT_NEAR(pre[lam], es.sigma(lam, 1), 1e-16);
}

TEST(Theta, ZeroSeedAndRandomFloor) {
  EXPECT_NEAR(ExpSumContext(zero_seed(2)).theta_i(5), oracle::kThetaLower2, 1e-14);
  Rng rng(9);
  for (unsigned g : {2u, 3u, 5u})
    for (int k = 0; k < 200; ++k) {
      const ExpSumContext es(random_seed(g, rng.next()));
      ASSERT_GE(es.theta_i(0) + 1e-12, theta_lower_bound(g));
    }
}

TEST(Psi, OracleValuesAndDivisorCheck) {
  const ExpSumContext z6(zero_seed(6));
  EXPECT_NEAR(z6.psi(0, 0.37, 2, 3), oracle::kPsiZero6, 1e-13);
  const ExpSumContext t10(
      callable_seed(10, [](std::uint64_t i, unsigned d) { return double((7 * i + 3 * d * d + 1) % 11) / 11; }, "t"));
  EXPECT_NEAR(t10.psi(0, 1.3, 5, 2), oracle::kPsiTable10, 1e-13);
  EXPECT_THROW(z6.psi(0, 0.1, 4, 1), precondition_error);
}

TEST(L1, LevelsAndTrivialForms) {
  const ExpSumContext es(random_seed(2, 17));
  const auto A = es.l1_levels(6, 1, 0.31);
  for (std::uint64_t h = 0; h < 64; ++h)
    ASSERT_NEAR(A[6][h], es.F_abs_product(6, 1, (h + 0.31) / 64), 1e-13);
  // lambda = delta, k = 1: the sum is the single term
  EXPECT_NEAR(es.l1_moment(5, 0, 1, 5, 3, 0.4), es.F_abs_product(5, 0, 3.4 / 32), 1e-14);
  // zero seed, beta = 0: only h = 0 survives
  const ExpSumContext z(zero_seed(3));
  EXPECT_NEAR(z.l1_moment(5, 0, 1, 0, 0, 0.0), 1.0, 1e-12);
  EXPECT_THROW(es.l1_moment(5, 0, 2, 0, 0, 0.1), precondition_error);  // g | k
  EXPECT_THROW(es.l1_moment(5, 0, 1, 6, 0, 0.1), precondition_error);  // delta > lambda
  const ExpSumContext six(random_seed(6, 1));
  EXPECT_THROW(six.l1_moment(2, 0, 5, 0, 0, 0.1), precondition_error);  // 5 does not divide 36
}

TEST(L1, BoundOnSmallGrid) {
  for (unsigned g : {2u, 6u}) {
    const ExpSumContext es(reverse_seed(g, 9, Coefficient::rational(2, 11)));
    const unsigned lam = g == 2 ? 7 : 4;
    for (auto [k, delta] : es.l1_admissible(lam, 5))
      for (std::int64_t a = 0; a < static_cast<std::int64_t>(k * es.base().pow64(delta)); a += 3)
        ASSERT_LE(es.l1_moment(lam, 0, k, delta, a, 0.7),
                  es.l1_moment_rhs(lam, 0, k, delta, a, 0.7) * (1 + 1e-9) + 1e-12);
  }
}

TEST(Hybrid, ZeroSeedGeometricOracle) {
  const ExpSumContext z(zero_seed(2));
  EXPECT_NEAR(z.hybrid_sum(5, 0, 3), oracle::kHybridZero2L5M3, 1e-12);
  EXPECT_NEAR(z.hybrid_sum(5, 0, 1), z.F_abs_product(5, 0, 0.0) + z.F_abs_product(5, 0, 0.5), 1e-14);
}

TEST(GallagherSobolev, DerivativeMatchesFiniteDifference) {
  const ExpSumContext es(random_seed(3, 2));
  const double b = 0.271, h = 1e-6;
  const auto [F, dF] = es.F_product_with_derivative(5, 1, b);
  const auto [Fp, u1] = es.F_product_with_derivative(5, 1, b + h);
  const auto [Fm, u2] = es.F_product_with_derivative(5, 1, b - h);
  (void)u1;
  (void)u2;
  EXPECT_NEAR(std::abs(F), es.F_abs_product(5, 1, b), 1e-12);
  EXPECT_NEAR(std::abs((Fp - Fm) / (2 * h) - dF), 0.0, 1e-5 * std::max(1.0, std::abs(dF)));
}
