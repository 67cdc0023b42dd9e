#include <gtest/gtest.h>

#include <revprime/primesum.hpp>

#include "oracle_values.hpp"

using namespace revprime;

TEST(TypeI, ZeroSeedIsFloorSum) {
  const ExpSumContext z(zero_seed(10));
  const auto p = make_type_i_params(z, 4, 10000, 100);
  EXPECT_NEAR(type_i_sum(z, p), double(oracle::kTypeIZero), 1e-6);
  EXPECT_EQ(p.xi, 4);
}

TEST(TypeI, SingleMAndPreconditions) {
  const ExpSumContext es(reverse_seed(2, 14, Coefficient::rational(1, 3)));
  const auto p = make_type_i_params(es, 14, 16384, 1);
  const auto E = phase_values(es.seed(), 14, 16384);
  complex run = 0;
  double best = 0;
  for (std::uint64_t n = 1; n <= 16384; ++n) {
    run += E[n];
    best = std::max(best, std::abs(run));
  }
  EXPECT_NEAR(type_i_sum(es, p), best, 1e-9);
  EXPECT_THROW(type_i_sum(es, make_type_i_params(es, 14, 16384, 200)), precondition_error);
  EXPECT_THROW(type_i_sum(es, make_type_i_params(es, 10, 16384, 4)), precondition_error);  // x > g^L
  EXPECT_THROW(type_i_sum(es, make_type_i_params(es, 30, 2e6, 4)), cost_budget_error);
}

TEST(TypeII, ParametersFollowTheProof) {
  const ExpSumContext es(reverse_seed(2, 16, Coefficient::rational(1, 3)));
  const auto p = make_type_ii_params(es, 16, 65536, 32, 512, 0.25, CoefficientKind::mobius_c2);
  EXPECT_EQ(p.xi, 4);
  EXPECT_NEAR(p.kappa, es.sigma(4, 0) / 10, 1e-18);
  EXPECT_NEAR(p.R, std::pow(2.0, 2 * p.kappa), 1e-15);
  EXPECT_LE(std::pow(2.0, p.lambda - 1), 32 * p.R * p.R);
  EXPECT_GT(std::pow(2.0, p.lambda), 32 * p.R * p.R);
  EXPECT_EQ(p.mu, 6);  // 2^5 <= 32 < 2^6
}

TEST(TypeII, ZeroCoefficientsAndEmptyRange) {
  const PrimeTable pt = PrimeTable::build(10000);
  const ExpSumContext es(random_seed(2, 3));
  const auto zero = make_type_ii_params(es, 14, 10000, 10, 10, 0.25, CoefficientKind::zero);
  EXPECT_EQ(std::abs(type_ii_sum(es, zero, &pt)), 0.0);
  const auto empty = make_type_ii_params(es, 14, 10000, 200, 100, 0.25, CoefficientKind::unimodular_random, 1);
  EXPECT_EQ(std::abs(type_ii_sum(es, empty, &pt)), 0.0);
  const auto small = make_type_ii_params(es, 14, 10000, 5, 100, 0.25, CoefficientKind::mobius_c2);
  EXPECT_THROW(type_ii_sum(es, small, &pt), precondition_error);  // M < x^theta
}

TEST(TypeII, MobiusC2MatchesDoubleLoop) {
  const std::uint64_t x = 10000;
  const PrimeTable pt = PrimeTable::build(x);
  const ExpSumContext es(zero_seed(10));
  const auto p = make_type_ii_params(es, 4, double(x), 12, 40, 0.25, CoefficientKind::mobius_c2);
  const double z = std::pow(double(x), 0.25), lx = std::log(double(x));
  complex direct = 0;
  for (std::uint64_t m = 13; m <= 24; ++m)
    for (std::uint64_t n = 41; n <= 80 && m * n <= x; ++n) direct += double(pt.mu(m)) * vaughan_c2(n, z, pt) / lx;
  EXPECT_NEAR(std::abs(type_ii_sum(es, p, &pt) - direct), 0.0, 1e-8);
}

TEST(Truncation, ContainmentAndTrivialCases) {
  const ExpSumContext es(reverse_seed(2, 16, Coefficient::rational(1, 3)));
  const long lam = truncation_lambda(2, 8, 4);
  EXPECT_EQ(lam, 8);  // 2^7 <= 128 < 2^8
  const auto t0 = truncation_set_size(es, 8, 64, 4, 0, 16, lam);
  EXPECT_EQ(t0.set_size, 0u);
  EXPECT_EQ(t0.superset_size, 0u);
  for (std::uint64_t r = 1; r <= 4; ++r) {
    const auto t = truncation_set_size(es, 8, 64, 4, r, 16, lam);
    EXPECT_TRUE(t.contained);
    EXPECT_LE(t.set_size, t.superset_size);
    EXPECT_EQ(t.pairs, 8u * 64u);
  }
  const auto one = truncation_set_size(es, 1, 1, 1, 1, 16, truncation_lambda(2, 1, 1));
  EXPECT_EQ(one.pairs, 1u);  // m = 2, n = 2
  EXPECT_THROW(truncation_set_size(es, 8, 64, 4, 1, 16, lam + 1), precondition_error);
  EXPECT_THROW(truncation_set_size(es, 8, 8, 4, 1, 16, lam), precondition_error);  // R > sqrt(N)
}

TEST(VanDerCorput, ExactCases) {
  std::vector<complex> ones(9, 1.0);
  const auto [l1, r1] = vdc_lhs_rhs(ones, 1);
  EXPECT_NEAR(l1, 81.0, 1e-12);
  EXPECT_NEAR(r1, 81.0, 1e-12);
  std::vector<complex> alt;
  for (int n = 0; n < 7; ++n) alt.push_back(n % 2 ? -1.0 : 1.0);
  const auto [l2, r2] = vdc_lhs_rhs(alt, 2);
  EXPECT_NEAR(l2, double(oracle::kVdcAltLhs), 1e-12);
  EXPECT_NEAR(r2, oracle::kVdcAltRhs, 1e-12);
}

TEST(SinSum, Examples) {
  const auto r0 = sin_sum_check(0, 1, 0.5, 10.0);
  EXPECT_NEAR(r0.lhs, 1.0, 1e-15);
  EXPECT_TRUE(r0.pass);
  const auto r1 = sin_sum_check(2, 5, 0.3, 100.0);
  EXPECT_NEAR(r1.lhs, oracle::kSinSumLhs, 1e-10);
  EXPECT_NEAR(r1.rhs, oracle::kSinSumRhs, 1e-10);
  EXPECT_TRUE(r1.pass);
  Rng rng(12);
  for (std::uint64_t m = 1; m <= 500; m += 7)
    for (int k = 0; k < 50; ++k) {
      const auto rep = sin_sum_check(rng.integer(-1000, 1000), m, rng.uniform(-3, 3), rng.uniform(0.1, 1000));
      ASSERT_TRUE(rep.pass) << rep.to_json().dump();
    }
}

TEST(PrimeSum, ZeroSeedIsChebyshevPsi) {
  const PrimeTable pt = PrimeTable::build(10000);
  const ExpSumContext z(zero_seed(10));
  const auto r = prime_exp_sum(z, 4, 10000, pt);
  EXPECT_NEAR(r.S.real(), oracle::kPsi1e4, 1e-8);
  EXPECT_NEAR(r.S.imag(), 0.0, 1e-12);
  EXPECT_EQ(r.xi, 1);
}

TEST(PrimeSum, XEqualsTwo) {
  const PrimeTable pt = PrimeTable::build(100);
  const ExpSumContext es(reverse_seed(2, 4, Coefficient::rational(1, 5)));
  const auto r = prime_exp_sum(es, 4, 2, pt);
  const complex want = std::log(2.0) * unit(f_phase(es.seed(), 4, 0, 2));
  EXPECT_NEAR(std::abs(r.S - want), 0.0, 1e-15);
}

TEST(PrimeSum, VaughanRouteAgrees) {
  const PrimeTable pt = PrimeTable::build(10000);
  for (unsigned g : {2u, 10u})
    for (const Seed& s : {zero_seed(g), sod_seed(g, 0.31), reverse_seed(g, g == 2 ? 14 : 4, Coefficient::rational(1, 7)),
                          random_seed(g, 8)}) {
      const ExpSumContext es(s);
      const unsigned L = g == 2 ? 14 : 4;
      const auto r = prime_exp_sum(es, L, 10000, pt, true);
      ASSERT_LE(std::abs(r.vaughan_total() - r.S), 1e-6 * std::max(1.0, std::abs(r.S))) << s.label();
    }
}

TEST(PrimeSum, ThreadCountDoesNotChangeBits) {
  const PrimeTable pt = PrimeTable::build(100000);
  const ExpSumContext es(reverse_seed(10, 5, Coefficient::rational(3, 7)));
  const auto a = prime_exp_sum(es, 5, 100000, pt, true, 1);
  const auto b = prime_exp_sum(es, 5, 100000, pt, true, 8);
  EXPECT_EQ(a.S, b.S);
  EXPECT_EQ(a.S2, b.S2);
}
