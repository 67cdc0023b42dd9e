#include <gtest/gtest.h>

#include <revprime/revcount.hpp>

#include "oracle_values.hpp"

using namespace revprime;

TEST(Rho, Examples) {
  EXPECT_EQ(rho(10, 0, 1).str(), oracle::kRho10_0_1);
  EXPECT_EQ(rho(10, 1, 3).str(), oracle::kRho10_1_3);
  EXPECT_EQ(rho(10, 5, 10).str(), oracle::kRho10_5_10);
  EXPECT_EQ(rho(2, 1, 15).str(), oracle::kRho2_1_15);
  EXPECT_EQ(rho(3, 4, 12).str(), oracle::kRho3_4_12);
  EXPECT_EQ(rho(10, -2, 3).str(), rho(10, 1, 3).str());
  EXPECT_THROW(rho(1, 0, 3), precondition_error);
  EXPECT_THROW(rho(10, 0, 0), precondition_error);
}

TEST(Rho, AveragesToOneMinusOneOverG) {
  const std::map<unsigned, std::string> want{{2, oracle::kRhoSum2}, {3, oracle::kRhoSum3}, {10, oracle::kRhoSum10}};
  for (const auto& [g, s] : want)
    for (std::uint64_t q = 1; q <= 60; ++q) {
      Rational sum(0);
      for (std::uint64_t a = 0; a < q; ++a) sum = sum + rho(g, static_cast<std::int64_t>(a), q);
      ASSERT_EQ((sum / Rational(q)).str(), s) << "g=" << g << " q=" << q;
    }
}

TEST(SharpModulus, MatchesDirectGcd) {
  for (unsigned g : {2u, 3u, 10u})
    for (unsigned L = 1; L <= 8; ++L) {
      std::uint64_t gl = 1;
      for (unsigned i = 0; i < L; ++i) gl *= g;
      const std::uint64_t big = gl * (std::uint64_t(g) * g - 1);
      for (std::uint64_t q = 1; q <= 200; ++q) ASSERT_EQ(sharp_modulus(g, L, q), std::gcd(q, big));
    }
  EXPECT_EQ(sharp_modulus(10, 3, 7), 1u);
  EXPECT_EQ(sharp_modulus(10, 2, 33), 33u);
}

TEST(Census, Examples) {
  const PrimeTable pt = PrimeTable::build(100000);
  EXPECT_EQ(census(10, 2, 0, 1, pt).observed, std::uint64_t(oracle::kCensus10L2));
  EXPECT_EQ(census(10, 5, 1, 3, pt).observed, std::uint64_t(oracle::kCensus10L5a1q3));
  EXPECT_EQ(census(10, 5, 3, 7, pt).observed, std::uint64_t(oracle::kCensus10L5a3q7));
  const PrimeTable pt2 = PrimeTable::build(65536);
  const auto recs = census_batch(2, 16, full_residue_queries({3}), pt2);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].observed, std::uint64_t(oracle::kCensus2L16q3a0));
  EXPECT_EQ(recs[1].observed, std::uint64_t(oracle::kCensus2L16q3a1));
  EXPECT_EQ(recs[2].observed, std::uint64_t(oracle::kCensus2L16q3a2));
  EXPECT_FALSE(recs[0].admissible());
  EXPECT_TRUE(std::isnan(recs[0].relative_dev));
  EXPECT_LE(recs[0].observed, recs[0].exceptional_cap);
  EXPECT_THROW(census(10, 6, 0, 1, pt), sieve_limit_error);
}

TEST(Census, ResiduesPartitionTheCount) {
  const PrimeTable pt = PrimeTable::build(100000);
  const auto total = census(10, 5, 0, 1, pt).observed;
  EXPECT_EQ(total, pt.prime_count(99999) - pt.prime_count(9999));
  for (std::uint64_t q : {4u, 7u, 11u, 12u, 99u}) {
    std::uint64_t sum = 0;
    for (const auto& r : census_batch(10, 5, full_residue_queries({q}), pt)) sum += r.observed;
    EXPECT_EQ(sum, total) << q;
  }
}

TEST(Census, ReverseKeepsResidueModThreeInBaseTen) {
  const PrimeTable pt = PrimeTable::build(100000);
  for (std::int64_t a = 0; a < 3; ++a) {
    std::uint64_t direct = 0;
    for (auto p : pt.primes_in(10000, 100000)) direct += static_cast<std::int64_t>(p % 3) == a;
    EXPECT_EQ(census(10, 5, a, 3, pt).observed, direct);
  }
}

TEST(Census, ThreadsDoNotChangeCounts) {
  const PrimeTable pt = PrimeTable::build(1 << 18);
  const auto one = census_batch(2, 18, full_residue_queries({5, 7, 9}), pt, 1);
  const auto many = census_batch(2, 18, full_residue_queries({5, 7, 9}), pt, 8);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t k = 0; k < one.size(); ++k) {
    EXPECT_EQ(one[k].observed, many[k].observed);
    EXPECT_EQ(one[k].sharp_observed, many[k].sharp_observed);
  }
}

TEST(Counting, ReducesToClassicalSums) {
  const PrimeTable pt = PrimeTable::build(100000);
  EXPECT_NEAR(psi_theta_pi(10, 6, 10000, 0, 1, pt, CountKind::psi, false), oracle::kPsi1e4, 1e-8);
  EXPECT_EQ(psi_theta_pi(10, 6, 100000, 0, 1, pt, CountKind::pi, false), double(oracle::kPi1e5));
  EXPECT_EQ(psi_theta_pi(10, 6, 1.5, 0, 1, pt, CountKind::pi, false), 0.0);
  EXPECT_LT(psi_theta_pi(10, 6, 10000, 0, 1, pt, CountKind::theta, false), oracle::kPsi1e4);
  EXPECT_THROW(parse_count_kind("li"), precondition_error);
}

TEST(Counting, SharpRelationWhenModulusIsSharp) {
  const PrimeTable pt = PrimeTable::build(100000);
  // (11, 10^5 * 99) = 11, so both sides count the same primes
  const auto s = sharp_relation(10, 5, 100000, 4, 11, pt, CountKind::pi);
  EXPECT_EQ(s.modulus_sharp, 11u);
  EXPECT_EQ(s.lhs, s.rhs);
  const auto t = sharp_relation(10, 5, 100000, 4, 7, pt, CountKind::psi);
  EXPECT_EQ(t.modulus_sharp, 1u);
  EXPECT_LT(std::fabs(t.deviation), 0.1);
}

TEST(Landing, Examples) {
  const auto a = i0_landing(10, 0.001);
  EXPECT_EQ(a.i0, 2);
  EXPECT_NEAR(a.value, 0.1, 1e-12);
  const auto b = i0_landing(10, 0.3);
  EXPECT_EQ(b.i0, 0);
  EXPECT_NEAR(b.value, 0.3, 1e-15);
  EXPECT_THROW(i0_landing(10, 3.0), degenerate_input_error);
  Rng rng(77);
  for (unsigned g : {2u, 3u, 10u})
    for (int k = 0; k < 2000; ++k) {
      const double alpha = rng.uniform(-5, 5);
      if (dist(alpha) < 1e-9) continue;
      const auto l = i0_landing(g, alpha);
      ASSERT_GE(l.value, 1.0 / (g + 1) - 1e-9) << g << " " << alpha;
    }
}

TEST(SigmaLower, BlocksAndChain) {
  for (unsigned g : {2u, 3u, 10u}) {
    const auto r = sigma_lower_blocks(g, 40, 20, Coefficient::rational(1, 7));
    EXPECT_GT(r.sigma_hat, 0);
    EXPECT_GE(r.J, 1);
    EXPECT_TRUE(r.block_bound.pass) << r.block_bound.to_json().dump();
    EXPECT_TRUE(r.chain_bound.pass) << r.chain_bound.to_json().dump();
  }
  EXPECT_THROW(sigma_lower_blocks(10, 8, 4, Coefficient::rational(1, 99)), degenerate_input_error);
  EXPECT_THROW(sigma_lower_blocks(10, 8, 9, Coefficient::rational(1, 7)), precondition_error);
}
