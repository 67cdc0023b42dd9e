#include <gtest/gtest.h>

#include <revprime/basedigits.hpp>
#include <revprime/core.hpp>

using namespace revprime;

TEST(BaseDigits, DigitsOfSmall) {
  const BaseContext ten(10), two(2);
  EXPECT_TRUE(ten.digits_of(0).empty());
  EXPECT_EQ(ten.len(0), 0u);
  EXPECT_EQ(two.digits_of(6), (std::vector<unsigned>{0, 1, 1}));
  EXPECT_EQ(ten.digits_of(1234), (std::vector<unsigned>{4, 3, 2, 1}));
}

TEST(BaseDigits, ReverseExamples) {
  const BaseContext ten(10), two(2);
  EXPECT_EQ(ten.reverse(1234), 4321u);
  EXPECT_EQ(ten.reverse(100), 1u);
  EXPECT_EQ(two.reverse(6), 3u);
  EXPECT_EQ(ten.reverse_relative(3, 2), 30u);
  EXPECT_EQ(ten.reverse_relative(1234, 4), 4321u);
  EXPECT_EQ(ten.reverse_relative(1230, 6), 32100u);
}

TEST(BaseDigits, PowCache) {
  const BaseContext b(3);
  EXPECT_EQ(b.pow(0), 1u);
  for (unsigned i = 0; i < b.max_power(); ++i) EXPECT_TRUE(b.pow(i + 1) == b.pow(i) * 3);
  const BaseContext two(2);
  EXPECT_EQ(two.max_power(), 127u);
}

TEST(BaseDigits, RoundTripUpToMillion) {
  for (unsigned g : {2u, 3u, 7u, 10u, 16u}) {
    const BaseContext b(g);
    for (std::uint64_t n = 0; n <= 1000000; ++n) ASSERT_TRUE(b.from_digits(b.digits_of(n)) == n) << g << " " << n;
  }
}

TEST(BaseDigits, LenMatchesIntegerLog) {
  for (unsigned g : {2u, 3u, 10u}) {
    const BaseContext b(g);
    for (std::uint64_t n = 1; n < 200000; n += 7) {
      unsigned expect = 0;
      for (std::uint64_t p = 1; p <= n; p *= g) ++expect;
      ASSERT_EQ(b.len(n), expect);
    }
    // exactly at powers of g
    for (unsigned k = 0; k < 20; ++k) EXPECT_EQ(b.len(b.pow(k)), k + 1);
  }
}

TEST(BaseDigits, ReverseInvolutionWhenLastDigitNonzero) {
  for (unsigned g : {2u, 3u, 10u}) {
    const BaseContext b(g);
    for (std::uint64_t n = 1; n < 100000; ++n) {
      if (n % g == 0) continue;
      ASSERT_TRUE(b.reverse(b.reverse(n)) == n);
    }
  }
}

TEST(BaseDigits, RelativeAgreesInsideWindow) {
  for (unsigned g : {2u, 10u})
    for (unsigned L = 1; L <= 6; ++L) {
      const BaseContext b(g);
      for (std::uint64_t n = b.pow64(L - 1); n < b.pow64(L); ++n) ASSERT_TRUE(b.reverse_relative(n, L) == b.reverse(n));
    }
  Rng rng(7);
  for (unsigned g : {2u, 3u, 10u}) {
    const BaseContext b(g);
    for (int k = 0; k < 200; ++k) {
      const auto L = static_cast<unsigned>(rng.integer(1, 10));
      const auto n = static_cast<std::uint64_t>(
          rng.integer(static_cast<std::int64_t>(b.pow64(L - 1)), static_cast<std::int64_t>(b.pow64(L)) - 1));
      ASSERT_TRUE(b.reverse_relative(n, L) == b.reverse(n));
    }
  }
}

TEST(BaseDigits, RelativeReverseModQ) {
  const BaseContext b(10);
  for (std::uint64_t n = 0; n < 5000; ++n)
    for (std::uint64_t q : {1u, 3u, 7u, 12u}) ASSERT_EQ(b.reverse_relative_mod(n, 5, q), b.reverse_relative(n, 5) % q);
}

TEST(BaseDigits, WideReverse) {
  const BaseContext b(10);
  const uint128 n = b.pow(30) + 7;  // 1 followed by 29 zeros then 7
  EXPECT_TRUE(b.reverse(n) == 7 * b.pow(30) + 1);
}

TEST(NumericHelpers, DistAndFrac) {
  EXPECT_DOUBLE_EQ(dist(0.25), 0.25);
  EXPECT_DOUBLE_EQ(dist(-1.75), 0.25);
  EXPECT_DOUBLE_EQ(dist(3.0), 0.0);
  EXPECT_DOUBLE_EQ(frac(-0.25), 0.75);
  EXPECT_NEAR(std::abs(unit(0.5) + 1.0), 0.0, 1e-15);
}

TEST(NumericHelpers, FracMulIsExact) {
  // beta = 1/8 + 2^-40, n = 2^40 + 1: beta n = 2^37 + 1 + 1/8 + 2^-40
  const double beta = 0.125 + std::ldexp(1.0, -40);
  const FracMul fm(beta);
  EXPECT_EQ(fm((uint128(1) << 40) + 1), 0.125 + std::ldexp(1.0, -40));
  EXPECT_EQ(fm(8), std::ldexp(1.0, -37));
  EXPECT_EQ(frac_mul(0.5, 3), 0.5);
  // a product far beyond 2^53
  EXPECT_EQ(frac_mul(std::ldexp(1.0, -60) * 3, uint128(1) << 59), 0.5);
}

TEST(NumericHelpers, RationalArithmetic) {
  Rational a(1, 3), b(1, 6);
  EXPECT_EQ((a + b).str(), "1/2");
  EXPECT_EQ((a * b).str(), "1/18");
  EXPECT_EQ(Rational(4, 2).str(), "2");
}
