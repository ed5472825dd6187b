#include "charsum/lfun.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace charsum;
using arith::u64;
using chars::CharIndex;

// Reference values computed independently to 15 digits.
constexpr double kL1Mod3 = 0.604599788078073;  // pi / (3 sqrt 3)
constexpr double kL1Mod5 = 0.430408940964004;  // (2/sqrt 5) log golden ratio

TEST(L1Oracle, ClassicalValues) {
  const auto c3 = chars::build_context(3);
  const auto v3 = lfun::l1_series_oracle(c3, CharIndex{1}, 1e-13);
  EXPECT_NEAR(v3.value.real(), kL1Mod3, 1e-12);
  EXPECT_NEAR(v3.value.imag(), 0.0, 1e-12);
  EXPECT_LE(v3.tail_bound, 1e-13);
  EXPECT_EQ(v3.method, lfun::Method::oracle);
  const auto c5 = chars::build_context(5);
  const auto v5 = lfun::l1_series_oracle(c5, CharIndex{2}, 1e-13);
  EXPECT_NEAR(v5.value.real(), kL1Mod5, 1e-12);
  EXPECT_NEAR(kL1Mod3, std::numbers::pi / (3.0 * std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(kL1Mod5, 2.0 / std::sqrt(5.0) * std::log((1.0 + std::sqrt(5.0)) / 2.0), 1e-15);
}

TEST(L1Oracle, Preconditions) {
  const auto c7 = chars::build_context(7);
  EXPECT_THROW(lfun::l1_series_oracle(c7, CharIndex{0}), std::invalid_argument);
  EXPECT_THROW(lfun::l1_series_oracle(c7, CharIndex{1}, 1e-16), std::invalid_argument);
}

TEST(L1ClosedForm, CalibrationCases) {
  const auto c3 = chars::build_context(3);
  EXPECT_LT(std::abs(lfun::l1_closed_form(c3, CharIndex{1}).value -
                     lfun::l1_series_oracle(c3, CharIndex{1}).value),
            1e-10);
  const auto c5 = chars::build_context(5);
  EXPECT_LT(std::abs(lfun::l1_closed_form(c5, CharIndex{2}).value -
                     lfun::l1_series_oracle(c5, CharIndex{2}).value),
            1e-10);
  const auto c7 = chars::build_context(7);
  for (arith::u64 j = 1; j < 6; ++j)
    EXPECT_LT(std::abs(lfun::l1_closed_form(c7, CharIndex{j}).value -
                       lfun::l1_series_oracle(c7, CharIndex{j}).value),
              1e-10);
}

TEST(L1ClosedForm, SweepQ101) {
  const auto ctx = chars::build_context(101);
  double worst = 0.0;
  for (arith::u64 j = 1; j < ctx.order(); ++j)
    worst = std::max(worst, std::abs(lfun::l1_closed_form(ctx, CharIndex{j}).value -
                                     lfun::l1_series_oracle(ctx, CharIndex{j}, 1e-11).value));
  EXPECT_LE(worst, 1e-9);
}

TEST(L1All, MatchesClosedForm) {
  for (arith::u64 q : {7u, 101u, 1009u}) {
    const auto ctx = chars::build_context(q);
    const auto all = lfun::l1_all(ctx);
    ASSERT_EQ(all.size(), ctx.order());
    for (arith::u64 j = 1; j < ctx.order(); ++j) {
      ASSERT_LT(std::abs(all[j].value - lfun::l1_closed_form(ctx, CharIndex{j}).value), 1e-9);
      EXPECT_EQ(all[j].method, lfun::Method::bulk);
      EXPECT_LT(std::abs(all[j].value - std::conj(all[ctx.order() - j].value)), 1e-9);
    }
  }
}

TEST(L1All, RejectsBadGaussTable) {
  const auto ctx = chars::build_context(11);
  EXPECT_THROW(lfun::l1_all(ctx, std::vector<cplx>(3)), std::invalid_argument);
}

TEST(HalfSum, Examples) {
  EXPECT_LE(lfun::half_sum_identity(chars::build_context(7), CharIndex{3}), 1e-10);
  EXPECT_LE(lfun::half_sum_identity(chars::build_context(5), CharIndex{1}), 1e-10);
  EXPECT_THROW(lfun::half_sum_identity(chars::build_context(7), CharIndex{2}),
               std::invalid_argument);
}

TEST(Twisted, ConjugateSymmetric) {
  const auto ctx = chars::build_context(11);
  for (arith::u64 j = 1; j < ctx.order(); ++j) {
    const auto a = lfun::l1_twisted(ctx, CharIndex{j}).value;
    const auto b = lfun::l1_twisted(ctx, ctx.conjugate(CharIndex{j})).value;
    EXPECT_LT(std::abs(a - std::conj(b)), 1e-11);
  }
}

TEST(Twisted, DirectSummation) {
  const auto ctx = chars::build_context(7);
  const CharIndex j{2};
  const auto v = lfun::l1_twisted(ctx, j);
  // Partial sums of chi(n)(n/3) are bounded by 21, so the tail past N is
  // below 42/N.
  ComplexNeumaierSum s{};
  const arith::u64 N = 10'000'000;
  for (arith::u64 n = 1; n <= N; ++n)
    s.add(ctx(j, n) * static_cast<double>(lfun::legendre3(n)) / static_cast<double>(n));
  EXPECT_LT(std::abs(s.value() - v.value), 42.0 / static_cast<double>(N));
}

TEST(PeriodicSeries, TailBoundIsHonest) {
  const auto ctx = chars::build_context(13);
  for (arith::u64 j = 1; j < ctx.order(); ++j) {
    const auto loose = lfun::l1_series_oracle(ctx, CharIndex{j}, 1e-6);
    const auto tight = lfun::l1_series_oracle(ctx, CharIndex{j}, 1e-13);
    EXPECT_LE(std::abs(loose.value - tight.value), loose.tail_bound + tight.tail_bound + 1e-14);
  }
}
