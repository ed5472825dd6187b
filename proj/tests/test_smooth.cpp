#include "charsum/smooth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace charsum;
using arith::u64;
using chars::CharIndex;

namespace {

const dickman::DickmanTable &table() {
  static const auto t = dickman::build_table();
  return t;
}

u64 brute_psi(u64 x, u64 y) {
  u64 c = 0;
  for (u64 n = 1; n <= x; ++n)
    c += arith::largest_prime_factor(n) <= y;
  return c;
}

} // namespace

TEST(Enumeration, MatchesBruteForce) {
  for (u64 y : {2u, 3u, 7u, 30u})
    for (u64 x : {1u, 10u, 1000u, 20000u})
      EXPECT_EQ(smooth::psi(static_cast<double>(x), static_cast<double>(y)), brute_psi(x, y))
          << x << " " << y;
  EXPECT_EQ(smooth::psi(0.5, 10.0), 0u);
  EXPECT_EQ(smooth::psi(100.0, 200.0), 100u);
}

TEST(Enumeration, SortedList) {
  EXPECT_EQ(smooth::smooth_numbers(20, 3),
            (std::vector<u64>{1, 2, 3, 4, 6, 8, 9, 12, 16, 18}));
}

TEST(Enumeration, RefusesHugeRange) {
  EXPECT_THROW(smooth::for_each_smooth(1e11, 10.0, [](u64) {}), std::out_of_range);
}

TEST(Harmonic, BelowOne) {
  // Every n <= y^u is counted when u <= 1.
  const double y = 1000.0, u = 0.8;
  const auto r = smooth::smooth_harmonic(y, u, table());
  const double x = std::floor(std::pow(y, u));
  EXPECT_NEAR(r.sum, std::log(x) + std::numbers::egamma, 1.0 / x);
}

TEST(Harmonic, Band) {
  EXPECT_LE(std::abs(smooth::smooth_harmonic(1000.0, 2.0, table()).deviation), 3.0);
  EXPECT_LE(std::abs(smooth::smooth_harmonic(100.0, 3.0, table()).deviation), 3.0);
}

TEST(PhaseSum, Trivial) {
  const auto r = smooth::smooth_phase_sum(10.0, 1.5, 1, 3, table());
  EXPECT_LT(std::abs(r.sum - chars::unit_root(1, 3)), 1e-15);
}

TEST(PhaseSum, AgreesWithPrediction) {
  const double y = 1000.0, z = 1e9;
  const auto r2 = smooth::smooth_phase_sum(y, z, 1, 2, table());
  EXPECT_LE(r2.gap, 0.5);
  const auto r6 = smooth::smooth_phase_sum(y, z, 1, 6, table());
  EXPECT_LE(r6.gap, 0.5);
  EXPECT_NEAR(r6.prediction.real(), -std::log(std::abs(1.0 - chars::unit_root(1, 6))), 1e-12);
}

TEST(PhaseSum, Preconditions) {
  EXPECT_THROW(smooth::smooth_phase_sum(10.0, 100.0, 2, 4, table()), std::invalid_argument);
  EXPECT_THROW(smooth::smooth_phase_sum(10.0, 100.0, 1, 1, table()), std::invalid_argument);
}

TEST(LemmaFormula, Examples) {
  const auto c11 = chars::build_context(11);
  for (u64 j = 0; j < 10; ++j)
    EXPECT_LE(smooth::verify_lemma_formula(c11, CharIndex{j}, 1, 4, 5000, 20).residual, 1e-11);
  const auto c7 = chars::build_context(7);
  for (u64 j = 0; j < 6; ++j)
    EXPECT_LE(smooth::verify_lemma_formula(c7, CharIndex{j}, 2, 3, 2000, 50).residual, 1e-11);
  for (u64 j = 0; j < 6; j += 2) {
    const auto f = smooth::verify_lemma_formula(c7, CharIndex{j}, 1, 1, 2000, 50);
    EXPECT_LT(std::abs(f.lhs), 1e-13);
    EXPECT_LT(std::abs(f.rhs), 1e-13);
  }
}

TEST(LemmaFormula, Preconditions) {
  const auto c7 = chars::build_context(7);
  EXPECT_THROW(smooth::verify_lemma_formula(c7, CharIndex{1}, 2, 4, 100, 10),
               std::invalid_argument);
  EXPECT_THROW(smooth::verify_lemma_formula(c7, CharIndex{1}, 1, 2003, 100, 10),
               std::invalid_argument);
  EXPECT_THROW(smooth::verify_lemma_formula(c7, CharIndex{1}, 1, 13, 100, 10),
               std::invalid_argument);
}

TEST(ChangeGcd, Examples) {
  const auto one = [](u64) { return cplx{1.0, 0.0}; };
  const auto r1 = smooth::verify_change_gcd(one, 1, 1000);
  EXPECT_EQ(r1.residual_full, 0.0);
  EXPECT_EQ(r1.residual_coprime, 0.0);
  const auto c7 = chars::build_context(7);
  const auto quad = [&](u64 n) { return c7(c7.quadratic(), n); };
  EXPECT_LE(smooth::verify_change_gcd(quad, 6, 1e5).fitted_constant, 5.0);
  EXPECT_LE(smooth::verify_change_gcd(one, 2, 1e4).fitted_constant, 5.0);
}

TEST(Distance, Quadratic7) {
  const auto c7 = chars::build_context(7);
  const auto d = smooth::pretentious_distance(c7, CharIndex{3}, 10.0);
  EXPECT_NEAR(d.D * d.D, 2.0 / 3 + 2.0 / 5 + 1.0 / 7, 1e-14);
  const auto d0 = smooth::pretentious_distance(c7, CharIndex{0}, 10.0);
  EXPECT_NEAR(d0.D * d0.D, 1.0 / 7, 1e-15);
}

TEST(Pretender, PrincipalIsTrivial) {
  const auto ctx = chars::build_context(10007);
  const auto p = smooth::find_pretender(ctx, CharIndex{0}, 100.0);
  EXPECT_EQ(p.xi.conductor(), 1u);
  EXPECT_EQ(p.D, 0.0);
}

TEST(Pretender, Candidates) {
  smooth::PretenderSearch s(100.0); // conductors up to 4
  for (const auto &c : s.candidates()) {
    EXPECT_TRUE(c.is_primitive());
    EXPECT_LE(c.modulus(), 4u);
  }
  EXPECT_EQ(s.candidates().size(), 3u); // trivial, mod 3, mod 4
}
