#include "charsum/arith.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace charsum::arith;

TEST(IsPrime, SmallAndLarge) {
  EXPECT_FALSE(is_prime(0));
  EXPECT_FALSE(is_prime(1));
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(12000017));
  EXPECT_TRUE(is_prime(10000019));
  EXPECT_FALSE(is_prime(12000015));
  EXPECT_FALSE(is_prime(561));     // Carmichael
  EXPECT_FALSE(is_prime(3215031751ULL));
  EXPECT_TRUE(is_prime(18446744073709551557ULL));
}

TEST(IsPrime, AgreesWithSieve) {
  const auto ps = primes_up_to(20000);
  std::vector<bool> sieve(20001, false);
  for (auto p : ps)
    sieve[p] = true;
  for (u64 n = 0; n <= 20000; ++n)
    ASSERT_EQ(is_prime(n), sieve[n]) << n;
}

TEST(Factorize, Examples) {
  EXPECT_EQ(factorize(12).prime_powers, (std::vector<PrimePower>{{2, 2}, {3, 1}}));
  EXPECT_TRUE(factorize(1).is_one());
  EXPECT_EQ(factorize(9973).prime_powers, (std::vector<PrimePower>{{9973, 1}}));
}

TEST(Factorize, RoundTripRandom) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const u64 n = 1 + rng() % 1'000'000'000'000ULL;
    const auto f = factorize(n);
    EXPECT_EQ(f.value(), n);
    for (const auto &pp : f.prime_powers)
      EXPECT_TRUE(is_prime(pp.prime));
  }
}

TEST(Divisors, Twelve) {
  EXPECT_EQ(divisors(12), (std::vector<u64>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(divisors(1), (std::vector<u64>{1}));
}

TEST(MultFunctions, Examples) {
  auto m6 = mult_functions(6);
  EXPECT_EQ(m6.mobius, 1);
  EXPECT_EQ(m6.phi, 2u);
  EXPECT_EQ(m6.von_mangoldt, 0.0);
  EXPECT_EQ(m6.omega_small, 2u);
  EXPECT_EQ(m6.omega_big, 2u);
  auto m8 = mult_functions(8);
  EXPECT_EQ(m8.mobius, 0);
  EXPECT_EQ(m8.phi, 4u);
  EXPECT_DOUBLE_EQ(m8.von_mangoldt, std::log(2.0));
  EXPECT_EQ(m8.omega_small, 1u);
  EXPECT_EQ(m8.omega_big, 3u);
  auto m1 = mult_functions(1);
  EXPECT_EQ(m1.mobius, 1);
  EXPECT_EQ(m1.phi, 1u);
  EXPECT_EQ(m1.omega_small, 0u);
  EXPECT_EQ(factorize(1).largest_prime(), 1u);
  EXPECT_EQ(factorize(1).smallest_prime(), kInfinitePrime);
}

TEST(MultFunctions, PhiMatchesCount) {
  for (u64 n = 1; n <= 500; ++n) {
    u64 c = 0;
    for (u64 k = 1; k <= n; ++k)
      c += std::gcd(k, n) == 1;
    ASSERT_EQ(euler_phi(n), c) << n;
  }
}

TEST(MultFunctions, MobiusSumsToZero) {
  for (u64 n = 2; n <= 300; ++n) {
    int s = 0;
    for (u64 d : divisors(n))
      s += mobius(d);
    ASSERT_EQ(s, 0) << n;
  }
}

TEST(PrimitiveRoot, Examples) {
  EXPECT_EQ(primitive_root(5), 2u);
  EXPECT_EQ(primitive_root(7), 3u);
  EXPECT_EQ(primitive_root(11), 2u);
  EXPECT_EQ(primitive_root(3), 2u);
}

TEST(PrimitiveRoot, GeneratesGroup) {
  for (u64 q : {101u, 1009u, 10007u}) {
    const u64 g = primitive_root(q);
    std::vector<bool> seen(q, false);
    u64 x = 1;
    for (u64 k = 0; k + 1 < q; ++k) {
      ASSERT_FALSE(seen[x]);
      seen[x] = true;
      x = mulmod(x, g, q);
    }
    EXPECT_EQ(x, 1u);
  }
}

TEST(PrimitiveRoot, RejectsComposite) {
  EXPECT_THROW(primitive_root(15), std::invalid_argument);
}

TEST(IsSmooth, Examples) {
  EXPECT_TRUE(is_smooth(8, 2));
  EXPECT_FALSE(is_smooth(14, 5));
  EXPECT_TRUE(is_smooth(1, 1));
}

TEST(LargestPrimeFactorTable, MatchesFactorize) {
  const auto t = largest_prime_factor_table(5000);
  for (u64 n = 1; n <= 5000; ++n)
    ASSERT_EQ(t[n], largest_prime_factor(n)) << n;
}

TEST(Powmod, LargeModulus) {
  const u64 m = 18446744073709551557ULL;
  EXPECT_EQ(powmod(2, m - 1, m), 1u);
  EXPECT_EQ(powmod(7, 0, 13), 1u);
}
