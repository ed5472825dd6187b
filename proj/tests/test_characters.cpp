#include "charsum/characters.hpp"
#include "charsum/small_characters.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

using namespace charsum;
using arith::u64;
using chars::CharIndex;

TEST(IndexTable, SmallPrimes) {
  const auto c5 = chars::build_context(5);
  EXPECT_EQ(c5.g, 2u);
  EXPECT_EQ(c5.ind[1], 0u);
  EXPECT_EQ(c5.ind[2], 1u);
  EXPECT_EQ(c5.ind[4], 2u);
  EXPECT_EQ(c5.ind[3], 3u);
  const auto c7 = chars::build_context(7);
  EXPECT_EQ(c7.g, 3u);
  EXPECT_EQ(c7.ind[6], 3u);
  const auto c3 = chars::build_context(3);
  EXPECT_EQ(c3.g, 2u);
  EXPECT_EQ(c3.ind[2], 1u);
}

TEST(IndexTable, Bijection) {
  const auto ctx = chars::build_context(10007);
  std::vector<bool> seen(ctx.order(), false);
  for (arith::u64 n = 1; n < ctx.q; ++n) {
    ASSERT_FALSE(seen[ctx.ind[n]]);
    seen[ctx.ind[n]] = true;
    ASSERT_EQ(ctx.power[ctx.ind[n]], n);
  }
}

TEST(IndexTable, RejectsBadModulus) {
  EXPECT_THROW(chars::build_context(9), std::invalid_argument);
  EXPECT_THROW(chars::build_context(2), std::invalid_argument);
  EXPECT_THROW(chars::build_context(101, 100), std::out_of_range);
}

TEST(Character, Values) {
  const auto c5 = chars::build_context(5);
  const cplx v = c5(CharIndex{1}, 2);
  EXPECT_NEAR(v.real(), 0.0, 1e-15);
  EXPECT_NEAR(v.imag(), 1.0, 1e-15);
  const auto c7 = chars::build_context(7);
  EXPECT_EQ(c7(CharIndex{3}, 3), cplx(-1.0, 0.0));
  for (arith::u64 n = 1; n < 7; ++n)
    EXPECT_EQ(c7(CharIndex{0}, n), cplx(1.0, 0.0));
  EXPECT_EQ(c7(CharIndex{2}, 14), cplx(0.0, 0.0));
}

TEST(Character, MultiplicativeAndConjugate) {
  const auto ctx = chars::build_context(1009);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 500; ++t) {
    const CharIndex j{rng() % ctx.order()};
    const arith::u64 a = 1 + rng() % 1008, b = 1 + rng() % 1008;
    EXPECT_LT(std::abs(ctx(j, a * b) - ctx(j, a) * ctx(j, b)), 1e-12);
    EXPECT_EQ(ctx(ctx.conjugate(j), a), std::conj(ctx(j, a)));
  }
  for (arith::u64 j = 0; j < ctx.order(); ++j)
    EXPECT_EQ(ctx(CharIndex{j}, ctx.q - 1).real(), CharIndex{j}.parity());
}

TEST(GaussSum, Examples) {
  const auto c5 = chars::build_context(5);
  const cplx g = chars::gauss_sum(c5, CharIndex{2});
  EXPECT_NEAR(g.real(), std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(g.imag(), 0.0, 1e-12);
  const auto c7 = chars::build_context(7);
  const cplx g7 = chars::gauss_sum(c7, CharIndex{3});
  EXPECT_NEAR(g7.real(), 0.0, 1e-12);
  EXPECT_NEAR(g7.imag(), std::sqrt(7.0), 1e-12);
  const cplx g0 = chars::gauss_sum(c7, CharIndex{0});
  EXPECT_NEAR(g0.real(), -1.0, 1e-12);
}

TEST(GaussSum, BulkMatchesDirect) {
  for (arith::u64 q : {5u, 7u, 101u, 1009u}) {
    const auto ctx = chars::build_context(q);
    const auto all = chars::gauss_sums_all(ctx);
    ASSERT_EQ(all.size(), ctx.order());
    EXPECT_NEAR(all[0].real(), -1.0, 1e-10);
    for (arith::u64 j = 0; j < ctx.order(); ++j)
      EXPECT_LT(std::abs(all[j] - chars::gauss_sum(ctx, CharIndex{j})), 1e-10);
  }
}

TEST(IndexCache, RoundTripAndCorruption) {
  const auto dir = std::filesystem::temp_directory_path() / "charsum-test-cache";
  std::filesystem::create_directories(dir);
  const auto ctx = chars::build_context(1009);
  const auto path = chars::cache_path(dir, 1009);
  chars::save_index_cache(ctx, path);
  const auto back = chars::load_index_cache(path, 1009);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(back->ind, ctx.ind);
  EXPECT_EQ(back->root, ctx.root);
  EXPECT_FALSE(chars::load_index_cache(path, 1013).has_value());
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(static_cast<std::streamoff>(sizeof(chars::CacheHeader) + 8));
    const char junk[4] = {1, 2, 3, 4};
    f.write(junk, 4);
  }
  EXPECT_FALSE(chars::load_index_cache(path, 1009).has_value());
  std::filesystem::remove_all(dir);
}

TEST(SmallCharacters, Counts) {
  const auto d1 = chars::small_characters(1);
  ASSERT_EQ(d1.size(), 1u);
  EXPECT_EQ(d1[0](17), cplx(1.0, 0.0));
  const auto d4 = chars::small_characters(4);
  ASSERT_EQ(d4.size(), 2u);
  EXPECT_EQ(d4[1].conductor(), 4u);
  std::multiset<arith::u64> c12;
  for (const auto &c : chars::small_characters(12))
    c12.insert(c.conductor());
  EXPECT_EQ(c12, (std::multiset<arith::u64>{1, 3, 4, 12}));
  std::multiset<arith::u64> c8;
  for (const auto &c : chars::small_characters(8))
    c8.insert(c.conductor());
  EXPECT_EQ(c8, (std::multiset<arith::u64>{1, 4, 8, 8}));
  EXPECT_THROW(chars::small_characters(0), std::out_of_range);
}

TEST(SmallCharacters, Homomorphism) {
  for (arith::u64 d : {15u, 16u, 24u, 60u}) {
    const auto cs = chars::small_characters(d);
    EXPECT_EQ(cs.size(), arith::euler_phi(d));
    for (const auto &c : cs)
      for (arith::u64 a = 1; a < d; ++a)
        for (arith::u64 b = 1; b < d; ++b)
          ASSERT_LT(std::abs(c(a * b) - c(a) * c(b)), 1e-12);
  }
}

TEST(SmallGauss, InducedCharacters) {
  for (const auto &c : chars::small_characters(5))
    if (c.conductor() == 5 && c.parity() == 1 && !c.is_principal())
      EXPECT_LT(chars::gauss_sum_small(c).residual, 1e-15);
  for (const auto &c : chars::small_characters(10))
    if (c.conductor() == 5)
      EXPECT_LE(chars::gauss_sum_small(c).residual, 1e-12);
  const auto g6 = chars::gauss_sum_small(chars::small_characters(6)[0]);
  EXPECT_NEAR(g6.value.real(), 1.0, 1e-12); // mu(6)
  EXPECT_LE(g6.residual, 1e-12);
}

TEST(SmallGauss, AllUpTo60) {
  for (arith::u64 d = 1; d <= 60; ++d)
    for (const auto &c : chars::small_characters(d))
      ASSERT_LE(chars::gauss_sum_small(c).residual, 1e-12) << d << " " << c.label();
}

TEST(SmallGauss, PrimitiveInducing) {
  for (const auto &c : chars::small_characters(24)) {
    const auto p = chars::primitive_inducing(c);
    EXPECT_EQ(p.modulus(), c.conductor());
    EXPECT_TRUE(p.is_primitive());
    for (arith::u64 n = 1; n < 24; ++n)
      if (std::gcd(n, arith::u64{24}) == 1)
        EXPECT_LT(std::abs(p(n) - c(n)), 1e-12);
  }
}
