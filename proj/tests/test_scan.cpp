#include "charsum/scan.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace charsum;
using arith::u64;
using chars::CharIndex;

namespace {

void expect_near(cplx a, cplx b, double tol = 1e-14) {
  EXPECT_LT(std::abs(a - b), tol) << a << " vs " << b;
}

} // namespace

TEST(PrefixSums, HandExamples) {
  const auto c5 = chars::build_context(5);
  const auto s5 = scan::prefix_sums_single(c5, CharIndex{1});
  ASSERT_EQ(s5.size(), 4u);
  expect_near(s5[0], {1, 0});
  expect_near(s5[1], {1, 1});
  expect_near(s5[2], {1, 0});
  expect_near(s5[3], {0, 0});
  const auto c7 = chars::build_context(7);
  const auto s7 = scan::prefix_sums_single(c7, CharIndex{3});
  const double want[] = {1, 2, 1, 2, 1, 0};
  for (int i = 0; i < 6; ++i)
    expect_near(s7[i], {want[i], 0});
}

TEST(PrefixSums, FullSumVanishes) {
  const auto ctx = chars::build_context(1009);
  for (arith::u64 j = 1; j < ctx.order(); j += 37)
    EXPECT_LT(std::abs(scan::prefix_sums_single(ctx, CharIndex{j}).back()), 1e-11);
}

TEST(ScanAll, SmallExamples) {
  const auto c5 = chars::build_context(5);
  const auto r = scan::scan_all(c5);
  ASSERT_EQ(r.extrema.size(), 3u);
  EXPECT_NEAR(r.at(CharIndex{1}).M, std::sqrt(2.0), 1e-14);
  EXPECT_EQ(r.at(CharIndex{1}).N, 2u);
  EXPECT_NEAR(r.at(CharIndex{2}).M, 1.0, 1e-14);
  EXPECT_EQ(r.at(CharIndex{2}).N, 1u);
  EXPECT_NEAR(r.at(CharIndex{3}).M, std::sqrt(2.0), 1e-14);
  EXPECT_EQ(r.at(CharIndex{3}).N, 2u);
  const auto c7 = chars::build_context(7);
  const auto e = scan::scan_all(c7).at(CharIndex{3});
  EXPECT_NEAR(e.M, 2.0, 1e-14);
  EXPECT_EQ(e.N, 2u);
  EXPECT_NEAR(e.m, 2.0 * std::numbers::pi / (std::exp(std::numbers::egamma) * std::sqrt(7.0)),
              1e-14);
}

TEST(ScanAll, MatchesOracleExactly) {
  for (arith::u64 q : {5u, 7u, 11u, 101u, 1009u}) {
    const auto ctx = chars::build_context(q);
    const auto r = scan::scan_all(ctx);
    for (arith::u64 j = 1; j < ctx.order(); ++j) {
      const CharIndex c{j};
      const auto ref =
          scan::extremum_from_prefix(scan::prefix_sums_single(ctx, c), c, q);
      ASSERT_EQ(r.at(c).M, ref.M) << q << " " << j;
      ASSERT_EQ(r.at(c).N, ref.N) << q << " " << j;
    }
  }
}

TEST(ScanAll, IndependentOfThreadsAndBlocks) {
  const auto ctx = chars::build_context(2003);
  scan::ScanOptions a;
  a.threads = 1;
  a.block_size = 64;
  scan::ScanOptions b;
  b.threads = 3;
  b.block_size = 7;
  const auto ra = scan::scan_all(ctx, a), rb = scan::scan_all(ctx, b);
  for (std::size_t i = 0; i < ra.extrema.size(); ++i) {
    ASSERT_EQ(ra.extrema[i].M, rb.extrema[i].M);
    ASSERT_EQ(ra.extrema[i].N, rb.extrema[i].N);
  }
}

TEST(ScanAll, PlainAndUnfoldedAgree) {
  const auto ctx = chars::build_context(1009);
  scan::ScanOptions plain;
  plain.accumulation = scan::Accumulation::plain;
  plain.fold_symmetry = false;
  const auto ra = scan::scan_all(ctx), rb = scan::scan_all(ctx, plain);
  for (std::size_t i = 0; i < ra.extrema.size(); ++i) {
    EXPECT_NEAR(ra.extrema[i].M, rb.extrema[i].M, 1e-8);
    if (!ra.extrema[i].tied) {
      EXPECT_EQ(ra.extrema[i].N, rb.extrema[i].N);
    }
  }
}

TEST(ScanAll, RefusesLargeModulus) {
  const auto ctx = chars::build_context(1009);
  scan::ScanOptions o;
  o.max_q = 1000;
  try {
    scan::scan_all(ctx, o);
    FAIL();
  } catch (const scan::ScanLimitExceeded &e) {
    EXPECT_EQ(e.q(), 1009u);
    EXPECT_GT(e.additions(), 0.0);
  }
  EXPECT_THROW(scan::check_scan_limit(12000017, scan::kDefaultScanLimit),
               scan::ScanLimitExceeded);
}

TEST(ScanAll, MeanSquareCheckpoints) {
  const auto ctx = chars::build_context(1009);
  scan::ScanOptions o;
  o.checkpoints = {100, 504, 900};
  const auto r = scan::scan_all(ctx, o);
  const auto ms = scan::mean_square(r);
  for (std::size_t c = 0; c < 3; ++c) {
    double s = 0.0;
    for (arith::u64 j = 1; j < ctx.order(); ++j)
      s += std::norm(scan::partial_sum(ctx, CharIndex{j}, o.checkpoints[c]));
    EXPECT_NEAR(ms[c], s / 1008.0, 1e-9 * s);
  }
  // Orthogonality: (1/phi) sum_{all chi} |S(x)|^2 = x exactly.
  EXPECT_NEAR(ms[1] + 504.0 * 504.0 / 1008.0, 504.0, 1e-8);
}

TEST(Polya, Endpoints) {
  const auto ctx = chars::build_context(101);
  for (arith::u64 j : {1u, 2u, 7u}) {
    EXPECT_EQ(scan::polya_truncated(ctx, CharIndex{j}, 20.0, 0.0), cplx(0.0, 0.0));
    EXPECT_LT(std::abs(scan::polya_truncated(ctx, CharIndex{j}, 20.0, 1.0)), 1e-12);
  }
}

TEST(Polya, ErrorBound) {
  const auto ctx = chars::build_context(1009);
  const double q = 1009.0;
  const double z = std::ceil(std::pow(q, 11.0 / 21.0));
  const CharIndex j{5};
  const cplx exact = scan::partial_sum(ctx, j, static_cast<arith::u64>(std::floor(0.37 * q)));
  const cplx approx = scan::polya_truncated(ctx, j, z, 0.37);
  EXPECT_LE(std::abs(approx - exact), 10.0 * (1.0 + q * std::log(q) / z));
}

TEST(Polya, ConvergesWithZ) {
  const auto ctx = chars::build_context(101);
  const CharIndex j{3};
  const double alpha = 0.3;
  const cplx exact = scan::partial_sum(ctx, j, 30);
  auto err = [&](double z) { return std::abs(scan::polya_truncated(ctx, j, z, alpha) - exact); };
  EXPECT_LT(err(10.0), err(5.0));
  EXPECT_LT(err(101.0), err(10.0));
  EXPECT_THROW(scan::polya_truncated(ctx, j, 102.0, alpha), std::invalid_argument);
}

TEST(TailMax, EmptySupport) {
  const auto ctx = chars::build_context(101);
  EXPECT_EQ(scan::tail_max(ctx, CharIndex{7}, 20.0, 20.0, 128).value, 0.0);
  EXPECT_EQ(scan::tail_moment(ctx, 2, 20.0, 20.0, 128), 0.0);
}

TEST(TailMax, GridRefinement) {
  const auto ctx = chars::build_context(101);
  const auto coarse = scan::tail_max(ctx, CharIndex{7}, 5.0, 50.0, 400);
  const auto fine = scan::tail_max(ctx, CharIndex{7}, 5.0, 50.0, 4000);
  EXPECT_LE(std::abs(coarse.value - fine.value), coarse.grid_error + fine.grid_error);
  EXPECT_GE(fine.value + coarse.grid_error, coarse.value);
}

TEST(TailMax, RejectsSmallGrid) {
  const auto ctx = chars::build_context(101);
  EXPECT_THROW(scan::tail_max(ctx, CharIndex{1}, 5.0, 50.0, 100), std::invalid_argument);
  EXPECT_THROW(scan::tail_moment(ctx, 0, 5.0, 50.0, 256), std::invalid_argument);
}

TEST(RoughSupport, Members) {
  const auto s = scan::rough_support(5.0, 30.0);
  for (auto n : s)
    EXPECT_GT(arith::largest_prime_factor(n), 5u);
  EXPECT_EQ(s.front(), 7u);
  EXPECT_EQ(std::count(s.begin(), s.end(), 25u), 0);
}
