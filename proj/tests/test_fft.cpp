#include "charsum/fft.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace charsum;
using fft::cplx;
using fft::Direction;

namespace {

std::vector<cplx> naive(const std::vector<cplx> &x, Direction d) {
  const std::size_t n = x.size();
  const double sgn = d == Direction::forward ? -1.0 : 1.0;
  std::vector<cplx> y(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx s{};
    for (std::size_t j = 0; j < n; ++j) {
      const double a = sgn * 2.0 * std::numbers::pi *
                       static_cast<double>((j * k) % n) / static_cast<double>(n);
      s += x[j] * cplx{std::cos(a), std::sin(a)};
    }
    y[k] = s;
  }
  return y;
}

std::vector<cplx> random_vec(std::size_t n, std::mt19937_64 &rng) {
  std::normal_distribution<double> nd;
  std::vector<cplx> v(n);
  for (auto &z : v)
    z = {nd(rng), nd(rng)};
  return v;
}

} // namespace

class FftLength : public ::testing::TestWithParam<std::size_t> {};

TEST_P(FftLength, MatchesNaiveDft) {
  std::mt19937_64 rng(GetParam());
  const auto x = random_vec(GetParam(), rng);
  for (auto d : {Direction::forward, Direction::inverse}) {
    auto y = x;
    fft::Plan(GetParam()).execute(y, d);
    const auto ref = naive(x, d);
    double err = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k)
      err = std::max(err, std::abs(y[k] - ref[k]));
    EXPECT_LT(err, 1e-9 * static_cast<double>(GetParam()));
  }
}

TEST_P(FftLength, RoundTrip) {
  std::mt19937_64 rng(3 * GetParam());
  const auto x = random_vec(GetParam(), rng);
  fft::Plan p(GetParam());
  auto y = x;
  p.execute(y, Direction::forward);
  p.execute(y, Direction::inverse);
  for (std::size_t k = 0; k < y.size(); ++k)
    EXPECT_NEAR(std::abs(y[k] / static_cast<double>(y.size()) - x[k]), 0.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Lengths, FftLength,
                         ::testing::Values(1, 2, 3, 4, 5, 6, 7, 8, 12, 16, 100, 101,
                                           256, 1000, 1008, 1024, 4002));

TEST(Fft, RejectsZeroLength) { EXPECT_THROW(fft::Plan(0), std::length_error); }

TEST(Fft, DftHelper) {
  std::vector<cplx> x{1, 2, 3};
  const auto y = fft::dft(x, Direction::forward);
  EXPECT_NEAR(y[0].real(), 6.0, 1e-14);
}
