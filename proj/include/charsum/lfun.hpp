#pragma once
// L(1, chi) for characters mod an odd prime q: a series oracle with a
// certified tail, the classical finite closed forms, and a bulk evaluation of
// every character from two transforms of length q-1.

#include "charsum/characters.hpp"
#include "charsum/fft.hpp"
#include "charsum/scan.hpp"
#include "charsum/summation.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace charsum::lfun {

using arith::u64;
using chars::CharIndex;
using chars::PrimeContext;

enum class Method { oracle, closed_form, bulk };

inline const char *to_string(Method m) {
  switch (m) {
  case Method::oracle:
    return "oracle";
  case Method::closed_form:
    return "closed_form";
  case Method::bulk:
    return "bulk";
  }
  return "?";
}

struct LValue {
  CharIndex j;
  cplx value;
  Method method = Method::oracle;
  double tail_bound = 0.0;
};

inline constexpr double kMinOracleEps = 1e-13;

//! Odd case: L(1,chi) = kOddScale * G(chi) * sum_a a conj(chi)(a) / q^2.
inline const cplx kOddScale{0.0, std::numbers::pi};
//! Even case: L(1,chi) = kEvenScale * G(chi) * sum_a conj(chi)(a) log(2 sin(pi a/q)) / q.
inline constexpr double kEvenScale = -1.0;

//==============================================================================
// Series oracle

namespace detail {

// B_{2k} / (2k) for k = 1..8.
inline constexpr double kBernoulliOver2k[] = {
    1.0 / 12.0,           -1.0 / 120.0,      1.0 / 252.0,
    -1.0 / 240.0,         1.0 / 132.0,       -691.0 / 32760.0,
    1.0 / 12.0,           -3617.0 / 8160.0};
inline constexpr int kDigammaTerms = 7;

//! psi(K + c) - log K for c in [0, 1], by the asymptotic expansion.
inline double digamma_shifted(double K, double c) {
  const double x = K + c;
  double s = std::log1p(c / K) - 0.5 / x;
  const double inv2 = 1.0 / (x * x);
  double p = inv2;
  for (int k = 0; k < kDigammaTerms; ++k) {
    s -= kBernoulliOver2k[k] * p;
    p *= inv2;
  }
  return s;
}

//! Magnitude of the first omitted term at x >= K.
inline double digamma_remainder(double K) {
  return std::abs(kBernoulliOver2k[kDigammaTerms]) / std::pow(K, 2.0 * (kDigammaTerms + 1));
}

} // namespace detail

struct SeriesValue {
  cplx value;
  double tail_bound;
};

//! sum_{n>=1} f(n)/n for an m-periodic f summing to zero over a period.
//! The sum is taken directly to n = K m and the remainder is expressed
//! through the digamma function,
//!   sum_{n > Km} f(n)/n = -(1/m) sum_{a=1}^{m} f(a) psi(K + a/m).
inline SeriesValue periodic_series(const std::function<cplx(u64)> &f, u64 m,
                                   double eps) {
  if (m == 0)
    throw std::invalid_argument("periodic_series: period must be positive");
  std::vector<cplx> period(m);
  double abs_sum = 0.0;
  for (u64 a = 1; a <= m; ++a) {
    period[a - 1] = f(a);
    abs_sum += std::abs(period[a - 1]);
  }
  double K = 8.0;
  while (abs_sum / static_cast<double>(m) * detail::digamma_remainder(K) > eps)
    K *= 2.0;
  const u64 N = static_cast<u64>(K) * m;
  ComplexNeumaierSum head{};
  for (u64 n = 1; n <= N; ++n) {
    const cplx v = period[(n - 1) % m];
    if (v != cplx{})
      head.add(v / static_cast<double>(n));
  }
  ComplexNeumaierSum tail{};
  for (u64 a = 1; a <= m; ++a) {
    const double c = static_cast<double>(a) / static_cast<double>(m);
    tail.add(period[a - 1] * detail::digamma_shifted(K, c));
  }
  const cplx value = head.value() - tail.value() / static_cast<double>(m);
  return {value, abs_sum / static_cast<double>(m) * detail::digamma_remainder(K)};
}

inline LValue l1_series_oracle(const PrimeContext &ctx, CharIndex j,
                               double eps = 1e-12) {
  if (j.is_principal())
    throw std::invalid_argument("l1_series_oracle: principal character (divergent)");
  if (!(eps >= kMinOracleEps))
    throw std::invalid_argument("l1_series_oracle: eps must be >= 1e-13");
  const auto s = periodic_series([&](u64 n) { return ctx(j, n); }, ctx.q, eps);
  return {j, s.value, Method::oracle, s.tail_bound};
}

//! Legendre symbol (n/3).
inline int legendre3(u64 n) {
  const u64 r = n % 3;
  return r == 0 ? 0 : (r == 1 ? 1 : -1);
}

//! L(1, chi_j (./3)), series over the modulus 3q.
inline LValue l1_twisted(const PrimeContext &ctx, CharIndex j,
                         double eps = 1e-12) {
  if (ctx.q == 3)
    throw std::invalid_argument("l1_twisted: q must differ from 3");
  if (j.is_principal())
    throw std::invalid_argument("l1_twisted: principal character");
  if (!(eps >= kMinOracleEps))
    throw std::invalid_argument("l1_twisted: eps must be >= 1e-13");
  const auto s = periodic_series(
      [&](u64 n) { return static_cast<double>(legendre3(n)) * ctx(j, n); },
      3 * ctx.q, eps);
  return {j, s.value, Method::oracle, s.tail_bound};
}

//==============================================================================
// Closed forms

inline double log_sine(u64 a, u64 q) {
  return std::log(2.0 * std::sin(std::numbers::pi * static_cast<double>(a) /
                                 static_cast<double>(q)));
}

inline cplx closed_form_from_sums(const PrimeContext &ctx, CharIndex j,
                                  const cplx &gauss, const cplx &odd_sum,
                                  const cplx &even_sum) {
  const double q = static_cast<double>(ctx.q);
  if (j.is_odd())
    return kOddScale * gauss * odd_sum / (q * q);
  return kEvenScale * gauss * even_sum / q;
}

inline LValue l1_closed_form(const PrimeContext &ctx, CharIndex j,
                             const cplx &gauss) {
  if (j.is_principal())
    throw std::invalid_argument("l1_closed_form: principal character");
  const CharIndex jb = ctx.conjugate(j);
  ComplexNeumaierSum s{};
  for (u64 a = 1; a < ctx.q; ++a) {
    const double w = j.is_odd() ? static_cast<double>(a) : log_sine(a, ctx.q);
    s.add(ctx(jb, a) * w);
  }
  const cplx v = j.is_odd() ? closed_form_from_sums(ctx, j, gauss, s.value(), {})
                            : closed_form_from_sums(ctx, j, gauss, {}, s.value());
  return {j, v, Method::closed_form, 0.0};
}

inline LValue l1_closed_form(const PrimeContext &ctx, CharIndex j) {
  return l1_closed_form(ctx, j, chars::gauss_sum(ctx, j));
}

//! Every L(1, chi_j), j = 0..q-2 (entry 0 is left at zero).
//! One transform of (g^k) + i log(2 sin(pi g^k / q)) carries both weight sums;
//! a second transform gives the Gauss sums.
inline std::vector<LValue> l1_all(const PrimeContext &ctx,
                                  const std::vector<cplx> &gauss) {
  const u64 L = ctx.order();
  if (gauss.size() != L)
    throw std::invalid_argument("l1_all: gauss sum table has wrong length");
  std::vector<cplx> z(L);
  for (u64 k = 0; k < L; ++k)
    z[k] = {static_cast<double>(ctx.power[k]), log_sine(ctx.power[k], ctx.q)};
  fft::Plan(L).execute(z, fft::Direction::forward);
  std::vector<LValue> out(L);
  out[0] = {CharIndex{0}, {}, Method::bulk, 0.0};
  for (u64 j = 1; j < L; ++j) {
    const cplx zj = z[j];
    const cplx zm = std::conj(z[L - j]);
    const cplx odd_sum = 0.5 * (zj + zm);
    const cplx even_sum = (zj - zm) / cplx{0.0, 2.0};
    const CharIndex c{j};
    out[j] = {c, closed_form_from_sums(ctx, c, gauss[j], odd_sum, even_sum),
              Method::bulk, 0.0};
  }
  return out;
}

inline std::vector<LValue> l1_all(const PrimeContext &ctx) {
  return l1_all(ctx, chars::gauss_sums_all(ctx));
}

//==============================================================================
// Half-sum identity

//! |sum_{n<=q/2} chi(n) - (2 - conj(chi)(2)) G(chi)/(i pi) L(1, conj chi)|.
inline double half_sum_identity(const PrimeContext &ctx, CharIndex j) {
  if (j.is_principal() || !j.is_odd())
    throw std::invalid_argument("half_sum_identity: requires an odd character");
  const cplx lhs = scan::partial_sum(ctx, j, ctx.q / 2);
  const cplx g = chars::gauss_sum(ctx, j);
  const CharIndex jb = ctx.conjugate(j);
  const cplx l1b = l1_closed_form(ctx, jb).value;
  const cplx rhs = (2.0 - ctx(jb, 2)) * g / cplx{0.0, std::numbers::pi} * l1b;
  return std::abs(lhs - rhs);
}

} // namespace charsum::lfun
