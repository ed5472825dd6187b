#pragma once
// Dickman's rho from u rho'(u) = -rho(u-1), rho = 1 on [0,1]; the accumulated
// P(u) = e^{-gamma} int_0^u rho(t) dt; and the constant
//   A = log 2 - 1 - int_0^2 log I_0(t)/t^2 dt - int_2^inf (log I_0(t) - t)/t^2 dt.

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace charsum::dickman {

inline constexpr double kDefaultUMax = 50.0;
inline constexpr int kDefaultLog2Steps = 10; // h = 2^-10
inline constexpr double kMaxUMax = 100.0;

namespace detail {

//! Weights w_k with p^{(deriv)}(t) = sum_k w_k f(x_k) for the interpolating
//! polynomial through the nodes x_k. deriv is 0 or 1.
template <std::size_t K>
std::array<double, K> lagrange_weights(const std::array<double, K> &x, double t,
                                       int deriv) {
  std::array<double, K> w{};
  for (std::size_t k = 0; k < K; ++k) {
    double denom = 1.0;
    for (std::size_t i = 0; i < K; ++i)
      if (i != k)
        denom *= x[k] - x[i];
    double num = 0.0;
    if (deriv == 0) {
      num = 1.0;
      for (std::size_t i = 0; i < K; ++i)
        if (i != k)
          num *= t - x[i];
    } else {
      for (std::size_t m = 0; m < K; ++m) {
        if (m == k)
          continue;
        double prod = 1.0;
        for (std::size_t i = 0; i < K; ++i)
          if (i != k && i != m)
            prod *= t - x[i];
        num += prod;
      }
    }
    w[k] = num / denom;
  }
  return w;
}

//! First index of a K-point stencil near position pos (in grid units) kept
//! inside the unit interval [s0, s0 + S].
inline long stencil_start(double pos, long S, long K) {
  long s0 = static_cast<long>(std::floor(pos)) / S * S;
  if (pos >= static_cast<double>(s0 + S))
    s0 += S;
  // A point exactly at an integer belongs to the interval on its left when
  // possible (used for midpoints, which never sit on integers).
  long p0 = static_cast<long>(std::floor(pos)) - (K / 2 - 1);
  if (p0 < s0)
    p0 = s0;
  if (p0 + K - 1 > s0 + S)
    p0 = s0 + S - (K - 1);
  return p0;
}

//! Adaptive Simpson quadrature.
inline double simpson_step(const std::function<double(double)> &f, double a,
                           double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol)
    return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

inline double adaptive_simpson(const std::function<double(double)> &f, double a,
                               double b, double tol = 1e-14, int max_depth = 50) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

class DickmanTable {
public:
  double h = 0.0;
  double u_max = 0.0;
  long steps_per_unit = 0;
  std::vector<double> rho_values;      // rho(i h)
  std::vector<double> integral_values; // int_0^{i h} rho

  std::size_t size() const { return rho_values.size(); }
  double u_at(std::size_t i) const { return static_cast<double>(i) * h; }

  //! rho'(u) for u on the grid, right-sided at integers.
  double rho_derivative_at(std::size_t i) const {
    if (static_cast<long>(i) < steps_per_unit)
      return 0.0;
    return -rho_values[i - static_cast<std::size_t>(steps_per_unit)] / u_at(i);
  }

  double rho(double u) const {
    check_range(u, "rho");
    if (u <= 1.0)
      return 1.0;
    const auto [i, s] = locate(u);
    if (s == 0.0)
      return rho_values[i];
    return hermite(rho_values[i], rho_values[i + 1], rho_derivative_at(i),
                   left_derivative(i + 1), s);
  }

  //! e^{-gamma} int_0^u rho.
  double P(double u) const {
    check_range(u, "P");
    const auto [i, s] = locate(u);
    double v = integral_values[i];
    if (s != 0.0)
      v = hermite(integral_values[i], integral_values[i + 1], rho_values[i],
                  rho_values[i + 1], s);
    return std::exp(-std::numbers::egamma) * v;
  }

  //! max |u rho'(u) + rho(u-1)| over grid midpoints in (1, u_max], with rho'
  //! from a six-point derivative of the table.
  double dde_residual_max() const {
    double worst = 0.0;
    const long S = steps_per_unit;
    const long n = static_cast<long>(size()) - 1;
    for (long i = S; i < n; ++i) {
      const double pos = static_cast<double>(i) + 0.5;
      const double u = pos * h;
      const double d = interp<6>(pos, 1) / h;
      const double lag = interp<6>(pos - static_cast<double>(S), 0);
      worst = std::max(worst, std::abs(u * d + lag));
    }
    return worst;
  }

  //! Grid value of rho by polynomial interpolation inside one unit interval.
  template <std::size_t K> double interp(double pos, int deriv) const {
    if (pos <= static_cast<double>(steps_per_unit) && deriv == 0)
      return 1.0;
    if (pos <= static_cast<double>(steps_per_unit))
      return 0.0;
    const long p0 =
        detail::stencil_start(pos, steps_per_unit, static_cast<long>(K));
    std::array<double, K> x{};
    for (std::size_t k = 0; k < K; ++k)
      x[k] = static_cast<double>(p0 + static_cast<long>(k));
    const auto w = detail::lagrange_weights<K>(x, pos, deriv);
    double v = 0.0;
    for (std::size_t k = 0; k < K; ++k)
      v += w[k] * rho_values[static_cast<std::size_t>(p0) + k];
    return v;
  }

  void write_csv(std::ostream &os, std::size_t stride = 1) const {
    os << "u,rho,P\n";
    char buf[96];
    const double eg = std::exp(-std::numbers::egamma);
    for (std::size_t i = 0; i < size(); i += stride) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", u_at(i),
                    rho_values[i], eg * integral_values[i]);
      os << buf;
    }
  }

private:
  void check_range(double u, const char *what) const {
    if (!(u >= 0.0) || u > u_max)
      throw std::out_of_range(std::string(what) + ": u = " + std::to_string(u) +
                              " outside [0, " + std::to_string(u_max) + "]");
  }

  std::pair<std::size_t, double> locate(double u) const {
    const double pos = u / h;
    auto i = static_cast<std::size_t>(std::floor(pos));
    if (i >= size() - 1)
      return {size() - 1, 0.0};
    return {i, pos - static_cast<double>(i)};
  }

  double left_derivative(std::size_t i) const {
    if (static_cast<long>(i) <= steps_per_unit)
      return 0.0;
    return rho_derivative_at(i);
  }

  double hermite(double y0, double y1, double d0, double d1, double s) const {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
  }
};

//! h = 2^-log2_steps; requires log2_steps >= 8 and 2 <= u_max <= 100.
inline DickmanTable build_table(double u_max = kDefaultUMax,
                                int log2_steps = kDefaultLog2Steps) {
  if (log2_steps < 8 || log2_steps > 20)
    throw std::invalid_argument("dickman::build_table: step must be 2^-k, 8 <= k <= 20");
  if (!(u_max >= 2.0) || u_max > kMaxUMax)
    throw std::invalid_argument("dickman::build_table: u_max must be in [2, 100]");
  DickmanTable t;
  t.steps_per_unit = 1L << log2_steps;
  t.h = 1.0 / static_cast<double>(t.steps_per_unit);
  t.u_max = u_max;
  const long S = t.steps_per_unit;
  const auto n = static_cast<std::size_t>(std::ceil(u_max * static_cast<double>(S)));
  t.u_max = static_cast<double>(n) * t.h;
  t.rho_values.assign(n + 1, 1.0);
  t.integral_values.assign(n + 1, 0.0);
  const double h = t.h;
  // rho(u+h) = rho(u) - int_u^{u+h} rho(t-1)/t dt by Simpson's rule; the
  // delayed midpoint value comes from a cubic inside its unit interval.
  for (std::size_t i = static_cast<std::size_t>(S); i < n; ++i) {
    const double u = t.u_at(i);
    const double f0 = t.rho_values[i - S] / u;
    const double fm =
        t.interp<4>(static_cast<double>(i - S) + 0.5, 0) / (u + 0.5 * h);
    const double f1 = t.rho_values[i + 1 - S] / (u + h);
    t.rho_values[i + 1] = t.rho_values[i] - h / 6.0 * (f0 + 4.0 * fm + f1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double mid = t.interp<4>(static_cast<double>(i) + 0.5, 0);
    t.integral_values[i + 1] =
        t.integral_values[i] +
        h / 6.0 * (t.rho_values[i] + 4.0 * mid + t.rho_values[i + 1]);
  }
  return t;
}

//==============================================================================
// Constant A

//! I_0(t) - 1 by its power series.
inline double bessel_i0_minus_one(double t) {
  const double x = 0.25 * t * t;
  double term = 1.0, sum = 0.0;
  for (int n = 1; n < 400; ++n) {
    term *= x / (static_cast<double>(n) * static_cast<double>(n));
    sum += term;
    if (term < 1e-18 * sum)
      break;
  }
  return sum;
}

//! g(t) = log I_0(t) - t + (1/2) log(2 pi t), for t > 0.
inline double log_i0_remainder(double t) {
  if (t <= 20.0)
    return std::log1p(bessel_i0_minus_one(t)) - t +
           0.5 * std::log(2.0 * std::numbers::pi * t);
  // I_0(t) e^{-t} sqrt(2 pi t) ~ sum_k ((2k-1)!!)^2 / (k! 8^k t^k).
  double term = 1.0, sum = 0.0;
  for (int k = 1; k < 60; ++k) {
    const double c = 2.0 * k - 1.0;
    const double next = term * c * c / (8.0 * k * t);
    if (next > term)
      break;
    term = next;
    sum += term;
    if (term < 1e-18)
      break;
  }
  return std::log1p(sum);
}

inline double constant_A() {
  const double j1 = adaptive_simpson(
      [](double t) {
        if (t == 0.0)
          return 0.25;
        return std::log1p(bessel_i0_minus_one(t)) / (t * t);
      },
      0.0, 2.0, 1e-15);
  const double j2_smooth = adaptive_simpson(
      [](double s) { return s == 0.0 ? 0.0 : log_i0_remainder(1.0 / s); }, 0.0,
      0.5, 1e-15);
  const double j2 =
      j2_smooth - (std::log(4.0 * std::numbers::pi) + 1.0) / 4.0;
  return std::numbers::ln2 - 1.0 - j1 - j2;
}

//! e^{-gamma} log 2.
inline double eta() { return std::exp(-std::numbers::egamma) * std::numbers::ln2; }

} // namespace charsum::dickman
