#pragma once
// Smooth numbers: enumeration, Psi(x,y), smooth harmonic and rational-phase
// sums, exact checks of the divisor/character expansion of twisted smooth sums
// and of the coprimality-removal estimate, and pretentious distances.

#include "charsum/arith.hpp"
#include "charsum/characters.hpp"
#include "charsum/dickman.hpp"
#include "charsum/small_characters.hpp"
#include "charsum/summation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace charsum::smooth {

using arith::u32;
using arith::u64;
using chars::CharIndex;
using chars::PrimeContext;
using chars::SmallCharacter;

inline constexpr double kMaxEnumeration = 1e10;

//==============================================================================
// Enumeration

namespace detail {

template <class State, class Step, class Visit>
void dfs(u64 n, u64 x, std::span<const u32> primes, std::size_t start,
         const State &state, Step &step, Visit &visit) {
  visit(n, state);
  for (std::size_t k = start; k < primes.size(); ++k) {
    const u64 p = primes[k];
    if (n > x / p)
      break;
    dfs(n * p, x, primes, k, step(state, k), step, visit);
  }
}

} // namespace detail

//! Depth-first walk over all n <= x composed of the given increasing primes.
//! step(state, k) derives the state of n * primes[k] from the state of n;
//! visit(n, state) is called once per n, starting with n = 1.
template <class State, class Step, class Visit>
void enumerate_smooth(u64 x, std::span<const u32> primes, const State &root,
                      Step step, Visit visit) {
  if (x == 0)
    return;
  detail::dfs(u64{1}, x, primes, 0, root, step, visit);
}

//! Calls visit(n) for every n <= x with P^+(n) <= y (depth-first order).
template <class Visit> void for_each_smooth(double x, double y, Visit visit) {
  if (!(x >= 1.0))
    return;
  if (x > kMaxEnumeration)
    throw std::out_of_range("smooth enumeration: x exceeds 1e10");
  const u64 xi = static_cast<u64>(std::floor(x));
  const auto primes =
      arith::primes_up_to(static_cast<u64>(std::floor(std::min(y, x))));
  struct None {};
  enumerate_smooth(
      xi, std::span<const u32>(primes), None{},
      [](const None &, std::size_t) { return None{}; },
      [&](u64 n, const None &) { visit(n); });
}

//! All n <= x with P^+(n) <= y, increasing.
inline std::vector<u64> smooth_numbers(double x, double y) {
  std::vector<u64> out;
  for_each_smooth(x, y, [&](u64 n) { out.push_back(n); });
  std::sort(out.begin(), out.end());
  return out;
}

//! Psi(x, y) = #{n <= x : P^+(n) <= y}.
inline u64 psi(double x, double y) {
  if (!(x >= 0.0) || !(y >= 1.0))
    throw std::invalid_argument("psi: require x >= 0 and y >= 1");
  if (x < 1.0)
    return 0;
  if (y >= x)
    return static_cast<u64>(std::floor(x));
  u64 count = 0;
  for_each_smooth(x, y, [&](u64) { ++count; });
  return count;
}

//! y^u, snapped to the nearest integer when within relative 1e-12 of it.
inline double smooth_limit(double y, double u) {
  const double x = std::pow(y, u);
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-12 * std::max(1.0, x))
    return r;
  return x;
}

//==============================================================================
// Harmonic and phase sums

struct HarmonicReport {
  double sum = 0.0;        // sum_{n <= y^u, P^+(n) <= y} 1/n
  double prediction = 0.0; // P(u) e^gamma log y
  double deviation = 0.0;  // sum - prediction
};

inline HarmonicReport smooth_harmonic(double y, double u,
                                      const dickman::DickmanTable &table) {
  if (!(y >= 2.0) || !(u > 0.0))
    throw std::invalid_argument("smooth_harmonic: require y >= 2 and u > 0");
  const double x = smooth_limit(y, u);
  if (x > kMaxEnumeration)
    throw std::out_of_range("smooth_harmonic: y^u exceeds 1e10");
  NeumaierSum s;
  for_each_smooth(x, y, [&](u64 n) { s.add(1.0 / static_cast<double>(n)); });
  HarmonicReport r;
  r.sum = s.value();
  r.prediction = table.P(u) * std::exp(std::numbers::egamma) * std::log(y);
  r.deviation = r.sum - r.prediction;
  return r;
}

struct PhaseReport {
  cplx sum;        // sum_{n <= z, P^+(n) <= y} e(na/b)/n
  cplx prediction; // -log(1 - e(a/b)) + Lambda(b)/phi(b) (1 - rho(u))
  double gap = 0.0;
  double u = 0.0; // log z / log y
};

inline PhaseReport smooth_phase_sum(double y, double z, u64 a, u64 b,
                                    const dickman::DickmanTable &table) {
  if (b < 2 || std::gcd(a, b) != 1)
    throw std::invalid_argument("smooth_phase_sum: require b >= 2 and gcd(a,b) = 1");
  if (!(y >= 2.0))
    throw std::invalid_argument("smooth_phase_sum: require y >= 2");
  std::vector<cplx> roots(b);
  for (u64 k = 0; k < b; ++k)
    roots[k] = chars::unit_root(k, b);
  ComplexNeumaierSum s{};
  for_each_smooth(z, y, [&](u64 n) {
    s.add(roots[arith::mulmod(n, a, b)] / static_cast<double>(n));
  });
  PhaseReport r;
  r.sum = s.value();
  r.u = z > 1.0 ? std::log(z) / std::log(y) : 0.0;
  const auto mf = arith::mult_functions(b);
  const double rho = r.u > table.u_max ? 0.0 : table.rho(r.u);
  r.prediction = -std::log(cplx{1.0, 0.0} - chars::unit_root(a, b)) +
                 mf.von_mangoldt / static_cast<double>(mf.phi) * (1.0 - rho);
  r.gap = std::abs(r.sum - r.prediction);
  return r;
}

//==============================================================================
// Character expansion of twisted smooth sums

struct FormulaCheck {
  cplx lhs;
  cplx rhs;
  double residual = 0.0;
};

//! Both sides of
//!   sum_{1<=|n|<=z, P^+(n)<=y} chi(n) e(an/b)/n
//!     = (2/b) sum_{d|b} chi(b/d) d/phi(d)
//!         sum_{psi mod d, chi psi-bar odd} conj(psi)(a) G(psi)
//!           sum_{n<=zd/b, P^+(n)<=y} chi(n) conj(psi)(n)/n.
inline FormulaCheck verify_lemma_formula(const PrimeContext &ctx, CharIndex j,
                                         u64 a, u64 b, double z, double y) {
  if (b == 0 || std::gcd(a, b) != 1)
    throw std::invalid_argument("verify_lemma_formula: require gcd(a,b) = 1");
  if (b > 1000)
    throw std::invalid_argument("verify_lemma_formula: b must be <= 1000");
  if (static_cast<double>(arith::largest_prime_factor(b)) > y)
    throw std::invalid_argument("verify_lemma_formula: b must be y-smooth");
  const auto ns = smooth_numbers(z, y);
  const double par = j.parity();

  std::vector<cplx> eb(b);
  for (u64 k = 0; k < b; ++k)
    eb[k] = chars::unit_root(k, b);
  ComplexNeumaierSum lhs{};
  for (u64 n : ns) {
    const cplx c = ctx(j, n);
    if (c == cplx{})
      continue;
    const u64 r = arith::mulmod(n, a, b);
    const cplx e = eb[r];
    const cplx em = eb[(b - r) % b];
    lhs.add(c * (e - par * em) / static_cast<double>(n));
  }

  ComplexNeumaierSum rhs{};
  for (u64 d : arith::divisors(b)) {
    const cplx cb = ctx(j, b / d);
    if (cb == cplx{})
      continue;
    const double zd = z * static_cast<double>(d) / static_cast<double>(b);
    const double w = static_cast<double>(d) / static_cast<double>(arith::euler_phi(d));
    for (const SmallCharacter &psi : chars::small_characters(d)) {
      if (par * psi.parity() != -1)
        continue;
      const cplx g = chars::gauss_sum_direct(psi);
      ComplexNeumaierSum inner{};
      for (u64 n : ns) {
        if (static_cast<double>(n) > zd)
          break;
        const cplx v = ctx(j, n) * std::conj(psi(n));
        if (v != cplx{})
          inner.add(v / static_cast<double>(n));
      }
      rhs.add(cb * w * std::conj(psi(a)) * g * inner.value());
    }
  }
  FormulaCheck f;
  f.lhs = lhs.value();
  f.rhs = 2.0 / static_cast<double>(b) * rhs.value();
  f.residual = std::abs(f.lhs - f.rhs);
  return f;
}

//==============================================================================
// Removing a coprimality condition

struct ChangeGcdReport {
  double residual_full = 0.0;    // |sum f/n - prod (1-f(p)/p)^{-1} sum_{(n,a)=1} f/n|
  double residual_coprime = 0.0; // |sum_{(n,a)=1} f/n - prod (1-f(p)/p) sum f/n|
  double scale = 0.0;            // (a/phi(a)) sum_{p|a} log p / p
  double fitted_constant = 0.0;  // max residual / scale (0 when a = 1)
};

//! f must be completely multiplicative with |f| <= 1.
inline ChangeGcdReport verify_change_gcd(const std::function<cplx(u64)> &f,
                                         u64 a, double z) {
  if (a == 0)
    throw std::invalid_argument("verify_change_gcd: a must be positive");
  const auto fac = arith::factorize(a);
  const u64 zi = z >= 1.0 ? static_cast<u64>(std::floor(z)) : 0;
  ComplexNeumaierSum all{}, coprime{};
  for (u64 n = 1; n <= zi; ++n) {
    const cplx v = f(n) / static_cast<double>(n);
    all.add(v);
    if (std::gcd(n, a) == 1)
      coprime.add(v);
  }
  cplx prod{1.0, 0.0};
  double log_sum = 0.0;
  for (const auto &pp : fac.prime_powers) {
    const double p = static_cast<double>(pp.prime);
    prod *= cplx{1.0, 0.0} - f(pp.prime) / p;
    log_sum += std::log(p) / p;
  }
  ChangeGcdReport r;
  r.residual_full = std::abs(all.value() - coprime.value() / prod);
  r.residual_coprime = std::abs(coprime.value() - prod * all.value());
  r.scale = static_cast<double>(a) / static_cast<double>(arith::euler_phi(a)) * log_sum;
  r.fitted_constant =
      r.scale > 0.0 ? std::max(r.residual_full, r.residual_coprime) / r.scale : 0.0;
  return r;
}

//==============================================================================
// Pretentious distance

struct Distance {
  double D = 0.0;     // D(f, g; y)
  double Delta = 0.0; // sum_{p<=y} |1 - f(p)| / (p - 1)
};

//! D(f,g;y)^2 = sum_{p<=y} (1 - Re f(p) conj(g(p)))/p.
inline Distance distance(const std::function<cplx(u64)> &f,
                         const std::function<cplx(u64)> &g, double y) {
  if (y > 1e7)
    throw std::out_of_range("distance: y must be <= 1e7");
  NeumaierSum d2, delta;
  for (u32 p : arith::primes_up_to(static_cast<u64>(std::floor(std::max(y, 0.0))))) {
    const cplx fp = f(p);
    const double pd = static_cast<double>(p);
    d2.add((1.0 - (fp * std::conj(g(p))).real()) / pd);
    delta.add(std::abs(cplx{1.0, 0.0} - fp) / (pd - 1.0));
  }
  return {std::sqrt(std::max(d2.value(), 0.0)), delta.value()};
}

inline Distance pretentious_distance(const PrimeContext &ctx, CharIndex j,
                                     double y,
                                     const SmallCharacter *psi = nullptr) {
  auto f = [&](u64 n) { return ctx(j, n); };
  if (psi == nullptr)
    return distance(f, [](u64) { return cplx{1.0, 0.0}; }, y);
  return distance(f, [psi](u64 n) { return (*psi)(n); }, y);
}

struct Pretender {
  SmallCharacter xi;
  double D = 0.0;
};

//! Primitive characters of conductor d <= log y, searched in order of
//! conductor then label.
class PretenderSearch {
public:
  explicit PretenderSearch(double y) : y_(y) {
    if (!(std::log(y) >= 1.0))
      throw std::invalid_argument("find_pretender: require log y >= 1");
    primes_ = arith::primes_up_to(static_cast<u64>(std::floor(y)));
    const u64 dmax = static_cast<u64>(std::floor(std::log(y)));
    for (u64 d = 1; d <= dmax; ++d)
      for (auto &c : chars::small_characters(d))
        if (c.is_primitive())
          candidates_.push_back(c);
  }

  const std::vector<SmallCharacter> &candidates() const { return candidates_; }

  Pretender operator()(const PrimeContext &ctx, CharIndex j) const {
    std::vector<cplx> fp(primes_.size());
    for (std::size_t i = 0; i < primes_.size(); ++i)
      fp[i] = ctx(j, primes_[i]);
    std::optional<std::size_t> best;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidates_.size(); ++c) {
      NeumaierSum d2;
      for (std::size_t i = 0; i < primes_.size(); ++i) {
        const double p = primes_[i];
        d2.add((1.0 - (fp[i] * std::conj(candidates_[c](primes_[i]))).real()) / p);
      }
      if (d2.value() < best_d2 - 1e-12) {
        best_d2 = d2.value();
        best = c;
      }
    }
    return {candidates_[*best], std::sqrt(std::max(best_d2, 0.0))};
  }

private:
  double y_;
  std::vector<u32> primes_;
  std::vector<SmallCharacter> candidates_;
};

inline Pretender find_pretender(const PrimeContext &ctx, CharIndex j, double y) {
  return PretenderSearch(y)(ctx, j);
}

} // namespace charsum::smooth
