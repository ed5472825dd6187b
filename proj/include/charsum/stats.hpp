#pragma once
// Per-character records, the survival functions Phi_q, Phi_q^+, Phi_q^-,
// Phi_q^L, rational approximation of N/q, structure analysis of the
// characters with the largest m, partial-sum predictions, and log(-log)
// offset curves.

#include "charsum/arith.hpp"
#include "charsum/characters.hpp"
#include "charsum/dickman.hpp"
#include "charsum/distribution.hpp"
#include "charsum/lfun.hpp"
#include "charsum/scan.hpp"
#include "charsum/small_characters.hpp"
#include "charsum/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace charsum::stats {

using arith::u64;
using chars::CharIndex;
using chars::PrimeContext;

//==============================================================================
// Character records

struct CharacterReport {
  CharIndex j;
  int parity = 1;
  double M = 0.0;
  u64 N = 0;
  double m = 0.0;
  bool tied = false;
  cplx L1;
  cplx gauss;
};

inline std::vector<CharacterReport>
build_reports(const scan::ScanResult &scan, const std::vector<lfun::LValue> &l1,
              const std::vector<cplx> &gauss) {
  std::vector<CharacterReport> out;
  out.reserve(scan.extrema.size());
  for (const auto &e : scan.extrema) {
    CharacterReport r;
    r.j = e.j;
    r.parity = e.j.parity();
    r.M = e.M;
    r.N = e.N;
    r.m = e.m;
    r.tied = e.tied;
    r.L1 = e.j.j < l1.size() ? l1[e.j.j].value : cplx{};
    r.gauss = e.j.j < gauss.size() ? gauss[e.j.j] : cplx{};
    out.push_back(r);
  }
  return out;
}

enum class ParityFilter { all, even, odd };

inline bool keep(const CharacterReport &r, ParityFilter f) {
  return f == ParityFilter::all || (f == ParityFilter::even) == (r.parity == 1);
}

//! Survival function of m(chi); denominator phi(q) for all, phi(q)/2 per parity.
inline EmpiricalDistribution m_distribution(const std::vector<CharacterReport> &rs,
                                            u64 q, ParityFilter f = ParityFilter::all) {
  std::vector<double> v;
  for (const auto &r : rs)
    if (keep(r, f))
      v.push_back(r.m);
  const double phi = static_cast<double>(q - 1);
  return {std::move(v), f == ParityFilter::all ? phi : phi / 2.0};
}

//! Survival function of |L(1,chi)| / e^gamma.
inline EmpiricalDistribution L_distribution(const std::vector<CharacterReport> &rs,
                                            u64 q, ParityFilter f = ParityFilter::all) {
  std::vector<double> v;
  const double eg = std::exp(std::numbers::egamma);
  for (const auto &r : rs)
    if (keep(r, f))
      v.push_back(std::abs(r.L1) / eg);
  const double phi = static_cast<double>(q - 1);
  return {std::move(v), f == ParityFilter::all ? phi : phi / 2.0};
}

//==============================================================================
// Rational approximation

struct RationalApprox {
  long long a = 0;
  u64 b = 1;
  u64 b0 = 1; // b if b is prime, else 1
  double u = 0.0; // |alpha - a/b| = 1/(b e^{tau u}); +inf when exact
  bool exact() const { return std::isinf(u); }
};

//! Last continued-fraction convergent of alpha with denominator <= B.
inline RationalApprox rational_approx(double alpha, u64 B, double tau) {
  if (B < 1)
    throw std::invalid_argument("rational_approx: B must be >= 1");
  if (!(tau > 0.0))
    throw std::invalid_argument("rational_approx: tau must be positive");
  long long p0 = 0, q0 = 1; // p_{k-2}, q_{k-2}
  long long p1 = 1, q1 = 0; // p_{k-1}, q_{k-1}
  double x = alpha;
  long long best_p = static_cast<long long>(std::floor(alpha)), best_q = 1;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(x);
    const long long ak = static_cast<long long>(fl);
    const long long p2 = ak * p1 + p0;
    const long long q2 = ak * q1 + q0;
    if (q2 > static_cast<long long>(B))
      break;
    best_p = p2;
    best_q = q2;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = x - fl;
    if (frac <= 0.0 ||
        std::abs(alpha - static_cast<double>(p2) / static_cast<double>(q2)) == 0.0)
      break;
    x = 1.0 / frac;
  }
  RationalApprox r;
  r.a = best_p;
  r.b = static_cast<u64>(best_q);
  r.b0 = arith::is_prime(r.b) ? r.b : 1;
  const double diff =
      std::abs(alpha - static_cast<double>(r.a) / static_cast<double>(r.b));
  r.u = diff == 0.0 ? std::numeric_limits<double>::infinity()
                    : -std::log(static_cast<double>(r.b) * diff) / tau;
  return r;
}

//==============================================================================
// Structure analysis

struct StructureOptions {
  double top_fraction = 0.005;
  u64 B = 100;
  double y = 100.0; // Euler products and distances over p <= y
};

struct StructureEntry {
  CharIndex j;
  int parity = 1;
  double m = 0.0;
  RationalApprox approx;
  double euler_residual = 0.0; // odd only
  double l1_gap = 0.0;         // |m - e^{-gamma}(|L(1,chi)| + log 2)|
  double D_trivial = 0.0;      // D(chi, 1; y)
  double D_mod3 = 0.0;         // D(chi, (./3); y)
  u64 pretender_conductor = 1;
  u64 pretender_label = 0;
  double pretender_D = 0.0;
};

struct StructureReport {
  std::size_t top_count = 0;
  double odd_fraction = 0.0;                 // over the overall top set
  std::map<u64, std::size_t> b0_histogram;   // overall top set
  std::map<u64, std::size_t> even_b_histogram; // top even set
  u64 even_modal_b = 0;
  double median_euler_residual = 0.0;        // top odd set
  double median_l1_gap = 0.0;                // top odd set
  double odd_trivial_pretender_fraction = 0.0;
  double even_mod3_pretender_fraction = 0.0;
  std::vector<StructureEntry> overall;
  std::vector<StructureEntry> top_odd;
  std::vector<StructureEntry> top_even;
};

//! Indices of the ceil(fraction * count) largest m among the filtered
//! records, largest first, ties by smaller j.
inline std::vector<std::size_t> top_indices(const std::vector<CharacterReport> &rs,
                                            double fraction, ParityFilter f) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < rs.size(); ++i)
    if (keep(rs[i], f))
      idx.push_back(i);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return rs[x].m > rs[y].m;
  });
  const auto k = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(idx.size())));
  idx.resize(std::min(idx.size(), std::max<std::size_t>(k, 1)));
  return idx;
}

//! e^{-gamma} b0/phi(b0) |prod_{p<=y, p != b0} (1 - chi(p)/p)^{-1}|.
inline double euler_prediction(const PrimeContext &ctx, CharIndex j, u64 b0,
                               double y) {
  cplx prod{1.0, 0.0};
  for (auto p : arith::primes_up_to(static_cast<u64>(std::floor(y)))) {
    if (p == b0)
      continue;
    prod /= cplx{1.0, 0.0} - ctx(j, p) / static_cast<double>(p);
  }
  const double w = b0 == 1 ? 1.0 : static_cast<double>(b0) / static_cast<double>(b0 - 1);
  return std::exp(-std::numbers::egamma) * w * std::abs(prod);
}

inline StructureReport structure_report(const PrimeContext &ctx,
                                        const std::vector<CharacterReport> &rs,
                                        const StructureOptions &opt = {}) {
  if (rs.empty())
    throw std::invalid_argument("structure_report: no characters");
  if (!(opt.top_fraction > 0.0 && opt.top_fraction <= 1.0))
    throw std::invalid_argument("structure_report: top fraction must be in (0, 1]");
  const auto mod3 = chars::small_characters(3).at(1);
  const smooth::PretenderSearch search(opt.y);
  const double eg = std::exp(-std::numbers::egamma);
  const double q = static_cast<double>(ctx.q);

  auto entry = [&](const CharacterReport &r) {
    StructureEntry e;
    e.j = r.j;
    e.parity = r.parity;
    e.m = r.m;
    e.approx = rational_approx(static_cast<double>(r.N) / q, opt.B, std::max(r.m, 1e-9));
    if (r.parity == -1)
      e.euler_residual = std::abs(r.m - euler_prediction(ctx, r.j, e.approx.b0, opt.y));
    e.l1_gap = std::abs(r.m - eg * (std::abs(r.L1) + std::numbers::ln2));
    e.D_trivial = smooth::pretentious_distance(ctx, r.j, opt.y).D;
    e.D_mod3 = smooth::pretentious_distance(ctx, r.j, opt.y, &mod3).D;
    const auto pr = search(ctx, r.j);
    e.pretender_conductor = pr.xi.modulus();
    e.pretender_label = pr.xi.label();
    e.pretender_D = pr.D;
    return e;
  };

  StructureReport rep;
  std::size_t odd = 0;
  for (std::size_t i : top_indices(rs, opt.top_fraction, ParityFilter::all)) {
    rep.overall.push_back(entry(rs[i]));
    odd += rs[i].parity == -1;
    ++rep.b0_histogram[rep.overall.back().approx.b0];
  }
  rep.top_count = rep.overall.size();
  rep.odd_fraction = static_cast<double>(odd) / static_cast<double>(rep.top_count);

  std::vector<double> resid, gaps;
  std::size_t trivial = 0;
  for (std::size_t i : top_indices(rs, opt.top_fraction, ParityFilter::odd)) {
    if (rs[i].parity != -1)
      continue;
    rep.top_odd.push_back(entry(rs[i]));
    resid.push_back(rep.top_odd.back().euler_residual);
    gaps.push_back(rep.top_odd.back().l1_gap);
    trivial += rep.top_odd.back().pretender_conductor == 1;
  }
  if (!resid.empty()) {
    rep.median_euler_residual = median(resid);
    rep.median_l1_gap = median(gaps);
    rep.odd_trivial_pretender_fraction =
        static_cast<double>(trivial) / static_cast<double>(rep.top_odd.size());
  }

  std::size_t m3 = 0;
  for (std::size_t i : top_indices(rs, opt.top_fraction, ParityFilter::even)) {
    if (rs[i].parity != 1)
      continue;
    rep.top_even.push_back(entry(rs[i]));
    ++rep.even_b_histogram[rep.top_even.back().approx.b];
    m3 += rep.top_even.back().pretender_conductor == 3 &&
          rep.top_even.back().pretender_label == 1;
  }
  if (!rep.top_even.empty()) {
    rep.even_mod3_pretender_fraction =
        static_cast<double>(m3) / static_cast<double>(rep.top_even.size());
    std::size_t best = 0;
    for (const auto &[b, c] : rep.even_b_histogram)
      if (c > best) {
        best = c;
        rep.even_modal_b = b;
      }
  }
  return rep;
}

//==============================================================================
// Partial-sum prediction

struct PartialSumPrediction {
  cplx predicted;
  cplx actual;
  double gap = 0.0;
  bool report_only = false; // character not pretentious enough
  RationalApprox n_approx;  // of N/q
  RationalApprox beta_approx; // k / l
  double distance = 0.0;    // D(chi, 1; y) (odd) or D(chi, (./3); y) (even)
};

struct PartialSumParams {
  double tau = 0.0; // <= 0: use m(chi)
  u64 B = 100;
  double y = 100.0;
  double D_threshold = 1.0;
};

inline PartialSumPrediction
predicted_partial_sum(const PrimeContext &ctx, CharIndex j, double beta,
                      const scan::PrefixExtremum &ext, const cplx &gauss,
                      const dickman::DickmanTable &table,
                      const PartialSumParams &prm = {}) {
  if (j.is_principal())
    throw std::invalid_argument("predicted_partial_sum: principal character");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("predicted_partial_sum: beta must be in [0, 1]");
  const double tau = prm.tau > 0.0 ? prm.tau : ext.m;
  const double q = static_cast<double>(ctx.q);
  const cplx S = scan::partial_sum(ctx, j, static_cast<u64>(std::floor(beta * q)));
  const double eg = std::exp(-std::numbers::egamma);
  auto P = [&](double u) {
    if (std::isinf(u) || u >= table.u_max)
      return 1.0;
    return table.P(std::max(u, 0.0));
  };

  PartialSumPrediction out;
  out.n_approx = rational_approx(static_cast<double>(ext.N) / q, prm.B, tau);
  if (j.is_odd()) {
    out.beta_approx = rational_approx(beta, prm.B, tau);
    out.actual = eg * std::numbers::pi * cplx{0.0, 1.0} / gauss * S;
    out.distance = smooth::pretentious_distance(ctx, j, prm.y).D;
    const u64 l = out.beta_approx.b;
    const double Pu = P(out.beta_approx.u);
    const u64 b0 = out.n_approx.b0;
    if (b0 == 1) {
      out.predicted = l == 1 ? tau * (1.0 - Pu) : tau;
    } else {
      const cplx cb = std::conj(ctx(j, b0));
      const cplx r = (1.0 - cb) / (static_cast<double>(b0) - cb);
      unsigned v = 0;
      u64 t = l;
      while (t % b0 == 0) {
        t /= b0;
        ++v;
      }
      if (l == 1)
        out.predicted = tau * (1.0 - Pu) * (1.0 - r);
      else if (t == 1 && v >= 1)
        out.predicted = tau * (1.0 - r * (1.0 - Pu * std::pow(cb / static_cast<double>(b0),
                                                               static_cast<double>(v - 1))));
      else
        out.predicted = tau * (1.0 - r);
    }
  } else {
    const double st = std::sqrt(3.0) * tau;
    out.beta_approx = rational_approx(beta, prm.B, st);
    out.actual = eg * std::numbers::pi / gauss * S;
    const auto mod3 = chars::small_characters(3).at(1);
    out.distance = smooth::pretentious_distance(ctx, j, prm.y, &mod3).D;
    u64 l = out.beta_approx.b;
    unsigned v = 0;
    while (l % 3 == 0) {
      l /= 3;
      ++v;
    }
    if (l == 1 && v >= 1) {
      const double k3 = lfun::legendre3(static_cast<u64>(
          ((out.beta_approx.a % 3) + 3) % 3));
      const u64 p3 = arith::powmod(3, v - 1, ctx.q);
      const cplx cv = std::conj(ctx(j, p3)) / std::pow(3.0, v - 1);
      out.predicted = tau * P(out.beta_approx.u) * k3 * cv;
    } else {
      out.predicted = {0.0, 0.0};
    }
  }
  out.report_only = out.distance > prm.D_threshold;
  out.gap = std::abs(out.predicted - out.actual);
  return out;
}

//==============================================================================
// log(-log) offsets

struct OffsetCurve {
  std::vector<double> tau;
  std::vector<double> offset;
  std::size_t dropped = 0;
  double mean = 0.0;
};

//! log(-log A(tau)) - log(-log B(tau)) on n_points uniformly spaced taus in
//! [lo, hi]; points where either value is outside (0, 1) are dropped.
inline OffsetCurve loglog_offset(const std::function<double(double)> &A,
                                 const std::function<double(double)> &B,
                                 double lo, double hi, std::size_t n_points) {
  if (n_points < 1 || !(hi >= lo))
    throw std::invalid_argument("loglog_offset: invalid range");
  OffsetCurve c;
  for (std::size_t i = 0; i < n_points; ++i) {
    const double t = n_points == 1 ? lo
                                   : lo + (hi - lo) * static_cast<double>(i) /
                                              static_cast<double>(n_points - 1);
    const double a = A(t), b = B(t);
    if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0)) {
      ++c.dropped;
      continue;
    }
    c.tau.push_back(t);
    c.offset.push_back(std::log(-std::log(a)) - std::log(-std::log(b)));
  }
  if (c.tau.empty())
    throw std::invalid_argument("loglog_offset: no valid points in range");
  c.mean = compensated_sum(c.offset) / static_cast<double>(c.offset.size());
  return c;
}

inline OffsetCurve loglog_offset(const EmpiricalDistribution &A,
                                 const EmpiricalDistribution &B, double lo,
                                 double hi, std::size_t n_points) {
  return loglog_offset([&](double t) { return A.survival(t); },
                       [&](double t) { return B.survival(t); }, lo, hi, n_points);
}

} // namespace charsum::stats
