#pragma once
// Prefix sums S_j(x) = sum_{n<=x} chi_j(n) for every character mod q, their
// maxima M, argmax N and the normalization m = M pi / (e^gamma sqrt q).
// Also the truncated Polya expansion and the tail maxima S_{y,z}.

#include "charsum/arith.hpp"
#include "charsum/characters.hpp"
#include "charsum/fft.hpp"
#include "charsum/summation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace charsum::scan {

using arith::u64;
using chars::CharIndex;
using chars::PrimeContext;

inline constexpr u64 kDefaultScanLimit = 2'000'000;
//! Nominal throughput used for the refusal estimate (compensated adds/s/core).
inline constexpr double kNominalAddsPerSecond = 4.0e8;

enum class Accumulation { plain, compensated };

struct ScanOptions {
  u64 block_size = 64;
  Accumulation accumulation = Accumulation::compensated;
  bool fold_symmetry = true;
  unsigned threads = 0; // 0 = hardware concurrency
  u64 max_q = kDefaultScanLimit;
  //! Positions x at which sum_j |S_j(x)|^2 is recorded.
  std::vector<u64> checkpoints;
};

struct PrefixExtremum {
  CharIndex j;
  double M = 0.0;
  u64 N = 0;
  double m = 0.0;
  bool tied = false; // another x <= (q-1)/2 attains M within 1e-9
};

struct ScanResult {
  u64 q = 0;
  std::vector<PrefixExtremum> extrema; // j = 1..q-2
  std::vector<u64> checkpoints;
  //! square_sums[c] = sum_{j != 0} |S_j(checkpoints[c])|^2.
  std::vector<double> square_sums;

  const PrefixExtremum &at(CharIndex j) const { return extrema.at(j.j - 1); }
};

//! Thrown when the requested modulus exceeds the configured scan limit.
class ScanLimitExceeded : public std::out_of_range {
public:
  ScanLimitExceeded(u64 q, u64 limit, double additions, double bytes,
                    double seconds_per_core)
      : std::out_of_range(message(q, limit, additions, bytes, seconds_per_core)),
        q_(q), limit_(limit), additions_(additions), bytes_(bytes),
        seconds_(seconds_per_core) {}

  u64 q() const { return q_; }
  u64 limit() const { return limit_; }
  double additions() const { return additions_; }
  double bytes() const { return bytes_; }
  double core_seconds() const { return seconds_; }

private:
  static std::string message(u64 q, u64 limit, double adds, double bytes,
                             double secs) {
    std::ostringstream os;
    os << "scan refused: q = " << q << " exceeds the scan limit " << limit
       << "; estimated cost " << adds << " complex additions, " << bytes
       << " bytes of tables, about " << secs / 3600.0 << " core-hours";
    return os.str();
  }
  u64 q_, limit_;
  double additions_, bytes_, seconds_;
};

//! Complex additions performed by a folded scan of q.
inline double scan_cost(u64 q) {
  const double h = static_cast<double>((q - 1) / 2);
  return h * h;
}

inline void check_scan_limit(u64 q, u64 max_q) {
  if (q <= max_q)
    return;
  const double adds = scan_cost(q);
  const double bytes = static_cast<double>(q) * (4 + 4 + 16);
  throw ScanLimitExceeded(q, max_q, adds, bytes, adds / kNominalAddsPerSecond);
}

inline double normalize_m(double M, u64 q) {
  return M * std::numbers::pi /
         (std::exp(std::numbers::egamma) * std::sqrt(static_cast<double>(q)));
}

//! Running maximum of |S|^2 with smallest-argmax tie-breaking.
struct ExtremumTracker {
  double best = -1.0;
  double hi = -1.0; // best + tolerance
  double lo = -1.0; // best - tolerance
  u64 arg = 0;
  bool tied = false;

  //! Tolerance on |S|^2 equivalent to 1e-9 on |S|.
  static double tolerance(double v) {
    return 1e-9 * (2.0 * std::sqrt(std::max(v, 0.0)) + 1e-9);
  }

  void push(u64 x, double v) {
    if (v > hi) {
      best = v;
      arg = x;
      tied = false;
      const double tol = tolerance(v);
      hi = v + tol;
      lo = v - tol;
    } else if (v >= lo) {
      tied = true;
    }
  }
};

//==============================================================================
// Single-character reference path

//! S(x) for x = 1..q-1, compensated accumulation in increasing n.
inline std::vector<cplx> prefix_sums_single(const PrimeContext &ctx,
                                            CharIndex j) {
  std::vector<cplx> s(ctx.q - 1);
  ComplexKahanSum acc{};
  for (u64 n = 1; n < ctx.q; ++n) {
    acc.add(ctx(j, n));
    s[n - 1] = acc.value();
  }
  return s;
}

//! sum_{n<=x} chi_j(n), for any x >= 0.
inline cplx partial_sum(const PrimeContext &ctx, CharIndex j, u64 x) {
  x %= ctx.q;
  ComplexKahanSum acc{};
  for (u64 n = 1; n <= x; ++n)
    acc.add(ctx(j, n));
  return acc.value();
}

//! M, N, m from a full prefix-sum sequence.
inline PrefixExtremum extremum_from_prefix(const std::vector<cplx> &s,
                                           CharIndex j, u64 q) {
  ExtremumTracker t;
  for (u64 x = 1; x <= s.size(); ++x)
    t.push(x, std::norm(s[x - 1]));
  PrefixExtremum e;
  e.j = j;
  e.M = std::sqrt(t.best);
  e.N = t.arg;
  e.m = normalize_m(e.M, q);
  e.tied = t.tied;
  return e;
}

//==============================================================================
// Bulk engine

namespace detail {

template <class Acc>
void scan_block(const PrimeContext &ctx, u64 j0, u64 count, u64 xmax,
                const std::vector<u64> &cp, std::vector<Acc> &acc,
                std::vector<ExtremumTracker> &trk,
                std::vector<std::vector<double>> &cp_out) {
  const u64 L = ctx.order();
  const cplx *root = ctx.root.data();
  acc.assign(count, Acc{});
  trk.assign(count, ExtremumTracker{});
  std::size_t next_cp = 0;
  for (u64 n = 1; n <= xmax; ++n) {
    const u64 step = ctx.ind[n];
    u64 idx = (j0 * step) % L;
    for (u64 k = 0; k < count; ++k) {
      acc[k].add(root[idx]);
      trk[k].push(n, std::norm(acc[k].value()));
      idx += step;
      if (idx >= L)
        idx -= L;
    }
    while (next_cp < cp.size() && cp[next_cp] == n) {
      for (u64 k = 0; k < count; ++k)
        cp_out[next_cp][j0 + k] = std::norm(acc[k].value());
      ++next_cp;
    }
  }
}

struct PlainComplex {
  cplx s{};
  void add(cplx z) { s += z; }
  cplx value() const { return s; }
};

} // namespace detail

inline ScanResult scan_all(const PrimeContext &ctx, const ScanOptions &opts = {}) {
  check_scan_limit(ctx.q, opts.max_q);
  const u64 q = ctx.q;
  const u64 L = ctx.order();
  const u64 H = (q - 1) / 2;
  const u64 jmax = opts.fold_symmetry ? L / 2 : L - 1;
  const u64 xmax = opts.fold_symmetry ? H : q - 1;
  const u64 B = std::max<u64>(1, opts.block_size);

  // Checkpoints, folded into [1, xmax] and sorted.
  std::vector<u64> folded;
  for (u64 x : opts.checkpoints) {
    if (x == 0 || x >= q - 1)
      throw std::invalid_argument("scan_all: checkpoint out of range");
    folded.push_back(opts.fold_symmetry && x > H ? q - 1 - x : x);
  }
  std::vector<u64> cp = folded;
  std::sort(cp.begin(), cp.end());
  cp.erase(std::unique(cp.begin(), cp.end()), cp.end());
  std::vector<std::vector<double>> cp_vals(cp.size(),
                                           std::vector<double>(jmax + 1, 0.0));

  std::vector<ExtremumTracker> best(jmax + 1);
  const u64 nblocks = (jmax + B - 1) / B;
  std::atomic<u64> next{0};
  auto worker = [&]() {
    std::vector<ComplexKahanSum> kacc;
    std::vector<detail::PlainComplex> pacc;
    std::vector<ExtremumTracker> trk;
    for (;;) {
      const u64 b = next.fetch_add(1);
      if (b >= nblocks)
        return;
      const u64 j0 = 1 + b * B;
      const u64 count = std::min(B, jmax + 1 - j0);
      if (opts.accumulation == Accumulation::compensated)
        detail::scan_block(ctx, j0, count, xmax, cp, kacc, trk, cp_vals);
      else
        detail::scan_block(ctx, j0, count, xmax, cp, pacc, trk, cp_vals);
      for (u64 k = 0; k < count; ++k)
        best[j0 + k] = trk[k];
    }
  };
  unsigned nt = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  nt = static_cast<unsigned>(std::clamp<u64>(nt, 1, std::max<u64>(nblocks, 1)));
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < nt; ++t)
      pool.emplace_back(worker);
  }

  ScanResult r;
  r.q = q;
  r.extrema.resize(L - 1);
  for (u64 j = 1; j <= L - 1; ++j) {
    const u64 src = (opts.fold_symmetry && j > jmax) ? L - j : j;
    const auto &t = best[src];
    PrefixExtremum &e = r.extrema[j - 1];
    e.j = CharIndex{j};
    e.M = std::sqrt(t.best);
    e.N = t.arg;
    e.m = normalize_m(e.M, q);
    e.tied = t.tied;
  }
  r.checkpoints = opts.checkpoints;
  r.square_sums.resize(folded.size());
  for (std::size_t c = 0; c < folded.size(); ++c) {
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(cp.begin(), cp.end(), folded[c]) - cp.begin());
    KahanSum s;
    for (u64 j = 1; j <= L - 1; ++j) {
      const u64 src = (opts.fold_symmetry && j > jmax) ? L - j : j;
      s.add(cp_vals[pos][src]);
    }
    r.square_sums[c] = s.value();
  }
  return r;
}

//! (1/phi(q)) sum_{j != 0} |S_j(x)|^2 for each recorded checkpoint.
inline std::vector<double> mean_square(const ScanResult &r) {
  std::vector<double> out(r.square_sums.size());
  for (std::size_t c = 0; c < out.size(); ++c)
    out[c] = r.square_sums[c] / static_cast<double>(r.q - 1);
  return out;
}

//==============================================================================
// Polya expansion

//! (G/2 pi i) sum_{1<=|n|<=z} conj(chi)(n) (1 - e(-n alpha)) / n.
inline cplx polya_truncated(const PrimeContext &ctx, CharIndex j, double z,
                            double alpha, const cplx &gauss) {
  if (j.is_principal())
    throw std::invalid_argument("polya_truncated: principal character");
  if (!(z >= 1.0) || z > static_cast<double>(ctx.q))
    throw std::invalid_argument("polya_truncated: z must be in [1, q]");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("polya_truncated: alpha must be in [0, 1]");
  const CharIndex jb = ctx.conjugate(j);
  const double par = j.parity();
  const u64 zi = static_cast<u64>(std::floor(z));
  ComplexNeumaierSum acc{};
  for (u64 n = 1; n <= zi; ++n) {
    const cplx c = ctx(jb, n);
    if (c == cplx{})
      continue;
    const double ph = std::fmod(static_cast<double>(n) * alpha, 1.0);
    const cplx ep = chars::unit_root(ph);
    const cplx term = (cplx{1.0, 0.0} - std::conj(ep)) - par * (cplx{1.0, 0.0} - ep);
    acc.add(c * term / static_cast<double>(n));
  }
  return gauss / cplx{0.0, 2.0 * std::numbers::pi} * acc.value();
}

inline cplx polya_truncated(const PrimeContext &ctx, CharIndex j, double z,
                            double alpha) {
  return polya_truncated(ctx, j, z, alpha, chars::gauss_sum(ctx, j));
}

//==============================================================================
// Tail maxima

struct TailMax {
  double value = 0.0;
  double grid_error = 0.0; // bound on max_alpha - max_grid
  u64 terms = 0;
};

//! Indices n <= z with P^+(n) > y.
inline std::vector<u64> rough_support(double y, double z) {
  const u64 zi = static_cast<u64>(std::floor(z));
  std::vector<u64> out;
  if (zi < 2)
    return out;
  const auto lpf = arith::largest_prime_factor_table(zi);
  for (u64 n = 2; n <= zi; ++n)
    if (static_cast<double>(lpf[n]) > y)
      out.push_back(n);
  return out;
}

namespace detail {

inline void check_tail_args(double y, double z, u64 R) {
  if (!(y >= 3.0) || !(z >= y))
    throw std::invalid_argument("tail_max: require 3 <= y <= z");
  if (static_cast<double>(R) < 4.0 * z)
    throw std::invalid_argument("tail_max: grid size R must be at least 4z");
}

inline TailMax tail_eval(const PrimeContext &ctx, CharIndex j,
                         const std::vector<u64> &support, const fft::Plan &plan,
                         std::vector<cplx> &buf, std::vector<cplx> &scratch) {
  const u64 R = plan.size();
  buf.assign(R, cplx{});
  for (u64 n : support)
    buf[n % R] += ctx(j, n) / static_cast<double>(n);
  plan.execute(buf, fft::Direction::inverse, scratch);
  double best = 0.0;
  for (const cplx &v : buf)
    best = std::max(best, std::norm(v));
  TailMax t;
  t.value = std::sqrt(best);
  t.terms = support.size();
  t.grid_error = 2.0 * std::numbers::pi * std::numbers::pi *
                 static_cast<double>(support.size()) / static_cast<double>(R);
  return t;
}

} // namespace detail

//! max over alpha = r/R of |sum_{n<=z, P^+(n)>y} chi(n) e(n alpha)/n|.
inline TailMax tail_max(const PrimeContext &ctx, CharIndex j, double y,
                        double z, u64 R) {
  detail::check_tail_args(y, z, R);
  const auto support = rough_support(y, z);
  if (support.empty())
    return {};
  fft::Plan plan(R);
  std::vector<cplx> buf, scratch;
  return detail::tail_eval(ctx, j, support, plan, buf, scratch);
}

//! (1/phi(q)) sum_{j != 0} tail_max(j)^{2k}.
inline double tail_moment(const PrimeContext &ctx, unsigned k, double y,
                          double z, u64 R) {
  if (k == 0)
    throw std::invalid_argument("tail_moment: k must be positive");
  detail::check_tail_args(y, z, R);
  const auto support = rough_support(y, z);
  if (support.empty())
    return 0.0;
  fft::Plan plan(R);
  std::vector<cplx> buf, scratch;
  NeumaierSum s;
  for (u64 j = 1; j < ctx.order(); ++j) {
    const double t =
        detail::tail_eval(ctx, CharIndex{j}, support, plan, buf, scratch).value;
    s.add(std::pow(t, 2.0 * k));
  }
  return s.value() / static_cast<double>(ctx.order());
}

} // namespace charsum::scan
