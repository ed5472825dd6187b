#pragma once
// Verification suites shared by the command-line tool and the acceptance
// runner. Each suite returns a pass/fail verdict, a one-line summary of the
// measured quantities, and (where the suite produces tabular data) the CSV
// payload used for cross-thread determinism checks.

#include "charsum/arith.hpp"
#include "charsum/characters.hpp"
#include "charsum/dickman.hpp"
#include "charsum/io.hpp"
#include "charsum/lfun.hpp"
#include "charsum/model.hpp"
#include "charsum/scan.hpp"
#include "charsum/small_characters.hpp"
#include "charsum/smooth.hpp"
#include "charsum/stats.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace charsum::verify {

using arith::u64;
using chars::CharIndex;

struct Outcome {
  std::string id;
  std::string title;
  bool passed = false;
  bool skipped = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0; // 0 = none
  std::string csv;
};

inline Outcome named(std::string id, std::string title) {
  Outcome o;
  o.id = std::move(id);
  o.title = std::move(title);
  return o;
}

namespace detail {

class Stopwatch {
public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point t0_;
};

inline std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline Outcome finish(Outcome o, const Stopwatch &sw) {
  o.seconds = sw.seconds();
  if (o.time_limit > 0.0 && o.seconds > o.time_limit) {
    o.passed = false;
    o.detail += "; runtime " + fmt("%.1f", o.seconds) + " s exceeds " +
                fmt("%.0f", o.time_limit) + " s";
  }
  return o;
}

} // namespace detail

//==============================================================================
// 1. Exact identities

inline Outcome lemma_formula_suite() {
  detail::Stopwatch sw;
  Outcome o = named("1a", "divisor/character expansion of twisted smooth sums");
  o.time_limit = 60.0;
  double worst = 0.0;
  std::size_t cases = 0;
  for (u64 q : {7, 11, 13}) {
    const auto ctx = chars::build_context(q);
    for (u64 j = 0; j < q - 1; ++j)
      for (u64 b = 1; b <= 8; ++b)
        for (u64 a = 1; a <= b; ++a) {
          if (std::gcd(a, b) != 1)
            continue;
          for (double z : {1e3, 1e4})
            for (double y : {10.0, 50.0}) {
              const auto r = smooth::verify_lemma_formula(ctx, CharIndex{j}, a, b, z, y);
              worst = std::max(worst, r.residual);
              ++cases;
            }
        }
  }
  o.passed = worst <= 1e-10;
  o.detail = std::to_string(cases) + " cases, max residual " + detail::fmt("%.3g", worst);
  return detail::finish(o, sw);
}

inline Outcome gauss_small_suite() {
  detail::Stopwatch sw;
  Outcome o = named("1b", "Gauss sums of induced characters, d <= 60");
  o.time_limit = 5.0;
  double worst = 0.0;
  std::size_t cases = 0;
  for (u64 d = 1; d <= 60; ++d)
    for (const auto &psi : chars::small_characters(d)) {
      worst = std::max(worst, chars::gauss_sum_small(psi).residual);
      ++cases;
    }
  o.passed = worst <= 1e-12;
  o.detail = std::to_string(cases) + " characters, max residual " + detail::fmt("%.3g", worst);
  return detail::finish(o, sw);
}

inline Outcome half_sum_suite() {
  detail::Stopwatch sw;
  Outcome o = named("1c", "half-sum identity for odd characters");
  o.time_limit = 30.0;
  double worst = 0.0;
  std::size_t cases = 0;
  for (u64 q : {5, 7, 11, 101, 1009}) {
    const auto ctx = chars::build_context(q);
    for (u64 j = 1; j < q - 1; j += 2) {
      worst = std::max(worst, lfun::half_sum_identity(ctx, CharIndex{j}));
      ++cases;
    }
  }
  o.passed = worst <= 1e-9;
  o.detail = std::to_string(cases) + " characters, max residual " + detail::fmt("%.3g", worst);
  return detail::finish(o, sw);
}

inline Outcome gauss_modulus_suite() {
  detail::Stopwatch sw;
  Outcome o = named("1d", "|G(chi)| = sqrt(q) for non-principal chi");
  double worst = 0.0;     // max ||G| - sqrt q| / sqrt q
  double bulk_gap = 0.0;  // bulk vs direct on sampled j
  std::mt19937_64 rng(20240601);
  for (u64 q : {101, 1009, 2003, 5003, 9973}) {
    const auto ctx = chars::build_context(q);
    const auto g = chars::gauss_sums_all(ctx);
    const double sq = std::sqrt(static_cast<double>(q));
    for (u64 j = 1; j < q - 1; ++j)
      worst = std::max(worst, std::abs(std::abs(g[j]) - sq) / sq);
    for (int s = 0; s < 10; ++s) {
      const u64 j = 1 + rng() % (q - 2);
      bulk_gap = std::max(bulk_gap,
                          std::abs(g[j] - chars::gauss_sum(ctx, CharIndex{j})) / sq);
    }
  }
  o.passed = worst <= 1e-9 && bulk_gap <= 1e-9;
  o.detail = "q in {101,1009,2003,5003,9973}: max relative deviation " +
             detail::fmt("%.3g", worst) + ", bulk vs direct " + detail::fmt("%.3g", bulk_gap);
  return detail::finish(o, sw);
}

//==============================================================================
// 2. Scan engine vs single-character oracle

inline Outcome oracle_equivalence(unsigned threads) {
  detail::Stopwatch sw;
  Outcome o = named("2", "scan engine matches prefix-sum oracle");
  o.time_limit = 30.0;
  std::size_t mismatches = 0, checked = 0;
  double refl = 0.0;
  std::string csv;
  for (u64 q : {5, 7, 11, 101, 1009}) {
    const auto ctx = chars::build_context(q);
    scan::ScanOptions opt;
    opt.threads = threads;
    opt.block_size = 16;
    const auto r = scan::scan_all(ctx, opt);
    csv += "# q=" + std::to_string(q) + "\n" + io::scan_csv(r);
    for (u64 j = 1; j < q - 1; ++j) {
      const CharIndex c{j};
      const auto s = scan::prefix_sums_single(ctx, c);
      const auto ref = scan::extremum_from_prefix(s, c, q);
      const auto &e = r.at(c);
      const auto &ec = r.at(ctx.conjugate(c));
      ++checked;
      if (e.M != ref.M || e.N != ref.N || ec.M != e.M || ec.N != e.N)
        ++mismatches;
      const double par = c.parity();
      for (u64 x = 0; x + 1 < q; ++x) {
        const cplx sx = x == 0 ? cplx{} : s[x - 1];
        const cplx sr = s[q - 2 - x];
        refl = std::max(refl, std::abs(sr + par * sx));
      }
    }
  }
  o.passed = mismatches == 0 && refl <= 1e-9;
  o.detail = std::to_string(checked) + " characters, " + std::to_string(mismatches) +
             " (M,N) mismatches, max reflection residual " + detail::fmt("%.3g", refl);
  o.csv = std::move(csv);
  return detail::finish(o, sw);
}

//==============================================================================
// 3. Truncated Polya expansion

inline Outcome polya_suite() {
  detail::Stopwatch sw;
  Outcome o = named("3", "truncated Polya expansion error");
  o.time_limit = 120.0;
  double worst_ratio = 0.0;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (u64 q : {1009, 10007}) {
    const auto ctx = chars::build_context(q);
    const double qd = static_cast<double>(q);
    for (int s = 0; s < 50; ++s) {
      const CharIndex j{1 + rng() % (q - 2)};
      const double alpha = unif(rng);
      const cplx exact = scan::partial_sum(ctx, j, static_cast<u64>(std::floor(alpha * qd)));
      const cplx g = chars::gauss_sum(ctx, j);
      for (double z : {std::sqrt(qd), std::pow(qd, 11.0 / 21.0)}) {
        const cplx approx = scan::polya_truncated(ctx, j, z, alpha, g);
        const double bound = 10.0 * (1.0 + qd * std::log(qd) / z);
        worst_ratio = std::max(worst_ratio, std::abs(approx - exact) / bound);
      }
    }
  }
  o.passed = worst_ratio <= 1.0;
  o.detail = "max |error| / (10 (1 + q log q / z)) = " + detail::fmt("%.3g", worst_ratio);
  return detail::finish(o, sw);
}

//==============================================================================
// 4. Dickman function and constant A

inline constexpr double kTargetA = 0.088546;

inline Outcome dickman_suite() {
  detail::Stopwatch sw;
  Outcome o = named("4", "Dickman table, P(u) and constant A");
  o.time_limit = 10.0;
  const auto t = dickman::build_table(50.0, 10);
  const double res = t.dde_residual_max();
  const double r2 = std::abs(t.rho(2.0) - (1.0 - std::numbers::ln2));
  const double p1 = std::abs(t.P(1.0) - std::exp(-std::numbers::egamma));
  const double A = dickman::constant_A();
  const bool ok_res = res <= 1e-10, ok_r2 = r2 <= 1e-9, ok_p1 = p1 <= 1e-8;
  const bool ok_A = std::abs(A - kTargetA) <= 1e-5;
  o.passed = ok_res && ok_r2 && ok_p1 && ok_A;
  o.detail = std::string("DDE residual ") + detail::fmt("%.3g", res) + (ok_res ? "" : " (fail)") +
             ", |rho(2)-(1-log 2)| " + detail::fmt("%.3g", r2) + (ok_r2 ? "" : " (fail)") +
             ", |P(1)-e^-gamma| " + detail::fmt("%.3g", p1) + (ok_p1 ? "" : " (fail)") +
             ", A = " + detail::fmt("%.10f", A) + " vs 0.088546 +- 1e-5" +
             (ok_A ? "" : " (fail)");
  return detail::finish(o, sw);
}

//==============================================================================
// 5. Smooth harmonic sums

inline Outcome smooth_harmonic_suite() {
  detail::Stopwatch sw;
  Outcome o = named("5", "smooth harmonic sums vs P(u) e^gamma log y");
  o.time_limit = 120.0;
  const auto t = dickman::build_table();
  double worst = 0.0;
  std::string d;
  for (auto [y, u] : {std::pair{100.0, 2.0}, {100.0, 3.0}, {1000.0, 1.5}, {1000.0, 2.0}}) {
    const auto r = smooth::smooth_harmonic(y, u, t);
    worst = std::max(worst, std::abs(r.deviation));
    d += (d.empty() ? "" : ", ") + std::string("(") + detail::fmt("%g", y) + "," +
         detail::fmt("%g", u) + "): " + detail::fmt("%.3f", r.deviation);
  }
  o.passed = worst <= 3.0;
  o.detail = "deviations " + d;
  return detail::finish(o, sw);
}

//==============================================================================
// 6. Mean square of partial sums

inline Outcome variance_suite(unsigned threads) {
  detail::Stopwatch sw;
  Outcome o = named("6", "mean square of S(alpha q) vs alpha(1-alpha)q");
  o.time_limit = 60.0;
  const u64 q = 10007;
  const auto ctx = chars::build_context(q);
  const std::vector<double> alphas{0.1, 0.25, 0.5, 0.75, 0.9};
  scan::ScanOptions opt;
  opt.threads = threads;
  for (double a : alphas)
    opt.checkpoints.push_back(static_cast<u64>(std::floor(a * static_cast<double>(q))));
  const auto r = scan::scan_all(ctx, opt);
  const auto ms = scan::mean_square(r);
  double worst = 0.0;
  std::string d;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double expect = alphas[i] * (1.0 - alphas[i]) * static_cast<double>(q);
    const double rel = std::abs(ms[i] / expect - 1.0);
    worst = std::max(worst, rel);
    d += (d.empty() ? "" : ", ") + detail::fmt("%.3f", rel);
  }
  o.passed = worst <= 0.05;
  o.detail = "relative deviations " + d;
  return detail::finish(o, sw);
}

//==============================================================================
// 7. Structure of characters with large m

struct StructureRun {
  Outcome a, b, c;
};

inline StructureRun structure_suite(unsigned threads, u64 q = 100003,
                                    double top_fraction = 0.005) {
  detail::Stopwatch sw;
  const auto ctx = chars::build_context(q);
  scan::ScanOptions opt;
  opt.threads = threads;
  const auto scan = scan::scan_all(ctx, opt);
  const double scan_seconds = sw.seconds();
  const auto gauss = chars::gauss_sums_all(ctx);
  const auto l1 = lfun::l1_all(ctx, gauss);
  const auto rs = stats::build_reports(scan, l1, gauss);
  stats::StructureOptions so;
  so.top_fraction = top_fraction;
  const auto rep = stats::structure_report(ctx, rs, so);

  std::ostringstream csv;
  csv << io::scan_csv(scan) << io::lfun_csv(l1, gauss);
  csv << "set,j,parity,m,a,b,b0,euler_residual,l1_gap,D_trivial,D_mod3,pretender_d,pretender_label\n";
  auto rows = [&](const char *name, const std::vector<stats::StructureEntry> &es) {
    for (const auto &e : es)
      csv << name << ',' << e.j.j << ',' << e.parity << ',' << io::num(e.m) << ','
          << e.approx.a << ',' << e.approx.b << ',' << e.approx.b0 << ','
          << io::num(e.euler_residual) << ',' << io::num(e.l1_gap) << ','
          << io::num(e.D_trivial) << ',' << io::num(e.D_mod3) << ','
          << e.pretender_conductor << ',' << e.pretender_label << '\n';
  };
  rows("top", rep.overall);
  rows("odd", rep.top_odd);
  rows("even", rep.top_even);

  StructureRun out;
  const double elapsed = sw.seconds();
  out.a = named("7a", "odd share of the top characters");
  out.a.passed = rep.odd_fraction >= 0.9;
  out.a.detail = "q=" + std::to_string(q) + ", top " + std::to_string(rep.top_count) +
                 ": odd fraction " + detail::fmt("%.4f", rep.odd_fraction) +
                 "; scan " + detail::fmt("%.1f", scan_seconds) + " s";
  out.a.csv = csv.str();
  out.b = named("7b", "modal rational-approximation denominator of top even characters");
  out.b.passed = rep.even_modal_b == 3;
  {
    std::string h;
    for (const auto &[b, c] : rep.even_b_histogram)
      h += (h.empty() ? "" : " ") + std::to_string(b) + ":" + std::to_string(c);
    out.b.detail = "modal b = " + std::to_string(rep.even_modal_b) + " over " +
                   std::to_string(rep.top_even.size()) + " even characters (" + h + ")";
  }
  out.c = named("7c", "median |m - e^-gamma(|L(1,chi)| + log 2)| over top odd characters");
  out.c.passed = rep.median_l1_gap <= 0.2;
  out.c.detail = "median gap " + detail::fmt("%.4f", rep.median_l1_gap) + " over " +
                 std::to_string(rep.top_odd.size()) + " odd characters";
  for (Outcome *x : {&out.a, &out.b, &out.c})
    x->seconds = elapsed;
  return out;
}

//==============================================================================
// 8. Distribution convergence

struct DistributionRun {
  Outcome outcome;
  double ks_small = 0.0, ks_large = 0.0, ks_self = 0.0;
};

inline model::ModelConfig acceptance_model_config() {
  model::ModelConfig cfg;
  cfg.y = 20.0;
  cfg.u_cut = 4.0;
  cfg.R = u64{1} << 15;
  cfg.samples = 10'000;
  cfg.seed = 20240601;
  return cfg;
}

inline DistributionRun distribution_suite(unsigned threads) {
  detail::Stopwatch sw;
  DistributionRun run;
  Outcome &o = run.outcome;
  o = named("8", "empirical Phi_q vs random-model Phi");
  o.time_limit = 600.0;
  const auto taus = stats::tau_grid(0.5, 3.5, 0.05);
  const auto cfg = acceptance_model_config();
  const model::Sampler sampler(cfg);
  const auto first = model::run_model(sampler, 0, cfg.samples, threads);
  const auto second = model::run_model(sampler, cfg.samples, cfg.samples, threads);

  auto phi_q = [&](u64 q) {
    const auto ctx = chars::build_context(q);
    scan::ScanOptions opt;
    opt.threads = threads;
    const auto r = scan::scan_all(ctx, opt);
    return stats::m_distribution(stats::build_reports(r, {}, {}), q);
  };
  run.ks_small = model::compare_to_q(phi_q(10007), first, taus);
  run.ks_large = model::compare_to_q(phi_q(100003), first, taus);
  run.ks_self = stats::ks_distance(model::model_distribution(first),
                                   model::model_distribution(second), taus);
  o.passed = run.ks_large <= run.ks_small + 0.02 && run.ks_self <= 0.05;
  o.detail = "KS(10007) " + detail::fmt("%.4f", run.ks_small) + ", KS(100003) " +
             detail::fmt("%.4f", run.ks_large) + ", split-seed KS " +
             detail::fmt("%.4f", run.ks_self) + " (y=20, u_cut=4, 2x10^4 samples)";
  o.csv = io::phi_csv(model::estimate_phi(first, taus)) + io::samples_csv(first) +
          io::samples_csv(second) + "ks_10007,ks_100003,ks_self\n" +
          io::num(run.ks_small) + "," + io::num(run.ks_large) + "," +
          io::num(run.ks_self) + "\n";
  o = detail::finish(o, sw);
  return run;
}

//==============================================================================
// 9. Tail moments

inline Outcome moment_suite() {
  detail::Stopwatch sw;
  Outcome o = named("9", "2k-th moment of tail maxima");
  o.time_limit = 300.0;
  const u64 q = 10007;
  const unsigned k = 3;
  const double y = 20.0;
  const double z = std::pow(static_cast<double>(q), 11.0 / 21.0);
  const u64 R = std::bit_ceil(static_cast<u64>(std::ceil(4.0 * z)));
  const auto ctx = chars::build_context(q);
  const double mom = scan::tail_moment(ctx, k, y, z, R);
  const double kd = k, ly = std::log(y);
  const double bound =
      100.0 * std::pow(std::exp(2.0 * std::numbers::egamma - 1.0) * kd * ly / y, kd) +
      100.0 * std::pow(ly, -19.0 * kd);
  o.passed = mom <= bound;
  o.detail = "moment " + detail::fmt("%.4g", mom) + " vs bound " + detail::fmt("%.4g", bound) +
             " (q=10007, k=3, y=20, z=" + detail::fmt("%.1f", z) + ", R=" +
             std::to_string(R) + ")";
  return detail::finish(o, sw);
}

//==============================================================================
// 10. Large-modulus L-values (optional)

inline Outcome stretch_suite(bool enabled, const std::string &out_dir = {}) {
  detail::Stopwatch sw;
  Outcome o = named("10", "bulk L(1,chi) at q = 12000017 (optional)");
  if (!enabled) {
    o.skipped = true;
    o.passed = true;
    o.detail = "not run (set CHARSUM_STRETCH=1)";
    return o;
  }
  const u64 q = 12000017;
  const auto ctx = chars::build_context(q);
  const auto l1 = lfun::l1_all(ctx);
  std::vector<double> odd;
  double conj_gap = 0.0;
  for (u64 j = 1; j < q - 1; ++j) {
    if (j % 2 == 1)
      odd.push_back(std::abs(l1[j].value) / std::exp(std::numbers::egamma));
    conj_gap = std::max(conj_gap, std::abs(l1[j].value - std::conj(l1[q - 1 - j].value)));
  }
  const stats::EmpiricalDistribution phiL(odd, static_cast<double>(q - 1) / 2.0);
  if (!out_dir.empty()) {
    std::ostringstream os;
    os << "tau,phi_L_minus\n";
    for (double t : stats::tau_grid(0.0, 3.0, 0.01))
      os << io::num(t) << ',' << io::num(phiL.survival(t)) << '\n';
    io::write_file(std::filesystem::path(out_dir) / "phi_L_minus_12000017.csv", os.str());
  }
  o.passed = conj_gap <= 1e-6;
  o.detail = "max |L(chi) - conj L(chi-bar)| " + detail::fmt("%.3g", conj_gap) +
             ", Phi^{L-}(1) = " + detail::fmt("%.4f", phiL.survival(1.0));
  return detail::finish(o, sw);
}

//==============================================================================
// Suite levels for the command-line tool

inline std::vector<Outcome> fast_suite(unsigned threads) {
  return {lemma_formula_suite(), gauss_small_suite(), half_sum_suite(),
          gauss_modulus_suite(), oracle_equivalence(threads)};
}

} // namespace charsum::verify
