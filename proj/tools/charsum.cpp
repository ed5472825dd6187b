// charsum command-line tool.

#include "charsum/charsum.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

namespace {

using namespace charsum;
using arith::u64;
using io::json;
namespace fs = std::filesystem;

#ifndef CHARSUM_VERSION
#define CHARSUM_VERSION "unknown"
#endif

struct Options {
  u64 q = 10007;
  unsigned threads = 0;
  std::string out = "charsum-out";
  double z = 0.0; // 0: subcommand default
  double y = 0.0;
  double u_cut = 0.0;
  u64 grid = 0;
  u64 seed = 1;
  u64 samples = 10'000;
  std::string tau_grid = "0:4:0.05";
  double top_fraction = 0.005;
  std::string format = "csv";
  std::string level = "fast";
  double u_max = 50.0;
  int log2_steps = 10;
};

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_tau_grid(const std::string &spec) {
  double lo = 0, hi = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !in.eof())
    throw std::invalid_argument("--tau-grid must look like lo:hi:step");
  return stats::tau_grid(lo, hi, step);
}

unsigned effective_threads(unsigned t) {
  return t ? t : std::max(1u, std::thread::hardware_concurrency());
}

class Run {
public:
  Run(const Options &o, std::string command)
      : opt_(o), dir_(o.out), t0_(std::chrono::steady_clock::now()) {
    m_.command = std::move(command);
    m_.threads = effective_threads(o.threads);
    m_.version = CHARSUM_VERSION;
  }

  io::RunManifest &manifest() { return m_; }

  //! Writes a CSV payload, or its JSON rendering under --format json.
  void table(const std::string &stem, const std::string &csv) {
    if (opt_.format == "json")
      io::emit(m_, dir_, stem + ".json", io::csv_to_json(csv).dump(1) + "\n");
    else
      io::emit(m_, dir_, stem + ".csv", csv);
  }

  void raw(const std::string &name, const std::string &data) {
    io::emit(m_, dir_, name, data);
  }

  int finish() {
    m_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    io::write_manifest(m_, dir_);
    const auto err = io::validate_manifest(dir_);
    if (!err.empty())
      throw ValidationFailure("manifest self-check failed: " + err);
    std::cout << "wrote " << m_.artifacts.size() << " artifact(s) and "
              << io::kManifestName << " to " << dir_.string() << "\n";
    return 0;
  }

private:
  const Options &opt_;
  fs::path dir_;
  io::RunManifest m_;
  std::chrono::steady_clock::time_point t0_;
};

chars::PrimeContext context_for_scan(const Options &o) {
  scan::check_scan_limit(o.q, scan::kDefaultScanLimit);
  return chars::build_context_cached(o.q);
}

scan::ScanResult do_scan(const chars::PrimeContext &ctx, const Options &o) {
  scan::ScanOptions so;
  so.threads = effective_threads(o.threads);
  return scan::scan_all(ctx, so);
}

int cmd_scan(const Options &o) {
  const auto ctx = context_for_scan(o);
  Run run(o, "scan");
  run.manifest().q = o.q;
  const auto r = do_scan(ctx, o);
  run.table("scan", io::scan_csv(r));
  double best = 0.0;
  for (const auto &e : r.extrema)
    best = std::max(best, e.m);
  run.manifest().results = {{"max_m", best}, {"characters", r.extrema.size()}};
  return run.finish();
}

int cmd_lfun(const Options &o) {
  const auto ctx = chars::build_context_cached(o.q);
  Run run(o, "lfun");
  run.manifest().q = o.q;
  const auto g = chars::gauss_sums_all(ctx);
  const auto l1 = lfun::l1_all(ctx, g);
  run.table("lfun", io::lfun_csv(l1, g));
  if (o.format == "csv") {
    std::vector<double> odd;
    for (std::size_t j = 1; j < l1.size(); j += 2)
      odd.push_back(std::abs(l1[j].value) / std::exp(std::numbers::egamma));
    const stats::EmpiricalDistribution phiL(odd, static_cast<double>(odd.size()));
    std::ostringstream os;
    os << "tau,phi_L_minus\n";
    for (double t : parse_tau_grid(o.tau_grid))
      os << io::num(t) << ',' << io::num(phiL.survival(t)) << '\n';
    run.table("phi_L", os.str());
  }
  return run.finish();
}

int cmd_dickman(const Options &o) {
  Run run(o, "dickman");
  const auto t = dickman::build_table(o.u_max, o.log2_steps);
  const std::size_t stride = t.steps_per_unit >= 64 ? t.steps_per_unit / 64 : 1;
  run.table("dickman", io::dickman_csv(t, stride));
  const double res = t.dde_residual_max();
  run.manifest().parameters = {{"u_max", o.u_max}, {"log2_steps", o.log2_steps}};
  run.manifest().results = {{"dde_residual_max", res},
                            {"rho_2", t.rho(2.0)},
                            {"P_1", t.P(1.0)},
                            {"A", dickman::constant_A()},
                            {"eta", dickman::eta()}};
  const int rc = run.finish();
  if (res > 1e-10)
    throw ValidationFailure("DDE residual " + std::to_string(res) + " exceeds 1e-10");
  return rc;
}

int cmd_smooth_verify(const Options &o) {
  const double z = o.z > 0 ? o.z : 1e4;
  const double y = o.y > 0 ? o.y : 50.0;
  const double u = o.u_cut > 0 ? o.u_cut : 2.0;
  const auto ctx = chars::build_context_cached(o.q);
  Run run(o, "smooth-verify");
  run.manifest().q = o.q;
  run.manifest().parameters = {{"z", z}, {"y", y}, {"u", u}};
  std::ostringstream os;
  os << "j,a,b,re_lhs,im_lhs,re_rhs,im_rhs,residual\n";
  double worst = 0.0;
  for (u64 j = 0; j < ctx.order(); ++j)
    for (u64 b = 1; b <= 8; ++b) {
      if (static_cast<double>(arith::largest_prime_factor(b)) > y)
        continue;
      for (u64 a = 1; a <= b; ++a) {
        if (std::gcd(a, b) != 1)
          continue;
        const auto f = smooth::verify_lemma_formula(ctx, chars::CharIndex{j}, a, b, z, y);
        worst = std::max(worst, f.residual);
        os << j << ',' << a << ',' << b << ',' << io::num(f.lhs.real()) << ','
           << io::num(f.lhs.imag()) << ',' << io::num(f.rhs.real()) << ','
           << io::num(f.rhs.imag()) << ',' << io::num(f.residual) << '\n';
      }
    }
  run.table("formula", os.str());
  const auto table = dickman::build_table();
  const auto h = smooth::smooth_harmonic(y, u, table);
  std::ostringstream hs;
  hs << "y,u,sum,prediction,deviation\n"
     << io::num(y) << ',' << io::num(u) << ',' << io::num(h.sum) << ','
     << io::num(h.prediction) << ',' << io::num(h.deviation) << '\n';
  run.table("harmonic", hs.str());
  run.manifest().results = {{"max_formula_residual", worst},
                            {"harmonic_deviation", h.deviation}};
  const int rc = run.finish();
  if (worst > 1e-10)
    throw ValidationFailure("formula residual " + std::to_string(worst) + " exceeds 1e-10");
  return rc;
}

int cmd_model(const Options &o) {
  model::ModelConfig cfg;
  if (o.y > 0)
    cfg.y = o.y;
  if (o.u_cut > 0)
    cfg.u_cut = o.u_cut;
  if (o.grid > 0)
    cfg.R = o.grid;
  cfg.seed = o.seed;
  cfg.samples = o.samples;
  const auto taus = parse_tau_grid(o.tau_grid);
  const model::Sampler sampler(cfg);
  Run run(o, "model");
  run.manifest().parameters = {{"y", cfg.y},       {"u_cut", cfg.u_cut},
                               {"grid", cfg.R},     {"seed", cfg.seed},
                               {"samples", cfg.samples}};
  const auto s = model::run_model(sampler, 0, cfg.samples, effective_threads(o.threads));
  run.table("samples", io::samples_csv(s));
  const auto est = model::estimate_phi(s, taus);
  json ci = json::array();
  for (const auto &e : est)
    ci.push_back({{"tau", e.tau}, {"phi", e.phi}, {"ci_lo", e.ci_lo}, {"ci_hi", e.ci_hi}});
  run.raw("phi.json", ci.dump(1) + "\n");
  if (o.format == "csv")
    run.raw("phi.csv", io::phi_csv(est));
  run.manifest().results = {{"support_size", sampler.support().size()},
                            {"tail_bound", sampler.tail_bound()}};
  return run.finish();
}

int cmd_structure(const Options &o) {
  const auto ctx = context_for_scan(o);
  Run run(o, "structure");
  run.manifest().q = o.q;
  stats::StructureOptions so;
  so.top_fraction = o.top_fraction;
  if (o.y > 0)
    so.y = o.y;
  run.manifest().parameters = {{"top_fraction", so.top_fraction}, {"B", so.B}, {"y", so.y}};
  const auto r = do_scan(ctx, o);
  const auto g = chars::gauss_sums_all(ctx);
  const auto l1 = lfun::l1_all(ctx, g);
  const auto rs = stats::build_reports(r, l1, g);
  const auto rep = stats::structure_report(ctx, rs, so);
  std::ostringstream os;
  os << "set,j,parity,m,a,b,b0,euler_residual,l1_gap,D_trivial,D_mod3,pretender_d,"
        "pretender_label\n";
  auto rows = [&](const char *name, const std::vector<stats::StructureEntry> &es) {
    for (const auto &e : es)
      os << name << ',' << e.j.j << ',' << e.parity << ',' << io::num(e.m) << ','
         << e.approx.a << ',' << e.approx.b << ',' << e.approx.b0 << ','
         << io::num(e.euler_residual) << ',' << io::num(e.l1_gap) << ','
         << io::num(e.D_trivial) << ',' << io::num(e.D_mod3) << ','
         << e.pretender_conductor << ',' << e.pretender_label << '\n';
  };
  rows("top", rep.overall);
  rows("odd", rep.top_odd);
  rows("even", rep.top_even);
  run.table("structure", os.str());
  json b0 = json::object(), eb = json::object();
  for (const auto &[b, c] : rep.b0_histogram)
    b0[std::to_string(b)] = c;
  for (const auto &[b, c] : rep.even_b_histogram)
    eb[std::to_string(b)] = c;
  run.manifest().results = {{"top_count", rep.top_count},
                            {"odd_fraction", rep.odd_fraction},
                            {"b0_histogram", b0},
                            {"even_b_histogram", eb},
                            {"even_modal_b", rep.even_modal_b},
                            {"median_euler_residual", rep.median_euler_residual},
                            {"median_l1_gap", rep.median_l1_gap},
                            {"odd_trivial_pretender_fraction",
                             rep.odd_trivial_pretender_fraction},
                            {"even_mod3_pretender_fraction",
                             rep.even_mod3_pretender_fraction}};
  return run.finish();
}

int cmd_report(const Options &o) {
  const auto ctx = context_for_scan(o);
  const double y = o.y > 0 ? o.y : 100.0;
  const auto taus = parse_tau_grid(o.tau_grid);
  Run run(o, "report");
  run.manifest().q = o.q;
  run.manifest().parameters = {{"y", y}, {"tau_grid", o.tau_grid}};
  const auto r = do_scan(ctx, o);
  const auto g = chars::gauss_sums_all(ctx);
  const auto l1 = lfun::l1_all(ctx, g);
  const auto rs = stats::build_reports(r, l1, g);
  run.table("report", io::report_csv(ctx, rs, y));
  run.table("tau", io::tau_csv(rs, o.q, taus));
  std::vector<double> ms;
  for (const auto &x : rs)
    ms.push_back(x.m);
  const auto sm = stats::summarize(ms);
  run.manifest().results = {{"m_min", sm.min}, {"m_mean", sm.mean},
                            {"m_q9999", sm.quantile}, {"m_max", sm.max}};
  return run.finish();
}

int cmd_verify(const Options &o) {
  if (o.level != "fast" && o.level != "full")
    throw std::invalid_argument("--level must be fast or full");
  const unsigned t = effective_threads(o.threads);
  std::vector<verify::Outcome> out = verify::fast_suite(t);
  if (o.level == "full") {
    out.push_back(verify::polya_suite());
    out.push_back(verify::dickman_suite());
    out.push_back(verify::smooth_harmonic_suite());
    out.push_back(verify::variance_suite(t));
    auto st = verify::structure_suite(t);
    out.push_back(st.a);
    out.push_back(st.b);
    out.push_back(st.c);
    out.push_back(verify::distribution_suite(t).outcome);
    out.push_back(verify::moment_suite());
  }
  bool ok = true;
  json rows = json::array();
  for (const auto &x : out) {
    std::cout << (x.passed ? "PASS " : "FAIL ") << x.id << " " << x.title << ": "
              << x.detail << " [" << verify::detail::fmt("%.2f", x.seconds) << " s]\n";
    ok = ok && x.passed;
    rows.push_back({{"id", x.id}, {"title", x.title}, {"passed", x.passed},
                    {"detail", x.detail}, {"seconds", x.seconds}});
  }
  Run run(o, "verify-all");
  run.manifest().parameters = {{"level", o.level}};
  run.raw("verify.json", rows.dump(1) + "\n");
  run.manifest().results = {{"passed", ok}};
  run.finish();
  if (!ok)
    throw ValidationFailure("one or more checks failed");
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Prime-modulus character sums: scans, L-values, smooth numbers and "
               "the random multiplicative model"};
  app.set_version_flag("--version", CHARSUM_VERSION);
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App *sc) {
    sc->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    sc->add_option("--out", o.out, "output directory");
    sc->add_option("--format", o.format, "table format")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_q = [&](CLI::App *sc) {
    sc->add_option("--q", o.q, "prime modulus")->required();
  };

  auto *scan_c = app.add_subcommand("scan", "maximal partial sums of every character");
  add_q(scan_c);
  add_common(scan_c);

  auto *lfun_c = app.add_subcommand("lfun", "L(1, chi) and Gauss sums of every character");
  add_q(lfun_c);
  add_common(lfun_c);
  lfun_c->add_option("--tau-grid", o.tau_grid, "lo:hi:step");

  auto *dick_c = app.add_subcommand("dickman", "Dickman rho and P(u) table");
  add_common(dick_c);
  dick_c->add_option("--u-max", o.u_max, "table range")->check(CLI::Range(2.0, 100.0));
  dick_c->add_option("--log2-steps", o.log2_steps, "steps per unit = 2^k")
      ->check(CLI::Range(8, 20));

  auto *sv_c = app.add_subcommand("smooth-verify",
                                  "character expansion of twisted smooth sums");
  u64 sv_q = 11;
  sv_c->add_option("--q", sv_q, "prime modulus (default 11)");
  add_common(sv_c);
  sv_c->add_option("--z", o.z, "summation length (default 1e4)");
  sv_c->add_option("--y", o.y, "smoothness bound (default 50)");
  sv_c->add_option("--u-cut", o.u_cut, "u for the harmonic-sum check (default 2)");

  auto *model_c = app.add_subcommand("model", "random multiplicative model samples");
  add_common(model_c);
  model_c->add_option("--y", o.y, "smoothness bound (default 20)");
  model_c->add_option("--u-cut", o.u_cut, "support n <= y^u (default 4)");
  model_c->add_option("--grid", o.grid, "FFT grid size (default 32768)");
  model_c->add_option("--seed", o.seed, "random seed");
  model_c->add_option("--samples", o.samples, "number of samples");
  model_c->add_option("--tau-grid", o.tau_grid, "lo:hi:step");

  auto *st_c = app.add_subcommand("structure", "analysis of characters with large m");
  add_q(st_c);
  add_common(st_c);
  st_c->add_option("--top-fraction", o.top_fraction, "share of characters analysed")
      ->check(CLI::Range(0.0, 1.0));
  st_c->add_option("--y", o.y, "prime bound for Euler products and distances");

  auto *rep_c = app.add_subcommand("report", "per-character report and survival curves");
  add_q(rep_c);
  add_common(rep_c);
  rep_c->add_option("--y", o.y, "prime bound for D(chi, 1; y) (default 100)");
  rep_c->add_option("--tau-grid", o.tau_grid, "lo:hi:step");

  auto *ver_c = app.add_subcommand("verify-all", "run the verification suites");
  add_common(ver_c);
  ver_c->add_option("--level", o.level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*scan_c)
      return cmd_scan(o);
    if (*lfun_c)
      return cmd_lfun(o);
    if (*dick_c)
      return cmd_dickman(o);
    if (*sv_c) {
      o.q = sv_q;
      return cmd_smooth_verify(o);
    }
    if (*model_c)
      return cmd_model(o);
    if (*st_c)
      return cmd_structure(o);
    if (*rep_c)
      return cmd_report(o);
    if (*ver_c)
      return cmd_verify(o);
  } catch (const scan::ScanLimitExceeded &e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
