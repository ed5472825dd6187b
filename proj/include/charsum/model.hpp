#pragma once
// Random multiplicative model: X_p uniform on the unit circle for p <= y,
// X_{-1} = +-1, X_n completely multiplicative, and
//   S = max_alpha |sum_{1<=|n|<=N, P^+(|n|)<=y} X_n (1 - e(n alpha)) / n|,
// N = y^{u_cut}, with m = S / (2 e^gamma).

#include "charsum/arith.hpp"
#include "charsum/characters.hpp"
#include "charsum/distribution.hpp"
#include "charsum/fft.hpp"
#include "charsum/smooth.hpp"
#include "charsum/summation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace charsum::model {

using arith::u32;
using arith::u64;

struct ModelConfig {
  double y = 20.0;
  double u_cut = 4.0;
  u64 R = u64{1} << 15;
  u64 samples = 10'000;
  u64 seed = 1;
  double max_tail = 0.05;
};

struct ModelSample {
  u64 index = 0;
  double s_value = 0.0;
  double m_value = 0.0;
  double argmax_alpha = 0.0;
  double tail_bound = 0.0;
};

//! Test hooks applied after drawing.
struct SampleOverrides {
  std::optional<cplx> force_xp; // every X_p set to this value
  bool conjugate = false;       // X_p replaced by its conjugate
  std::optional<int> force_sign; // X_{-1}
};

//==============================================================================
// Counter-based random stream

inline u64 splitmix64(u64 x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

//! Word number `counter` of the stream (seed, sample_index).
inline u64 stream_word(u64 seed, u64 sample_index, u64 counter) {
  const u64 key = splitmix64(seed ^ splitmix64(sample_index ^ 0xD1B54A32D192ED03ULL));
  return splitmix64(key + counter * 0x9E3779B97F4A7C15ULL);
}

//! Uniform double in [0, 1).
inline double stream_uniform(u64 seed, u64 sample_index, u64 counter) {
  return static_cast<double>(stream_word(seed, sample_index, counter) >> 11) * 0x1.0p-53;
}

//==============================================================================
// Smooth support

//! y-smooth n <= N in depth-first order; X_n = X_{parent} X_{prime}.
struct SmoothSupport {
  std::vector<u32> primes;
  std::vector<u64> n;
  std::vector<u32> parent;     // index into n; entry 0 (n = 1) points at itself
  std::vector<u32> prime_index; // index into primes; unused for n = 1
  double harmonic = 0.0;       // sum 1/n over the support
  double euler_product = 0.0;  // prod_{p<=y} (1 - 1/p)^{-1}

  std::size_t size() const { return n.size(); }
  //! 2 sum_{n > N, P^+(n) <= y} 1/n.
  double tail_bound() const { return 2.0 * (euler_product - harmonic); }
};

inline SmoothSupport build_support(double y, double u_cut) {
  SmoothSupport s;
  s.primes = arith::primes_up_to(static_cast<u64>(std::floor(y)));
  const double x = smooth::smooth_limit(y, u_cut);
  if (x > smooth::kMaxEnumeration)
    throw std::out_of_range("model: y^u_cut exceeds 1e10");
  const u64 N = static_cast<u64>(std::floor(x));
  struct Node {
    u32 self;
  };
  s.parent.push_back(0);
  s.prime_index.push_back(0);
  // step() runs immediately before the child's visit(), so the child's index
  // is the next free slot.
  smooth::enumerate_smooth(
      N, std::span<const u32>(s.primes), Node{0},
      [&](const Node &parent, std::size_t k) {
        s.parent.push_back(parent.self);
        s.prime_index.push_back(static_cast<u32>(k));
        return Node{static_cast<u32>(s.parent.size() - 1)};
      },
      [&](u64 n, const Node &) { s.n.push_back(n); });
  NeumaierSum h;
  for (u64 v : s.n)
    h.add(1.0 / static_cast<double>(v));
  s.harmonic = h.value();
  double prod = 1.0;
  for (u32 p : s.primes)
    prod *= static_cast<double>(p) / static_cast<double>(p - 1);
  s.euler_product = prod;
  return s;
}

inline void validate(const ModelConfig &cfg) {
  if (!(cfg.y >= 3.0))
    throw std::invalid_argument("model: y must be >= 3");
  if (!(cfg.u_cut >= 1.0))
    throw std::invalid_argument("model: u_cut must be >= 1");
  if (cfg.samples < 1)
    throw std::invalid_argument("model: samples must be >= 1");
  if (cfg.R < 4)
    throw std::invalid_argument("model: grid size must be >= 4");
}

//==============================================================================
// Sampler

class Sampler {
public:
  explicit Sampler(const ModelConfig &cfg)
      : cfg_(cfg), support_((validate(cfg), build_support(cfg.y, cfg.u_cut))),
        plan_(cfg.R) {
    if (support_.tail_bound() > cfg.max_tail)
      throw std::invalid_argument(
          "model: truncation tail bound " + std::to_string(support_.tail_bound()) +
          " exceeds " + std::to_string(cfg.max_tail) + "; raise u_cut");
  }

  const ModelConfig &config() const { return cfg_; }
  const SmoothSupport &support() const { return support_; }
  double tail_bound() const { return support_.tail_bound(); }

  ModelSample draw(u64 index, const SampleOverrides &ov = {}) const {
    const std::size_t np = support_.primes.size();
    std::vector<cplx> xp(np);
    for (std::size_t i = 0; i < np; ++i)
      xp[i] = chars::unit_root(stream_uniform(cfg_.seed, index, i + 1));
    double sign = stream_uniform(cfg_.seed, index, 0) < 0.5 ? -1.0 : 1.0;
    if (ov.force_xp)
      std::fill(xp.begin(), xp.end(), *ov.force_xp);
    if (ov.conjugate)
      for (auto &v : xp)
        v = std::conj(v);
    if (ov.force_sign)
      sign = *ov.force_sign < 0 ? -1.0 : 1.0;
    return evaluate(index, xp, sign);
  }

  //! Evaluates S for explicit X_p (indexed like support().primes).
  ModelSample evaluate(u64 index, const std::vector<cplx> &xp, double sign) const {
    const std::size_t m = support_.size();
    std::vector<cplx> xn(m);
    xn[0] = {1.0, 0.0};
    for (std::size_t i = 1; i < m; ++i)
      xn[i] = xn[support_.parent[i]] * xp[support_.prime_index[i]];
    std::vector<cplx> c(m);
    ComplexNeumaierSum c0{};
    for (std::size_t i = 0; i < m; ++i) {
      c[i] = xn[i] / static_cast<double>(support_.n[i]);
      c0.add(c[i]);
    }
    const cplx C0 = c0.value();
    const u64 R = cfg_.R;
    std::vector<cplx> buf(R), scratch;
    for (std::size_t i = 0; i < m; ++i)
      buf[support_.n[i] % R] += c[i];
    plan_.execute(buf, fft::Direction::inverse, scratch);

    // T_r = (1 - X_{-1}) C0 - F(r/R) + X_{-1} F(-r/R).
    const cplx a0 = (1.0 - sign) * C0;
    std::vector<double> val(R);
    for (u64 r = 0; r < R; ++r)
      val[r] = std::norm(a0 - buf[r] + sign * buf[(R - r) % R]);
    // Two largest local maxima of the grid values.
    double top[2] = {-1.0, -1.0};
    u64 arg[2] = {0, 0};
    for (u64 r = 0; r < R; ++r) {
      const double v = val[r];
      if (v < val[(r + R - 1) % R] || v < val[(r + 1) % R])
        continue;
      if (v > top[0]) {
        top[1] = top[0];
        arg[1] = arg[0];
        top[0] = v;
        arg[0] = r;
      } else if (v > top[1]) {
        top[1] = v;
        arg[1] = r;
      }
    }
    double best = top[0];
    double best_alpha = static_cast<double>(arg[0]) / static_cast<double>(R);
    for (int k = 0; k < 2; ++k) {
      if (top[k] < 0.0)
        continue;
      auto [v, a] = refine(c, a0, sign,
                           static_cast<double>(arg[k]) / static_cast<double>(R));
      if (v > best) {
        best = v;
        best_alpha = a;
      }
    }
    ModelSample s;
    s.index = index;
    s.s_value = std::sqrt(best);
    s.m_value = s.s_value / (2.0 * std::exp(std::numbers::egamma));
    s.argmax_alpha = best_alpha;
    s.tail_bound = support_.tail_bound();
    return s;
  }

private:
  struct Deriv {
    cplx t, t1, t2;
  };

  //! T(alpha) and its first two derivatives.
  Deriv exact(const std::vector<cplx> &c, const cplx &a0, double sign,
              double alpha) const {
    ComplexNeumaierSum t{}, t1{}, t2{};
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double n = static_cast<double>(support_.n[i]);
      const double ph = std::fmod(n * alpha, 1.0);
      const cplx e = chars::unit_root(ph);
      // -c e(n a) + sign c e(-n a)
      const cplx f = -c[i] * e;
      const cplx g = sign * c[i] * std::conj(e);
      t.add(f + g);
      const cplx w{0.0, two_pi * n};
      t1.add(w * f - w * g);
      t2.add(w * w * (f + g));
    }
    return {a0 + t.value(), t1.value(), t2.value()};
  }

  std::pair<double, double> refine(const std::vector<cplx> &c, const cplx &a0,
                                   double sign, double alpha) const {
    const double h = 1.0 / static_cast<double>(cfg_.R);
    double a = alpha;
    Deriv d = exact(c, a0, sign, a);
    double v = std::norm(d.t);
    for (int it = 0; it < 12; ++it) {
      const double g1 = 2.0 * (std::conj(d.t) * d.t1).real();
      const double g2 = 2.0 * (std::norm(d.t1) + (std::conj(d.t) * d.t2).real());
      if (!(g2 < 0.0))
        break;
      double step = -g1 / g2;
      step = std::clamp(step, -h, h);
      double na = a + step;
      na -= std::floor(na);
      const Deriv nd = exact(c, a0, sign, na);
      const double nv = std::norm(nd.t);
      if (!(nv > v))
        break;
      a = na;
      d = nd;
      const bool done = std::abs(step) < 1e-15;
      v = nv;
      if (done)
        break;
    }
    return {v, a};
  }

  ModelConfig cfg_;
  SmoothSupport support_;
  fft::Plan plan_;
};

//! Samples [first, first + count), in index order regardless of threads.
inline std::vector<ModelSample> run_model(const Sampler &sampler, u64 first,
                                          u64 count, unsigned threads = 0) {
  std::vector<ModelSample> out(count);
  std::atomic<u64> next{0};
  auto worker = [&]() {
    for (;;) {
      const u64 i = next.fetch_add(1);
      if (i >= count)
        return;
      out[i] = sampler.draw(first + i);
    }
  };
  unsigned nt = threads ? threads : std::thread::hardware_concurrency();
  nt = static_cast<unsigned>(std::clamp<u64>(nt, 1, std::max<u64>(count, 1)));
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < nt; ++t)
      pool.emplace_back(worker);
  }
  return out;
}

inline std::vector<ModelSample> run_model(const ModelConfig &cfg,
                                          unsigned threads = 0) {
  return run_model(Sampler(cfg), 0, cfg.samples, threads);
}

inline stats::EmpiricalDistribution
model_distribution(const std::vector<ModelSample> &samples) {
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto &s : samples)
    v.push_back(s.m_value);
  return stats::EmpiricalDistribution(std::move(v),
                                      static_cast<double>(samples.size()));
}

struct PhiEstimate {
  double tau = 0.0;
  double phi = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

//! Fraction of samples with m > tau, with a normal-approximation 95% interval.
inline std::vector<PhiEstimate> estimate_phi(const std::vector<ModelSample> &samples,
                                             const std::vector<double> &taus) {
  if (!std::is_sorted(taus.begin(), taus.end()))
    throw std::invalid_argument("estimate_phi: taus must be ascending");
  const auto dist = model_distribution(samples);
  const double n = static_cast<double>(samples.size());
  std::vector<PhiEstimate> out;
  for (double t : taus) {
    const double p = dist.survival(t);
    const double half = 1.959963984540054 * std::sqrt(p * (1.0 - p) / n);
    out.push_back({t, p, std::max(0.0, p - half), std::min(1.0, p + half)});
  }
  return out;
}

//! KS distance on a tau grid between the character-side survival function and
//! the model estimate.
inline double compare_to_q(const stats::EmpiricalDistribution &phi_q,
                           const std::vector<ModelSample> &samples,
                           const std::vector<double> &taus) {
  return stats::ks_distance(phi_q, model_distribution(samples), taus);
}

} // namespace charsum::model
