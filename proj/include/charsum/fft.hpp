#pragma once
// Discrete Fourier transform of arbitrary length.
//
// Power-of-two lengths use an iterative radix-2 Cooley-Tukey transform. Any
// other length N is reduced to a circular convolution of power-of-two length
// M >= 2N-1 through the chirp identity jk = (j^2 + k^2 - (j-k)^2)/2
// (Bluestein). Transforms are unnormalized:
//
//   X_j = sum_k x_k exp(s * 2 pi i j k / N),   s = -1 (forward) or +1 (inverse).

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace charsum::fft {

using cplx = std::complex<double>;

enum class Direction { forward, inverse };

//! Largest supported transform length.
inline constexpr std::size_t kMaxLength = std::size_t{1} << 31;

namespace detail {

//! exp(-2 pi i k / m) for k < m/2, evaluated directly (no recurrences).
inline std::vector<cplx> radix2_twiddles(std::size_t m) {
  std::vector<cplx> w(m / 2);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double a = -2.0 * std::numbers::pi * static_cast<double>(k) /
                     static_cast<double>(m);
    w[k] = {std::cos(a), std::sin(a)};
  }
  return w;
}

inline void bit_reverse(std::span<cplx> a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1)
      j ^= bit;
    j ^= bit;
    if (i < j)
      std::swap(a[i], a[j]);
  }
}

//! In-place radix-2 transform; twiddles are for length a.size().
inline void radix2(std::span<cplx> a, const std::vector<cplx> &twiddles,
                   bool inverse) {
  const std::size_t n = a.size();
  bit_reverse(a);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cplx w = twiddles[k * stride];
        if (inverse)
          w = std::conj(w);
        const cplx u = a[i + k];
        const cplx v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

} // namespace detail

//! Precomputed transform of a fixed length. execute() is const and may be
//! called concurrently as long as each caller supplies its own data.
class Plan {
public:
  explicit Plan(std::size_t n) : n_(n) {
    if (n == 0 || n > kMaxLength)
      throw std::length_error("fft::Plan: unsupported length " +
                              std::to_string(n));
    if (std::has_single_bit(n)) {
      m_ = n;
      twiddles_ = detail::radix2_twiddles(m_);
      return;
    }
    m_ = std::bit_ceil(2 * n - 1);
    twiddles_ = detail::radix2_twiddles(m_);
    // chirp_k = exp(-pi i k^2 / n); k^2 reduced mod 2n in integers.
    chirp_.resize(n);
    const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t kk = static_cast<std::uint64_t>(k);
      const std::uint64_t r = static_cast<std::uint64_t>(
          (static_cast<unsigned __int128>(kk) * kk) % two_n);
      const double a = -std::numbers::pi * static_cast<double>(r) /
                       static_cast<double>(n);
      chirp_[k] = {std::cos(a), std::sin(a)};
    }
    filter_.assign(m_, cplx{});
    filter_[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n; ++k)
      filter_[k] = filter_[m_ - k] = std::conj(chirp_[k]);
    detail::radix2(filter_, twiddles_, false);
  }

  std::size_t size() const { return n_; }
  bool is_power_of_two() const { return m_ == n_; }

  //! Transform in place. data.size() must equal size().
  void execute(std::span<cplx> data, Direction dir) const {
    std::vector<cplx> scratch;
    execute(data, dir, scratch);
  }

  //! As above, reusing caller-owned scratch storage.
  void execute(std::span<cplx> data, Direction dir,
               std::vector<cplx> &scratch) const {
    if (data.size() != n_)
      throw std::invalid_argument("fft::Plan: length mismatch");
    const bool inverse = dir == Direction::inverse;
    if (is_power_of_two()) {
      detail::radix2(data, twiddles_, inverse);
      return;
    }
    // The inverse transform is conj(forward(conj(x))).
    scratch.assign(m_, cplx{});
    for (std::size_t k = 0; k < n_; ++k) {
      const cplx x = inverse ? std::conj(data[k]) : data[k];
      scratch[k] = x * chirp_[k];
    }
    detail::radix2(scratch, twiddles_, false);
    for (std::size_t k = 0; k < m_; ++k)
      scratch[k] *= filter_[k];
    detail::radix2(scratch, twiddles_, true);
    const double scale = 1.0 / static_cast<double>(m_);
    for (std::size_t k = 0; k < n_; ++k) {
      const cplx y = scratch[k] * chirp_[k] * scale;
      data[k] = inverse ? std::conj(y) : y;
    }
  }

private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<cplx> twiddles_;
  std::vector<cplx> chirp_;
  std::vector<cplx> filter_;
};

//! One-shot transform.
inline std::vector<cplx> dft(std::span<const cplx> x, Direction dir) {
  std::vector<cplx> out(x.begin(), x.end());
  Plan(out.size()).execute(out, dir);
  return out;
}

} // namespace charsum::fft
