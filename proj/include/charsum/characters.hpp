#pragma once
// Dirichlet characters modulo an odd prime q, parametrized through discrete
// logarithms to the smallest primitive root g:
//
//   chi_j(n) = e(j * ind(n) / (q-1)),   g^ind(n) = n (mod q),
//
// so j = 0 is the principal character, chi_j(-1) = (-1)^j and the conjugate of
// chi_j is chi_{q-1-j}.

#include "charsum/arith.hpp"
#include "charsum/checksum.hpp"
#include "charsum/fft.hpp"
#include "charsum/summation.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace charsum::chars {

using arith::u32;
using arith::u64;

inline constexpr u64 kDefaultMaxModulus = 20'000'000;

//! e(x) = exp(2 pi i x).
inline cplx unit_root(double x) {
  const double a = 2.0 * std::numbers::pi * x;
  return {std::cos(a), std::sin(a)};
}

//! e(num/den) with the fraction reduced in integers first.
inline cplx unit_root(u64 num, u64 den) {
  return unit_root(static_cast<double>(num % den) / static_cast<double>(den));
}

//! Index j of chi_j. Values are in [0, q-2].
struct CharIndex {
  u64 j = 0;

  constexpr CharIndex() = default;
  constexpr explicit CharIndex(u64 v) : j(v) {}

  constexpr bool is_principal() const { return j == 0; }
  constexpr bool is_odd() const { return (j & 1) != 0; }
  //! chi(-1) = (-1)^j.
  constexpr int parity() const { return is_odd() ? -1 : 1; }
  constexpr bool operator==(const CharIndex &) const = default;
};

struct PrimeContext {
  u64 q = 0;
  u64 g = 0;
  std::vector<u32> ind;   // ind[n] for 1 <= n < q; ind[0] unused
  std::vector<u32> power; // power[k] = g^k mod q, k < q-1
  std::vector<cplx> root; // root[k] = e(k/(q-1))

  u64 order() const { return q - 1; }
  u64 half() const { return (q - 1) / 2; }
  CharIndex conjugate(CharIndex c) const {
    return CharIndex{c.j == 0 ? 0 : order() - c.j};
  }
  //! Index of the real (quadratic) character.
  CharIndex quadratic() const { return CharIndex{half()}; }

  //! chi_j(n); zero when q | n.
  cplx operator()(CharIndex c, u64 n) const {
    n %= q;
    if (n == 0)
      return {0.0, 0.0};
    return root[(c.j * ind[n]) % order()];
  }
};

namespace detail {

inline void fill_tables(PrimeContext &ctx) {
  const u64 L = ctx.order();
  ctx.root.resize(L);
  ctx.root[0] = {1.0, 0.0};
  for (u64 k = 1; 2 * k <= L; ++k) {
    cplx w = unit_root(k, L);
    if (4 * k == L)
      w = {0.0, 1.0};
    else if (2 * k == L)
      w = {-1.0, 0.0};
    ctx.root[k] = w;
    ctx.root[L - k] = std::conj(w);
  }
}

} // namespace detail

//! Builds the index table by iterating powers of the smallest primitive root.
inline PrimeContext build_context(u64 q, u64 max_q = kDefaultMaxModulus) {
  if (q < 3 || q % 2 == 0 || !arith::is_prime(q))
    throw std::invalid_argument("build_context: q must be an odd prime, got " +
                                std::to_string(q));
  if (q > max_q)
    throw std::out_of_range("build_context: q = " + std::to_string(q) +
                            " exceeds the configured maximum " +
                            std::to_string(max_q));
  PrimeContext ctx;
  ctx.q = q;
  ctx.g = arith::primitive_root(q);
  ctx.ind.assign(q, 0);
  ctx.power.resize(q - 1);
  u64 x = 1;
  for (u64 k = 0; k < q - 1; ++k) {
    ctx.power[k] = static_cast<u32>(x);
    ctx.ind[x] = static_cast<u32>(k);
    x = x * ctx.g % q;
  }
  detail::fill_tables(ctx);
  return ctx;
}

inline cplx eval_char(const PrimeContext &ctx, CharIndex c, u64 n) {
  return ctx(c, n);
}

//! G(chi_j) = sum_{n=1}^{q-1} chi_j(n) e(n/q), summed directly.
inline cplx gauss_sum(const PrimeContext &ctx, CharIndex c) {
  ComplexNeumaierSum acc{};
  for (u64 n = 1; n < ctx.q; ++n)
    acc.add(ctx(c, n) * unit_root(n, ctx.q));
  return acc.value();
}

//! G(chi_j) for every j, from a single length-(q-1) transform of
//! k -> e(g^k / q).
inline std::vector<cplx> gauss_sums_all(const PrimeContext &ctx) {
  std::vector<cplx> a(ctx.order());
  for (u64 k = 0; k < ctx.order(); ++k)
    a[k] = unit_root(ctx.power[k], ctx.q);
  fft::Plan(a.size()).execute(a, fft::Direction::inverse);
  return a;
}

//==============================================================================
// Index-table cache. Layout (little-endian host order):
//   magic[8] = "CHSMIDX\0", u32 version, u32 reserved, u64 q, u64 g,
//   u64 checksum (FNV-1a of the payload), payload = u32 ind[1..q-1].

inline constexpr char kCacheMagic[8] = {'C', 'H', 'S', 'M', 'I', 'D', 'X', '\0'};
inline constexpr std::uint32_t kCacheVersion = 1;

struct CacheHeader {
  char magic[8];
  std::uint32_t version;
  std::uint32_t reserved;
  std::uint64_t q;
  std::uint64_t g;
  std::uint64_t checksum;
};

inline std::uint64_t index_checksum(const PrimeContext &ctx) {
  return fnv1a(std::as_bytes(std::span(ctx.ind).subspan(1)));
}

inline void save_index_cache(const PrimeContext &ctx,
                             const std::filesystem::path &path) {
  CacheHeader h{};
  std::copy(std::begin(kCacheMagic), std::end(kCacheMagic), h.magic);
  h.version = kCacheVersion;
  h.q = ctx.q;
  h.g = ctx.g;
  h.checksum = index_checksum(ctx);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write index cache " + path.string());
  out.write(reinterpret_cast<const char *>(&h), sizeof h);
  out.write(reinterpret_cast<const char *>(ctx.ind.data() + 1),
            static_cast<std::streamsize>((ctx.q - 1) * sizeof(u32)));
}

//! Returns nullopt on any mismatch (missing file, wrong magic, version, q,
//! checksum, or an index table that is not a bijection).
inline std::optional<PrimeContext>
load_index_cache(const std::filesystem::path &path, u64 q) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return std::nullopt;
  CacheHeader h{};
  if (!in.read(reinterpret_cast<char *>(&h), sizeof h))
    return std::nullopt;
  if (!std::equal(std::begin(kCacheMagic), std::end(kCacheMagic), h.magic) ||
      h.version != kCacheVersion || h.q != q)
    return std::nullopt;
  PrimeContext ctx;
  ctx.q = q;
  ctx.g = h.g;
  ctx.ind.assign(q, 0);
  if (!in.read(reinterpret_cast<char *>(ctx.ind.data() + 1),
               static_cast<std::streamsize>((q - 1) * sizeof(u32))))
    return std::nullopt;
  if (index_checksum(ctx) != h.checksum)
    return std::nullopt;
  ctx.power.assign(q - 1, 0);
  std::vector<bool> seen(q - 1, false);
  for (u64 n = 1; n < q; ++n) {
    const u32 k = ctx.ind[n];
    if (k >= q - 1 || seen[k])
      return std::nullopt;
    seen[k] = true;
    ctx.power[k] = static_cast<u32>(n);
  }
  if (ctx.power[1] != ctx.g)
    return std::nullopt;
  detail::fill_tables(ctx);
  return ctx;
}

inline std::filesystem::path cache_path(const std::filesystem::path &dir,
                                        u64 q) {
  return dir / ("index-" + std::to_string(q) + ".bin");
}

//! build_context() backed by the CHARSUM_CACHE_DIR cache when that variable
//! is set.
inline PrimeContext build_context_cached(u64 q,
                                         u64 max_q = kDefaultMaxModulus) {
  const char *dir = std::getenv("CHARSUM_CACHE_DIR");
  if (dir == nullptr || *dir == '\0')
    return build_context(q, max_q);
  if (q > max_q)
    return build_context(q, max_q); // throws
  const auto path = cache_path(dir, q);
  if (auto cached = load_index_cache(path, q))
    return std::move(*cached);
  PrimeContext ctx = build_context(q, max_q);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!ec)
    save_index_cache(ctx, path);
  return ctx;
}

} // namespace charsum::chars
