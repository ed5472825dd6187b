#pragma once
// Number-theoretic primitives: primality, factorization, multiplicative
// functions, smoothness and primitive roots.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace charsum::arith {

using u64 = std::uint64_t;
using u32 = std::uint32_t;

//! Sentinel used for P^-(1) = infinity.
inline constexpr u64 kInfinitePrime = std::numeric_limits<u64>::max();

//! Limit of the cached prime table used for trial division.
inline constexpr u64 kPrimeCacheLimit = 1'000'000;

struct PrimePower {
  u64 prime;
  unsigned exponent;
  bool operator==(const PrimePower &) const = default;
};

//! Canonical factorization; primes strictly increasing, empty iff n = 1.
struct Factorization {
  std::vector<PrimePower> prime_powers;

  bool is_one() const { return prime_powers.empty(); }

  //! Product of p^e. Overflow is not checked; inputs come from factorize().
  u64 value() const {
    u64 n = 1;
    for (const auto &pp : prime_powers)
      for (unsigned e = 0; e < pp.exponent; ++e)
        n *= pp.prime;
    return n;
  }

  //! P^+(n), with P^+(1) = 1.
  u64 largest_prime() const {
    return prime_powers.empty() ? 1 : prime_powers.back().prime;
  }

  //! P^-(n), with P^-(1) = kInfinitePrime.
  u64 smallest_prime() const {
    return prime_powers.empty() ? kInfinitePrime : prime_powers.front().prime;
  }

  bool operator==(const Factorization &) const = default;
};

//==============================================================================
// Modular arithmetic

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1)
      result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

//==============================================================================
// Prime tables

//! Primes <= n by the sieve of Eratosthenes.
inline std::vector<u32> primes_up_to(u64 n) {
  std::vector<u32> primes;
  if (n < 2)
    return primes;
  std::vector<bool> composite(n + 1, false);
  for (u64 i = 2; i <= n; ++i) {
    if (composite[i])
      continue;
    primes.push_back(static_cast<u32>(i));
    for (u64 k = i * i; k <= n; k += i)
      composite[k] = true;
  }
  return primes;
}

//! Primes <= kPrimeCacheLimit, built once.
inline const std::vector<u32> &cached_primes() {
  static const std::vector<u32> table = primes_up_to(kPrimeCacheLimit);
  return table;
}

//! Largest prime factor for every n <= limit (entry 0 and 1 are 1).
inline std::vector<u32> largest_prime_factor_table(u64 limit) {
  std::vector<u32> lpf(limit + 1, 1);
  for (u64 p = 2; p <= limit; ++p) {
    if (lpf[p] != 1)
      continue;
    for (u64 k = p; k <= limit; k += p)
      lpf[k] = static_cast<u32>(p);
  }
  return lpf;
}

//==============================================================================
// Primality

//! Deterministic for all 64-bit n (Miller-Rabin with the first 12 primes as
//! witnesses).
inline bool is_prime(u64 n) {
  if (n < 2)
    return false;
  static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : small) {
    if (n == p)
      return true;
    if (n % p == 0)
      return false;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : small) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1)
      continue;
    bool witness = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness)
      return false;
  }
  return true;
}

//==============================================================================
// Factorization

inline Factorization factorize(u64 n) {
  if (n == 0)
    throw std::invalid_argument("factorize: n must be >= 1");
  Factorization f;
  for (u32 p : cached_primes()) {
    const u64 pp = p;
    if (pp * pp > n)
      break;
    if (n % pp != 0)
      continue;
    unsigned e = 0;
    while (n % pp == 0) {
      n /= pp;
      ++e;
    }
    f.prime_powers.push_back({pp, e});
  }
  if (n == 1)
    return f;
  // Either n is prime, or every prime factor exceeds the cache.
  if (n <= kPrimeCacheLimit * kPrimeCacheLimit || is_prime(n)) {
    f.prime_powers.push_back({n, 1});
    return f;
  }
  for (u64 d = kPrimeCacheLimit + 1; d * d <= n; d += 2) {
    if (n % d != 0)
      continue;
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    f.prime_powers.push_back({d, e});
  }
  if (n > 1)
    f.prime_powers.push_back({n, 1});
  return f;
}

//! All positive divisors, ascending.
inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> divs{1};
  for (const auto &[p, e] : factorize(n).prime_powers) {
    const std::size_t count = divs.size();
    u64 pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < count; ++i)
        divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

//==============================================================================
// Multiplicative functions

struct MultiplicativeValues {
  int mobius;
  u64 phi;
  double von_mangoldt;
  unsigned omega_small; // distinct prime factors
  unsigned omega_big;   // with multiplicity
};

inline MultiplicativeValues mult_functions(const Factorization &f) {
  MultiplicativeValues v{1, 1, 0.0, 0, 0};
  for (const auto &[p, e] : f.prime_powers) {
    ++v.omega_small;
    v.omega_big += e;
    if (e > 1)
      v.mobius = 0;
    else
      v.mobius = -v.mobius;
    u64 pk1 = 1;
    for (unsigned k = 1; k < e; ++k)
      pk1 *= p;
    v.phi *= pk1 * (p - 1);
  }
  if (f.prime_powers.size() == 1)
    v.von_mangoldt = std::log(static_cast<double>(f.prime_powers.front().prime));
  return v;
}

inline MultiplicativeValues mult_functions(u64 n) {
  return mult_functions(factorize(n));
}

inline u64 euler_phi(u64 n) { return mult_functions(n).phi; }
inline int mobius(u64 n) { return mult_functions(n).mobius; }
inline double von_mangoldt(u64 n) { return mult_functions(n).von_mangoldt; }

//==============================================================================
// Primitive roots and smoothness

//! Smallest generator of (Z/q)^*, for q an odd prime.
inline u64 primitive_root(u64 q) {
  if (q < 3 || q % 2 == 0 || !is_prime(q))
    throw std::invalid_argument("primitive_root: q must be an odd prime, got " +
                                std::to_string(q));
  const auto f = factorize(q - 1);
  for (u64 g = 2; g < q; ++g) {
    bool generator = true;
    for (const auto &pp : f.prime_powers) {
      if (powmod(g, (q - 1) / pp.prime, q) == 1) {
        generator = false;
        break;
      }
    }
    if (generator)
      return g;
  }
  throw std::logic_error("primitive_root: no generator found");
}

//! P^+(n) for n >= 1; P^+(1) = 1.
inline u64 largest_prime_factor(u64 n) { return factorize(n).largest_prime(); }

//! True iff P^+(n) <= y.
inline bool is_smooth(u64 n, double y) {
  if (n == 0)
    throw std::invalid_argument("is_smooth: n must be >= 1");
  return static_cast<double>(largest_prime_factor(n)) <= y;
}

} // namespace charsum::arith
