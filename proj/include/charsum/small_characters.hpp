#pragma once
// Dirichlet characters of small composite moduli d, built from the CRT
// decomposition of (Z/d)^* into cyclic factors.
//
// Values are kept as exact exponents k over phi(d), chi(n) = e(k/phi(d)), with
// -1 marking gcd(n,d) > 1.

#include "charsum/arith.hpp"
#include "charsum/characters.hpp"
#include "charsum/summation.hpp"

#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace charsum::chars {

inline constexpr u64 kMaxSmallModulus = 10'000;

//! One cyclic factor of (Z/d)^*.
struct CyclicFactor {
  u64 prime;          // prime of the underlying p^k component
  unsigned exponent;  // k
  u64 order;          // order of the factor
  bool two_adic_sign; // the {+-1} factor of (Z/2^k)^*, k >= 3
  std::vector<int> log; // log[n mod d]; -1 when gcd(n, d) > 1
};

struct SmallGroup {
  u64 d = 1;
  u64 phi = 1;
  std::vector<CyclicFactor> factors;
  std::vector<cplx> root; // e(k/phi)
  std::vector<bool> unit; // gcd(n, d) == 1
};

namespace detail {

inline u64 ipow(u64 b, unsigned e) {
  u64 r = 1;
  while (e-- > 0)
    r *= b;
  return r;
}

//! A generator of (Z/p^k)^* for odd p.
inline u64 prime_power_root(u64 p, unsigned k) {
  u64 g = arith::primitive_root(p);
  if (k >= 2 && arith::powmod(g, p - 1, p * p) == 1)
    g += p;
  return g;
}

inline std::shared_ptr<const SmallGroup> make_group(u64 d) {
  auto grp = std::make_shared<SmallGroup>();
  grp->d = d;
  grp->phi = arith::euler_phi(d);
  grp->unit.assign(d, false);
  for (u64 n = 0; n < d; ++n)
    grp->unit[n] = std::gcd(n, d) == 1;

  for (const auto &[p, k] : arith::factorize(d).prime_powers) {
    const u64 pk = ipow(p, k);
    if (p == 2 && k == 1)
      continue;
    if (p == 2) {
      // n = (-1)^a 5^b mod 2^k.
      std::vector<int> a_of(pk, -1), b_of(pk, -1);
      const u64 ob = k >= 3 ? pk / 4 : 1;
      u64 x = 1;
      for (u64 b = 0; b < ob; ++b) {
        a_of[x] = 0;
        b_of[x] = static_cast<int>(b);
        a_of[pk - x] = 1;
        b_of[pk - x] = static_cast<int>(b);
        x = x * 5 % pk;
      }
      CyclicFactor fa{2, k, 2, true, std::vector<int>(d, -1)};
      CyclicFactor fb{2, k, ob, false, std::vector<int>(d, -1)};
      for (u64 n = 0; n < d; ++n) {
        if (!grp->unit[n])
          continue;
        fa.log[n] = a_of[n % pk];
        fb.log[n] = b_of[n % pk];
      }
      grp->factors.push_back(std::move(fa));
      if (k >= 3)
        grp->factors.push_back(std::move(fb));
      continue;
    }
    const u64 g = prime_power_root(p, k);
    const u64 order = pk / p * (p - 1);
    std::vector<int> lg(pk, -1);
    u64 x = 1;
    for (u64 e = 0; e < order; ++e) {
      lg[x] = static_cast<int>(e);
      x = x * g % pk;
    }
    CyclicFactor f{p, k, order, false, std::vector<int>(d, -1)};
    for (u64 n = 0; n < d; ++n)
      if (grp->unit[n])
        f.log[n] = lg[n % pk];
    grp->factors.push_back(std::move(f));
  }
  grp->root.resize(grp->phi);
  for (u64 k = 0; k < grp->phi; ++k)
    grp->root[k] = unit_root(k, grp->phi);
  return grp;
}

inline unsigned valuation(u64 n, u64 p) {
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

} // namespace detail

class SmallCharacter {
public:
  SmallCharacter(std::shared_ptr<const SmallGroup> group, std::vector<u64> t,
                 u64 label)
      : group_(std::move(group)), t_(std::move(t)), label_(label) {
    conductor_ = compute_conductor();
  }

  u64 modulus() const { return group_->d; }
  u64 phi() const { return group_->phi; }
  u64 label() const { return label_; }
  u64 conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == group_->d; }
  bool is_principal() const { return label_ == 0; }
  const std::vector<u64> &components() const { return t_; }
  const SmallGroup &group() const { return *group_; }

  //! Exponent k with psi(n) = e(k/phi(d)), or -1 when gcd(n,d) > 1.
  long long exponent(u64 n) const {
    const u64 r = n % group_->d;
    if (!group_->unit[r])
      return -1;
    u64 k = 0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const auto &f = group_->factors[i];
      k += t_[i] * static_cast<u64>(f.log[r]) % f.order * (group_->phi / f.order);
    }
    return static_cast<long long>(k % group_->phi);
  }

  cplx operator()(u64 n) const {
    const long long k = exponent(n);
    return k < 0 ? cplx{0.0, 0.0} : group_->root[static_cast<u64>(k)];
  }

  //! psi(-1) as +-1.
  int parity() const {
    const long long k = exponent(group_->d - 1);
    return (k == 0) ? 1 : -1;
  }

  //! Values at n = 1..d.
  std::vector<cplx> values() const {
    std::vector<cplx> v(group_->d);
    for (u64 n = 1; n <= group_->d; ++n)
      v[n - 1] = (*this)(n);
    return v;
  }

  //! Exponents at n = 0..d-1; used for exact comparisons.
  std::vector<long long> exponents() const {
    std::vector<long long> v(group_->d);
    for (u64 n = 0; n < group_->d; ++n)
      v[n] = exponent(n);
    return v;
  }

private:
  u64 compute_conductor() const {
    u64 c = 1;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const auto &f = group_->factors[i];
      if (t_[i] == 0)
        continue;
      const u64 ord = f.order / std::gcd(t_[i], f.order);
      if (f.prime != 2) {
        c *= detail::ipow(f.prime, 1 + detail::valuation(ord, f.prime));
      } else if (f.two_adic_sign) {
        // Refined by the 5-part below when present.
        const bool has_b = i + 1 < t_.size() && !group_->factors[i + 1].two_adic_sign &&
                           group_->factors[i + 1].prime == 2 && t_[i + 1] != 0;
        if (!has_b)
          c *= 4;
      } else {
        c *= detail::ipow(2, 2 + detail::valuation(ord, 2));
      }
    }
    return c;
  }

  std::shared_ptr<const SmallGroup> group_;
  std::vector<u64> t_;
  u64 label_ = 0;
  u64 conductor_ = 1;
};

//! All phi(d) characters mod d, ordered by label (label 0 is principal).
inline std::vector<SmallCharacter> small_characters(u64 d) {
  if (d == 0 || d > kMaxSmallModulus)
    throw std::out_of_range("small_characters: modulus must be in [1, " +
                            std::to_string(kMaxSmallModulus) + "], got " +
                            std::to_string(d));
  auto grp = detail::make_group(d);
  std::vector<SmallCharacter> out;
  out.reserve(grp->phi);
  const std::size_t r = grp->factors.size();
  std::vector<u64> t(r, 0);
  for (u64 label = 0; label < grp->phi; ++label) {
    out.emplace_back(grp, t, label);
    for (std::size_t i = 0; i < r; ++i) {
      if (++t[i] < grp->factors[i].order)
        break;
      t[i] = 0;
    }
  }
  return out;
}

//! The primitive character psi_1 mod conductor(psi) inducing psi.
inline SmallCharacter primitive_inducing(const SmallCharacter &psi) {
  const u64 d = psi.modulus();
  const u64 d1 = psi.conductor();
  auto cands = small_characters(d1);
  // psi_1(n) = psi(n') for any n' = n (mod d1) coprime to d.
  std::vector<long long> target(d1, -1);
  for (u64 n = 0; n < d1; ++n) {
    if (std::gcd(n, d1) != 1)
      continue;
    for (u64 m = n; m < d + d1; m += d1) {
      if (std::gcd(m, d) == 1) {
        const long long k = psi.exponent(m);
        // Rescale exponent from phi(d) to phi(d1).
        target[n] = k / static_cast<long long>(psi.phi() / cands.front().phi());
        break;
      }
    }
  }
  for (auto &c : cands) {
    if (!c.is_primitive())
      continue;
    bool match = true;
    for (u64 n = 0; n < d1 && match; ++n)
      match = c.exponent(n) == target[n];
    if (match)
      return c;
  }
  throw std::logic_error("primitive_inducing: no match for character " +
                         std::to_string(psi.label()) + " mod " +
                         std::to_string(d));
}

//! G(psi) = sum_{n=1}^{d} psi(n) e(n/d).
inline cplx gauss_sum_direct(const SmallCharacter &psi) {
  ComplexNeumaierSum acc{};
  const u64 d = psi.modulus();
  for (u64 n = 1; n <= d; ++n)
    acc.add(psi(n) * unit_root(n, d));
  return acc.value();
}

struct SmallGaussSum {
  cplx value;      // G(psi), summed directly
  cplx predicted;  // mu(d/d1) psi_1(d/d1) G(psi_1)
  double residual; // |value - predicted|
};

inline SmallGaussSum gauss_sum_small(const SmallCharacter &psi) {
  const cplx g = gauss_sum_direct(psi);
  const SmallCharacter psi1 = primitive_inducing(psi);
  const u64 r = psi.modulus() / psi.conductor();
  const cplx pred = static_cast<double>(arith::mobius(r)) * psi1(r) *
                    gauss_sum_direct(psi1);
  return {g, pred, std::abs(g - pred)};
}

} // namespace charsum::chars
