#pragma once
// Compensated accumulators. The results of the scan engine depend on the
// exact order of additions, so every accumulation path that must agree
// bitwise goes through these types.

#include <cmath>
#include <complex>
#include <span>

namespace charsum {

using cplx = std::complex<double>;

//! Kahan summation. value() is the running sum; the correction term holds the
//! low-order bits lost by the last addition.
struct KahanSum {
  double sum = 0.0;
  double correction = 0.0;

  void add(double x) {
    const double y = x - correction;
    const double t = sum + y;
    correction = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

//! Neumaier's variant; robust when addends exceed the running sum.
struct NeumaierSum {
  double sum = 0.0;
  double correction = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      correction += (sum - t) + x;
    else
      correction += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + correction; }
};

template <class Scalar> struct ComplexSum {
  Scalar re, im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

using ComplexKahanSum = ComplexSum<KahanSum>;
using ComplexNeumaierSum = ComplexSum<NeumaierSum>;

inline double compensated_sum(std::span<const double> xs) {
  NeumaierSum s;
  for (double x : xs)
    s.add(x);
  return s.value();
}

} // namespace charsum
