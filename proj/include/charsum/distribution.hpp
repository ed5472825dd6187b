#pragma once
// Empirical survival functions and sample summaries.

#include "charsum/summation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace charsum::stats {

//! survival(tau) = #{v > tau} / denominator.
class EmpiricalDistribution {
public:
  EmpiricalDistribution() = default;
  EmpiricalDistribution(std::vector<double> values, double denominator)
      : values_(std::move(values)), denominator_(denominator) {
    if (!(denominator > 0.0))
      throw std::invalid_argument("EmpiricalDistribution: denominator must be positive");
    std::sort(values_.begin(), values_.end());
  }

  const std::vector<double> &values() const { return values_; }
  double denominator() const { return denominator_; }
  std::size_t size() const { return values_.size(); }

  std::size_t count_above(double tau) const {
    return static_cast<std::size_t>(
        values_.end() - std::upper_bound(values_.begin(), values_.end(), tau));
  }

  double survival(double tau) const {
    return static_cast<double>(count_above(tau)) / denominator_;
  }

private:
  std::vector<double> values_;
  double denominator_ = 1.0;
};

inline EmpiricalDistribution build_distribution(std::vector<double> values,
                                                double denominator) {
  return EmpiricalDistribution(std::move(values), denominator);
}

//! Nearest-rank quantile of an ascending sample: the ceil(p n)-th smallest.
inline double nearest_rank(const std::vector<double> &sorted, double p) {
  if (sorted.empty())
    throw std::invalid_argument("nearest_rank: empty sample");
  const double n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

struct Summary {
  double min = 0.0;
  double mean = 0.0;
  double quantile = 0.0; // nearest-rank 0.9999 quantile
  double max = 0.0;
  std::size_t count = 0;
};

inline Summary summarize(std::vector<double> values, double p = 0.9999) {
  if (values.empty())
    throw std::invalid_argument("summarize: empty sample");
  std::sort(values.begin(), values.end());
  Summary s;
  s.count = values.size();
  s.min = values.front();
  s.max = values.back();
  s.mean = compensated_sum(values) / static_cast<double>(values.size());
  s.quantile = nearest_rank(values, p);
  return s;
}

inline double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return nearest_rank(values, 0.5);
}

//! Uniform grid lo, lo+step, ... up to hi (inclusive within step/2).
inline std::vector<double> tau_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo))
    throw std::invalid_argument("tau_grid: require step > 0 and hi >= lo");
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5));
  for (std::size_t i = 0; i <= n; ++i)
    out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

//! sup over the grid of |A(tau) - B(tau)|.
inline double ks_distance(const EmpiricalDistribution &a,
                          const EmpiricalDistribution &b,
                          const std::vector<double> &taus) {
  double d = 0.0;
  for (double t : taus)
    d = std::max(d, std::abs(a.survival(t) - b.survival(t)));
  return d;
}

} // namespace charsum::stats
