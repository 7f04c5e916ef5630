#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dicomo/rng.hpp"

namespace dicomo {

/// Finite probability mass function on {0, 1, ..., size()-1}.
///
/// Infinite-support families are cut where the upper tail mass drops below
/// `tail_mass`, renormalized once, and the discarded mass is kept in
/// truncation_mass().
class Pmf {
public:
  Pmf() = default;

  /// Takes probabilities as given; they must already sum to 1 within 1e-9.
  /// The vector is renormalized once so that |sum - 1| <= 1e-12 afterwards.
  static Pmf from_probabilities(std::vector<double> probabilities, double truncation_mass = 0.0);
  static Pmf from_table(std::span<const std::pair<std::uint32_t, double>> table);
  static Pmf point(std::uint32_t value);
  static Pmf poisson(double mean, double tail_mass = 1e-12);
  /// P(k) proportional to k^-exponent for k >= min_value. Requires exponent > 3
  /// so the second moment is finite.
  static Pmf powerlaw(double exponent, std::uint32_t min_value = 1, double tail_mass = 1e-12);

  [[nodiscard]] std::size_t size() const noexcept { return p_.size(); }
  [[nodiscard]] double operator[](std::size_t k) const noexcept { return k < p_.size() ? p_[k] : 0.0; }
  [[nodiscard]] std::span<const double> probabilities() const noexcept { return p_; }
  [[nodiscard]] double mean() const noexcept { return mean_; }
  [[nodiscard]] double truncation_mass() const noexcept { return truncation_mass_; }
  [[nodiscard]] double total() const noexcept;

  /// h(z) and its first two derivatives, by direct summation.
  [[nodiscard]] double pgf(double z, int derivative = 0) const;

private:
  std::vector<double> p_;
  double mean_ = 0.0;
  double truncation_mass_ = 0.0;
};

/// Total-variation distance between two pmfs on the union of their supports.
double total_variation(const Pmf& a, const Pmf& b);

/// Inversion sampler over a finite cdf table. Linear scan from 0 when the mean
/// is small (expected cost mean+1 comparisons), binary search otherwise.
class InversionSampler {
public:
  InversionSampler() = default;
  explicit InversionSampler(std::span<const double> probabilities);

  template <class URBG>
  std::uint32_t operator()(URBG& g) const {
    const double u = uniform01(g);
    if (linear_) {
      std::uint32_t k = 0;
      while (k + 1 < cdf_.size() && u >= cdf_[k]) ++k;
      return k;
    }
    auto it = std::upper_bound(cdf_.begin(), cdf_.end() - 1, u);
    return static_cast<std::uint32_t>(it - cdf_.begin());
  }

  [[nodiscard]] std::size_t size() const noexcept { return cdf_.size(); }

private:
  std::vector<double> cdf_;
  bool linear_ = true;
};

} // namespace dicomo
