#include "dicomo/pmf.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/special_functions/zeta.hpp>

#include "dicomo/error.hpp"

namespace dicomo {

namespace {

double kahan_sum(std::span<const double> xs) {
  double sum = 0.0, c = 0.0;
  for (double x : xs) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

} // namespace

Pmf Pmf::from_probabilities(std::vector<double> probabilities, double truncation_mass) {
  if (probabilities.empty()) throw Error(Errc::invalid_distribution, "empty pmf");
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw Error(Errc::invalid_distribution, "negative or non-finite probability");
  }
  while (probabilities.size() > 1 && probabilities.back() == 0.0) probabilities.pop_back();
  const double sum = kahan_sum(probabilities);
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(Errc::not_normalized, "probabilities sum to " + std::to_string(sum));
  Pmf out;
  out.p_ = std::move(probabilities);
  for (double& p : out.p_) p /= sum;
  double mean = 0.0;
  for (std::size_t k = 0; k < out.p_.size(); ++k) mean += static_cast<double>(k) * out.p_[k];
  out.mean_ = mean;
  out.truncation_mass_ = truncation_mass;
  return out;
}

Pmf Pmf::from_table(std::span<const std::pair<std::uint32_t, double>> table) {
  std::uint32_t max_k = 0;
  for (const auto& [k, p] : table) max_k = std::max(max_k, k);
  std::vector<double> probs(static_cast<std::size_t>(max_k) + 1, 0.0);
  for (const auto& [k, p] : table) probs[k] += p;
  return from_probabilities(std::move(probs));
}

Pmf Pmf::point(std::uint32_t value) {
  std::vector<double> probs(static_cast<std::size_t>(value) + 1, 0.0);
  probs[value] = 1.0;
  return from_probabilities(std::move(probs));
}

Pmf Pmf::poisson(double mean, double tail_mass) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw Error(Errc::domain_error, "poisson mean must be >= 0");
  if (mean == 0.0) return point(0);
  if (!(tail_mass > 0.0)) throw Error(Errc::domain_error, "tail mass must be positive");
  std::vector<double> probs;
  double p = std::exp(-mean);
  double cdf = 0.0;
  for (std::uint32_t k = 0;; ++k) {
    if (k > 0) p *= mean / k;
    probs.push_back(p);
    cdf += p;
    // Past the mode the pmf is decreasing, so 1-cdf is an honest tail estimate.
    if (static_cast<double>(k) > mean && 1.0 - cdf <= tail_mass) break;
    if (k > 100000) throw Error(Errc::unsupported, "poisson mean too large to tabulate");
  }
  const double truncated = std::max(0.0, 1.0 - kahan_sum(probs));
  return from_probabilities(std::move(probs), truncated);
}

Pmf Pmf::powerlaw(double exponent, std::uint32_t min_value, double tail_mass) {
  if (!(exponent > 3.0))
    throw Error(Errc::unsupported, "power-law exponent must exceed 3 (finite second moment)");
  if (min_value == 0) throw Error(Errc::domain_error, "power-law minimum value must be >= 1");
  double head = 0.0;
  for (std::uint32_t k = 1; k < min_value; ++k) head += std::pow(static_cast<double>(k), -exponent);
  const double norm = boost::math::zeta(exponent) - head;
  // Tail beyond K approximated by the midpoint integral, only to pick K.
  const double k_cut = std::pow(tail_mass * norm * (exponent - 1.0), -1.0 / (exponent - 1.0)) + 1.0;
  if (k_cut > 5e7) throw Error(Errc::unsupported, "power-law support too large at this tail mass");
  const auto kmax = std::max<std::uint32_t>(min_value, static_cast<std::uint32_t>(std::ceil(k_cut)));
  std::vector<double> probs(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (std::uint32_t k = min_value; k <= kmax; ++k) probs[k] = std::pow(static_cast<double>(k), -exponent) / norm;
  const double truncated = std::max(0.0, 1.0 - kahan_sum(probs));
  return from_probabilities(std::move(probs), truncated);
}

double Pmf::total() const noexcept { return kahan_sum(p_); }

double Pmf::pgf(double z, int derivative) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < p_.size(); ++k) {
    if (p_[k] == 0.0) continue;
    const auto kd = static_cast<double>(k);
    switch (derivative) {
      case 0: sum += p_[k] * std::pow(z, kd); break;
      case 1: if (k >= 1) sum += p_[k] * kd * std::pow(z, kd - 1.0); break;
      case 2: if (k >= 2) sum += p_[k] * kd * (kd - 1.0) * std::pow(z, kd - 2.0); break;
      default: throw Error(Errc::domain_error, "pgf derivative order must be 0, 1 or 2");
    }
  }
  return sum;
}

double total_variation(const Pmf& a, const Pmf& b) {
  const std::size_t n = std::max(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += std::abs(a[k] - b[k]);
  return 0.5 * sum;
}

InversionSampler::InversionSampler(std::span<const double> probabilities) {
  std::size_t len = probabilities.size();
  while (len > 1 && probabilities[len - 1] == 0.0) --len;
  cdf_.resize(len);
  double acc = 0.0, mean = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    acc += probabilities[k];
    mean += static_cast<double>(k) * probabilities[k];
    cdf_[k] = acc;
  }
  cdf_.back() = 1.0;
  linear_ = mean < 16.0 && len < 4096;
}

} // namespace dicomo
