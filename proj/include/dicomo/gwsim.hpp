#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dicomo/pmf.hpp"
#include "dicomo/rng.hpp"
#include "dicomo/theory.hpp"

namespace dicomo {

enum class GwStatus { extinct, alive_at_horizon, size_censored };

struct GWTrajectory {
  std::vector<std::uint64_t> sizes; ///< X_0 = 1, X_1, ...
  std::uint64_t total = 0;          ///< Y = sum of sizes
  GwStatus status = GwStatus::alive_at_horizon;
};

inline constexpr std::uint64_t default_population_cap = 1'000'000;

/// Forward simulation of (X_t) up to generation max_t. Offspring are drawn one
/// individual at a time by cdf inversion. A generation whose size would exceed
/// `cap` ends the run as size_censored and is not recorded.
template <class URBG>
GWTrajectory simulate(const InversionSampler& offspring, unsigned max_t, std::uint64_t cap, URBG& g) {
  GWTrajectory tr;
  tr.sizes.push_back(1);
  tr.total = 1;
  std::uint64_t current = 1;
  for (unsigned t = 1; t <= max_t; ++t) {
    std::uint64_t next = 0;
    for (std::uint64_t i = 0; i < current; ++i) {
      next += offspring(g);
      if (next > cap) {
        tr.status = GwStatus::size_censored;
        return tr;
      }
    }
    tr.sizes.push_back(next);
    tr.total += next;
    if (next == 0) {
      tr.status = GwStatus::extinct;
      return tr;
    }
    current = next;
  }
  tr.status = GwStatus::alive_at_horizon;
  return tr;
}

GWTrajectory simulate(const OffspringDistribution& xi, unsigned max_t, std::uint64_t cap, Rng& rng);

/// Monte Carlo controls. Run r draws from RunStream(derive_seed(seed, {r})),
/// so estimates are identical for any thread count.
struct McOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct Estimate {
  double estimate = 0.0;
  double stderr_ = 0.0; ///< binomial sqrt(p(1-p)/runs)
  std::uint64_t runs = 0;
  std::uint64_t hits = 0;
};

/// Generation-size threshold above which a supercritical run is counted as
/// surviving: the smallest c >= 16 with rho^c <= 1e-12 (rho = extinction
/// probability), or default_population_cap when rho == 1.
std::uint64_t survival_censor_cap(const OffspringDistribution& xi);

/// Fraction of runs with X_horizon > 0.
Estimate estimate_survival(const OffspringDistribution& xi, unsigned horizon, std::uint64_t runs,
                           const McOptions& opt);

/// P(0 < X_r < omega for r = 1..t); a run stops at the first violation.
Estimate thin_event_probability(const OffspringDistribution& xi, std::uint64_t omega, unsigned t,
                                std::uint64_t runs, const McOptions& opt);

/// Indicator of the thin event for a single run with its own stream. Exposed so
/// the monotone coupling in omega can be checked run by run.
bool thin_event_indicator(const InversionSampler& offspring, std::uint64_t omega, unsigned t, RunStream stream);

struct ExtinctRootLaw {
  OffspringDistribution pmf;
  std::uint64_t extinct_runs = 0;
  std::uint64_t runs = 0;
};

/// Empirical law of X_1 among runs extinct by `horizon`. Runs whose generation
/// size passes survival_censor_cap are treated as surviving.
/// Throws Errc::no_extinct_runs when no run died.
ExtinctRootLaw extinct_root_offspring_law(const OffspringDistribution& xi, unsigned horizon,
                                          std::uint64_t runs, const McOptions& opt);

struct SubcriticalDecay {
  double root_estimate = 0.0; ///< fraction^(1/t)
  Estimate fraction;
  std::optional<std::uint64_t> total_bound;
};

/// (P(X_t > 0))^(1/t), or with `total_bound` the joint event
/// [Y_t <= total_bound] and [X_t > 0]. Requires mean(xi) < 1.
/// Throws Errc::no_survivors when no run qualifies.
SubcriticalDecay subcritical_decay(const OffspringDistribution& xi, unsigned t, std::uint64_t runs,
                                   const McOptions& opt, std::optional<std::uint64_t> total_bound = {});

/// ceil(log_nu omega): the burn-in after which the rare-event bound applies.
unsigned burn_in_time(const OffspringDistribution& xi, std::uint64_t omega);

/// Least-squares slope of log(estimate) against t. Points with zero hits are skipped.
double log_slope(const std::vector<unsigned>& ts, const std::vector<Estimate>& estimates);

} // namespace dicomo
