#include "dicomo/gwsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dicomo/error.hpp"
#include "dicomo/parallel.hpp"

namespace dicomo {

namespace {

constexpr std::uint64_t runs_per_block = 1 << 14;

RunStream run_stream(std::uint64_t seed, std::uint64_t run) { return RunStream(derive_seed(seed, {run})); }

/// Counts runs r in [0, runs) with pred(stream_r) true.
template <class Pred>
std::uint64_t count_hits(std::uint64_t runs, const McOptions& opt, Pred pred) {
  const std::uint64_t blocks = (runs + runs_per_block - 1) / runs_per_block;
  std::vector<std::uint64_t> hits(blocks, 0);
  parallel_for(blocks, opt.threads, [&](std::size_t b) {
    const std::uint64_t lo = b * runs_per_block;
    const std::uint64_t hi = std::min(runs, lo + runs_per_block);
    std::uint64_t h = 0;
    for (std::uint64_t r = lo; r < hi; ++r) h += pred(run_stream(opt.seed, r)) ? 1 : 0;
    hits[b] = h;
  });
  return std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
}

Estimate binomial(std::uint64_t hits, std::uint64_t runs) {
  Estimate e;
  e.runs = runs;
  e.hits = hits;
  e.estimate = runs ? static_cast<double>(hits) / static_cast<double>(runs) : 0.0;
  e.stderr_ = runs ? std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(runs)) : 0.0;
  return e;
}

} // namespace

GWTrajectory simulate(const OffspringDistribution& xi, unsigned max_t, std::uint64_t cap, Rng& rng) {
  if (max_t < 1 || cap < 1) throw Error(Errc::domain_error, "simulate needs max_t >= 1 and cap >= 1");
  const InversionSampler sampler(xi.probabilities());
  return simulate(sampler, max_t, cap, rng);
}

std::uint64_t survival_censor_cap(const OffspringDistribution& xi) {
  const double rho = solve_survival(xi).extinction;
  if (rho >= 1.0) return default_population_cap;
  if (rho <= 0.0) return 16;
  const double c = std::ceil(std::log(1e-12) / std::log(rho));
  return std::clamp<std::uint64_t>(static_cast<std::uint64_t>(c), 16, default_population_cap);
}

Estimate estimate_survival(const OffspringDistribution& xi, unsigned horizon, std::uint64_t runs,
                           const McOptions& opt) {
  if (runs < 1 || horizon < 1) throw Error(Errc::domain_error, "estimate_survival needs runs >= 1, horizon >= 1");
  const InversionSampler sampler(xi.probabilities());
  const std::uint64_t cap = survival_censor_cap(xi);
  const auto hits = count_hits(runs, opt, [&](RunStream g) {
    return simulate(sampler, horizon, cap, g).status != GwStatus::extinct;
  });
  return binomial(hits, runs);
}

bool thin_event_indicator(const InversionSampler& offspring, std::uint64_t omega, unsigned t, RunStream g) {
  std::uint64_t current = 1;
  for (unsigned r = 1; r <= t; ++r) {
    std::uint64_t next = 0;
    for (std::uint64_t i = 0; i < current; ++i) {
      next += offspring(g);
      if (next >= omega) return false;
    }
    if (next == 0) return false;
    current = next;
  }
  return true;
}

Estimate thin_event_probability(const OffspringDistribution& xi, std::uint64_t omega, unsigned t,
                                std::uint64_t runs, const McOptions& opt) {
  if (omega < 2 || t < 1 || runs < 1)
    throw Error(Errc::domain_error, "thin_event_probability needs omega >= 2, t >= 1, runs >= 1");
  const InversionSampler sampler(xi.probabilities());
  const auto hits = count_hits(runs, opt, [&](RunStream g) { return thin_event_indicator(sampler, omega, t, g); });
  return binomial(hits, runs);
}

ExtinctRootLaw extinct_root_offspring_law(const OffspringDistribution& xi, unsigned horizon,
                                          std::uint64_t runs, const McOptions& opt) {
  if (runs < 1 || horizon < 1) throw Error(Errc::domain_error, "needs runs >= 1, horizon >= 1");
  const InversionSampler sampler(xi.probabilities());
  const std::uint64_t cap = survival_censor_cap(xi);
  const std::uint64_t blocks = (runs + runs_per_block - 1) / runs_per_block;
  std::vector<std::vector<std::uint64_t>> counts(blocks);
  parallel_for(blocks, opt.threads, [&](std::size_t b) {
    auto& c = counts[b];
    c.assign(xi.size(), 0);
    const std::uint64_t lo = b * runs_per_block;
    const std::uint64_t hi = std::min(runs, lo + runs_per_block);
    for (std::uint64_t r = lo; r < hi; ++r) {
      auto g = run_stream(opt.seed, r);
      const auto tr = simulate(sampler, horizon, cap, g);
      if (tr.status == GwStatus::extinct) ++c[tr.sizes[1]];
    }
  });
  std::vector<std::uint64_t> total(xi.size(), 0);
  for (const auto& c : counts)
    for (std::size_t k = 0; k < c.size(); ++k) total[k] += c[k];
  const std::uint64_t extinct = std::accumulate(total.begin(), total.end(), std::uint64_t{0});
  if (extinct == 0) throw Error(Errc::no_extinct_runs, "every run survived to the horizon");
  std::vector<double> probs(total.size());
  for (std::size_t k = 0; k < total.size(); ++k)
    probs[k] = static_cast<double>(total[k]) / static_cast<double>(extinct);
  return {Pmf::from_probabilities(std::move(probs)), extinct, runs};
}

SubcriticalDecay subcritical_decay(const OffspringDistribution& xi, unsigned t, std::uint64_t runs,
                                   const McOptions& opt, std::optional<std::uint64_t> total_bound) {
  if (!(xi.mean() < 1.0)) throw Error(Errc::domain_error, "subcritical_decay needs mean(xi) < 1");
  if (t < 1 || runs < 1) throw Error(Errc::domain_error, "subcritical_decay needs t >= 1, runs >= 1");
  const InversionSampler sampler(xi.probabilities());
  const std::uint64_t bound = total_bound.value_or(std::numeric_limits<std::uint64_t>::max());
  const auto hits = count_hits(runs, opt, [&](RunStream g) {
    std::uint64_t current = 1, total = 1;
    for (unsigned r = 1; r <= t; ++r) {
      std::uint64_t next = 0;
      for (std::uint64_t i = 0; i < current; ++i) {
        next += sampler(g);
        if (total + next > bound) return false;
      }
      if (next == 0) return false;
      total += next;
      current = next;
    }
    return true;
  });
  if (hits == 0) throw Error(Errc::no_survivors, "no run satisfied the event at depth " + std::to_string(t));
  SubcriticalDecay out;
  out.fraction = binomial(hits, runs);
  out.root_estimate = std::pow(out.fraction.estimate, 1.0 / t);
  out.total_bound = total_bound;
  return out;
}

unsigned burn_in_time(const OffspringDistribution& xi, std::uint64_t omega) {
  if (!(xi.mean() > 1.0)) throw Error(Errc::domain_error, "burn-in is defined for supercritical xi");
  if (omega <= 1) return 0;
  return static_cast<unsigned>(std::ceil(std::log(static_cast<double>(omega)) / std::log(xi.mean()) - 1e-12));
}

double log_slope(const std::vector<unsigned>& ts, const std::vector<Estimate>& estimates) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < ts.size() && i < estimates.size(); ++i) {
    if (estimates[i].hits == 0) continue;
    xs.push_back(static_cast<double>(ts[i]));
    ys.push_back(std::log(estimates[i].estimate));
  }
  if (xs.size() < 2) throw Error(Errc::no_survivors, "need two nonzero estimates to fit a slope");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

} // namespace dicomo
