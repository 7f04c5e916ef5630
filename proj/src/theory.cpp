#include "dicomo/theory.hpp"

#include <cmath>
#include <string>

#include "dicomo/error.hpp"

namespace dicomo {

namespace {

// d^order/dx^order of x^k, order in {0,1}.
double monomial(std::uint32_t k, double x, int order) {
  if (order == 0) return std::pow(x, static_cast<double>(k));
  if (k == 0) return 0.0;
  return static_cast<double>(k) * std::pow(x, static_cast<double>(k - 1));
}

double marginal_pgf(const Pmf& pmf, double x, int order) {
  double sum = 0.0;
  const auto p = pmf.probabilities();
  for (std::uint32_t k = 0; k < p.size(); ++k)
    if (p[k] != 0.0) sum += p[k] * monomial(k, x, order);
  return sum;
}

// k P(k) / mean, shifted down by one: the size-biased "remaining" law.
Pmf shifted_size_bias(const Pmf& pmf) {
  const auto p = pmf.probabilities();
  if (p.size() < 2) return Pmf::point(0);
  std::vector<double> q(p.size() - 1, 0.0);
  for (std::size_t k = 1; k < p.size(); ++k) q[k - 1] = static_cast<double>(k) * p[k] / pmf.mean();
  return Pmf::from_probabilities(std::move(q));
}

double t_coeff(double nu_hat) { return nu_hat == 0.0 ? 0.0 : 1.0 / std::log(1.0 / nu_hat); }

} // namespace

double bivariate_pgf_eval(const JointDegreeDistribution& dist, double z, double w, int dz, int dw) {
  if (!(z >= 0.0 && z <= 1.0 && w >= 0.0 && w <= 1.0))
    throw Error(Errc::domain_error, "pgf arguments must lie in [0,1]^2");
  if ((dz != 0 && dz != 1) || (dw != 0 && dw != 1))
    throw Error(Errc::domain_error, "derivative orders must be 0 or 1");
  if (dist.is_product())
    return marginal_pgf(dist.in_marginal(), z, dz) * marginal_pgf(dist.out_marginal(), w, dw);
  double sum = 0.0;
  dist.for_each([&](std::uint32_t k, std::uint32_t l, double p) {
    sum += p * monomial(k, z, dz) * monomial(l, w, dw);
  });
  return sum;
}

double mixed_pgf(const JointDegreeDistribution& dist, double z, double w) {
  const double lambda = dist.mean_in();
  if (lambda == 0.0) throw Error(Errc::zero_mean_degree, "g(z,w) needs lambda > 0");
  return bivariate_pgf_eval(dist, z, w, 1, 1) / lambda;
}

SizeBiased size_biased(const JointDegreeDistribution& dist, Bias direction) {
  const double lambda = direction == Bias::in ? dist.mean_in() : dist.mean_out();
  if (lambda == 0.0) throw Error(Errc::zero_mean_degree, "size-biasing needs lambda > 0");
  if (dist.is_product()) {
    if (direction == Bias::in) {
      auto joint = JointDegreeDistribution::product(shifted_size_bias(dist.in_marginal()), dist.out_marginal());
      return {std::move(joint), dist.out_marginal()};
    }
    auto joint = JointDegreeDistribution::product(dist.in_marginal(), shifted_size_bias(dist.out_marginal()));
    return {std::move(joint), dist.in_marginal()};
  }
  std::vector<JointDegreeDistribution::Entry> entries;
  dist.for_each([&](std::uint32_t k, std::uint32_t l, double p) {
    if (direction == Bias::in && k > 0) entries.push_back({k - 1, l, static_cast<double>(k) * p / lambda});
    if (direction == Bias::out && l > 0) entries.push_back({k, l - 1, static_cast<double>(l) * p / lambda});
  });
  auto joint = JointDegreeDistribution::table(std::move(entries));
  Pmf marginal = direction == Bias::in ? joint.out_marginal() : joint.in_marginal();
  return {std::move(joint), std::move(marginal)};
}

SurvivalSolve solve_survival(const OffspringDistribution& xi) {
  if (xi.mean() <= 1.0) return {0.0, 1.0, 0};
  const auto p = xi.probabilities();
  auto h = [&](double w) {
    double acc = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * w + p[k];
    return acc;
  };
  double w = 0.0;
  std::uint64_t it = 0;
  while (it < 1'000'000) {
    const double next = h(w);
    ++it;
    const double delta = std::abs(next - w);
    w = next;
    if (delta < 1e-14) break;
  }
  return {1.0 - w, w, it};
}

double survival_probability(const OffspringDistribution& xi) { return solve_survival(xi).survival; }

OffspringDistribution conjugate(const OffspringDistribution& xi, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(Errc::domain_error, "survival probability must lie in [0,1]");
  if (s == 1.0) {
    const double p1 = xi[1];
    return Pmf::from_probabilities({1.0 - p1, p1});
  }
  const double rho = 1.0 - s;
  const auto p = xi.probabilities();
  std::vector<double> q(p.size(), 0.0);
  double total = 0.0;
  for (std::size_t l = 0; l < p.size(); ++l) {
    if (p[l] == 0.0) continue;
    q[l] = p[l] * std::pow(rho, static_cast<double>(l) - 1.0);
    total += q[l];
  }
  if (std::abs(total - 1.0) > 1e-8)
    throw Error(Errc::not_normalized, "conjugate mass is " + std::to_string(total) +
                                          "; s is not the survival probability of xi");
  for (double& x : q) x /= total;
  return Pmf::from_probabilities(std::move(q));
}

double poisson_conjugate_mean(double nu) {
  if (!(nu > 1.0)) throw Error(Errc::domain_error, "poisson_conjugate_mean needs nu > 1");
  const double target = nu * std::exp(-nu);
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(-mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

TheoryConstants theory_constants(const JointDegreeDistribution& dist) {
  TheoryConstants tc;
  tc.lambda = dist.mean_in();
  if (tc.lambda == 0.0) throw Error(Errc::zero_mean_degree, "lambda == 0");
  if (std::abs(dist.mean_in() - dist.mean_out()) > 1e-9 * std::max(1.0, tc.lambda))
    throw Error(Errc::invalid_distribution, "E[D-] != E[D+]");
  tc.nu = dist.mixed_moment() / tc.lambda;
  if (tc.nu == 0.0) throw Error(Errc::zero_nu, "nu == 0");
  if (std::abs(tc.nu - 1.0) < 1e-9) throw Error(Errc::critical_regime, "nu == 1 is excluded");
  tc.truncation_mass = dist.truncation_mass();

  const auto in_biased = size_biased(dist, Bias::in).marginal;   // D_in^+
  const auto out_biased = size_biased(dist, Bias::out).marginal; // D_out^-
  tc.regime = tc.nu > 1.0 ? Regime::supercritical : Regime::subcritical;

  const auto plus = solve_survival(in_biased);
  const auto minus = solve_survival(out_biased);
  tc.s_plus = plus.survival;
  tc.s_minus = minus.survival;
  tc.iterations_plus = plus.iterations;
  tc.iterations_minus = minus.iterations;

  tc.nu_hat_plus = mixed_pgf(dist, 1.0, 1.0 - tc.s_plus);
  tc.nu_hat_minus = mixed_pgf(dist, 1.0 - tc.s_minus, 1.0);
  tc.duality_gap_plus = std::abs(tc.nu_hat_plus - conjugate(in_biased, tc.s_plus).mean());
  tc.duality_gap_minus = std::abs(tc.nu_hat_minus - conjugate(out_biased, tc.s_minus).mean());
  if (tc.duality_gap_plus > 1e-8 || tc.duality_gap_minus > 1e-8)
    throw Error(Errc::domain_error, "nu_hat routes disagree (gaps " + std::to_string(tc.duality_gap_plus) +
                                        ", " + std::to_string(tc.duality_gap_minus) + ")");

  if (tc.regime == Regime::supercritical) {
    tc.t_plus_coeff = t_coeff(tc.nu_hat_plus);
    tc.t_minus_coeff = t_coeff(tc.nu_hat_minus);
    tc.typical_coeff = 1.0 / std::log(tc.nu);
    tc.diameter_coeff = tc.t_plus_coeff + tc.t_minus_coeff + tc.typical_coeff;
  } else {
    tc.diameter_coeff = 1.0 / std::log(1.0 / tc.nu);
  }
  return tc;
}

} // namespace dicomo
