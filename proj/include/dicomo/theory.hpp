#pragma once

#include <cstdint>

#include "dicomo/degmodel.hpp"
#include "dicomo/pmf.hpp"

namespace dicomo {

/// Offspring law of a Galton-Watson process (xi, D_in^+, D_out^-, conjugates).
using OffspringDistribution = Pmf;

/// Which coordinate is size-biased: `in` follows a uniform head, `out` a uniform tail.
enum class Bias { in, out };

/// Partial derivative d^{dz+dw} f / dz^dz dw^dw of the bivariate pgf
/// f(z,w) = sum_{k,l} z^k w^l P(D = (k,l)), with dz, dw in {0,1} and (z,w) in [0,1]^2.
double bivariate_pgf_eval(const JointDegreeDistribution& dist, double z, double w, int dz, int dw);

/// g(z,w) = (1/lambda) d^2 f / dz dw.
double mixed_pgf(const JointDegreeDistribution& dist, double z, double w);

struct SizeBiased {
  JointDegreeDistribution joint;
  /// D_in^+ for Bias::in, D_out^- for Bias::out; its mean is nu.
  OffspringDistribution marginal;
};

SizeBiased size_biased(const JointDegreeDistribution& dist, Bias direction);

struct SurvivalSolve {
  double survival = 0.0;
  double extinction = 1.0;
  std::uint64_t iterations = 0;
};

/// Smallest root of h(w) = w by fixed-point iteration from 0. When the mean is
/// at most 1 the survival probability is 0 and no iteration is done.
SurvivalSolve solve_survival(const OffspringDistribution& xi);
double survival_probability(const OffspringDistribution& xi);

/// P(xi_hat = l) = (1-s)^(l-1) P(xi = l) for s < 1; for s = 1 the limit
/// {0: 1 - P(xi=1), 1: P(xi=1)}. Throws Errc::not_normalized when the result
/// misses 1 by more than 1e-8, which means `s` does not belong to `xi`.
OffspringDistribution conjugate(const OffspringDistribution& xi, double s);

/// Root in (0,1) of x e^{-x} = nu e^{-nu}, by bisection to 1e-12.
double poisson_conjugate_mean(double nu);

enum class Regime { supercritical, subcritical };

struct TheoryConstants {
  double lambda = 0.0;
  double nu = 0.0;
  double s_plus = 0.0;
  double s_minus = 0.0;
  double nu_hat_plus = 0.0;
  double nu_hat_minus = 0.0;
  double t_plus_coeff = 0.0;   ///< 1/log(1/nu_hat_plus), 0 when nu_hat_plus == 0
  double t_minus_coeff = 0.0;
  double typical_coeff = 0.0;  ///< 1/log(nu), supercritical only
  double diameter_coeff = 0.0; ///< limit of diam / log n
  Regime regime = Regime::supercritical;

  // provenance
  double truncation_mass = 0.0;
  std::uint64_t iterations_plus = 0;
  std::uint64_t iterations_minus = 0;
  double duality_gap_plus = 0.0;  ///< |g(1,1-s+) - E[conjugate(D_in^+)]|
  double duality_gap_minus = 0.0;
};

/// Everything needed to predict the diameter and typical distance.
/// Throws Errc::invalid_distribution when E[D-] != E[D+], Errc::zero_nu,
/// Errc::critical_regime (|nu-1| < 1e-9), and
/// Errc::domain_error when the two routes to nu_hat disagree by more than 1e-8.
TheoryConstants theory_constants(const JointDegreeDistribution& dist);

} // namespace dicomo
