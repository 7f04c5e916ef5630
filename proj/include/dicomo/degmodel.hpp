#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dicomo/pmf.hpp"
#include "dicomo/rng.hpp"

namespace dicomo {

/// (in, out) degree pair, i.e. (d-, d+).
struct DegreePair {
  std::uint32_t in = 0;
  std::uint32_t out = 0;

  friend bool operator==(const DegreePair&, const DegreePair&) = default;
  friend auto operator<=>(const DegreePair&, const DegreePair&) = default;
};

/// A bi-degree sequence with equal in and out totals. Immutable once built.
class BiDegreeSequence {
public:
  BiDegreeSequence() = default;

  [[nodiscard]] std::size_t n() const noexcept { return pairs_.size(); }
  /// Number of heads (= number of tails).
  [[nodiscard]] std::uint64_t m() const noexcept { return m_; }
  [[nodiscard]] std::span<const DegreePair> pairs() const noexcept { return pairs_; }
  [[nodiscard]] const DegreePair& operator[](std::size_t v) const { return pairs_[v]; }
  [[nodiscard]] std::uint32_t max_degree() const noexcept;

private:
  friend BiDegreeSequence validate_sequence(std::vector<DegreePair> pairs);
  std::vector<DegreePair> pairs_;
  std::uint64_t m_ = 0;
};

/// Throws Errc::sum_mismatch when the in and out totals differ.
BiDegreeSequence validate_sequence(std::vector<DegreePair> pairs);

/// Joint law of (D-, D+). Either an explicit table or an independent product of
/// two marginals; the product form keeps heavy-tailed families tractable.
class JointDegreeDistribution {
public:
  struct Entry {
    std::uint32_t in = 0;
    std::uint32_t out = 0;
    double p = 0.0;
  };

  JointDegreeDistribution() = default;

  static JointDegreeDistribution table(std::vector<Entry> entries);
  static JointDegreeDistribution product(Pmf in, Pmf out);
  static JointDegreeDistribution point(std::uint32_t in, std::uint32_t out);
  static JointDegreeDistribution poisson_product(double mean_in, double mean_out, double tail_mass = 1e-12);
  static JointDegreeDistribution powerlaw_product(double exponent_in, double exponent_out,
                                                  std::uint32_t min_degree = 1, double tail_mass = 1e-12);
  /// Empirical law of a sequence: mass n_{k,l}/n on each present pair.
  static JointDegreeDistribution empirical(const BiDegreeSequence& seq);

  [[nodiscard]] bool is_product() const noexcept { return product_; }
  [[nodiscard]] const Pmf& in_marginal() const noexcept { return in_; }
  [[nodiscard]] const Pmf& out_marginal() const noexcept { return out_; }
  /// Table entries; for product laws this materializes the outer product
  /// (entries with zero mass omitted).
  [[nodiscard]] std::vector<Entry> support() const;
  [[nodiscard]] double truncation_mass() const noexcept { return truncation_mass_; }

  [[nodiscard]] double mean_in() const noexcept { return in_.mean(); }
  [[nodiscard]] double mean_out() const noexcept { return out_.mean(); }
  /// E[D- D+].
  [[nodiscard]] double mixed_moment() const noexcept { return mixed_; }

  /// Calls fn(in, out, p) for every entry with p > 0.
  template <class Fn>
  void for_each(Fn&& fn) const {
    if (product_) {
      const auto pin = in_.probabilities();
      const auto pout = out_.probabilities();
      for (std::uint32_t k = 0; k < pin.size(); ++k) {
        if (pin[k] == 0.0) continue;
        for (std::uint32_t l = 0; l < pout.size(); ++l)
          if (pout[l] != 0.0) fn(k, l, pin[k] * pout[l]);
      }
    } else {
      for (const auto& e : table_) fn(e.in, e.out, e.p);
    }
  }

  /// Draws one (in, out) pair.
  template <class URBG>
  DegreePair sample(URBG& g) const {
    if (product_) return {in_sampler_(g), out_sampler_(g)};
    const auto& e = table_[table_sampler_(g)];
    return {e.in, e.out};
  }

private:
  void finish();

  bool product_ = false;
  std::vector<Entry> table_;
  Pmf in_, out_;
  double mixed_ = 0.0;
  double truncation_mass_ = 0.0;
  InversionSampler in_sampler_, out_sampler_, table_sampler_;
};

/// Summary statistics of a sequence. Sums are exact 64-bit integers;
/// the real-valued fields are derived from them by a single division.
struct SequenceStats {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t sum_in_out = 0; ///< sum d- d+
  std::uint64_t sum_in_sq = 0;  ///< sum (d-)^2
  std::uint64_t sum_out_sq = 0; ///< sum (d+)^2
  double lambda_n = 0.0;        ///< m / n
  double nu_n = 0.0;            ///< sum d- d+ / m
  double second_in = 0.0;       ///< E[(D-_n)^2]
  double second_out = 0.0;      ///< E[(D+_n)^2]
  double mixed = 0.0;           ///< E[D-_n D+_n]
  std::uint32_t delta_n = 0;
  std::map<DegreePair, std::uint64_t> counts;
};

/// Throws Errc::empty_sequence when m == 0 and Errc::overflow when a sum
/// does not fit in 64 bits.
SequenceStats stats(const BiDegreeSequence& seq);

/// d_S(i, j) = sum over v in S of (d-_v)^i (d+_v)^j, for i, j in {0, 1, 2}.
std::uint64_t subset_degree_sums(const BiDegreeSequence& seq, std::span<const std::uint32_t> subset,
                                 unsigned i, unsigned j);

struct SampledSequence {
  BiDegreeSequence sequence;
  std::uint64_t repairs = 0;
};

/// n i.i.d. draws from `dist`. Unequal totals are repaired by redrawing a
/// uniformly chosen index until they match, at most 100 n times
/// (Errc::repair_budget_exceeded otherwise).
SampledSequence sample_sequence(const JointDegreeDistribution& dist, std::size_t n, Rng& rng);

} // namespace dicomo
