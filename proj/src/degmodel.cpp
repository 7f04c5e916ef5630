#include "dicomo/degmodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "dicomo/error.hpp"

namespace dicomo {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw Error(Errc::overflow, "degree sum exceeds 64 bits");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(Errc::overflow, "degree product exceeds 64 bits");
  return r;
}

std::uint64_t ipow(std::uint64_t base, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

} // namespace

std::uint32_t BiDegreeSequence::max_degree() const noexcept {
  std::uint32_t d = 0;
  for (const auto& p : pairs_) d = std::max({d, p.in, p.out});
  return d;
}

BiDegreeSequence validate_sequence(std::vector<DegreePair> pairs) {
  if (pairs.size() > (std::size_t{1} << 31))
    throw Error(Errc::unsupported, "sequences with more than 2^31 vertices are not supported");
  std::uint64_t sum_in = 0, sum_out = 0;
  for (const auto& p : pairs) {
    sum_in = checked_add(sum_in, p.in);
    sum_out = checked_add(sum_out, p.out);
  }
  if (sum_in != sum_out)
    throw Error(Errc::sum_mismatch, "sum of in-degrees " + std::to_string(sum_in) +
                                        " != sum of out-degrees " + std::to_string(sum_out));
  if (sum_in > 0xffffffffULL) throw Error(Errc::unsupported, "more than 2^32 half-edges");
  BiDegreeSequence seq;
  seq.pairs_ = std::move(pairs);
  seq.m_ = sum_in;
  return seq;
}

// ---------------------------------------------------------------------------

JointDegreeDistribution JointDegreeDistribution::table(std::vector<Entry> entries) {
  if (entries.empty()) throw Error(Errc::invalid_distribution, "empty table");
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.in, a.out) < std::tie(b.in, b.out);
  });
  // Merge duplicates, drop zero mass.
  std::vector<Entry> merged;
  for (const auto& e : entries) {
    if (!(e.p >= 0.0) || !std::isfinite(e.p))
      throw Error(Errc::invalid_distribution, "negative or non-finite probability in table");
    if (!merged.empty() && merged.back().in == e.in && merged.back().out == e.out)
      merged.back().p += e.p;
    else
      merged.push_back(e);
  }
  std::erase_if(merged, [](const Entry& e) { return e.p == 0.0; });
  double total = 0.0;
  for (const auto& e : merged) total += e.p;
  if (merged.empty() || std::abs(total - 1.0) > 1e-9)
    throw Error(Errc::not_normalized, "table probabilities sum to " + std::to_string(total));
  for (auto& e : merged) e.p /= total;

  JointDegreeDistribution d;
  d.product_ = false;
  d.table_ = std::move(merged);
  d.finish();
  return d;
}

JointDegreeDistribution JointDegreeDistribution::product(Pmf in, Pmf out) {
  JointDegreeDistribution d;
  d.product_ = true;
  d.in_ = std::move(in);
  d.out_ = std::move(out);
  d.truncation_mass_ = 1.0 - (1.0 - d.in_.truncation_mass()) * (1.0 - d.out_.truncation_mass());
  d.finish();
  return d;
}

JointDegreeDistribution JointDegreeDistribution::point(std::uint32_t in, std::uint32_t out) {
  return table({{in, out, 1.0}});
}

JointDegreeDistribution JointDegreeDistribution::poisson_product(double mean_in, double mean_out,
                                                                 double tail_mass) {
  // Half the budget per coordinate keeps the joint discarded mass <= tail_mass.
  return product(Pmf::poisson(mean_in, tail_mass / 2), Pmf::poisson(mean_out, tail_mass / 2));
}

JointDegreeDistribution JointDegreeDistribution::powerlaw_product(double exponent_in, double exponent_out,
                                                                  std::uint32_t min_degree, double tail_mass) {
  return product(Pmf::powerlaw(exponent_in, min_degree, tail_mass / 2),
                 Pmf::powerlaw(exponent_out, min_degree, tail_mass / 2));
}

JointDegreeDistribution JointDegreeDistribution::empirical(const BiDegreeSequence& seq) {
  if (seq.n() == 0) throw Error(Errc::empty_sequence, "empirical law of an empty sequence");
  std::map<DegreePair, std::uint64_t> counts;
  for (const auto& p : seq.pairs()) ++counts[p];
  std::vector<Entry> entries;
  const auto n = static_cast<double>(seq.n());
  for (const auto& [pair, c] : counts) entries.push_back({pair.in, pair.out, static_cast<double>(c) / n});
  return table(std::move(entries));
}

std::vector<JointDegreeDistribution::Entry> JointDegreeDistribution::support() const {
  if (!product_) return table_;
  std::vector<Entry> out;
  for_each([&](std::uint32_t k, std::uint32_t l, double p) { out.push_back({k, l, p}); });
  return out;
}

void JointDegreeDistribution::finish() {
  if (product_) {
    mixed_ = in_.mean() * out_.mean();
    in_sampler_ = InversionSampler(in_.probabilities());
    out_sampler_ = InversionSampler(out_.probabilities());
    return;
  }
  std::uint32_t max_in = 0, max_out = 0;
  for (const auto& e : table_) {
    max_in = std::max(max_in, e.in);
    max_out = std::max(max_out, e.out);
  }
  std::vector<double> pin(max_in + 1, 0.0), pout(max_out + 1, 0.0), mass;
  mixed_ = 0.0;
  for (const auto& e : table_) {
    pin[e.in] += e.p;
    pout[e.out] += e.p;
    mixed_ += static_cast<double>(e.in) * static_cast<double>(e.out) * e.p;
    mass.push_back(e.p);
  }
  in_ = Pmf::from_probabilities(std::move(pin));
  out_ = Pmf::from_probabilities(std::move(pout));
  table_sampler_ = InversionSampler(mass);
}

// ---------------------------------------------------------------------------

SequenceStats stats(const BiDegreeSequence& seq) {
  if (seq.m() == 0) throw Error(Errc::empty_sequence, "stats need at least one half-edge pair");
  SequenceStats s;
  s.n = seq.n();
  s.m = seq.m();
  for (const auto& p : seq.pairs()) {
    s.sum_in_out = checked_add(s.sum_in_out, checked_mul(p.in, p.out));
    s.sum_in_sq = checked_add(s.sum_in_sq, checked_mul(p.in, p.in));
    s.sum_out_sq = checked_add(s.sum_out_sq, checked_mul(p.out, p.out));
    s.delta_n = std::max({s.delta_n, p.in, p.out});
    ++s.counts[p];
  }
  const auto n = static_cast<double>(s.n);
  s.lambda_n = static_cast<double>(s.m) / n;
  s.nu_n = static_cast<double>(s.sum_in_out) / static_cast<double>(s.m);
  s.second_in = static_cast<double>(s.sum_in_sq) / n;
  s.second_out = static_cast<double>(s.sum_out_sq) / n;
  s.mixed = static_cast<double>(s.sum_in_out) / n;
  return s;
}

std::uint64_t subset_degree_sums(const BiDegreeSequence& seq, std::span<const std::uint32_t> subset,
                                 unsigned i, unsigned j) {
  if (i > 2 || j > 2) throw Error(Errc::domain_error, "exponents must be in {0,1,2}");
  std::uint64_t sum = 0;
  for (auto v : subset) {
    if (v >= seq.n()) throw Error(Errc::index_out_of_range, "vertex " + std::to_string(v));
    sum = checked_add(sum, checked_mul(ipow(seq[v].in, i), ipow(seq[v].out, j)));
  }
  return sum;
}

SampledSequence sample_sequence(const JointDegreeDistribution& dist, std::size_t n, Rng& rng) {
  if (n == 0) throw Error(Errc::domain_error, "sample_sequence needs n >= 1");
  std::vector<DegreePair> pairs(n);
  std::int64_t diff = 0; // sum in - sum out
  for (auto& p : pairs) {
    p = dist.sample(rng);
    diff += static_cast<std::int64_t>(p.in) - static_cast<std::int64_t>(p.out);
  }
  const std::uint64_t budget = 100 * static_cast<std::uint64_t>(n);
  std::uint64_t repairs = 0;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (diff != 0) {
    if (repairs == budget)
      throw Error(Errc::repair_budget_exceeded,
                  "in/out totals still differ by " + std::to_string(diff) + " after " +
                      std::to_string(budget) + " redraws");
    auto& p = pairs[pick(rng)];
    diff -= static_cast<std::int64_t>(p.in) - static_cast<std::int64_t>(p.out);
    p = dist.sample(rng);
    diff += static_cast<std::int64_t>(p.in) - static_cast<std::int64_t>(p.out);
    ++repairs;
  }
  return {validate_sequence(std::move(pairs)), repairs};
}

} // namespace dicomo
