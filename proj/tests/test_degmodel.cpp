#include <doctest.h>

#include <cmath>
#include <random>

#include "dicomo/degmodel.hpp"
#include "dicomo/error.hpp"
#include "oracles.hpp"

using namespace dicomo;

namespace {

BiDegreeSequence figure1() { return validate_sequence({{1, 2}, {3, 2}, {1, 1}}); }

template <class Fn>
Errc code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return Errc::unsupported;
}

} // namespace

TEST_CASE("validate_sequence") {
  const auto seq = figure1();
  CHECK(seq.n() == 3);
  CHECK(seq.m() == 5);
  CHECK(seq.max_degree() == 3);

  const auto empty = validate_sequence({});
  CHECK(empty.n() == 0);
  CHECK(empty.m() == 0);

  CHECK(code_of([] { validate_sequence({{1, 0}, {0, 0}}); }) == Errc::sum_mismatch);
}

TEST_CASE("stats on the Figure 1 sequence") {
  const auto st = stats(figure1());
  CHECK(st.n == 3);
  CHECK(st.m == 5);
  CHECK(st.sum_in_out == 9);
  CHECK(st.nu_n == doctest::Approx(1.8).epsilon(1e-15));
  CHECK(st.lambda_n == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(st.delta_n == 3);
  CHECK(st.sum_in_sq == 11);
  CHECK(st.sum_out_sq == 9);
  CHECK(st.mixed == doctest::Approx(3.0));
  CHECK(st.counts.size() == 3);
  CHECK(st.counts.at(DegreePair{3, 2}) == 1);
}

TEST_CASE("stats edge cases") {
  for (std::uint32_t d : {1u, 2u, 5u}) {
    const auto st = stats(validate_sequence(std::vector<DegreePair>(17, {d, d})));
    CHECK(st.nu_n == doctest::Approx(d));
  }
  const auto alt = stats(validate_sequence({{1, 0}, {0, 1}, {1, 0}, {0, 1}}));
  CHECK(alt.nu_n == 0.0);
  CHECK(code_of([] { stats(validate_sequence({{0, 0}})); }) == Errc::empty_sequence);
  CHECK(code_of([] { stats(validate_sequence({})); }) == Errc::empty_sequence);
}

TEST_CASE("subset_degree_sums") {
  const auto seq = figure1();
  const std::vector<std::uint32_t> s2{1};
  CHECK(subset_degree_sums(seq, s2, 1, 1) == 6);
  CHECK(subset_degree_sums(seq, {}, 1, 1) == 0);
  const std::vector<std::uint32_t> all{0, 1, 2};
  CHECK(subset_degree_sums(seq, all, 1, 0) == seq.m());
  CHECK(subset_degree_sums(seq, all, 0, 1) == seq.m());
  CHECK(subset_degree_sums(seq, all, 0, 0) == 3);
  CHECK(subset_degree_sums(seq, all, 2, 0) == 11);
  const std::vector<std::uint32_t> bad{3};
  CHECK(code_of([&] { subset_degree_sums(seq, bad, 1, 1); }) == Errc::index_out_of_range);
}

TEST_CASE("sample_sequence: point mass and forced failures") {
  Rng rng(7);
  const auto s = sample_sequence(JointDegreeDistribution::point(2, 2), 10, rng);
  CHECK(s.sequence.n() == 10);
  CHECK(s.sequence.m() == 20);
  CHECK(s.repairs == 0);
  for (auto p : s.sequence.pairs()) CHECK(p == DegreePair{2, 2});

  const auto locked = JointDegreeDistribution::table({{0, 2, 1.0}});
  CHECK(code_of([&] { sample_sequence(locked, 10, rng); }) == Errc::repair_budget_exceeded);
}

TEST_CASE("sample_sequence: Poisson product nu_n within 5 sigma of 2") {
  const std::size_t n = 10'000;
  // Sampling spread of nu_n from an independent sampler (std::poisson_distribution,
  // unrepaired sums; repair changes O(sqrt n) entries and does not move the spread).
  std::mt19937_64 ref(99);
  std::poisson_distribution<std::uint32_t> pois(2.0);
  double sum = 0, sum_sq = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    std::uint64_t prod = 0, m = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = pois(ref), b = pois(ref);
      prod += std::uint64_t{a} * b;
      m += a;
    }
    const double nu = static_cast<double>(prod) / static_cast<double>(m);
    sum += nu;
    sum_sq += nu * nu;
  }
  const double sd = std::sqrt((sum_sq - sum * sum / reps) / (reps - 1));

  Rng rng(2024);
  const auto dist = JointDegreeDistribution::poisson_product(2.0, 2.0);
  CHECK(dist.truncation_mass() <= 1e-10);
  const auto s = sample_sequence(dist, n, rng);
  std::uint64_t in = 0, out = 0;
  for (auto p : s.sequence.pairs()) {
    in += p.in;
    out += p.out;
  }
  CHECK(in == out);
  CHECK(std::abs(stats(s.sequence).nu_n - 2.0) <= 5 * sd);
}

TEST_CASE("property: sampled sequences always balance and nu_n m == d(1,1)") {
  Rng rng(1);
  std::mt19937_64 meta(5);
  const std::vector<JointDegreeDistribution> dists{
      JointDegreeDistribution::poisson_product(1.5, 1.5),
      JointDegreeDistribution::point(3, 3),
      JointDegreeDistribution::table({{0, 1, 0.25}, {1, 0, 0.25}, {2, 2, 0.5}}),
      JointDegreeDistribution::table({{1, 3, 0.5}, {3, 1, 0.5}}),
      JointDegreeDistribution::powerlaw_product(3.5, 3.5),
  };
  int repair_failures = 0;
  for (int trial = 0; trial < 10'000; ++trial) {
    const auto& dist = dists[meta() % dists.size()];
    const std::size_t n = 1 + meta() % 40;
    BiDegreeSequence s;
    try {
      s = sample_sequence(dist, n, rng).sequence;
    } catch (const Error& e) {
      // e.g. an odd number of (1,3)/(3,1) draws can never balance
      REQUIRE(e.code() == Errc::repair_budget_exceeded);
      ++repair_failures;
      continue;
    }
    std::uint64_t in = 0, out = 0;
    for (auto p : s.pairs()) {
      in += p.in;
      out += p.out;
    }
    REQUIRE(in == out);
    if (s.m() == 0) continue;
    std::vector<std::uint32_t> all(s.n());
    std::iota(all.begin(), all.end(), 0u);
    const auto st = stats(s);
    REQUIRE(st.sum_in_out == subset_degree_sums(s, all, 1, 1));
    std::uint64_t count = 0;
    for (const auto& [pair, c] : st.counts) count += c;
    REQUIRE(count == st.n);
  }
  CHECK(repair_failures < 2'000);
}

TEST_CASE("property: empirical pair law is close to the distribution") {
  const std::size_t n = 100'000;
  const auto dist = JointDegreeDistribution::table({{0, 1, 0.2}, {1, 0, 0.2}, {1, 1, 0.3}, {2, 2, 0.2}, {3, 1, 0.05}, {1, 3, 0.05}});
  Rng rng(3);
  const auto s = sample_sequence(dist, n, rng).sequence;
  const auto st = stats(s);
  double tv = 0;
  std::size_t support = 0;
  dist.for_each([&](std::uint32_t k, std::uint32_t l, double p) {
    ++support;
    const auto it = st.counts.find(DegreePair{k, l});
    const double emp = it == st.counts.end() ? 0.0 : static_cast<double>(it->second) / n;
    tv += std::abs(emp - p);
  });
  tv /= 2;
  CHECK(tv < 5 * std::sqrt(static_cast<double>(support) / n));
}

TEST_CASE("JointDegreeDistribution families") {
  const auto pp = JointDegreeDistribution::poisson_product(2.0, 3.0);
  CHECK(pp.is_product());
  CHECK(pp.mean_in() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(pp.mean_out() == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(pp.mixed_moment() == doctest::Approx(6.0).epsilon(1e-10));
  CHECK(pp.truncation_mass() <= 1e-10);

  const auto t = JointDegreeDistribution::table({{1, 2, 0.5}, {3, 2, 0.25}, {1, 1, 0.25}});
  CHECK(t.mean_in() == doctest::Approx(1.5));
  CHECK(t.mixed_moment() == doctest::Approx(0.5 * 2 + 0.25 * 6 + 0.25));
  double total = 0;
  t.for_each([&](auto, auto, double p) { total += p; });
  CHECK(std::abs(total - 1.0) <= 1e-12);

  CHECK(code_of([] { JointDegreeDistribution::table({{1, 1, -0.1}, {2, 2, 1.1}}); }) == Errc::invalid_distribution);
  CHECK(code_of([] { JointDegreeDistribution::table({{1, 1, 0.5}}); }) == Errc::not_normalized);
  CHECK(code_of([] { JointDegreeDistribution::powerlaw_product(2.5, 2.5); }) == Errc::unsupported);

  const auto emp = JointDegreeDistribution::empirical(figure1());
  CHECK(emp.support().size() == 3);
  CHECK(emp.mixed_moment() == doctest::Approx(3.0));
}

TEST_CASE("Pmf families") {
  const auto p = Pmf::poisson(2.0);
  for (unsigned k = 0; k < 15; ++k) CHECK(p[k] == doctest::Approx(oracle::poisson_pmf(2.0, k)).epsilon(1e-10));
  CHECK(p.truncation_mass() <= 1e-10);
  CHECK(std::abs(p.total() - 1.0) <= 1e-12);
  CHECK(p.pgf(1.0, 1) == doctest::Approx(p.mean()).epsilon(1e-12));

  const auto pl = Pmf::powerlaw(3.5, 1);
  CHECK(pl.truncation_mass() <= 1e-10);
  CHECK(pl[1] / pl[2] == doctest::Approx(std::pow(2.0, 3.5)).epsilon(1e-12));

  CHECK(total_variation(Pmf::point(1), Pmf::point(2)) == doctest::Approx(1.0));
  CHECK(total_variation(p, p) == 0.0);
}
