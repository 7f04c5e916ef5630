#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "dicomo/error.hpp"
#include "dicomo/graphgen.hpp"
#include "oracles.hpp"

using namespace dicomo;

namespace {

BiDegreeSequence figure1() { return validate_sequence({{1, 2}, {3, 2}, {1, 1}}); }

std::multiset<std::pair<Vertex, Vertex>> out_multiset(const Digraph& g) {
  std::multiset<std::pair<Vertex, Vertex>> s;
  for (Vertex v = 0; v < g.n(); ++v)
    for (auto w : g.out_neighbors(v)) s.emplace(v, w);
  return s;
}

std::multiset<std::pair<Vertex, Vertex>> in_multiset(const Digraph& g) {
  std::multiset<std::pair<Vertex, Vertex>> s;
  for (Vertex v = 0; v < g.n(); ++v)
    for (auto u : g.in_neighbors(v)) s.emplace(u, v);
  return s;
}

void check_degrees(const Digraph& g, const BiDegreeSequence& seq) {
  REQUIRE(g.n() == seq.n());
  for (Vertex v = 0; v < g.n(); ++v) {
    REQUIRE(g.out_degree(v) == seq[v].out);
    REQUIRE(g.in_degree(v) == seq[v].in);
  }
}

} // namespace

TEST_CASE("pair_uniform: examples") {
  Rng rng(1);
  const auto g = pair_uniform(figure1(), rng);
  CHECK(g.m() == 5);
  CHECK(g.out_degree(1) == 2);
  CHECK(g.in_degree(1) == 3);
  CHECK(g.edges().size() == 5);

  const auto loop = pair_uniform(validate_sequence({{1, 1}}), rng);
  REQUIRE(loop.m() == 1);
  CHECK(loop.edges().front() == std::pair<Vertex, Vertex>{0, 0});
}

TEST_CASE("pair_uniform: all 120 pairings are equally likely") {
  const auto seq = figure1();
  Rng rng(2);
  std::vector<std::uint64_t> counts(120, 0);
  const std::uint64_t samples = 1'200'000;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const auto g = pair_uniform(seq, rng);
    const std::vector<std::uint32_t> perm(g.pairing().begin(), g.pairing().end());
    ++counts[oracle::permutation_rank(perm)];
  }
  const std::vector<double> probs(120, 1.0 / 120);
  CHECK(oracle::chi_square_pvalue(counts, probs) > 1e-6);
}

TEST_CASE("sample_simple") {
  Rng rng(3);
  const auto two = validate_sequence({{1, 1}, {1, 1}});
  for (int i = 0; i < 200; ++i) {
    const auto g = sample_simple(two, rng, 1000);
    CHECK(g.simple());
    CHECK(out_multiset(g) == std::multiset<std::pair<Vertex, Vertex>>{{0, 1}, {1, 0}});
  }

  try {
    sample_simple(validate_sequence({{2, 2}}), rng, 50);
    FAIL("expected AttemptsExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::attempts_exhausted);
  }
}

namespace {

double enumerated_simple_fraction(const BiDegreeSequence& seq) {
  std::uint64_t simple = 0, total = 0;
  oracle::for_each_pairing(seq.m(), [&](const std::vector<std::uint32_t>& perm) {
    ++total;
    const auto g = Digraph::from_pairing(seq, perm);
    std::set<std::pair<Vertex, Vertex>> seen;
    bool ok = true;
    for (auto [u, v] : g.edges()) ok = ok && u != v && seen.emplace(u, v).second;
    if (ok) ++simple;
    CHECK(ok == g.is_simple());
  });
  return static_cast<double>(simple) / total;
}

} // namespace

TEST_CASE("sample_simple: Figure 1 sequence has no simple realization") {
  // vertex 1 needs three distinct in-neighbours other than itself but only two exist
  CHECK(enumerated_simple_fraction(figure1()) == 0.0);
  Rng rng(4);
  try {
    sample_simple(figure1(), rng, 1000);
    FAIL("expected AttemptsExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::attempts_exhausted);
  }
}

TEST_CASE("sample_simple: acceptance rate matches enumeration") {
  const auto seq = validate_sequence({{1, 1}, {2, 1}, {1, 2}, {1, 1}});
  const double p = enumerated_simple_fraction(seq);
  REQUIRE(p > 0.0);

  Rng rng(4);
  const int trials = 100'000;
  std::uint64_t attempts = 0;
  for (int i = 0; i < trials; ++i) attempts += sample_simple(seq, rng, 100'000).attempts();
  // attempts are i.i.d. Bernoulli(p) trials; acceptances = trials
  const double rate = static_cast<double>(trials) / attempts;
  const double sigma = std::sqrt(p * (1 - p) / attempts);
  CHECK(std::abs(rate - p) <= 5 * sigma);
}

TEST_CASE("d_out_model") {
  Rng rng(5);
  const auto g = d_out_model(3, 2, rng);
  CHECK(g.m() == 6);
  std::uint64_t in_total = 0;
  for (Vertex v = 0; v < 3; ++v) {
    CHECK(g.out_degree(v) == 2);
    in_total += g.in_degree(v);
  }
  CHECK(in_total == 6);

  const auto loops = d_out_model(1, 3, rng);
  CHECK(loops.edges() == std::vector<std::pair<Vertex, Vertex>>(3, {0, 0}));

  const std::size_t n = 10'000;
  const auto big = d_out_model(n, 2, rng);
  std::map<std::uint32_t, std::uint64_t> hist;
  for (Vertex v = 0; v < n; ++v) ++hist[big.in_degree(v)];
  // exact Binomial(2n, 1/n) pmf
  double tv = 0, covered = 0;
  for (std::uint32_t k = 0; k < 40; ++k) {
    const double logp = std::lgamma(2.0 * n + 1) - std::lgamma(k + 1.0) - std::lgamma(2.0 * n - k + 1) +
                        k * std::log(1.0 / n) + (2.0 * n - k) * std::log1p(-1.0 / n);
    const double p = std::exp(logp);
    covered += p;
    tv += std::abs(p - static_cast<double>(hist[k]) / n);
  }
  tv = 0.5 * (tv + (1 - covered));
  CHECK(tv < 0.02);
}

TEST_CASE("binomial_digraph") {
  Rng rng(6);
  const auto full = binomial_digraph(3, 1.0, BinomialVariant::independent, rng);
  CHECK(full.m() == 6);
  CHECK(full.is_simple());
  const auto fw = oracle::floyd_warshall(full);
  for (Vertex i = 0; i < 3; ++i)
    for (Vertex j = 0; j < 3; ++j) CHECK(fw[i][j] == (i == j ? 0u : 1u));

  for (int i = 0; i < 50; ++i) {
    const auto g = binomial_digraph(2, 0.5, BinomialVariant::oriented, rng);
    CHECK(g.m() == 1);
    CHECK(g.is_simple());
  }

  try {
    binomial_digraph(5, 0.6, BinomialVariant::oriented, rng);
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::domain_error);
  }

  const std::size_t n = 1000;
  const double p = 2.0 / n;
  const auto g = binomial_digraph(n, p, BinomialVariant::independent, rng);
  const double mean = static_cast<double>(g.m()) / n;
  const double sigma = std::sqrt(n * (n - 1.0) * p * (1 - p)) / n;
  CHECK(std::abs(mean - (n - 1.0) * p) <= 5 * sigma);
  CHECK(g.is_simple());
  for (auto [u, v] : g.edges()) CHECK(u != v);

  const auto og = binomial_digraph(n, p, BinomialVariant::oriented, rng);
  CHECK(og.is_simple());
  std::set<std::pair<Vertex, Vertex>> seen;
  for (auto [u, v] : og.edges()) CHECK(!seen.count({v, u}));
}

TEST_CASE("property: degree preservation, transpose consistency, simple flag") {
  std::mt19937_64 meta(7);
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + meta() % 60;
    std::vector<DegreePair> pairs(n);
    std::uint64_t in = 0, out = 0;
    for (auto& p : pairs) {
      p = {static_cast<std::uint32_t>(meta() % 4), static_cast<std::uint32_t>(meta() % 4)};
      in += p.in;
      out += p.out;
    }
    // balance on the last vertex
    while (in < out) ++pairs[meta() % n].in, ++in;
    while (out < in) ++pairs[meta() % n].out, ++out;
    const auto seq = validate_sequence(pairs);
    const auto g = pair_uniform(seq, rng);
    check_degrees(g, seq);
    CHECK(out_multiset(g) == in_multiset(g));
    for (HalfEdge t = 0; t < g.m(); ++t) REQUIRE(g.tail_of_head(g.head_of_tail(t)) == t);
    const auto ds = g.degree_sequence();
    for (Vertex v = 0; v < n; ++v) REQUIRE(ds[v] == seq[v]);
    try {
      const auto s = sample_simple(seq, rng, 200);
      check_degrees(s, seq);
      CHECK(s.simple());
      std::set<std::pair<Vertex, Vertex>> seen;
      for (auto [u, v] : s.edges()) REQUIRE((u != v && seen.emplace(u, v).second));
    } catch (const Error& e) {
      CHECK(e.code() == Errc::attempts_exhausted);
    }
  }
}
