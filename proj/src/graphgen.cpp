#include "dicomo/graphgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "dicomo/error.hpp"

namespace dicomo {

Digraph pair_uniform(const BiDegreeSequence& seq, Rng& rng) {
  std::vector<HalfEdge> heads(seq.m());
  std::iota(heads.begin(), heads.end(), HalfEdge{0});
  std::shuffle(heads.begin(), heads.end(), rng);
  return Digraph::from_pairing(seq, std::move(heads));
}

Digraph sample_simple(const BiDegreeSequence& seq, Rng& rng, std::uint64_t max_attempts) {
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    Digraph g = pair_uniform(seq, rng);
    if (g.is_simple()) {
      g.mark_simple(attempt);
      return g;
    }
  }
  throw Error(Errc::attempts_exhausted,
              "no simple pairing in " + std::to_string(max_attempts) + " attempts");
}

Digraph d_out_model(std::size_t n, std::uint32_t d, Rng& rng) {
  if (n < 1 || d < 1) throw Error(Errc::domain_error, "d-out model needs n >= 1 and d >= 1");
  std::uniform_int_distribution<Vertex> target(0, static_cast<Vertex>(n - 1));
  std::vector<std::pair<Vertex, Vertex>> edges;
  edges.reserve(n * d);
  for (Vertex v = 0; v < n; ++v)
    for (std::uint32_t j = 0; j < d; ++j) edges.emplace_back(v, target(rng));
  return Digraph::from_edges(n, edges);
}

namespace {

/// Visits the indices in [0, total) selected by independent Bernoulli(p)
/// trials, jumping between successes with geometric gaps.
template <class Fn>
void bernoulli_indices(std::uint64_t total, double p, Rng& rng, Fn&& fn) {
  if (p <= 0.0 || total == 0) return;
  if (p >= 1.0) {
    for (std::uint64_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::geometric_distribution<std::uint64_t> gap(p);
  std::uint64_t i = gap(rng);
  while (i < total) {
    fn(i);
    const std::uint64_t step = gap(rng);
    if (step >= total - i) break;
    i += step + 1;
  }
}

} // namespace

Digraph binomial_digraph(std::size_t n, double p, BinomialVariant variant, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::domain_error, "p must lie in [0,1]");
  std::vector<std::pair<Vertex, Vertex>> edges;
  const auto nn = static_cast<std::uint64_t>(n);
  if (variant == BinomialVariant::independent) {
    if (n >= 2) {
      bernoulli_indices(nn * (nn - 1), p, rng, [&](std::uint64_t idx) {
        const auto i = static_cast<Vertex>(idx / (nn - 1));
        auto j = static_cast<Vertex>(idx % (nn - 1));
        if (j >= i) ++j;
        edges.emplace_back(i, j);
      });
    }
  } else {
    if (p > 0.5) throw Error(Errc::domain_error, "oriented binomial digraph needs p <= 1/2");
    std::bernoulli_distribution coin(0.5);
    // Unordered pairs (i<j) enumerated row by row.
    Vertex row = 0;
    std::uint64_t row_start = 0; // index of pair (row, row+1)
    if (n >= 2) {
      bernoulli_indices(nn * (nn - 1) / 2, 2.0 * p, rng, [&](std::uint64_t idx) {
        while (idx >= row_start + (nn - 1 - row)) {
          row_start += nn - 1 - row;
          ++row;
        }
        const auto j = static_cast<Vertex>(row + 1 + (idx - row_start));
        if (coin(rng))
          edges.emplace_back(row, j);
        else
          edges.emplace_back(j, row);
      });
    }
  }
  Digraph g = Digraph::from_edges(n, edges);
  g.mark_simple(1);
  return g;
}

} // namespace dicomo
