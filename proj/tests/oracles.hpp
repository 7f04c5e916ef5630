// Independent reference implementations used by the tests. They are written
// for clarity, share no code with the library beyond its data types, and
// are only fast enough for small instances.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "dicomo/degmodel.hpp"
#include "dicomo/digraph.hpp"

namespace oracle {

using dicomo::BiDegreeSequence;
using dicomo::Digraph;

inline constexpr std::uint32_t inf = std::numeric_limits<std::uint32_t>::max();

/// All-pairs hop distances from the edge list alone.
inline std::vector<std::vector<std::uint32_t>> floyd_warshall(const Digraph& g) {
  const std::size_t n = g.n();
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [u, v] : g.edges())
    if (u != v) d[u][v] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][k] == inf) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (d[k][j] != inf && d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    }
  return d;
}

struct Diameter {
  std::uint32_t value = 0;
  std::pair<std::uint32_t, std::uint32_t> argmax{0, 0};
  std::uint64_t finite_pairs = 0;
};

/// Max finite distance, lexicographically smallest attaining pair.
inline Diameter diameter(const Digraph& g) {
  const auto d = floyd_warshall(g);
  Diameter out;
  for (std::uint32_t i = 0; i < g.n(); ++i)
    for (std::uint32_t j = 0; j < g.n(); ++j) {
      if (i == j || d[i][j] == inf) continue;
      ++out.finite_pairs;
      if (d[i][j] > out.value) {
        out.value = d[i][j];
        out.argmax = {i, j};
      }
    }
  return out;
}

/// Smallest root of h(x) = x on [0, 1] by bisection, for a pgf h with h'(1) > 1.
inline double extinction_bisection(const std::function<double(double)>& h) {
  double lo = 0.0, hi = 1.0 - 1e-9;
  if (h(hi) - hi > 0) return 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) - mid > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Root in (0, 1) of x e^{-x} = nu e^{-nu}, by bisection.
inline double poisson_dual(double nu) {
  const double target = nu * std::exp(-nu);
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::exp(-mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double poisson_pmf(double mean, unsigned k) {
  return std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
}

/// Calls fn(head_of_tail) for every one of the m! pairings, in lexicographic order.
inline void for_each_pairing(std::uint64_t m, const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
  std::vector<std::uint32_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0u);
  do fn(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
}

/// Lexicographic rank of a permutation of 0..m-1.
inline std::size_t permutation_rank(const std::vector<std::uint32_t>& perm) {
  std::size_t rank = 0;
  const std::size_t m = perm.size();
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < m; ++j) smaller += perm[j] < perm[i];
    std::size_t fact = 1;
    for (std::size_t f = 2; f < m - i; ++f) fact *= f;
    rank += smaller * fact;
  }
  return rank;
}

/// Pearson chi-square p-value of observed counts against expected probabilities.
inline double chi_square_pvalue(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs) {
  std::uint64_t total = 0;
  for (auto o : observed) total += o;
  double stat = 0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (probs[i] <= 0) continue;
    const double e = probs[i] * static_cast<double>(total);
    stat += (observed[i] - e) * (observed[i] - e) / e;
    ++cells;
  }
  boost::math::chi_squared dist(static_cast<double>(cells - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Random edge list on n vertices from one of several simple generators.
inline Digraph random_digraph(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::uniform_int_distribution<std::uint32_t> vertex(0, static_cast<std::uint32_t>(n - 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (rng() % 4) {
  case 0: { // sparse random arcs
    const std::size_t m = rng() % (2 * n + 1);
    for (std::size_t i = 0; i < m; ++i) edges.emplace_back(vertex(rng), vertex(rng));
    break;
  }
  case 1: { // independent arcs with random density
    const double p = unit(rng) * 0.3;
    for (std::uint32_t u = 0; u < n; ++u)
      for (std::uint32_t v = 0; v < n; ++v)
        if (u != v && unit(rng) < p) edges.emplace_back(u, v);
    break;
  }
  case 2: { // a few directed cycles and paths glued together
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (unit(rng) < 0.9) edges.emplace_back(order[i], order[i + 1]);
    if (n > 1 && unit(rng) < 0.5) edges.emplace_back(order[n - 1], order[0]);
    break;
  }
  default: { // out-degree-d style
    const std::uint32_t d = 1 + static_cast<std::uint32_t>(rng() % 3);
    for (std::uint32_t u = 0; u < n; ++u)
      for (std::uint32_t j = 0; j < d; ++j) edges.emplace_back(u, vertex(rng));
    break;
  }
  }
  return Digraph::from_edges(n, edges);
}

/// |N_1| .. of the out-exploration from `start`, computed directly on a
/// materialized pairing: BFS over tails with first-discovery expansion.
inline std::vector<std::uint64_t> level_sizes(const BiDegreeSequence& seq, const std::vector<std::uint32_t>& head_of_tail,
                                              std::uint32_t start, unsigned depth) {
  std::vector<std::uint32_t> tail_owner, head_owner, first_tail;
  for (std::uint32_t v = 0; v < seq.n(); ++v) {
    first_tail.push_back(static_cast<std::uint32_t>(tail_owner.size()));
    for (std::uint32_t k = 0; k < seq[v].out; ++k) tail_owner.push_back(v);
    for (std::uint32_t k = 0; k < seq[v].in; ++k) head_owner.push_back(v);
  }
  std::vector<bool> seen(seq.n(), false);
  seen[tail_owner[start]] = true;
  std::vector<std::uint32_t> level{start};
  std::vector<std::uint64_t> sizes{1};
  for (unsigned t = 0; t < depth && !level.empty(); ++t) {
    std::vector<std::uint32_t> next;
    for (auto e : level) {
      const auto w = head_owner[head_of_tail[e]];
      if (seen[w]) continue;
      seen[w] = true;
      for (std::uint32_t k = 0; k < seq[w].out; ++k) next.push_back(first_tail[w] + k);
    }
    sizes.push_back(next.size());
    level = std::move(next);
  }
  return sizes;
}

} // namespace oracle
