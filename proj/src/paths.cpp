#include "dicomo/paths.hpp"

#include <string>

#include "dicomo/error.hpp"

namespace dicomo {

namespace {

using boost::multiprecision::cpp_int;

void check_bound_args(const PathBoundArgs& a) {
  if (a.k < 1) throw Error(Errc::domain_error, "path length k must be >= 1");
  if (a.k > a.r + 1) throw Error(Errc::domain_error, "k exceeds r + 1");
  if (a.m + 1 <= a.k + a.s) throw Error(Errc::domain_error, "m - k - s + 1 must be positive");
}

std::vector<std::uint8_t> membership(std::size_t n, std::span<const Vertex> set) {
  std::vector<std::uint8_t> in(n, 0);
  for (Vertex v : set) {
    if (v >= n) throw Error(Errc::index_out_of_range, "vertex " + std::to_string(v));
    in[v] = 1;
  }
  return in;
}

} // namespace

IndexSetSummary summarize_index_set(const BiDegreeSequence& seq, std::span<const Vertex> allowed) {
  IndexSetSummary out;
  const auto in = membership(seq.n(), allowed);
  for (std::size_t v = 0; v < seq.n(); ++v) {
    if (!in[v]) continue;
    const std::uint64_t a = std::uint64_t{seq[v].in} * seq[v].out;
    out.sum_in_out += a;
    out.r += a >= 1;
    ++out.size;
  }
  return out;
}

double expected_path_bound(const PathBoundArgs& a) {
  check_bound_args(a);
  const double m = static_cast<double>(a.m);
  const double nu = static_cast<double>(a.sum_in_out) / m;
  double value = static_cast<double>(a.x_plus) * static_cast<double>(a.x_minus) /
                 static_cast<double>(a.m + 1 - a.k - a.s);
  for (unsigned i = 0; i + 1 < a.k; ++i) {
    value *= nu * (1.0 - static_cast<double>(i) / static_cast<double>(a.r)) /
             (1.0 - static_cast<double>(i + a.s) / m);
  }
  return value;
}

Rational expected_path_bound_exact(const PathBoundArgs& a) {
  check_bound_args(a);
  Rational value(cpp_int(a.x_plus) * a.x_minus, cpp_int(a.m + 1 - a.k - a.s));
  const Rational nu(cpp_int(a.sum_in_out), cpp_int(a.m));
  for (unsigned i = 0; i + 1 < a.k; ++i) {
    // (1 - i/r) / (1 - (i+s)/m) = (r-i) m / (r (m-i-s))
    value *= nu * Rational(cpp_int(a.r - i) * a.m, cpp_int(a.r) * (a.m - i - a.s));
  }
  return value;
}

double expected_path_bound(const SequenceStats& stats, std::uint64_t x_plus, std::uint64_t x_minus, std::uint64_t s,
                           unsigned k, std::uint64_t r) {
  return expected_path_bound(PathBoundArgs{stats.m, stats.sum_in_out, x_plus, x_minus, s, k, r});
}

Rational exact_path_expectation(const BiDegreeSequence& seq, std::span<const Vertex> allowed, std::uint64_t x_plus,
                                std::uint64_t x_minus, std::uint64_t s, unsigned k) {
  const std::uint64_t m = seq.m();
  if (k < 1) throw Error(Errc::domain_error, "path length k must be >= 1");
  if (m + 1 <= k + s) throw Error(Errc::domain_error, "m - k - s + 1 must be positive");
  const auto in = membership(seq.n(), allowed);
  // Ordered sums over distinct (k-1)-tuples equal (k-1)! times the elementary
  // symmetric polynomial e_{k-1} of the weights d- d+.
  const unsigned j = k - 1;
  std::vector<cpp_int> e(j + 1, 0);
  e[0] = 1;
  for (std::size_t v = 0; v < seq.n(); ++v) {
    if (!in[v]) continue;
    const cpp_int a = cpp_int(seq[v].in) * seq[v].out;
    for (unsigned q = j; q >= 1; --q) e[q] += e[q - 1] * a;
  }
  cpp_int ordered = e[j];
  for (unsigned q = 2; q <= j; ++q) ordered *= q;
  cpp_int denom = m + 1 - k - s;
  for (unsigned i = 1; i <= j; ++i) denom *= m + 1 - i - s;
  return Rational(ordered * x_plus * x_minus, denom);
}

namespace {

struct PathCounter {
  const Digraph& g;
  const std::vector<std::uint8_t>& target_head;
  const std::vector<std::uint8_t>& allowed;
  std::vector<std::uint8_t> used;
  std::vector<std::uint64_t>& counts;
  unsigned k_max;

  // Tail e sits at the end of a prefix of length `len` (edges so far, e's edge
  // included once paired).
  void extend(HalfEdge e, unsigned len) {
    const HalfEdge h = g.head_of_tail(e);
    if (target_head[h]) ++counts[len];
    if (len == k_max) return;
    const Vertex w = g.head_vertex(h);
    if (!allowed[w] || used[w]) return;
    used[w] = 1;
    const auto off = g.tail_offsets();
    for (auto f = off[w]; f < off[w + 1]; ++f) extend(f, len + 1);
    used[w] = 0;
  }
};

} // namespace

std::vector<std::uint64_t> count_simple_paths(const Digraph& g, std::span<const HalfEdge> x_plus,
                                              std::span<const HalfEdge> x_minus, std::span<const Vertex> allowed,
                                              unsigned k_max) {
  if (g.n() > 64 && k_max > 4)
    throw Error(Errc::instance_too_large, "path enumeration is limited to n <= 64 or k_max <= 4");
  std::vector<std::uint8_t> target(g.m(), 0);
  for (HalfEdge h : x_minus) {
    if (h >= g.m()) throw Error(Errc::index_out_of_range, "head " + std::to_string(h));
    target[h] = 1;
  }
  const auto in = membership(g.n(), allowed);
  std::vector<std::uint64_t> counts(k_max + 1, 0);
  if (k_max == 0) return counts;
  PathCounter pc{g, target, in, std::vector<std::uint8_t>(g.n(), 0), counts, k_max};
  for (HalfEdge e : x_plus) {
    if (e >= g.m()) throw Error(Errc::index_out_of_range, "tail " + std::to_string(e));
    pc.extend(e, 1);
  }
  return counts;
}

} // namespace dicomo
