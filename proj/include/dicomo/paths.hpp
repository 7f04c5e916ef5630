#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dicomo/degmodel.hpp"
#include "dicomo/digraph.hpp"

namespace dicomo {

using Rational = boost::multiprecision::cpp_rational;

/// Quantities of an intermediate-vertex set I used by the path-count bound.
struct IndexSetSummary {
  std::uint64_t sum_in_out = 0; ///< sum over I of d- d+
  std::uint64_t r = 0;          ///< vertices of I with d- d+ >= 1
  std::uint64_t size = 0;
};
IndexSetSummary summarize_index_set(const BiDegreeSequence& seq, std::span<const Vertex> allowed);

/// Arguments of the expected path-count bound. nu_I = sum_in_out / m.
struct PathBoundArgs {
  std::uint64_t m = 0;
  std::uint64_t sum_in_out = 0;
  std::uint64_t x_plus = 1;
  std::uint64_t x_minus = 1;
  std::uint64_t s = 0; ///< heads already paired by the conditioning pairing
  unsigned k = 1;      ///< path length
  std::uint64_t r = 0;
};

/// nu_I^{k-1} |X+||X-| / (m-k-s+1) * prod_{i=0}^{k-2} (1 - i/r) / (1 - (i+s)/m).
/// Requires 1 <= k <= r+1 and m-k-s+1 > 0 (Errc::domain_error otherwise).
double expected_path_bound(const PathBoundArgs& args);
/// Same bound in exact arithmetic.
Rational expected_path_bound_exact(const PathBoundArgs& args);
/// Bound with I = all vertices, read from sequence statistics.
double expected_path_bound(const SequenceStats& stats, std::uint64_t x_plus, std::uint64_t x_minus, std::uint64_t s,
                           unsigned k, std::uint64_t r);

/// Exact conditional expectation of P_k:
/// |X+||X-| / (m-k-s+1) * sum over distinct (v_1..v_{k-1}) in I of
/// prod d-(v_i) d+(v_i) / (m-i-s+1).
/// Valid when the endpoint half-edges lie outside I and are unpaired.
Rational exact_path_expectation(const BiDegreeSequence& seq, std::span<const Vertex> allowed, std::uint64_t x_plus,
                                std::uint64_t x_minus, std::uint64_t s, unsigned k);

/// P_k for k = 1..k_max (index 0 unused): realized paths
/// e+ -> (v_1, e_1-, e_1+) -> ... -> e- with e+ in x_plus (tails), e- in
/// x_minus (heads) and distinct intermediate vertices from `allowed`, counted
/// per half-edge choice. Restricted to n <= 64 or k_max <= 4
/// (Errc::instance_too_large).
std::vector<std::uint64_t> count_simple_paths(const Digraph& g, std::span<const HalfEdge> x_plus,
                                              std::span<const HalfEdge> x_minus, std::span<const Vertex> allowed,
                                              unsigned k_max);

} // namespace dicomo
