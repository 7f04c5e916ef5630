#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "dicomo/digraph.hpp"
#include "dicomo/rng.hpp"

namespace dicomo {

inline constexpr std::uint32_t unreachable = std::numeric_limits<std::uint32_t>::max();

/// Hop distances from `source` following edges in `direction`
/// (Direction::in walks edges backwards). Unreached vertices hold `unreachable`.
std::vector<std::uint32_t> bfs_distances(const Digraph& g, Vertex source, Direction direction = Direction::out);

/// dist(u, v) with early exit; `unreachable` if v cannot be reached.
std::uint32_t distance(const Digraph& g, Vertex u, Vertex v);

struct DistanceReport {
  std::uint32_t diameter = 0;
  std::pair<Vertex, Vertex> argmax{0, 0};
  std::uint64_t finite_pairs = 0; ///< ordered pairs i != j with finite distance
  std::vector<std::uint32_t> eccentricities; ///< filled only on request
};

struct DiameterOptions {
  unsigned threads = 1;
  bool keep_eccentricities = false;
};

/// Largest finite distance over ordered vertex pairs, from a BFS out of every
/// source. Sources are swept 512 at a time with bit-parallel frontiers.
/// argmax is the smallest source, then smallest target, attaining the
/// diameter, independent of the thread count. An edgeless graph has diameter 0
/// with argmax (0, 0).
DistanceReport diameter_exact(const Digraph& g, const DiameterOptions& options = {});

struct TypicalSample {
  std::vector<std::uint32_t> distances; ///< finite distances only, in sampling order
  std::uint64_t pairs = 0;
  double finite_fraction = 0.0;
};

/// Distances of the given ordered pairs, in order.
std::vector<std::uint32_t> pair_distances(const Digraph& g, std::span<const std::pair<Vertex, Vertex>> pairs);

/// `pairs` i.i.d. uniform ordered vertex pairs (u == v allowed).
TypicalSample typical_distance_sample(const Digraph& g, std::uint64_t pairs, Rng& rng);

/// Strongly connected component label per vertex (labels 0..count-1). Diagnostic only.
struct SccResult {
  std::vector<std::uint32_t> component;
  std::uint32_t count = 0;
  std::uint32_t largest = 0; ///< size of the largest component
};
SccResult strongly_connected_components(const Digraph& g);

} // namespace dicomo
