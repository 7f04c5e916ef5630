#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dicomo/degmodel.hpp"
#include "dicomo/digraph.hpp"
#include "dicomo/explore.hpp"
#include "dicomo/rng.hpp"

namespace dicomo {

/// Level sizes |N_t| of the edge-neighbourhood tree of a half-edge.
struct NeighborhoodProfile {
  HalfEdge start = 0;
  Direction direction = Direction::out;
  std::vector<std::uint64_t> sizes;        ///< sizes[0] == 1
  std::optional<unsigned> expansion_time;  ///< first t with sizes[t] >= omega
  std::optional<unsigned> died_at;         ///< first t with sizes[t] == 0
  std::uint64_t omega = 1;
};

/// ceil((ln n)^6), capped at n/10 (and at least 1).
std::uint64_t default_omega(std::size_t n);

/// Profile read off a finished exploration.
NeighborhoodProfile profile_of(const ExplorationState& state, std::uint64_t omega);

/// Lazy profile from a fresh pairing.
NeighborhoodProfile neighborhood_profile(const BiDegreeSequence& seq, HalfEdge start, Direction direction,
                                         std::uint64_t omega, unsigned max_t, Rng& rng);

/// Lazy profile on an explorer's base state (possibly conditioned on a prior
/// partial pairing). Throws Errc::start_already_paired if start is taken.
NeighborhoodProfile neighborhood_profile(Explorer& explorer, HalfEdge start, Direction direction,
                                         std::uint64_t omega, unsigned max_t, Rng& rng);

/// Profile on a materialized graph: level BFS over half-edges with the same
/// discovery rule as the lazy process (a vertex contributes its forward
/// half-edges the first time one of its backward half-edges is reached; the
/// start vertex counts as discovered).
NeighborhoodProfile neighborhood_profile(const Digraph& g, HalfEdge start, Direction direction, std::uint64_t omega,
                                         unsigned max_t);

struct ThinScan {
  unsigned max_thin_depth = 0; ///< largest t at which some probe had 0 < |N_t| < omega
  std::uint64_t probes = 0;
  std::uint64_t omega = 1;
  std::map<unsigned, std::uint64_t> expansion_times; ///< t_omega -> probe count
  std::map<unsigned, std::uint64_t> death_times;     ///< died_at -> probe count
  std::uint64_t unresolved = 0;                      ///< probes stopped by max_t
};

/// Lazy-explores from `budget` start half-edges, each from a fresh pairing.
/// When budget >= m every forward half-edge is probed once in index order,
/// otherwise a uniform sample without replacement is used.
ThinScan thin_depth_scan(const BiDegreeSequence& seq, Direction direction, std::uint64_t omega, Rng& rng,
                         std::uint64_t budget, unsigned max_t = 100000);

} // namespace dicomo
