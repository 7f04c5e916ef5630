#include "dicomo/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "dicomo/error.hpp"

namespace dicomo {

std::uint64_t default_omega(std::size_t n) {
  const double l = std::log(static_cast<double>(std::max<std::size_t>(n, 1)));
  const double raw = std::ceil(std::pow(l, 6.0));
  const std::uint64_t cap = std::max<std::uint64_t>(1, n / 10);
  if (raw >= static_cast<double>(cap)) return cap;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(raw));
}

NeighborhoodProfile profile_of(const ExplorationState& state, std::uint64_t omega) {
  NeighborhoodProfile p;
  p.start = state.start;
  p.direction = state.direction;
  p.omega = omega;
  p.sizes = state.level_sizes;
  for (unsigned t = 1; t < p.sizes.size(); ++t) {
    if (!p.expansion_time && !p.died_at && p.sizes[t] >= omega) p.expansion_time = t;
    if (!p.died_at && p.sizes[t] == 0) p.died_at = t;
  }
  return p;
}

namespace {

void check_omega(std::uint64_t omega) {
  if (omega == 0) throw Error(Errc::domain_error, "omega must be >= 1");
}

ExploreStop stop_for(std::uint64_t omega, unsigned max_t) {
  ExploreStop stop;
  stop.omega = omega;
  stop.max_depth = max_t;
  return stop;
}

} // namespace

NeighborhoodProfile neighborhood_profile(const BiDegreeSequence& seq, HalfEdge start, Direction direction,
                                         std::uint64_t omega, unsigned max_t, Rng& rng) {
  Explorer explorer(seq);
  return neighborhood_profile(explorer, start, direction, omega, max_t, rng);
}

NeighborhoodProfile neighborhood_profile(Explorer& explorer, HalfEdge start, Direction direction,
                                         std::uint64_t omega, unsigned max_t, Rng& rng) {
  check_omega(omega);
  return profile_of(explorer.run(start, direction, stop_for(omega, max_t), uniform_chooser(rng)), omega);
}

NeighborhoodProfile neighborhood_profile(const Digraph& g, HalfEdge start, Direction direction, std::uint64_t omega,
                                         unsigned max_t) {
  check_omega(omega);
  if (start >= g.m()) throw Error(Errc::index_out_of_range, "start half-edge " + std::to_string(start));
  const bool out = direction == Direction::out;
  const auto fwd_offsets = out ? g.tail_offsets() : g.head_offsets();
  std::vector<std::uint8_t> discovered(g.n(), 0);
  discovered[out ? g.tail_vertex(start) : g.head_vertex(start)] = 1;

  NeighborhoodProfile p;
  p.start = start;
  p.direction = direction;
  p.omega = omega;
  p.sizes.push_back(1);
  std::vector<HalfEdge> level{start}, next;
  for (unsigned depth = 0; depth < max_t; ++depth) {
    next.clear();
    for (HalfEdge e : level) {
      const Vertex w = out ? g.head_vertex(g.head_of_tail(e)) : g.tail_vertex(g.tail_of_head(e));
      if (discovered[w]) continue;
      discovered[w] = 1;
      for (auto f = fwd_offsets[w]; f < fwd_offsets[w + 1]; ++f) next.push_back(f);
    }
    level.swap(next);
    p.sizes.push_back(level.size());
    const unsigned t = depth + 1;
    if (level.empty()) {
      p.died_at = t;
      break;
    }
    if (level.size() >= omega) {
      p.expansion_time = t;
      break;
    }
  }
  return p;
}

ThinScan thin_depth_scan(const BiDegreeSequence& seq, Direction direction, std::uint64_t omega, Rng& rng,
                         std::uint64_t budget, unsigned max_t) {
  check_omega(omega);
  if (budget == 0) throw Error(Errc::domain_error, "budget must be >= 1");
  const std::uint64_t m = seq.m();
  ThinScan scan;
  scan.omega = omega;
  if (m == 0) return scan;

  std::vector<HalfEdge> starts(m);
  std::iota(starts.begin(), starts.end(), HalfEdge{0});
  if (budget < m) {
    for (std::uint64_t i = 0; i < budget; ++i) {
      std::uniform_int_distribution<std::uint64_t> pick(i, m - 1);
      std::swap(starts[i], starts[pick(rng)]);
    }
    starts.resize(budget);
  }

  Explorer explorer(seq);
  const ExploreStop stop = stop_for(omega, max_t);
  const PairingChooser choose = uniform_chooser(rng);
  for (HalfEdge s : starts) {
    const NeighborhoodProfile p = profile_of(explorer.run(s, direction, stop, choose), omega);
    ++scan.probes;
    unsigned thin = 0;
    for (unsigned t = 0; t < p.sizes.size(); ++t)
      if (p.sizes[t] > 0 && p.sizes[t] < omega) thin = t;
    scan.max_thin_depth = std::max(scan.max_thin_depth, thin);
    if (p.expansion_time) ++scan.expansion_times[*p.expansion_time];
    else if (p.died_at) ++scan.death_times[*p.died_at];
    else ++scan.unresolved;
  }
  return scan;
}

} // namespace dicomo
