#include "dicomo/explore.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "dicomo/error.hpp"

namespace dicomo {

namespace {

constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();
constexpr int kTails = 0;
constexpr int kHeads = 1;

} // namespace

std::uint64_t ExplorationState::paired_count() const {
  return static_cast<std::uint64_t>(std::count(status[kTails].begin(), status[kTails].end(), HalfEdgeStatus::paired));
}

PairingChooser uniform_chooser(Rng& rng) {
  return [&rng](HalfEdge, std::span<const HalfEdge> unpaired) {
    std::uniform_int_distribution<std::size_t> pick(0, unpaired.size() - 1);
    return unpaired[pick(rng)];
  };
}

PairingChooser replay_chooser(const Digraph& g, Direction direction) {
  return [&g, direction](HalfEdge from, std::span<const HalfEdge>) {
    return direction == Direction::out ? g.head_of_tail(from) : g.tail_of_head(from);
  };
}

void Explorer::init_common(const BiDegreeSequence& seq) {
  m_ = seq.m();
  const std::size_t n = seq.n();
  for (int s : {kTails, kHeads}) {
    auto& off = offset_[s];
    off.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) off[v + 1] = off[v] + (s == kTails ? seq[v].out : seq[v].in);
    vertex_of_[s].resize(m_);
    for (Vertex v = 0; v < n; ++v)
      for (auto e = off[v]; e < off[v + 1]; ++e) vertex_of_[s][e] = v;
    touched_flag_[s].assign(m_, 0);
    touched_[s].clear();
  }
}

Explorer::Explorer(const BiDegreeSequence& seq) {
  init_common(seq);
  for (int s : {kTails, kHeads}) {
    st_.status[s].assign(m_, HalfEdgeStatus::undiscovered);
    st_.partner[s].assign(m_, no_half_edge);
    pool_[s].resize(m_);
    pool_pos_[s].resize(m_);
    for (HalfEdge e = 0; e < m_; ++e) {
      pool_[s][e] = e;
      pool_pos_[s][e] = e;
    }
    base_status_[s] = st_.status[s];
  }
}

Explorer::Explorer(const BiDegreeSequence& seq, const ExplorationState& prior) {
  init_common(seq);
  if (prior.status[kTails].size() != m_ || prior.status[kHeads].size() != m_)
    throw Error(Errc::domain_error, "prior exploration belongs to a different sequence");
  std::vector<std::uint8_t> in_h(seq.n(), 0);
  for (int s : {kTails, kHeads}) {
    st_.partner[s] = prior.partner[s];
    for (HalfEdge e = 0; e < m_; ++e)
      if (prior.partner[s][e] != no_half_edge) in_h[vertex_of_[s][e]] = 1;
  }
  for (int s : {kTails, kHeads}) {
    st_.status[s].assign(m_, HalfEdgeStatus::undiscovered);
    pool_[s].clear();
    pool_pos_[s].assign(m_, npos);
    for (HalfEdge e = 0; e < m_; ++e) {
      if (st_.partner[s][e] != no_half_edge) {
        st_.status[s][e] = HalfEdgeStatus::paired;
        continue;
      }
      if (in_h[vertex_of_[s][e]]) st_.status[s][e] = HalfEdgeStatus::fatal;
      pool_pos_[s][e] = static_cast<std::uint32_t>(pool_[s].size());
      pool_[s].push_back(e);
    }
    base_status_[s] = st_.status[s];
  }
}

void Explorer::set_status(int side, HalfEdge e, HalfEdgeStatus s) {
  if (!touched_flag_[side][e]) {
    touched_flag_[side][e] = 1;
    touched_[side].push_back(e);
  }
  st_.status[side][e] = s;
}

void Explorer::remove_from_pool(int side, HalfEdge e) {
  auto& pool = pool_[side];
  auto& pos = pool_pos_[side];
  const std::uint32_t i = pos[e];
  removed_[side].emplace_back(e, i);
  const HalfEdge last = pool.back();
  pool[i] = last;
  pos[last] = i;
  pool.pop_back();
  pos[e] = npos;
}

void Explorer::make_pair(int fwd, HalfEdge e, HalfEdge b) {
  const int bwd = 1 - fwd;
  remove_from_pool(fwd, e);
  remove_from_pool(bwd, b);
  st_.partner[fwd][e] = b;
  st_.partner[bwd][b] = e;
  set_status(fwd, e, HalfEdgeStatus::paired);
  set_status(bwd, b, HalfEdgeStatus::paired);
  ++st_.steps;
}

void Explorer::reset() {
  for (int s : {kTails, kHeads}) {
    // undo swap-and-shrink removals last to first so the pool order is exactly the base order
    auto& pool = pool_[s];
    auto& pos = pool_pos_[s];
    for (auto it = removed_[s].rbegin(); it != removed_[s].rend(); ++it) {
      const auto [e, i] = *it;
      if (i == pool.size()) {
        pool.push_back(e);
      } else {
        const HalfEdge moved = pool[i];
        pos[moved] = static_cast<std::uint32_t>(pool.size());
        pool.push_back(moved);
        pool[i] = e;
      }
      pos[e] = i;
      st_.partner[s][e] = no_half_edge;
    }
    removed_[s].clear();
    for (HalfEdge e : touched_[s]) {
      st_.status[s][e] = base_status_[s][e];
      touched_flag_[s][e] = 0;
    }
    touched_[s].clear();
  }
  st_.tree.clear();
  st_.level_sizes.clear();
  st_.epoch_end.clear();
  st_.frontier.clear();
  st_.steps = 0;
  st_.reason = StopReason::died;
}

const ExplorationState& Explorer::run(HalfEdge start, Direction direction, const ExploreStop& stop,
                                      const PairingChooser& choose) {
  reset();
  const int fwd = direction == Direction::out ? kTails : kHeads;
  const int bwd = 1 - fwd;
  if (start >= m_) throw Error(Errc::index_out_of_range, "start half-edge " + std::to_string(start));

  for (Vertex v : stop.forbidden) {
    if (v + 1 >= offset_[kTails].size()) throw Error(Errc::index_out_of_range, "forbidden vertex");
    for (int s : {kTails, kHeads})
      for (auto e = offset_[s][v]; e < offset_[s][v + 1]; ++e)
        if (st_.status[s][e] == HalfEdgeStatus::undiscovered) set_status(s, e, HalfEdgeStatus::fatal);
  }
  if (st_.status[fwd][start] != HalfEdgeStatus::undiscovered)
    throw Error(Errc::start_already_paired, "start half-edge " + std::to_string(start) +
                                                " is paired or lies in the explored region");

  st_.direction = direction;
  st_.start = start;
  const Vertex v0 = vertex_of_[fwd][start];
  set_status(fwd, start, HalfEdgeStatus::active);
  for (auto b = offset_[bwd][v0]; b < offset_[bwd][v0 + 1]; ++b) set_status(bwd, b, HalfEdgeStatus::active);

  st_.tree.push_back({start, -1, 0, false});
  st_.level_sizes.push_back(1);
  std::vector<std::size_t> level{0}, next;

  auto finish = [&](StopReason reason, std::size_t level_pos) -> const ExplorationState& {
    st_.reason = reason;
    for (std::size_t i = level_pos; i < level.size(); ++i) st_.frontier.push_back(st_.tree[level[i]].half_edge);
    for (std::size_t x : next) st_.frontier.push_back(st_.tree[x].half_edge);
    return st_;
  };

  for (unsigned depth = 0;; ++depth) {
    if (depth >= stop.max_depth) return finish(StopReason::max_depth, 0);
    next.clear();
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (st_.steps >= stop.max_pairings) return finish(StopReason::budget, i);
      const std::size_t node = level[i];
      const HalfEdge e = st_.tree[node].half_edge;
      const HalfEdge b = choose(e, pool_[bwd]);
      if (b >= m_ || pool_pos_[bwd][b] == npos)
        throw Error(Errc::domain_error, "chooser returned a half-edge that is not unpaired");
      const HalfEdgeStatus hit = st_.status[bwd][b];
      make_pair(fwd, e, b);
      st_.tree[node].paired = true;
      if (hit == HalfEdgeStatus::fatal) return finish(StopReason::fatal, i + 1);
      if (hit == HalfEdgeStatus::undiscovered) {
        const Vertex v = vertex_of_[bwd][b];
        for (auto x = offset_[bwd][v]; x < offset_[bwd][v + 1]; ++x)
          if (st_.status[bwd][x] == HalfEdgeStatus::undiscovered) set_status(bwd, x, HalfEdgeStatus::active);
        for (auto f = offset_[fwd][v]; f < offset_[fwd][v + 1]; ++f) {
          set_status(fwd, f, HalfEdgeStatus::active);
          next.push_back(st_.tree.size());
          st_.tree.push_back({f, static_cast<std::int64_t>(node), depth + 1, false});
        }
      }
    }
    st_.epoch_end.push_back(st_.steps);
    st_.level_sizes.push_back(next.size());
    level.swap(next);
    next.clear();
    if (level.empty()) return finish(StopReason::died, 0);
    if (level.size() >= stop.omega) return finish(StopReason::expanded, 0);
  }
}

ExplorationState lazy_explore(const BiDegreeSequence& seq, HalfEdge start, Direction direction,
                              const ExploreStop& stop, Rng& rng, const ExplorationState* prior) {
  Explorer ex = prior ? Explorer(seq, *prior) : Explorer(seq);
  ex.run(start, direction, stop, uniform_chooser(rng));
  return ex.state();
}

} // namespace dicomo
