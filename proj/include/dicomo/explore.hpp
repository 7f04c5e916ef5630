#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dicomo/degmodel.hpp"
#include "dicomo/digraph.hpp"
#include "dicomo/rng.hpp"

namespace dicomo {

enum class HalfEdgeStatus : std::uint8_t { undiscovered, active, paired, fatal };

enum class StopReason {
  died,      ///< frontier empty
  fatal,     ///< paired into the forbidden region
  max_depth, ///< reached stop.max_depth
  expanded,  ///< a level reached width omega
  budget,    ///< stop.max_pairings reached
};

inline constexpr HalfEdge no_half_edge = std::numeric_limits<HalfEdge>::max();

struct ExploreStop {
  unsigned max_depth = std::numeric_limits<unsigned>::max();
  std::uint64_t omega = std::numeric_limits<std::uint64_t>::max();
  /// Extra vertices whose unpaired half-edges start out fatal.
  std::vector<Vertex> forbidden;
  std::uint64_t max_pairings = std::numeric_limits<std::uint64_t>::max();
};

/// Node of the exploration tree; each node is a forward half-edge (a tail for
/// out-explorations, a head for in-explorations).
struct TreeNode {
  HalfEdge half_edge = 0;
  std::int64_t parent = -1;
  std::uint32_t depth = 0;
  bool paired = false; ///< false: still active
};

/// Partial pairing plus the bookkeeping of one exploration run.
///
/// Side 0 holds tails, side 1 heads. Every half-edge carries exactly one
/// status. The tree levels count the forward half-edges at each distance from
/// the start, so level_sizes[t] == |N_t|.
struct ExplorationState {
  Direction direction = Direction::out;
  HalfEdge start = 0;
  std::array<std::vector<HalfEdgeStatus>, 2> status;
  std::array<std::vector<HalfEdge>, 2> partner; ///< no_half_edge when unpaired
  std::vector<TreeNode> tree;
  std::vector<std::uint64_t> level_sizes;   ///< |N_0| = 1, |N_1|, ...
  std::vector<std::uint64_t> epoch_end;     ///< pairings completed at the end of epoch t (t >= 1)
  std::vector<HalfEdge> frontier;           ///< active forward half-edges left unpaired at the stop
  StopReason reason = StopReason::died;
  std::uint64_t steps = 0;                  ///< pairings made by this run

  [[nodiscard]] std::span<const HalfEdgeStatus> tails() const noexcept { return status[0]; }
  [[nodiscard]] std::span<const HalfEdgeStatus> heads() const noexcept { return status[1]; }
  [[nodiscard]] std::uint64_t paired_count() const;
  [[nodiscard]] std::uint64_t depth() const noexcept { return level_sizes.empty() ? 0 : level_sizes.size() - 1; }
};

/// Picks the backward half-edge to pair with `from` among the currently
/// unpaired ones. Must return an element of `unpaired`.
using PairingChooser = std::function<HalfEdge(HalfEdge from, std::span<const HalfEdge> unpaired)>;

/// Uniform choice: the configuration-model law.
PairingChooser uniform_chooser(Rng& rng);
/// Replays the pairing of a materialized graph.
PairingChooser replay_chooser(const Digraph& g, Direction direction);

/// Reusable lazy exploration engine. The state it starts from (empty, or a
/// prior partial pairing) is its base; reset() returns to the base in time
/// proportional to the work done since, so repeated probes stay cheap. A run
/// depends only on the base, its arguments and the chooser, never on history.
class Explorer {
public:
  explicit Explorer(const BiDegreeSequence& seq);
  /// Conditions on the pairings of `prior`: they are kept, and every unpaired
  /// half-edge at a vertex touched by them is fatal.
  Explorer(const BiDegreeSequence& seq, const ExplorationState& prior);

  /// Breadth-first edge exploration from `start`, pairing on demand.
  /// Throws Errc::start_already_paired if start is paired or fatal.
  const ExplorationState& run(HalfEdge start, Direction direction, const ExploreStop& stop,
                              const PairingChooser& choose);

  void reset();
  [[nodiscard]] const ExplorationState& state() const noexcept { return st_; }
  [[nodiscard]] std::uint64_t m() const noexcept { return m_; }

private:
  void init_common(const BiDegreeSequence& seq);
  void set_status(int side, HalfEdge e, HalfEdgeStatus s);
  void remove_from_pool(int side, HalfEdge e);
  void make_pair(int fwd, HalfEdge e, HalfEdge b);

  std::uint64_t m_ = 0;
  std::array<std::vector<std::uint32_t>, 2> offset_;
  std::array<std::vector<Vertex>, 2> vertex_of_;
  std::array<std::vector<HalfEdge>, 2> pool_;
  std::array<std::vector<std::uint32_t>, 2> pool_pos_;
  std::array<std::vector<HalfEdgeStatus>, 2> base_status_;
  std::array<std::vector<HalfEdge>, 2> touched_;
  std::array<std::vector<std::uint8_t>, 2> touched_flag_;
  std::array<std::vector<std::pair<HalfEdge, std::uint32_t>>, 2> removed_; ///< (half-edge, pool slot) per removal
  ExplorationState st_;
};

/// One exploration from `start` under the uniform pairing law, optionally
/// continuing from the partial pairing of `prior` (conditioning on it).
ExplorationState lazy_explore(const BiDegreeSequence& seq, HalfEdge start, Direction direction,
                              const ExploreStop& stop, Rng& rng, const ExplorationState* prior = nullptr);

} // namespace dicomo
