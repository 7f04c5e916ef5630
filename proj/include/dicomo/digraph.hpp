#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dicomo/degmodel.hpp"

namespace dicomo {

using Vertex = std::uint32_t;
using HalfEdge = std::uint32_t;

enum class Direction { out, in };

/// Directed multigraph stored at half-edge resolution.
///
/// Tails (out half-edges) of vertex v are the ids [tail_offset(v), tail_offset(v+1)),
/// heads likewise. Edge i is tail i paired with head head_of_tail(i). The
/// out-adjacency is therefore the CSR (tail offsets, target of each tail) and
/// the in-adjacency the CSR (head offsets, source of each head); one is the
/// exact transpose of the other by construction.
class Digraph {
public:
  Digraph() = default;

  /// From an explicit pairing: head_of_tail must be a permutation of [0, m).
  static Digraph from_pairing(const BiDegreeSequence& seq, std::vector<HalfEdge> head_of_tail);
  /// From an edge list. Tails are numbered by (source, position in the list),
  /// heads by (target, position in the list).
  static Digraph from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges);

  [[nodiscard]] std::size_t n() const noexcept { return tail_offset_.empty() ? 0 : tail_offset_.size() - 1; }
  [[nodiscard]] std::size_t m() const noexcept { return head_of_tail_.size(); }

  [[nodiscard]] std::uint32_t out_degree(Vertex v) const { return tail_offset_[v + 1] - tail_offset_[v]; }
  [[nodiscard]] std::uint32_t in_degree(Vertex v) const { return head_offset_[v + 1] - head_offset_[v]; }

  /// Targets of v's tails, in tail order (parallel edges repeated).
  [[nodiscard]] std::span<const Vertex> out_neighbors(Vertex v) const {
    return {target_.data() + tail_offset_[v], target_.data() + tail_offset_[v + 1]};
  }
  /// Sources of v's heads, in head order.
  [[nodiscard]] std::span<const Vertex> in_neighbors(Vertex v) const {
    return {source_.data() + head_offset_[v], source_.data() + head_offset_[v + 1]};
  }
  [[nodiscard]] std::span<const Vertex> neighbors(Vertex v, Direction d) const {
    return d == Direction::out ? out_neighbors(v) : in_neighbors(v);
  }

  [[nodiscard]] std::span<const std::uint32_t> tail_offsets() const noexcept { return tail_offset_; }
  [[nodiscard]] std::span<const std::uint32_t> head_offsets() const noexcept { return head_offset_; }
  [[nodiscard]] HalfEdge head_of_tail(HalfEdge t) const { return head_of_tail_[t]; }
  [[nodiscard]] HalfEdge tail_of_head(HalfEdge h) const { return tail_of_head_[h]; }
  [[nodiscard]] Vertex tail_vertex(HalfEdge t) const { return source_[head_of_tail_[t]]; }
  [[nodiscard]] Vertex head_vertex(HalfEdge h) const { return target_[tail_of_head_[h]]; }
  [[nodiscard]] std::span<const HalfEdge> pairing() const noexcept { return head_of_tail_; }

  /// (source, target) per tail, in tail order.
  [[nodiscard]] std::vector<std::pair<Vertex, Vertex>> edges() const;
  [[nodiscard]] BiDegreeSequence degree_sequence() const;

  [[nodiscard]] bool simple() const noexcept { return simple_; }
  [[nodiscard]] std::uint64_t attempts() const noexcept { return attempts_; }
  void mark_simple(std::uint64_t attempts) noexcept {
    simple_ = true;
    attempts_ = attempts;
  }

  /// No self-loops and no repeated (source, target); checked per source on
  /// sorted target runs.
  [[nodiscard]] bool is_simple() const;

private:
  void build_inverse();

  std::vector<std::uint32_t> tail_offset_, head_offset_;
  std::vector<HalfEdge> head_of_tail_, tail_of_head_;
  std::vector<Vertex> target_; ///< vertex of the head paired with tail t
  std::vector<Vertex> source_; ///< vertex of the tail paired with head h
  bool simple_ = false;
  std::uint64_t attempts_ = 0;
};

} // namespace dicomo
