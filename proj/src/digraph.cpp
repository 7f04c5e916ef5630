#include "dicomo/digraph.hpp"

#include <algorithm>
#include <string>

#include "dicomo/error.hpp"

namespace dicomo {

namespace {

std::vector<std::uint32_t> offsets_of(std::size_t n, auto degree_of) {
  std::vector<std::uint32_t> off(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) off[v + 1] = off[v] + degree_of(v);
  return off;
}

} // namespace

Digraph Digraph::from_pairing(const BiDegreeSequence& seq, std::vector<HalfEdge> head_of_tail) {
  if (head_of_tail.size() != seq.m()) throw Error(Errc::domain_error, "pairing size != m");
  Digraph g;
  g.tail_offset_ = offsets_of(seq.n(), [&](std::size_t v) { return seq[v].out; });
  g.head_offset_ = offsets_of(seq.n(), [&](std::size_t v) { return seq[v].in; });
  g.head_of_tail_ = std::move(head_of_tail);
  g.build_inverse();
  return g;
}

Digraph Digraph::from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges) {
  std::vector<std::uint32_t> outdeg(n, 0), indeg(n, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw Error(Errc::index_out_of_range, "edge endpoint out of range");
    ++outdeg[u];
    ++indeg[v];
  }
  Digraph g;
  g.tail_offset_ = offsets_of(n, [&](std::size_t v) { return outdeg[v]; });
  g.head_offset_ = offsets_of(n, [&](std::size_t v) { return indeg[v]; });
  std::vector<std::uint32_t> next_tail(g.tail_offset_.begin(), g.tail_offset_.end() - 1);
  std::vector<std::uint32_t> next_head(g.head_offset_.begin(), g.head_offset_.end() - 1);
  g.head_of_tail_.assign(edges.size(), 0);
  for (const auto& [u, v] : edges) g.head_of_tail_[next_tail[u]++] = next_head[v]++;
  g.build_inverse();
  return g;
}

void Digraph::build_inverse() {
  const std::size_t m = head_of_tail_.size();
  const std::size_t nv = n();
  tail_of_head_.assign(m, static_cast<HalfEdge>(-1));
  for (HalfEdge t = 0; t < m; ++t) {
    const HalfEdge h = head_of_tail_[t];
    if (h >= m || tail_of_head_[h] != static_cast<HalfEdge>(-1))
      throw Error(Errc::domain_error, "head_of_tail is not a permutation");
    tail_of_head_[h] = t;
  }
  std::vector<Vertex> tail_vertex(m), head_vertex(m);
  for (Vertex v = 0; v < nv; ++v) {
    for (auto t = tail_offset_[v]; t < tail_offset_[v + 1]; ++t) tail_vertex[t] = v;
    for (auto h = head_offset_[v]; h < head_offset_[v + 1]; ++h) head_vertex[h] = v;
  }
  target_.resize(m);
  source_.resize(m);
  for (HalfEdge t = 0; t < m; ++t) target_[t] = head_vertex[head_of_tail_[t]];
  for (HalfEdge h = 0; h < m; ++h) source_[h] = tail_vertex[tail_of_head_[h]];
}

std::vector<std::pair<Vertex, Vertex>> Digraph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(m());
  for (Vertex v = 0; v < n(); ++v)
    for (Vertex w : out_neighbors(v)) out.emplace_back(v, w);
  return out;
}

BiDegreeSequence Digraph::degree_sequence() const {
  std::vector<DegreePair> pairs(n());
  for (Vertex v = 0; v < n(); ++v) pairs[v] = {in_degree(v), out_degree(v)};
  return validate_sequence(std::move(pairs));
}

bool Digraph::is_simple() const {
  std::vector<Vertex> run;
  for (Vertex v = 0; v < n(); ++v) {
    const auto nb = out_neighbors(v);
    run.assign(nb.begin(), nb.end());
    std::sort(run.begin(), run.end());
    for (std::size_t i = 0; i < run.size(); ++i) {
      if (run[i] == v) return false;
      if (i > 0 && run[i] == run[i - 1]) return false;
    }
  }
  return true;
}

} // namespace dicomo
