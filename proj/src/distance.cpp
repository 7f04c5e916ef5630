#include "dicomo/distance.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <random>
#include <string>

#include "dicomo/error.hpp"
#include "dicomo/parallel.hpp"

namespace dicomo {

namespace {

void check_vertex(const Digraph& g, Vertex v) {
  if (v >= g.n()) throw Error(Errc::index_out_of_range, "vertex " + std::to_string(v) + " >= n");
}

constexpr std::size_t kWords = 8;
constexpr std::size_t kBatch = 64 * kWords;

/// One cache line of source bits.
struct alignas(64) Bits {
  std::uint64_t w[kWords] = {};
};

/// Lowest set bit index of a nonzero mask.
std::uint32_t lowest(const Bits& b) noexcept {
  for (std::size_t i = 0; i < kWords; ++i)
    if (b.w[i]) return static_cast<std::uint32_t>(64 * i + std::countr_zero(b.w[i]));
  return static_cast<std::uint32_t>(kBatch);
}

struct BatchResult {
  std::uint32_t diameter = 0;
  Vertex source = 0, target = 0;
  bool found = false;
  std::uint64_t finite_pairs = 0;
};

/// Workspace for one bit-parallel sweep; reused across batches of a worker.
/// seen and next of a vertex share adjacent cache lines since the push step
/// touches both.
struct Sweep {
  struct Slot {
    Bits seen, next;
  };
  std::vector<Slot> slot;
  std::vector<Bits> frontier;
  std::vector<std::uint8_t> queued;
  std::vector<Vertex> current, upcoming;

  explicit Sweep(std::size_t n) : slot(n), frontier(n), queued(n, 0) {}

  BatchResult run(const Digraph& g, Vertex first, std::size_t count, std::uint32_t* ecc) {
    std::fill(slot.begin(), slot.end(), Slot{});
    current.clear();
    for (std::size_t i = 0; i < count; ++i) {
      const Vertex s = first + static_cast<Vertex>(i);
      slot[s].seen.w[i / 64] |= 1ULL << (i % 64);
      frontier[s] = slot[s].seen;
      current.push_back(s);
    }
    BatchResult res;
    std::uint32_t level = 0;
    for (;;) {
      upcoming.clear();
      for (Vertex v : current) {
        const Bits& f = frontier[v];
        for (Vertex w : g.out_neighbors(v)) {
          Slot& sl = slot[w];
          std::uint64_t added = 0;
          for (std::size_t k = 0; k < kWords; ++k) {
            const std::uint64_t b = f.w[k] & ~sl.seen.w[k];
            sl.next.w[k] |= b;
            added |= b;
          }
          if (added && !queued[w]) {
            queued[w] = 1;
            upcoming.push_back(w);
          }
        }
      }
      if (upcoming.empty()) break;
      ++level;
      Bits reached{};
      for (Vertex w : upcoming) {
        Slot& sl = slot[w];
        queued[w] = 0;
        for (std::size_t k = 0; k < kWords; ++k) sl.seen.w[k] |= sl.next.w[k];
        if (ecc)
          for (std::size_t k = 0; k < kWords; ++k) reached.w[k] |= sl.next.w[k];
        frontier[w] = sl.next;
        sl.next = Bits{};
      }
      if (ecc) {
        for (std::size_t k = 0; k < kWords; ++k)
          for (std::uint64_t b = reached.w[k]; b; b &= b - 1)
            ecc[64 * k + static_cast<std::size_t>(std::countr_zero(b))] = level;
      }
      current.swap(upcoming);
    }
    if (level > 0) {
      // `current` holds the vertices first reached at the last level, with
      // their new source bits still in `frontier`.
      std::uint32_t best_source = static_cast<std::uint32_t>(kBatch);
      Vertex best_target = 0;
      for (Vertex w : current) {
        const std::uint32_t s = lowest(frontier[w]);
        if (s < best_source || (s == best_source && w < best_target)) {
          best_source = s;
          best_target = w;
        }
      }
      res.diameter = level;
      res.source = first + best_source;
      res.target = best_target;
      res.found = true;
    }
    for (const Slot& sl : slot)
      for (std::size_t k = 0; k < kWords; ++k) res.finite_pairs += static_cast<std::uint64_t>(std::popcount(sl.seen.w[k]));
    res.finite_pairs -= count;
    return res;
  }
};

} // namespace

std::vector<std::uint32_t> bfs_distances(const Digraph& g, Vertex source, Direction direction) {
  check_vertex(g, source);
  std::vector<std::uint32_t> dist(g.n(), unreachable);
  std::vector<Vertex> queue;
  queue.reserve(g.n());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    for (Vertex w : g.neighbors(v, direction)) {
      if (dist[w] != unreachable) continue;
      dist[w] = dist[v] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

namespace {

std::uint32_t early_exit_distance(const Digraph& g, Vertex u, Vertex v, std::vector<std::uint32_t>& dist,
                                  std::vector<Vertex>& queue) {
  if (u == v) return 0;
  queue.clear();
  dist[u] = 0;
  queue.push_back(u);
  std::uint32_t found = unreachable;
  for (std::size_t head = 0; head < queue.size() && found == unreachable; ++head) {
    const Vertex x = queue[head];
    for (Vertex w : g.out_neighbors(x)) {
      if (dist[w] != unreachable) continue;
      dist[w] = dist[x] + 1;
      queue.push_back(w);
      if (w == v) {
        found = dist[w];
        break;
      }
    }
  }
  for (Vertex x : queue) dist[x] = unreachable;
  return found;
}

} // namespace

std::uint32_t distance(const Digraph& g, Vertex u, Vertex v) {
  check_vertex(g, u);
  check_vertex(g, v);
  std::vector<std::uint32_t> dist(g.n(), unreachable);
  std::vector<Vertex> queue;
  return early_exit_distance(g, u, v, dist, queue);
}

DistanceReport diameter_exact(const Digraph& g, const DiameterOptions& options) {
  const std::size_t n = g.n();
  DistanceReport report;
  if (n == 0) return report;
  if (options.keep_eccentricities) report.eccentricities.assign(n, 0);

  const std::size_t batches = (n + kBatch - 1) / kBatch;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, options.threads), batches));
  std::vector<BatchResult> results(batches);
  // One workspace per worker slot; batches are claimed dynamically, so each
  // call grabs a free workspace.
  std::vector<Sweep> sweeps;
  sweeps.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) sweeps.emplace_back(n);
  std::vector<std::uint8_t> busy(workers, 0);
  std::mutex lock;

  parallel_for(batches, workers, [&](std::size_t b) {
    std::size_t slot = 0;
    {
      std::lock_guard guard(lock);
      while (busy[slot]) ++slot;
      busy[slot] = 1;
    }
    const Vertex first = static_cast<Vertex>(b * kBatch);
    const std::size_t count = std::min(kBatch, n - first);
    std::uint32_t* ecc = options.keep_eccentricities ? report.eccentricities.data() + first : nullptr;
    results[b] = sweeps[slot].run(g, first, count, ecc);
    std::lock_guard guard(lock);
    busy[slot] = 0;
  });

  for (const auto& r : results) {
    report.finite_pairs += r.finite_pairs;
    if (r.found && r.diameter > report.diameter) {
      report.diameter = r.diameter;
      report.argmax = {r.source, r.target};
    }
  }
  return report;
}

std::vector<std::uint32_t> pair_distances(const Digraph& g, std::span<const std::pair<Vertex, Vertex>> pairs) {
  std::vector<std::uint32_t> dist(g.n(), unreachable), out;
  std::vector<Vertex> queue;
  queue.reserve(g.n());
  out.reserve(pairs.size());
  for (auto [u, v] : pairs) {
    check_vertex(g, u);
    check_vertex(g, v);
    out.push_back(early_exit_distance(g, u, v, dist, queue));
  }
  return out;
}

TypicalSample typical_distance_sample(const Digraph& g, std::uint64_t pairs, Rng& rng) {
  if (pairs == 0) throw Error(Errc::domain_error, "pairs must be >= 1");
  if (g.n() == 0) throw Error(Errc::domain_error, "empty graph");
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(g.n() - 1));
  std::vector<std::pair<Vertex, Vertex>> sample(pairs);
  for (auto& p : sample) {
    p.first = pick(rng);
    p.second = pick(rng);
  }
  TypicalSample out;
  out.pairs = pairs;
  for (std::uint32_t d : pair_distances(g, sample))
    if (d != unreachable) out.distances.push_back(d);
  out.finite_fraction = static_cast<double>(out.distances.size()) / static_cast<double>(pairs);
  return out;
}

SccResult strongly_connected_components(const Digraph& g) {
  // Iterative Tarjan.
  const std::size_t n = g.n();
  constexpr std::uint32_t none = unreachable;
  SccResult res;
  res.component.assign(n, none);
  std::vector<std::uint32_t> index(n, none), low(n, 0);
  std::vector<Vertex> stack;
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<std::pair<Vertex, std::uint32_t>> call; // (vertex, next neighbour position)
  std::uint32_t counter = 0;
  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != none) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      const auto nbrs = g.out_neighbors(v);
      if (pos < nbrs.size()) {
        const Vertex w = nbrs[pos++];
        if (index[w] == none) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::uint32_t size = 0;
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          res.component[w] = res.count;
          ++size;
        } while (w != v);
        res.largest = std::max(res.largest, size);
        ++res.count;
      }
      const Vertex done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return res;
}

} // namespace dicomo
