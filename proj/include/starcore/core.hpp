#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "starcore/hypergraph.hpp"
#include "starcore/rng.hpp"

namespace starcore {

constexpr std::uint32_t kInfiniteDepth =
    std::numeric_limits<std::uint32_t>::max();

// Maximal sub-hypergraph in which every remaining vertex is essential in
// some remaining edge. Obtained by repeatedly deleting any vertex essential
// nowhere together with all edges containing it; order-independent.
struct StarCore {
  std::vector<std::uint8_t> vertex_alive;
  std::vector<std::uint8_t> edge_alive;
  std::uint64_t vertices_plus = 0, vertices_minus = 0;  // surviving, by sign
  std::uint64_t edges_plus = 0, edges_minus = 0;  // by essential-vertex sign
  std::vector<std::uint32_t> h1_plus, h1_minus;   // essential in exactly one

  std::uint64_t vertex_count() const { return vertices_plus + vertices_minus; }
  std::uint64_t edge_count() const { return edges_plus + edges_minus; }
  bool empty() const { return vertex_count() == 0; }
  bool in_h1(std::uint32_t v) const;  // membership via sorted lists
};

struct PeelResult {
  StarCore core;
  std::vector<std::uint32_t> removal_order;
};

// Worklist peeling, linear in total incidence. With `shuffle`, removable
// vertices are popped in random order (the final core must not change).
PeelResult peel_star_core(const EssentialHypergraph& g, Rng* shuffle = nullptr);

// Census of H(i), the sub-hypergraph alive at the start of parallel round
// i+1: vertex and edge counts by sign, removable vertices (a), vertices
// essential exactly once (b).
struct RoundStats {
  std::uint64_t x_plus = 0, x_minus = 0;
  std::uint64_t y_plus = 0, y_minus = 0;
  std::uint64_t a_plus = 0, a_minus = 0;
  std::uint64_t b_plus = 0, b_minus = 0;
};

struct PeelTrace {
  StarCore core;
  // Round in which each vertex was removed (rounds count from 1);
  // kInfiniteDepth for core vertices.
  std::vector<std::uint32_t> removal_round;
  std::vector<RoundStats> round_stats;  // stats of H(0), H(1), ...
  std::uint32_t rounds = 0;             // rounds that removed something
};

// Synchronous peeling: round i+1 removes every vertex of H(i) essential in
// no edge of H(i). Terminates at the fixpoint or after round_cap rounds.
PeelTrace parallel_rounds(const EssentialHypergraph& g,
                          std::uint32_t round_cap = 1u << 20);

// Distance-based removal depth. depth[v] is the smallest d such that
// peeling restricted to the radius-d ball around v removes v; core vertices
// get kInfiniteDepth. Exhaustive; capped at 2^20 vertices.
std::vector<std::uint32_t> exact_star_depth(const EssentialHypergraph& g);

// Removal sequence of the peel restricted to the radius-d ball around
// center, cut off once center falls (center is then the last entry).
// Empty when the restricted peel never removes center.
std::vector<std::uint32_t> ball_peel_order(const EssentialHypergraph& g,
                                           std::uint32_t center,
                                           std::uint32_t radius);

// Per-vertex depth surrogate at scale: removal_round - 1. The exact depth
// never exceeds it (rounds measure time, depth measures distance; short
// cycles can shorten chains).
std::vector<std::uint32_t> round_depth(const PeelTrace& trace);

struct CoreStats {
  std::uint64_t vertices = 0, edges = 0;
  std::uint64_t vertices_plus = 0;
  std::uint64_t h1_plus = 0, h1_minus = 0;
  // (k-1) |H1| / |core|; the expansion rate of flippable-set growth.
  double branching_ratio = 0;
};

CoreStats core_stats(const StarCore& core, int k);

}  // namespace starcore
