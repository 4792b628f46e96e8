#include "starcore/core.hpp"

#include <algorithm>

namespace starcore {

namespace {

// Shared finishing step: count survivors and collect H1.
StarCore finish_core(const EssentialHypergraph& g,
                     const std::vector<std::uint8_t>& vertex_alive,
                     const std::vector<std::uint8_t>& edge_alive,
                     const std::vector<std::uint32_t>& essential_deg) {
  StarCore core;
  core.vertex_alive = vertex_alive;
  core.edge_alive = edge_alive;
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
    if (!vertex_alive[v]) continue;
    (g.sign(v) == 1 ? core.vertices_plus : core.vertices_minus)++;
    if (essential_deg[v] == 1)
      (g.sign(v) == 1 ? core.h1_plus : core.h1_minus).push_back(v);
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!edge_alive[e]) continue;
    (g.sign(g.edge(e).essential_vertex()) == 1 ? core.edges_plus
                                               : core.edges_minus)++;
  }
  return core;
}

}  // namespace

bool StarCore::in_h1(std::uint32_t v) const {
  return std::binary_search(h1_plus.begin(), h1_plus.end(), v) ||
         std::binary_search(h1_minus.begin(), h1_minus.end(), v);
}

PeelResult peel_star_core(const EssentialHypergraph& g, Rng* shuffle) {
  const std::uint32_t n = g.vertex_count();
  std::vector<std::uint32_t> essential_deg(n);
  for (std::uint32_t v = 0; v < n; ++v) essential_deg[v] = g.essential_degree(v);
  std::vector<std::uint8_t> vertex_alive(n, 1);
  std::vector<std::uint8_t> edge_alive(g.edge_count(), 1);

  std::vector<std::uint32_t> worklist;
  for (std::uint32_t v = 0; v < n; ++v)
    if (essential_deg[v] == 0) worklist.push_back(v);

  PeelResult result;
  result.removal_order.reserve(n);
  std::size_t head = 0;
  while (head < worklist.size()) {
    std::uint32_t v;
    if (shuffle) {
      // Pop a uniformly random pending entry.
      std::size_t i = head + shuffle->below(worklist.size() - head);
      std::swap(worklist[head], worklist[i]);
    }
    v = worklist[head++];
    vertex_alive[v] = 0;
    result.removal_order.push_back(v);
    const auto& offs = g.incidence_offsets();
    const auto& flat = g.incidence_edges();
    for (std::uint32_t i = offs[v]; i < offs[v + 1]; ++i) {
      std::uint32_t e = flat[i];
      if (!edge_alive[e]) continue;
      edge_alive[e] = 0;
      std::uint32_t ess = g.edge(e).essential_vertex();
      // v is essential nowhere among alive edges, so ess != v.
      if (--essential_deg[ess] == 0 && vertex_alive[ess])
        worklist.push_back(ess);
    }
  }
  result.core = finish_core(g, vertex_alive, edge_alive, essential_deg);
  return result;
}

PeelTrace parallel_rounds(const EssentialHypergraph& g,
                          std::uint32_t round_cap) {
  const std::uint32_t n = g.vertex_count();
  std::vector<std::uint32_t> essential_deg(n);
  std::vector<std::uint8_t> vertex_alive(n, 1);
  std::vector<std::uint8_t> edge_alive(g.edge_count(), 1);

  PeelTrace trace;
  trace.removal_round.assign(n, kInfiniteDepth);

  // Running census, updated incrementally. b tracks essential degree
  // exactly 1; a tracks the next round's frontier.
  RoundStats stats;
  stats.x_plus = g.plus_count();
  stats.x_minus = g.minus_count();
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    (g.sign(g.edge(e).essential_vertex()) == 1 ? stats.y_plus
                                               : stats.y_minus)++;
  std::vector<std::uint32_t> frontier;
  for (std::uint32_t v = 0; v < n; ++v) {
    essential_deg[v] = g.essential_degree(v);
    if (essential_deg[v] == 0) {
      frontier.push_back(v);
      (g.sign(v) == 1 ? stats.a_plus : stats.a_minus)++;
    } else if (essential_deg[v] == 1) {
      (g.sign(v) == 1 ? stats.b_plus : stats.b_minus)++;
    }
  }
  trace.round_stats.push_back(stats);

  const auto& offs = g.incidence_offsets();
  const auto& flat = g.incidence_edges();
  std::uint32_t round = 0;
  while (!frontier.empty() && round < round_cap) {
    ++round;
    std::vector<std::uint32_t> next;
    for (std::uint32_t v : frontier) {
      vertex_alive[v] = 0;
      trace.removal_round[v] = round;
      (g.sign(v) == 1 ? stats.x_plus : stats.x_minus)--;
      (g.sign(v) == 1 ? stats.a_plus : stats.a_minus)--;
      for (std::uint32_t i = offs[v]; i < offs[v + 1]; ++i) {
        std::uint32_t e = flat[i];
        if (!edge_alive[e]) continue;
        edge_alive[e] = 0;
        std::uint32_t ess = g.edge(e).essential_vertex();
        int es = g.sign(ess);
        (es == 1 ? stats.y_plus : stats.y_minus)--;
        std::uint32_t d = --essential_deg[ess];
        if (!vertex_alive[ess]) continue;
        if (d == 1) {
          (es == 1 ? stats.b_plus : stats.b_minus)++;
        } else if (d == 0) {
          (es == 1 ? stats.b_plus : stats.b_minus)--;
          (es == 1 ? stats.a_plus : stats.a_minus)++;
          next.push_back(ess);
        }
      }
    }
    trace.round_stats.push_back(stats);
    frontier = std::move(next);
  }
  trace.rounds = round;
  trace.core = finish_core(g, vertex_alive, edge_alive, essential_deg);
  return trace;
}

namespace {

// Peel with removals restricted to `allowed`; removal sequence cut off at
// target (order != nullptr collects it). Returns true iff target falls.
bool ball_peel_run(const EssentialHypergraph& g,
                   const std::vector<std::uint32_t>& allowed,
                   std::uint32_t target, std::vector<std::uint32_t>* order) {
  std::vector<std::uint32_t> stack;
  // Local state keyed by vertex; small maps would also do, but the graphs
  // here are modest and flat arrays keep it simple.
  static thread_local std::vector<std::uint32_t> essential_deg;
  static thread_local std::vector<std::uint8_t> vertex_alive, edge_alive,
      in_ball;
  essential_deg.assign(g.vertex_count(), 0);
  vertex_alive.assign(g.vertex_count(), 1);
  edge_alive.assign(g.edge_count(), 1);
  in_ball.assign(g.vertex_count(), 0);
  for (std::uint32_t v : allowed) in_ball[v] = 1;
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
    essential_deg[v] = g.essential_degree(v);
  for (std::uint32_t v : allowed)
    if (essential_deg[v] == 0) stack.push_back(v);
  const auto& offs = g.incidence_offsets();
  const auto& flat = g.incidence_edges();
  while (!stack.empty()) {
    std::uint32_t v = stack.back();
    stack.pop_back();
    if (!vertex_alive[v]) continue;
    vertex_alive[v] = 0;
    if (order) order->push_back(v);
    if (v == target) return true;
    for (std::uint32_t i = offs[v]; i < offs[v + 1]; ++i) {
      std::uint32_t e = flat[i];
      if (!edge_alive[e]) continue;
      edge_alive[e] = 0;
      std::uint32_t ess = g.edge(e).essential_vertex();
      if (--essential_deg[ess] == 0 && vertex_alive[ess] && in_ball[ess])
        stack.push_back(ess);
    }
  }
  return false;
}

// Vertices within graph distance `radius` of center.
std::vector<std::uint32_t> distance_ball(const EssentialHypergraph& g,
                                         std::uint32_t center,
                                         std::uint32_t radius) {
  const auto& offs = g.incidence_offsets();
  const auto& flat = g.incidence_edges();
  std::vector<std::uint8_t> seen(g.vertex_count(), 0);
  std::vector<std::uint32_t> ball{center}, ring{center};
  seen[center] = 1;
  for (std::uint32_t d = 0; d < radius && !ring.empty(); ++d) {
    std::vector<std::uint32_t> next_ring;
    for (std::uint32_t u : ring)
      for (std::uint32_t i = offs[u]; i < offs[u + 1]; ++i)
        for (std::uint32_t w : g.edge(flat[i]).vertices)
          if (!seen[w]) {
            seen[w] = 1;
            next_ring.push_back(w);
            ball.push_back(w);
          }
    ring = std::move(next_ring);
  }
  return ball;
}

}  // namespace

std::vector<std::uint32_t> ball_peel_order(const EssentialHypergraph& g,
                                           std::uint32_t center,
                                           std::uint32_t radius) {
  std::vector<std::uint32_t> order;
  if (!ball_peel_run(g, distance_ball(g, center, radius), center, &order))
    order.clear();
  return order;
}

std::vector<std::uint32_t> exact_star_depth(const EssentialHypergraph& g) {
  if (g.vertex_count() > (1u << 20))
    throw ScaleError("exact star depth supports at most 2^20 vertices");
  const std::uint32_t n = g.vertex_count();
  std::vector<std::uint32_t> depth(n, kInfiniteDepth);
  StarCore core = peel_star_core(g).core;

  const auto& offs = g.incidence_offsets();
  const auto& flat = g.incidence_edges();
  std::vector<std::uint32_t> ball, ring;
  std::vector<std::uint8_t> seen(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (core.vertex_alive[v]) continue;  // never removable: depth infinite
    // Grow the ball radius by radius until the restricted peel reaches v.
    ball.clear();
    ring.clear();
    std::fill(seen.begin(), seen.end(), 0);
    ball.push_back(v);
    ring.push_back(v);
    seen[v] = 1;
    for (std::uint32_t d = 0;; ++d) {
      if (ball_peel_run(g, ball, v, nullptr)) {
        depth[v] = d;
        break;
      }
      std::vector<std::uint32_t> next_ring;
      for (std::uint32_t u : ring)
        for (std::uint32_t i = offs[u]; i < offs[u + 1]; ++i)
          for (std::uint32_t w : g.edge(flat[i]).vertices)
            if (!seen[w]) {
              seen[w] = 1;
              next_ring.push_back(w);
              ball.push_back(w);
            }
      if (next_ring.empty())
        throw InvariantError("peeled vertex unreachable by ball peeling");
      ring = std::move(next_ring);
    }
  }
  return depth;
}

std::vector<std::uint32_t> round_depth(const PeelTrace& trace) {
  std::vector<std::uint32_t> depth(trace.removal_round.size(), kInfiniteDepth);
  for (std::size_t v = 0; v < depth.size(); ++v)
    if (trace.removal_round[v] != kInfiniteDepth)
      depth[v] = trace.removal_round[v] - 1;
  return depth;
}

CoreStats core_stats(const StarCore& core, int k) {
  CoreStats s;
  s.vertices = core.vertex_count();
  s.edges = core.edge_count();
  s.vertices_plus = core.vertices_plus;
  s.h1_plus = core.h1_plus.size();
  s.h1_minus = core.h1_minus.size();
  if (s.vertices > 0)
    s.branching_ratio = static_cast<double>(k - 1) *
                        static_cast<double>(s.h1_plus + s.h1_minus) /
                        static_cast<double>(s.vertices);
  return s;
}

}  // namespace starcore
