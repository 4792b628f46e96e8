#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "starcore/core.hpp"
#include "starcore/hypergraph.hpp"
#include "starcore/model.hpp"
#include "starcore/rng.hpp"
#include "starcore/sampler.hpp"

using namespace starcore;

namespace {

Hyperedge edge(std::vector<std::uint32_t> vs, std::uint32_t ess_pos,
               const std::vector<std::int8_t>& signs) {
  Hyperedge e;
  e.vertices = std::move(vs);
  e.essential_pos = ess_pos;
  e.type.s = signs[e.vertices[ess_pos]];
  for (std::size_t j = 0; j < e.vertices.size(); ++j) {
    if (j == ess_pos) continue;
    (signs[e.vertices[j]] == 1 ? e.type.a : e.type.b)++;
  }
  return e;
}

// Two k=3 edges sharing one vertex; everything peels away.
EssentialHypergraph chain_graph() {
  std::vector<std::int8_t> signs = {1, 1, -1, 1, -1};
  std::vector<Hyperedge> es;
  es.push_back(edge({0, 1, 2}, 0, signs));
  es.push_back(edge({2, 3, 4}, 0, signs));
  return EssentialHypergraph(5, signs, es);
}

// One vertex set, three edges, each vertex essential once: its own core.
EssentialHypergraph triangle_graph() {
  std::vector<std::int8_t> signs = {1, -1, 1};
  std::vector<Hyperedge> es;
  es.push_back(edge({0, 1, 2}, 0, signs));
  es.push_back(edge({0, 1, 2}, 1, signs));
  es.push_back(edge({0, 1, 2}, 2, signs));
  return EssentialHypergraph(3, signs, es);
}

// Dependency chain 3 -> 2 -> 1 -> 0 plus a shortcut edge {0,3} that pulls
// the start of the chain next to its end. Rounds need 4 sweeps for vertex 0
// but a radius-2 ball already contains every vertex it waits for.
EssentialHypergraph shortcut_graph() {
  std::vector<std::int8_t> signs = {1, 1, 1, 1};
  std::vector<Hyperedge> es;
  es.push_back(edge({0, 1}, 0, signs));  // 0 waits for 1
  es.push_back(edge({1, 2}, 0, signs));  // 1 waits for 2
  es.push_back(edge({2, 3}, 0, signs));  // 2 waits for 3
  es.push_back(edge({0, 3}, 0, signs));  // shortcut, dies with 3
  return EssentialHypergraph(4, signs, es);
}

std::vector<std::uint32_t> alive_vertices(const StarCore& c) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < c.vertex_alive.size(); ++v)
    if (c.vertex_alive[v]) out.push_back(v);
  return out;
}

}  // namespace

TEST_CASE("peel_star_core: chain collapses, removal order is consistent") {
  auto g = chain_graph();
  auto res = peel_star_core(g);
  CHECK(res.core.empty());
  CHECK(res.core.edge_count() == 0);
  CHECK(res.removal_order.size() == 5);

  // replay the order: each removed vertex is essential in no alive edge
  std::vector<bool> edge_dead(g.edge_count(), false);
  for (std::uint32_t v : res.removal_order) {
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (edge_dead[e]) continue;
      CHECK(g.edge(e).essential_vertex() != v);
    }
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      for (std::uint32_t w : g.edge(e).vertices)
        if (w == v) edge_dead[e] = true;
  }
}

TEST_CASE("peel_star_core: triangle survives whole") {
  auto g = triangle_graph();
  auto res = peel_star_core(g);
  CHECK(res.core.vertex_count() == 3);
  CHECK(res.core.edge_count() == 3);
  CHECK(res.removal_order.empty());
  CHECK(res.core.vertices_plus == 2);
  CHECK(res.core.vertices_minus == 1);
  CHECK(res.core.h1_plus.size() == 2);
  CHECK(res.core.h1_minus.size() == 1);
  CHECK(res.core.in_h1(0));
  CHECK(res.core.in_h1(1));
  CHECK(res.core.in_h1(2));

  auto cs = core_stats(res.core, 3);
  CHECK(cs.vertices == 3);
  CHECK(cs.edges == 3);
  CHECK(cs.branching_ratio == doctest::Approx(2.0));
}

TEST_CASE("peel_star_core: empty graph") {
  EssentialHypergraph g(0, {}, {});
  auto res = peel_star_core(g);
  CHECK(res.core.empty());
  CHECK(res.removal_order.empty());
}

TEST_CASE("parallel_rounds: chain rounds and census") {
  auto g = chain_graph();
  auto tr = parallel_rounds(g);
  CHECK(tr.core.empty());
  CHECK(tr.rounds == 2);
  // round 1 removes the vertices essential nowhere, round 2 the rest
  CHECK(tr.removal_round[1] == 1);
  CHECK(tr.removal_round[3] == 1);
  CHECK(tr.removal_round[4] == 1);
  CHECK(tr.removal_round[0] == 2);
  CHECK(tr.removal_round[2] == 2);

  REQUIRE(tr.round_stats.size() == 3);  // H(0), H(1), H(2)
  const RoundStats& s0 = tr.round_stats[0];
  CHECK(s0.x_plus == 3);
  CHECK(s0.x_minus == 2);
  CHECK(s0.y_plus == 1);   // edge {0,1,2}, essential 0 carries +1
  CHECK(s0.y_minus == 1);  // edge {2,3,4}, essential 2 carries -1
  CHECK(s0.a_plus == 2);   // vertices 1, 3 removable
  CHECK(s0.a_minus == 1);  // vertex 4 removable
  CHECK(s0.b_plus == 1);   // vertex 0 essential exactly once
  CHECK(s0.b_minus == 1);  // vertex 2
  const RoundStats& s1 = tr.round_stats[1];
  CHECK(s1.x_plus == 1);
  CHECK(s1.x_minus == 1);
  CHECK(s1.y_plus + s1.y_minus == 0);
  CHECK(s1.a_plus == 1);
  CHECK(s1.a_minus == 1);
  const RoundStats& s2 = tr.round_stats[2];
  CHECK(s2.x_plus + s2.x_minus == 0);
}

TEST_CASE("parallel_rounds: triangle is a fixpoint immediately") {
  auto tr = parallel_rounds(triangle_graph());
  CHECK(tr.rounds == 0);
  CHECK(tr.core.vertex_count() == 3);
  CHECK(tr.removal_round[0] == kInfiniteDepth);
  REQUIRE(tr.round_stats.size() == 1);
  CHECK(tr.round_stats[0].a_plus + tr.round_stats[0].a_minus == 0);
}

TEST_CASE("worklist and parallel peeling agree; shuffles change nothing") {
  auto m = CspModel::hypergraph_two_colouring(3);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto p = sample_planted(m, 300, 900, seed);
    auto g = build_gamma(m, p.instance, p.sigma);
    auto base = peel_star_core(g);
    auto par = parallel_rounds(g);
    CHECK(base.core.vertex_alive == par.core.vertex_alive);
    CHECK(base.core.edge_alive == par.core.edge_alive);
    CHECK(base.core.h1_plus == par.core.h1_plus);
    CHECK(base.core.h1_minus == par.core.h1_minus);
    for (std::uint64_t s = 0; s < 10; ++s) {
      Rng shuffle(1000 * seed + s);
      auto shuffled = peel_star_core(g, &shuffle);
      CHECK(shuffled.core.vertex_alive == base.core.vertex_alive);
      CHECK(shuffled.core.edge_alive == base.core.edge_alive);
    }
  }
}

TEST_CASE("exact_star_depth: chain instance values") {
  auto g = chain_graph();
  auto depth = exact_star_depth(g);
  CHECK(depth[1] == 0);
  CHECK(depth[3] == 0);
  CHECK(depth[4] == 0);
  CHECK(depth[0] == 1);  // waits for a neighbour inside its own edge
  CHECK(depth[2] == 1);
  for (std::uint32_t v : alive_vertices(peel_star_core(triangle_graph()).core))
    CHECK(exact_star_depth(triangle_graph())[v] == kInfiniteDepth);
}

TEST_CASE("exact depth can undercut the round surrogate") {
  auto g = shortcut_graph();
  auto tr = parallel_rounds(g);
  auto rd = round_depth(tr);
  auto ex = exact_star_depth(g);
  CHECK(tr.core.empty());
  CHECK(rd[0] == 3);  // removed in round 4
  CHECK(ex[0] == 2);  // radius-2 ball suffices thanks to the shortcut
  CHECK(ex[3] == 0);
  CHECK(ex[2] == 1);
  CHECK(ex[1] == 2);
  for (std::uint32_t v = 0; v < 4; ++v) CHECK(ex[v] <= rd[v]);
}

TEST_CASE("exact depth never exceeds the round surrogate at random") {
  auto m = CspModel::hypergraph_two_colouring(3);
  for (std::uint64_t seed = 11; seed <= 16; ++seed) {
    auto p = sample_planted(m, 120, 300, seed);
    auto g = build_gamma(m, p.instance, p.sigma);
    auto tr = parallel_rounds(g);
    auto rd = round_depth(tr);
    auto ex = exact_star_depth(g);
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
      if (tr.removal_round[v] == kInfiniteDepth) {
        CHECK(ex[v] == kInfiniteDepth);
      } else {
        CHECK(ex[v] <= rd[v]);
      }
    }
  }
}

TEST_CASE("ball_peel_order: ends at the centre and replays legally") {
  auto g = shortcut_graph();
  CHECK(ball_peel_order(g, 0, 1).empty());  // radius 1 cannot free vertex 0
  auto order = ball_peel_order(g, 0, 2);
  REQUIRE(!order.empty());
  CHECK(order.back() == 0);

  // replay: every step removes a vertex essential in no remaining edge
  std::vector<bool> edge_dead(g.edge_count(), false);
  for (std::uint32_t v : order) {
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (edge_dead[e]) continue;
      CHECK(g.edge(e).essential_vertex() != v);
    }
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      for (std::uint32_t w : g.edge(e).vertices)
        if (w == v) edge_dead[e] = true;
  }

  // core vertices are never freed at any radius
  auto tg = triangle_graph();
  CHECK(ball_peel_order(tg, 0, 5).empty());
}

TEST_CASE("round_depth maps rounds to depths and keeps infinity") {
  auto tr = parallel_rounds(chain_graph());
  auto rd = round_depth(tr);
  CHECK(rd[1] == 0);
  CHECK(rd[0] == 1);
  auto tc = parallel_rounds(triangle_graph());
  CHECK(round_depth(tc)[1] == kInfiniteDepth);
}
