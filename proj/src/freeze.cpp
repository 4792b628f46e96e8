#include "starcore/freeze.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>

#include "starcore/errors.hpp"
#include "starcore/sampler.hpp"
#include "starcore/summary.hpp"

namespace starcore {

namespace {

std::uint64_t choose_capped(std::uint32_t n, int j, std::uint64_t cap) {
  std::uint64_t c = 1;
  for (int i = 0; i < j; ++i) {
    c = c * (n - i) / (i + 1);
    if (c > cap) return cap + 1;
  }
  return c;
}

// All nonzero n-bit masks of weight <= ell, ascending within each weight.
std::vector<std::uint32_t> flip_deltas(std::uint32_t n, int ell) {
  std::vector<std::uint32_t> out;
  const std::uint32_t limit = 1u << n;
  for (int w = 1; w <= ell && w <= static_cast<int>(n); ++w) {
    std::uint32_t v = (1u << w) - 1;
    while (v < limit) {
      out.push_back(v);
      std::uint32_t t = v | (v - 1);  // Gosper: next mask of equal weight
      v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
      if (v == 0) break;
    }
  }
  return out;
}

// Frozen bits of sigma's component in the ell-move graph over `sols`.
std::vector<std::uint8_t> frozen_bits(std::uint32_t n,
                                      const std::vector<std::uint32_t>& sols,
                                      std::uint32_t sigma_mask, int ell) {
  auto it = std::lower_bound(sols.begin(), sols.end(), sigma_mask);
  if (it == sols.end() || *it != sigma_mask)
    throw ContractError("assignment does not satisfy the instance");

  // Neighbor strategy: enumerate flip masks when there are fewer of them
  // than solutions, otherwise scan all solutions per node.
  std::uint64_t flips = 0;
  for (int j = 1; j <= ell && j <= static_cast<int>(n); ++j)
    flips += choose_capped(n, j, sols.size() + 1);
  bool use_flips = flips < sols.size();
  std::vector<std::uint32_t> deltas;
  if (use_flips) deltas = flip_deltas(n, ell);

  std::vector<std::uint8_t> visited(sols.size(), 0);
  std::vector<std::uint32_t> stack{
      static_cast<std::uint32_t>(it - sols.begin())};
  visited[stack[0]] = 1;
  std::uint32_t diff_or = 0;
  while (!stack.empty()) {
    std::uint32_t idx = stack.back();
    stack.pop_back();
    std::uint32_t mask = sols[idx];
    diff_or |= mask ^ sigma_mask;
    if (use_flips) {
      for (std::uint32_t d : deltas) {
        std::uint32_t other = mask ^ d;
        auto jt = std::lower_bound(sols.begin(), sols.end(), other);
        if (jt == sols.end() || *jt != other) continue;
        std::uint32_t j = static_cast<std::uint32_t>(jt - sols.begin());
        if (!visited[j]) {
          visited[j] = 1;
          stack.push_back(j);
        }
      }
    } else {
      for (std::uint32_t j = 0; j < sols.size(); ++j)
        if (!visited[j] &&
            std::popcount(mask ^ sols[j]) <= ell) {
          visited[j] = 1;
          stack.push_back(j);
        }
    }
  }
  std::vector<std::uint8_t> frozen(n, 0);
  for (std::uint32_t i = 0; i < n; ++i)
    frozen[i] = ((diff_or >> i) & 1u) == 0 ? 1 : 0;
  return frozen;
}

// Unique surviving edge in which x is essential; x must be singly essential.
std::size_t essential_edge_of(const EssentialHypergraph& g,
                              const StarCore& core, std::uint32_t x) {
  const auto& offs = g.incidence_offsets();
  const auto& flat = g.incidence_edges();
  std::size_t found = g.edge_count();
  for (std::uint32_t i = offs[x]; i < offs[x + 1]; ++i) {
    std::uint32_t e = flat[i];
    if (core.edge_alive[e] && g.edge(e).essential_vertex() == x) {
      if (found != g.edge_count())
        throw InvariantError("vertex essential in two surviving edges");
      found = e;
    }
  }
  if (found == g.edge_count())
    throw InvariantError("singly-essential vertex has no surviving edge");
  return found;
}

void require_in_core(const StarCore& core, const std::vector<std::uint32_t>& s,
                     const char* what) {
  for (std::uint32_t v : s)
    if (v >= core.vertex_alive.size() || !core.vertex_alive[v])
      throw ConfigError(std::string(what) + " contains a non-core vertex");
}

}  // namespace

SolutionGraph build_solution_graph(const CspModel& m, const CspInstance& inst,
                                   int ell) {
  if (ell < 1) throw ConfigError("ell must be at least 1");
  SolutionGraph sg;
  sg.ell = ell;
  sg.solutions = enumerate_solutions(m, inst);
  for (std::uint32_t mask : sg.solutions)
    if (!satisfies(m, inst, assignment_of_mask(mask, inst.n)))
      throw InvariantError("enumerated assignment fails a constraint");
  sg.adjacency.assign(sg.solutions.size(), {});
  for (std::uint32_t i = 0; i < sg.solutions.size(); ++i)
    for (std::uint32_t j = i + 1; j < sg.solutions.size(); ++j)
      if (std::popcount(sg.solutions[i] ^ sg.solutions[j]) <= ell) {
        sg.adjacency[i].push_back(j);
        sg.adjacency[j].push_back(i);
      }
  return sg;
}

std::vector<std::uint8_t> exact_frozen_set(const CspModel& m,
                                           const CspInstance& inst,
                                           const SignVector& sigma, int ell) {
  if (ell < 1) throw ConfigError("ell must be at least 1");
  if (!satisfies(m, inst, sigma))
    throw ContractError("assignment does not satisfy the instance");
  std::vector<std::uint32_t> sols = enumerate_solutions(m, inst);
  return frozen_bits(inst.n, sols, mask_of_assignment(sigma), ell);
}

bool is_flippable(const EssentialHypergraph& g, const StarCore& core,
                  const std::vector<std::uint32_t>& s_set) {
  require_in_core(core, s_set, "flippable candidate");
  std::vector<std::uint8_t> in_s(g.vertex_count(), 0);
  for (std::uint32_t v : s_set) in_s[v] = 1;
  const auto& offs = g.incidence_offsets();
  const auto& flat = g.incidence_edges();
  for (std::uint32_t x : s_set) {
    for (std::uint32_t i = offs[x]; i < offs[x + 1]; ++i) {
      std::uint32_t e = flat[i];
      if (!core.edge_alive[e] || g.edge(e).essential_vertex() != x) continue;
      bool covered = false;
      for (std::uint32_t w : g.edge(e).vertices)
        if (w != x && in_s[w]) {
          covered = true;
          break;
        }
      if (!covered) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> closure(const EssentialHypergraph& g,
                                   const StarCore& core,
                                   const std::vector<std::uint32_t>& a_set) {
  require_in_core(core, a_set, "closure seed");
  // h joins as soon as any other vertex of h's essential edge joins.
  std::vector<std::vector<std::uint32_t>> rev(g.vertex_count());
  auto index_h1 = [&](const std::vector<std::uint32_t>& h1) {
    for (std::uint32_t h : h1) {
      const Hyperedge& e = g.edge(essential_edge_of(g, core, h));
      for (std::uint32_t w : e.vertices)
        if (w != h) rev[w].push_back(h);
    }
  };
  index_h1(core.h1_plus);
  index_h1(core.h1_minus);

  std::vector<std::uint8_t> in_c(g.vertex_count(), 0);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t v : a_set)
    if (!in_c[v]) {
      in_c[v] = 1;
      queue.push_back(v);
    }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::uint32_t v = queue[head];
    for (std::uint32_t h : rev[v])
      if (!in_c[h]) {
        in_c[h] = 1;
        queue.push_back(h);
      }
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
    if (in_c[v]) out.push_back(v);
  return out;
}

bool is_cyclic(const EssentialHypergraph& g, const StarCore& core,
               const std::vector<std::uint32_t>& c_set) {
  require_in_core(core, c_set, "cyclic candidate");
  for (std::uint32_t v : c_set)
    if (!core.in_h1(v))
      throw ConfigError("cyclic candidate contains a vertex not singly essential");
  const std::size_t l = c_set.size();
  if (l == 0) return true;
  std::vector<std::uint32_t> position(g.vertex_count(), kInfiniteDepth);
  for (std::size_t j = 0; j < l; ++j) position[c_set[j]] = j;
  // Bipartite matching: source j may map to any other member found inside
  // j's essential edge; a perfect matching is the permutation.
  std::vector<std::vector<std::uint32_t>> adj(l);
  for (std::size_t j = 0; j < l; ++j) {
    const Hyperedge& e = g.edge(essential_edge_of(g, core, c_set[j]));
    for (std::uint32_t w : e.vertices)
      if (w != c_set[j] && position[w] != kInfiniteDepth)
        adj[j].push_back(position[w]);
  }
  std::vector<int> match_source(l, -1);
  std::vector<std::uint8_t> seen(l, 0);
  auto augment = [&](auto&& self, std::uint32_t s) -> bool {
    for (std::uint32_t t : adj[s]) {
      if (seen[t]) continue;
      seen[t] = 1;
      if (match_source[t] < 0 ||
          self(self, static_cast<std::uint32_t>(match_source[t]))) {
        match_source[t] = static_cast<int>(s);
        return true;
      }
    }
    return false;
  };
  for (std::uint32_t s = 0; s < l; ++s) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!augment(augment, s)) return false;
  }
  return true;
}

FlippableDecomposition decompose_flippable(
    const EssentialHypergraph& g, const StarCore& core,
    const std::vector<std::uint32_t>& s_set) {
  if (!is_flippable(g, core, s_set))
    throw ContractError("set is not flippable");
  std::vector<std::uint32_t> s = s_set;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::vector<std::uint8_t> in_s(g.vertex_count(), 0);
  for (std::uint32_t v : s) in_s[v] = 1;

  FlippableDecomposition d;
  std::vector<std::uint32_t> next(g.vertex_count(), kInfiniteDepth);
  for (std::uint32_t x : s) {
    if (!core.in_h1(x)) {
      d.a_set.push_back(x);
      continue;
    }
    const Hyperedge& e = g.edge(essential_edge_of(g, core, x));
    std::uint32_t target = kInfiniteDepth;
    for (std::uint32_t w : e.vertices)
      if (w != x && in_s[w]) target = std::min(target, w);
    if (target == kInfiniteDepth)
      throw InvariantError("flippable set member lacks a partner");
    d.arcs.emplace_back(x, target);
    next[x] = target;
  }

  // Cycles of the out-degree <= 1 digraph: walk with a colored path.
  std::vector<std::uint8_t> color(g.vertex_count(), 0);  // 0 new 1 path 2 done
  std::vector<std::uint32_t> path;
  for (std::uint32_t start : s) {
    if (color[start] != 0) continue;
    path.clear();
    std::uint32_t v = start;
    while (v != kInfiniteDepth && color[v] == 0) {
      color[v] = 1;
      path.push_back(v);
      v = next[v];
    }
    if (v != kInfiniteDepth && color[v] == 1) {
      auto cycle_begin = std::find(path.begin(), path.end(), v);
      for (auto it = cycle_begin; it != path.end(); ++it)
        d.c_set.push_back(*it);
    }
    for (std::uint32_t u : path) color[u] = 2;
  }
  std::sort(d.c_set.begin(), d.c_set.end());

  // Decomposition guarantees, checked on every call.
  std::vector<std::uint32_t> p_set;
  for (std::uint32_t x : s)
    if (core.in_h1(x)) p_set.push_back(x);
  std::vector<std::uint32_t> a_union_p = d.a_set;
  a_union_p.insert(a_union_p.end(), p_set.begin(), p_set.end());
  if (!is_flippable(g, core, a_union_p))
    throw InvariantError("out-degree-0 part is not weakly flippable");
  if (!is_cyclic(g, core, d.c_set))
    throw InvariantError("cycle part is not cyclic");
  std::vector<std::uint32_t> seed = d.a_set;
  seed.insert(seed.end(), d.c_set.begin(), d.c_set.end());
  std::vector<std::uint32_t> cl = closure(g, core, seed);
  if (!std::includes(cl.begin(), cl.end(), s.begin(), s.end()))
    throw InvariantError("set escapes the closure of its parts");
  return d;
}

std::optional<std::vector<std::uint32_t>> weakly_flippable_witness(
    const EssentialHypergraph& g, const StarCore& core,
    const std::vector<std::uint32_t>& a_set, std::size_t psi, bool heuristic) {
  require_in_core(core, a_set, "weakly flippable candidate");
  for (std::uint32_t v : a_set)
    if (core.in_h1(v))
      throw ConfigError(
          "weakly flippable candidate must avoid singly-essential vertices");

  std::vector<std::uint32_t> h1;
  std::merge(core.h1_plus.begin(), core.h1_plus.end(), core.h1_minus.begin(),
             core.h1_minus.end(), std::back_inserter(h1));

  if (!heuristic) {
    if (h1.size() > 24)
      throw ScaleError(
          "singly-essential layer exceeds 24 vertices; use the heuristic "
          "search");
    std::vector<std::uint32_t> trial = a_set;
    const std::size_t max_size = std::min(psi, h1.size());
    for (std::size_t size = 0; size <= max_size; ++size) {
      // Lexicographic combinations of `size` indices into h1.
      std::vector<std::size_t> idx(size);
      for (std::size_t i = 0; i < size; ++i) idx[i] = i;
      for (;;) {
        trial.resize(a_set.size());
        for (std::size_t i : idx) trial.push_back(h1[i]);
        if (is_flippable(g, core, trial)) {
          std::vector<std::uint32_t> p(trial.begin() + a_set.size(),
                                       trial.end());
          return p;
        }
        std::size_t i = size;
        while (i > 0 && idx[i - 1] == h1.size() - size + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    return std::nullopt;
  }

  // Greedy repair: add a singly-essential vertex to every uncovered edge,
  // preferring one whose own essential edge is already covered. May miss
  // witnesses that the exhaustive search would find.
  std::vector<std::uint8_t> in_s(g.vertex_count(), 0);
  for (std::uint32_t v : a_set) in_s[v] = 1;
  std::vector<std::uint32_t> pending = a_set;
  std::vector<std::uint32_t> p_out;
  const auto& offs = g.incidence_offsets();
  const auto& flat = g.incidence_edges();
  while (!pending.empty()) {
    std::uint32_t x = pending.back();
    pending.pop_back();
    for (std::uint32_t i = offs[x]; i < offs[x + 1]; ++i) {
      std::uint32_t e = flat[i];
      if (!core.edge_alive[e] || g.edge(e).essential_vertex() != x) continue;
      bool covered = false;
      for (std::uint32_t w : g.edge(e).vertices)
        if (w != x && in_s[w]) {
          covered = true;
          break;
        }
      if (covered) continue;
      std::uint32_t best = kInfiniteDepth;
      bool best_settled = false;
      for (std::uint32_t w : g.edge(e).vertices) {
        if (w == x || !core.in_h1(w)) continue;
        const Hyperedge& ew = g.edge(essential_edge_of(g, core, w));
        bool settled = false;
        for (std::uint32_t u : ew.vertices)
          if (u != w && in_s[u]) {
            settled = true;
            break;
          }
        if (settled > best_settled ||
            (settled == best_settled && w < best)) {
          best = w;
          best_settled = settled;
        }
      }
      if (best == kInfiniteDepth) return std::nullopt;
      if (p_out.size() + 1 > psi) return std::nullopt;
      in_s[best] = 1;
      p_out.push_back(best);
      pending.push_back(best);
    }
  }
  std::vector<std::uint32_t> trial = a_set;
  trial.insert(trial.end(), p_out.begin(), p_out.end());
  if (!is_flippable(g, core, trial))
    throw InvariantError("greedy witness failed verification");
  std::sort(p_out.begin(), p_out.end());
  return p_out;
}

ChainWitness chain_witness(const CspInstance& inst,
                           const EssentialHypergraph& g, std::uint32_t x,
                           std::uint32_t radius) {
  std::vector<std::uint32_t> order = ball_peel_order(g, x, radius);
  if (order.empty() || order.back() != x)
    throw InvariantError("restricted peel does not remove the target");
  std::vector<std::uint32_t> pos(g.vertex_count(), kInfiniteDepth);
  for (std::uint32_t i = 0; i < order.size(); ++i) pos[order[i]] = i;

  // x plus one designated killer (earliest removed) per essential edge of
  // every chain member, recursively.
  std::vector<std::uint8_t> needed(g.vertex_count(), 0);
  std::vector<std::uint32_t> work{x};
  needed[x] = 1;
  const auto& offs = g.incidence_offsets();
  const auto& flat = g.incidence_edges();
  while (!work.empty()) {
    std::uint32_t y = work.back();
    work.pop_back();
    for (std::uint32_t i = offs[y]; i < offs[y + 1]; ++i) {
      const Hyperedge& f = g.edge(flat[i]);
      if (f.essential_vertex() != y) continue;
      std::uint32_t killer = kInfiniteDepth;
      for (std::uint32_t w : f.vertices)
        if (w != y && pos[w] < pos[y] &&
            (killer == kInfiniteDepth || pos[w] < pos[killer]))
          killer = w;
      if (killer == kInfiniteDepth)
        throw InvariantError("chain member has an unkilled essential edge");
      if (!needed[killer]) {
        needed[killer] = 1;
        work.push_back(killer);
      }
    }
  }

  ChainWitness cw;
  for (std::uint32_t v : order)
    if (needed[v]) cw.chain.push_back(v);

  // Berge test: union constraint nodes with their variables; a repeated
  // union inside one component is a cycle.
  std::vector<std::uint32_t> parent(inst.n + inst.constraints.size());
  for (std::uint32_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::uint32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  cw.acyclic = true;
  for (std::size_t c = 0; c < inst.constraints.size(); ++c) {
    bool touches = false;
    for (std::uint32_t v : inst.constraints[c].vars)
      if (needed[v]) {
        touches = true;
        break;
      }
    if (!touches) continue;
    std::uint32_t cnode = inst.n + static_cast<std::uint32_t>(c);
    for (std::uint32_t v : inst.constraints[c].vars) {
      std::uint32_t ra = find(cnode), rb = find(v);
      if (ra == rb) {
        cw.acyclic = false;
      } else {
        parent[rb] = ra;
      }
    }
  }
  return cw;
}

FreezeScanResult frozen_scan(const CspModel& m, std::uint32_t n,
                             std::uint64_t M, const std::vector<int>& ell_list,
                             std::uint32_t trials, std::uint64_t seed,
                             int jobs) {
  if (ell_list.empty()) throw ConfigError("ell list must not be empty");
  for (int ell : ell_list)
    if (ell < 1) throw ConfigError("ell must be at least 1");
  if (n > kEnumerationCap)
    throw ScaleError("exact freezing supports at most 24 variables");

  struct Trial {
    std::vector<FreezeScanRow> rows;
    FreezeTrialSummary summary;
  };
  auto run_one = [&](std::uint32_t t) -> Trial {
    Trial out;
    std::uint64_t trial_seed = derive_seed(seed, t);
    UniformSmallPair us = sample_uniform_small(m, n, M, trial_seed);
    const CspInstance& inst = us.instance;
    std::vector<std::uint32_t> sols = enumerate_solutions(m, inst);
    std::uint32_t sigma_mask = mask_of_assignment(us.sigma);

    EssentialHypergraph g = build_gamma(m, inst, us.sigma);
    StarCore core = peel_star_core(g).core;
    std::vector<std::uint32_t> depth = exact_star_depth(g);

    std::vector<std::vector<std::uint8_t>> frozen;
    frozen.reserve(ell_list.size());
    for (int ell : ell_list)
      frozen.push_back(frozen_bits(n, sols, sigma_mask, ell));
    std::vector<std::uint8_t> frozen1;
    auto one = std::find(ell_list.begin(), ell_list.end(), 1);
    if (one != ell_list.end())
      frozen1 = frozen[one - ell_list.begin()];
    else
      frozen1 = frozen_bits(n, sols, sigma_mask, 1);

    out.summary.seed = trial_seed;
    out.summary.solution_count = sols.size();
    out.summary.core_size = core.vertex_count();
    out.summary.agreement.assign(ell_list.size(), {0, 0, 0, 0});

    out.rows.reserve(n);
    for (std::uint32_t v = 0; v < n; ++v) {
      FreezeScanRow row;
      row.trial = t;
      row.variable = v;
      row.in_core = core.vertex_alive[v] != 0;
      row.star_depth = depth[v];
      for (std::size_t j = 0; j < ell_list.size(); ++j) {
        row.frozen_at.push_back(frozen[j][v]);
        auto& cell = out.summary.agreement[j];
        std::size_t slot = (row.in_core ? 0 : 2) + (frozen[j][v] ? 0 : 1);
        cell[slot]++;
      }
      if (!row.in_core) {
        ChainWitness cw = chain_witness(inst, g, v, depth[v]);
        row.near_short_cycle = !cw.acyclic;
        if (cw.acyclic && frozen1[v])
          throw InvariantError(
              "peeled variable with acyclic chain neighborhood is 1-frozen");
      }
      out.rows.push_back(std::move(row));
    }

    // Every solution pair: the difference restricted to the left core must
    // be flippable there.
    for (std::uint32_t mask_l : sols) {
      EssentialHypergraph g_local;
      StarCore c_local;
      const EssentialHypergraph* gp = &g;
      const StarCore* cp = &core;
      if (mask_l != sigma_mask) {
        g_local = build_gamma(m, inst, assignment_of_mask(mask_l, n));
        c_local = peel_star_core(g_local).core;
        gp = &g_local;
        cp = &c_local;
      }
      const EssentialHypergraph& gref = *gp;
      const StarCore& cref = *cp;
      if (cref.empty()) {
        out.summary.pair_checks += sols.size() - 1;
        continue;
      }
      for (std::uint32_t mask_r : sols) {
        if (mask_r == mask_l) continue;
        std::vector<std::uint32_t> diff;
        std::uint32_t bits = mask_l ^ mask_r;
        for (std::uint32_t v = 0; v < n; ++v)
          if (((bits >> v) & 1u) && cref.vertex_alive[v]) diff.push_back(v);
        if (!is_flippable(gref, cref, diff))
          throw InvariantError("solution pair difference set is not flippable");
        out.summary.pair_checks++;
      }
    }
    return out;
  };

  std::vector<Trial> per_trial = run_trials(trials, jobs, run_one);
  FreezeScanResult result;
  result.ell_list = ell_list;
  for (Trial& t : per_trial) {
    for (FreezeScanRow& r : t.rows) result.rows.push_back(std::move(r));
    result.trials.push_back(std::move(t.summary));
  }
  return result;
}

}  // namespace starcore
