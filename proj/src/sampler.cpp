#include "starcore/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace starcore {

namespace {

constexpr std::uint64_t kClauseRejectionCap = 1000000;
constexpr std::uint64_t kInstanceRetryCap = 10000;

std::vector<double> cumulative_weights(const CspModel& m) {
  std::vector<double> c(m.member_count());
  double acc = 0;
  for (std::size_t i = 0; i < m.member_count(); ++i) {
    acc += m.weight(i);
    c[i] = acc;
  }
  c.back() = 1.0;
  return c;
}

// Ordered k-tuple of distinct variables, uniform among all such tuples.
std::vector<std::uint32_t> draw_tuple(Rng& rng, std::uint32_t n, int k) {
  std::vector<std::uint32_t> t;
  t.reserve(k);
  while (static_cast<int>(t.size()) < k) {
    auto v = static_cast<std::uint32_t>(rng.below(n));
    if (std::find(t.begin(), t.end(), v) == t.end()) t.push_back(v);
  }
  return t;
}

}  // namespace

CspInstance sample_csp(const CspModel& m, std::uint32_t n, std::uint64_t M,
                       std::uint64_t seed) {
  if (n < static_cast<std::uint32_t>(m.arity()))
    throw ConfigError("need at least k variables");
  Rng rng(seed);
  auto cum = cumulative_weights(m);
  CspInstance inst;
  inst.n = n;
  inst.k = m.arity();
  inst.constraints.reserve(M);
  for (std::uint64_t i = 0; i < M; ++i) {
    Constraint c;
    c.member = static_cast<std::uint32_t>(rng.pick_cumulative(cum));
    c.vars = draw_tuple(rng, n, m.arity());
    inst.constraints.push_back(std::move(c));
  }
  return inst;
}

PlantedPair sample_planted_given(const CspModel& m, SignVector sigma,
                                 std::uint64_t M, Rng& rng) {
  const auto n = static_cast<std::uint32_t>(sigma.size());
  if (n < static_cast<std::uint32_t>(m.arity()))
    throw ConfigError("need at least k variables");
  auto cum = cumulative_weights(m);
  PlantedPair out;
  out.instance.n = n;
  out.instance.k = m.arity();
  out.sigma = std::move(sigma);
  for (std::uint64_t i = 0; i < M; ++i) {
    std::uint64_t tries = 0;
    for (;;) {
      if (++tries > kClauseRejectionCap)
        throw SamplingError(
            "planted clause rejection cap hit; the assignment admits no "
            "satisfying clause draw");
      Constraint c;
      c.member = static_cast<std::uint32_t>(rng.pick_cumulative(cum));
      c.vars = draw_tuple(rng, n, m.arity());
      if (m.member(c.member).eval(local_pattern(c, out.sigma))) {
        out.instance.constraints.push_back(std::move(c));
        break;
      }
      ++out.rejections;
    }
  }
  return out;
}

PlantedPair sample_planted(const CspModel& m, std::uint32_t n, std::uint64_t M,
                           std::uint64_t seed) {
  Rng rng(seed);
  SignVector sigma(n);
  for (auto& s : sigma) s = static_cast<std::int8_t>(rng.coin_sign());
  return sample_planted_given(m, std::move(sigma), M, rng);
}

UniformSmallPair sample_uniform_small(const CspModel& m, std::uint32_t n,
                                      std::uint64_t M, std::uint64_t seed) {
  if (n > kEnumerationCap)
    throw ScaleError("sample_uniform_small supports n <= 24");
  Rng rng(seed);
  UniformSmallPair out;
  for (;;) {
    CspInstance inst = sample_csp(m, n, M, rng.next());
    auto sols = enumerate_solutions(m, inst);
    if (!sols.empty()) {
      std::uint32_t pick = sols[rng.below(sols.size())];
      out.instance = std::move(inst);
      out.sigma = assignment_of_mask(pick, n);
      out.solution_count = sols.size();
      return out;
    }
    if (++out.instance_retries > kInstanceRetryCap)
      throw SamplingError(
          "no satisfiable instance found within the retry budget");
  }
}

std::size_t TypeWeights::index_of(const EdgeType& t) const {
  for (std::size_t i = 0; i < types.size(); ++i)
    if (types[i] == t) return i;
  throw ConfigError("unknown edge type");
}

TypeWeights type_weights(const CspModel& m, std::uint64_t n_plus,
                         std::uint64_t n_minus) {
  const auto& pr = m.properties();
  if (!pr.feasible || !pr.one_essential)
    throw ConfigError("type_weights requires a feasible 1-essential model");
  const int k = m.arity();
  if (n_plus + n_minus < static_cast<std::uint64_t>(k))
    throw ConfigError("need at least k vertices");
  // P(pattern) for an ordered distinct tuple depends only on the number of
  // +1 entries u: (n+)_u (n-)_(k-u) / (n)_k. Compute the falling-factorial
  // products; patterns needing more vertices of one sign than exist get 0.
  std::vector<double> pattern_prob(k + 1, 0.0);
  const double n_total = static_cast<double>(n_plus + n_minus);
  for (int u = 0; u <= k; ++u) {
    if (static_cast<std::uint64_t>(u) > n_plus ||
        static_cast<std::uint64_t>(k - u) > n_minus)
      continue;
    double p = 1;
    for (int j = 0; j < u; ++j) p *= static_cast<double>(n_plus - j);
    for (int j = 0; j < k - u; ++j) p *= static_cast<double>(n_minus - j);
    for (int j = 0; j < k; ++j) p /= (n_total - j);
    pattern_prob[u] = p;
  }

  TypeWeights tw;
  tw.k = k;
  for (int s : {1, -1})
    for (int a = 0; a <= k - 1; ++a)
      tw.types.push_back(EdgeType{s, a, k - 1 - a});
  tw.w.assign(tw.types.size(), 0.0);

  double sat_mass = 0, essential_mass = 0;
  for (std::size_t mi = 0; mi < m.member_count(); ++mi) {
    const auto& f = m.member(mi);
    const double wt = m.weight(mi);
    for (std::size_t p = 0; p < f.table_size(); ++p) {
      if (!f.eval_index(p)) continue;
      int u = std::popcount(p);
      double mass = wt * pattern_prob[u];
      if (mass == 0) continue;
      sat_mass += mass;
      auto ess = f.essential_variable(p);
      if (!ess) continue;
      essential_mass += mass;
      auto x = pattern_of(p, k);
      EdgeType t;
      t.s = x[*ess];
      t.a = u - (t.s == 1 ? 1 : 0);
      t.b = (k - 1) - t.a;
      tw.w[tw.index_of(t)] += mass;
    }
  }
  if (sat_mass <= 0)
    throw SamplingError("no satisfying pattern has positive probability");
  tw.p_essential = essential_mass / sat_mass;
  if (essential_mass > 0)
    for (auto& v : tw.w) v /= essential_mass;
  tw.w_plus.assign(tw.types.size(), 0.0);
  tw.w_minus.assign(tw.types.size(), 0.0);
  double plus = 0, minus = 0;
  for (std::size_t i = 0; i < tw.types.size(); ++i)
    (tw.types[i].s == 1 ? plus : minus) += tw.w[i];
  tw.mass_plus = plus;
  for (std::size_t i = 0; i < tw.types.size(); ++i) {
    if (tw.types[i].s == 1 && plus > 0) tw.w_plus[i] = tw.w[i] / plus;
    if (tw.types[i].s == -1 && minus > 0) tw.w_minus[i] = tw.w[i] / minus;
  }
  return tw;
}

namespace {

// Draw `count` distinct vertices from pool, avoiding `used`; appends to out.
void draw_from_pool(Rng& rng, const std::vector<std::uint32_t>& pool,
                    int count, std::vector<std::uint32_t>& out) {
  int placed = 0;
  std::uint64_t guard = 0;
  while (placed < count) {
    if (++guard > kClauseRejectionCap)
      throw SamplingError("vertex pool too small for requested edge type");
    std::uint32_t v = pool[rng.below(pool.size())];
    if (std::find(out.begin(), out.end(), v) == out.end()) {
      out.push_back(v);
      ++placed;
    }
  }
}

Hyperedge draw_edge(Rng& rng, const EdgeType& type, std::uint32_t essential,
                    const std::vector<std::uint32_t>& pool_plus,
                    const std::vector<std::uint32_t>& pool_minus) {
  Hyperedge e;
  e.type = type;
  e.essential_pos = 0;
  e.vertices.push_back(essential);
  draw_from_pool(rng, pool_plus, type.a, e.vertices);
  draw_from_pool(rng, pool_minus, type.b, e.vertices);
  return e;
}

}  // namespace

EssentialHypergraph sample_model_a(const CspModel& m, std::uint32_t n,
                                   std::uint64_t M, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::int8_t> signs(n);
  std::vector<std::uint32_t> pool_plus, pool_minus;
  for (std::uint32_t v = 0; v < n; ++v) {
    signs[v] = static_cast<std::int8_t>(rng.coin_sign());
    (signs[v] == 1 ? pool_plus : pool_minus).push_back(v);
  }
  TypeWeights tw = type_weights(m, pool_plus.size(), pool_minus.size());
  std::vector<double> cum(tw.w.size());
  double acc = 0;
  for (std::size_t i = 0; i < tw.w.size(); ++i) {
    acc += tw.w[i];
    cum[i] = acc;
  }
  if (acc <= 0) throw SamplingError("model admits no essential edge types");
  for (auto& c : cum) c /= acc;

  std::vector<Hyperedge> edges;
  edges.reserve(M);
  for (std::uint64_t i = 0; i < M; ++i) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (attempt > kClauseRejectionCap)
        throw SamplingError("could not place an edge within the retry budget");
      const EdgeType& type = tw.types[rng.pick_cumulative(cum)];
      const auto& ess_pool = type.s == 1 ? pool_plus : pool_minus;
      if (ess_pool.empty()) continue;
      // The essential vertex occupies one slot of its sign class.
      std::uint64_t need_plus = type.a + (type.s == 1 ? 1 : 0);
      std::uint64_t need_minus = type.b + (type.s == -1 ? 1 : 0);
      if (need_plus > pool_plus.size() || need_minus > pool_minus.size())
        continue;
      std::uint32_t essential = ess_pool[rng.below(ess_pool.size())];
      edges.push_back(
          draw_edge(rng, type, essential, pool_plus, pool_minus));
      break;
    }
  }
  return EssentialHypergraph(n, std::move(signs), std::move(edges));
}

EssentialHypergraph sample_essential_model(
    const std::vector<std::int8_t>& signs,
    const std::vector<std::uint32_t>& essential_vertices, const CspModel& m,
    std::uint64_t seed) {
  const auto n = static_cast<std::uint32_t>(signs.size());
  Rng rng(seed);
  std::vector<std::uint32_t> pool_plus, pool_minus;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (signs[v] != 1 && signs[v] != -1)
      throw ConfigError("vertex signs must be +1 or -1");
    (signs[v] == 1 ? pool_plus : pool_minus).push_back(v);
  }
  TypeWeights tw = type_weights(m, pool_plus.size(), pool_minus.size());

  auto conditional_cumulative = [&](int s) {
    const auto& w = s == 1 ? tw.w_plus : tw.w_minus;
    std::vector<double> cum(w.size());
    double acc = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      acc += w[i];
      cum[i] = acc;
    }
    if (acc <= 0)
      throw SamplingError(
          "model admits no essential edge types for the requested sign");
    for (auto& c : cum) c /= acc;
    return cum;
  };
  std::vector<double> cum_plus = conditional_cumulative(1);
  std::vector<double> cum_minus = conditional_cumulative(-1);

  std::vector<Hyperedge> edges;
  edges.reserve(essential_vertices.size());
  for (std::uint32_t essential : essential_vertices) {
    if (essential >= n) throw ConfigError("essential vertex out of range");
    const int s = signs[essential];
    const auto& cum = s == 1 ? cum_plus : cum_minus;
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (attempt > kClauseRejectionCap)
        throw SamplingError("could not place an edge within the retry budget");
      const EdgeType& type = tw.types[rng.pick_cumulative(cum)];
      std::uint64_t need_plus = type.a + (s == 1 ? 1 : 0);
      std::uint64_t need_minus = type.b + (s == -1 ? 1 : 0);
      if (need_plus > pool_plus.size() || need_minus > pool_minus.size())
        continue;
      edges.push_back(draw_edge(rng, type, essential, pool_plus, pool_minus));
      break;
    }
  }
  return EssentialHypergraph(
      n, std::vector<std::int8_t>(signs.begin(), signs.end()),
      std::move(edges));
}

double expected_plus_fanout(const TypeWeights& tw) {
  double g = 0;
  for (std::size_t i = 0; i < tw.types.size(); ++i)
    if (tw.types[i].s == 1) g += tw.types[i].a * tw.w_plus[i];
  return g;
}

}  // namespace starcore
