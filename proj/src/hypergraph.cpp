#include "starcore/hypergraph.hpp"

#include <algorithm>
#include <string>

namespace starcore {

EssentialHypergraph::EssentialHypergraph(std::uint32_t n,
                                         std::vector<std::int8_t> signs,
                                         std::vector<Hyperedge> edges)
    : n_(n), signs_(std::move(signs)), edges_(std::move(edges)) {
  if (signs_.size() != n_)
    throw ConfigError("sign vector length does not match vertex count");
  for (auto s : signs_) {
    if (s != 1 && s != -1) throw ConfigError("vertex signs must be +1 or -1");
    (s == 1 ? plus_count_ : minus_count_)++;
  }
  essential_degree_.assign(n_, 0);
  std::vector<std::uint32_t> counts(n_ + 1, 0);
  for (const auto& e : edges_) {
    if (e.vertices.empty()) throw ConfigError("hyperedge with no vertices");
    if (e.essential_pos >= e.vertices.size())
      throw ConfigError("essential position out of range");
    for (auto v : e.vertices) {
      if (v >= n_) throw ConfigError("hyperedge vertex out of range");
      ++counts[v + 1];
    }
    ++essential_degree_[e.essential_vertex()];
  }
  offsets_.resize(n_ + 1);
  offsets_[0] = 0;
  for (std::uint32_t v = 0; v < n_; ++v)
    offsets_[v + 1] = offsets_[v] + counts[v + 1];
  flat_.resize(offsets_[n_]);
  std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t e = 0; e < edges_.size(); ++e)
    for (auto v : edges_[e].vertices) flat_[cursor[v]++] = e;
}

void EssentialHypergraph::check_consistent() const {
  for (const auto& e : edges_) {
    auto sorted = e.vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvariantError("hyperedge repeats a vertex");
    int a = 0, b = 0;
    for (std::uint32_t i = 0; i < e.vertices.size(); ++i) {
      if (i == e.essential_pos) continue;
      (signs_[e.vertices[i]] == 1 ? a : b)++;
    }
    if (signs_[e.essential_vertex()] != e.type.s || a != e.type.a ||
        b != e.type.b)
      throw InvariantError("hyperedge type disagrees with vertex signs");
  }
}

EssentialHypergraph build_gamma(const CspModel& m, const CspInstance& inst,
                                const SignVector& sigma) {
  if (sigma.size() != inst.n)
    throw ConfigError("assignment length does not match instance");
  if (!m.properties().one_essential)
    throw ConfigError("build_gamma requires a 1-essential model");
  std::vector<Hyperedge> edges;
  for (const auto& c : inst.constraints) {
    SignVector x = local_pattern(c, sigma);
    const auto& f = m.member(c.member);
    if (!f.eval(x))
      throw ContractError("assignment does not satisfy the instance");
    auto ess = f.essential_variable(x);
    if (!ess) continue;
    Hyperedge e;
    e.vertices = c.vars;
    e.essential_pos = static_cast<std::uint32_t>(*ess);
    e.type.s = x[*ess];
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (static_cast<int>(i) == *ess) continue;
      (x[i] == 1 ? e.type.a : e.type.b)++;
    }
    edges.push_back(std::move(e));
  }
  return EssentialHypergraph(
      inst.n, std::vector<std::int8_t>(sigma.begin(), sigma.end()),
      std::move(edges));
}

}  // namespace starcore
