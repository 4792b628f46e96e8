#pragma once

#include <cstdint>
#include <vector>

#include "starcore/instance.hpp"

namespace starcore {

// Edge classification: sign of the essential vertex, then how many
// non-essential vertices carry +1 (a) and -1 (b); a + b = k - 1.
struct EdgeType {
  int s = 0;
  int a = 0;
  int b = 0;
  bool operator==(const EdgeType&) const = default;
};

struct Hyperedge {
  std::vector<std::uint32_t> vertices;
  std::uint32_t essential_pos = 0;  // position inside vertices
  EdgeType type;

  std::uint32_t essential_vertex() const { return vertices[essential_pos]; }
};

// Hypergraph of constraints that have an essential variable under a fixed
// satisfying assignment, with vertices labelled by their sign.
class EssentialHypergraph {
 public:
  EssentialHypergraph() = default;
  EssentialHypergraph(std::uint32_t n, std::vector<std::int8_t> signs,
                      std::vector<Hyperedge> edges);

  std::uint32_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  int sign(std::uint32_t v) const { return signs_[v]; }
  const std::vector<std::int8_t>& signs() const { return signs_; }
  const Hyperedge& edge(std::size_t e) const { return edges_[e]; }
  const std::vector<Hyperedge>& edges() const { return edges_; }

  // Flat incidence (CSR): edge ids containing each vertex.
  const std::vector<std::uint32_t>& incidence_offsets() const {
    return offsets_;
  }
  const std::vector<std::uint32_t>& incidence_edges() const { return flat_; }
  std::uint32_t degree(std::uint32_t v) const {
    return offsets_[v + 1] - offsets_[v];
  }
  // Number of edges where v is the essential vertex.
  std::uint32_t essential_degree(std::uint32_t v) const {
    return essential_degree_[v];
  }

  std::uint64_t plus_count() const { return plus_count_; }
  std::uint64_t minus_count() const { return minus_count_; }

  // Consistency of every edge: distinct vertices in range, essential sign
  // matching the type, and (a, b) matching the non-essential signs.
  void check_consistent() const;

 private:
  std::uint32_t n_ = 0;
  std::vector<std::int8_t> signs_;
  std::vector<Hyperedge> edges_;
  std::vector<std::uint32_t> offsets_, flat_;
  std::vector<std::uint32_t> essential_degree_;
  std::uint64_t plus_count_ = 0, minus_count_ = 0;
};

// Extracts the essential hypergraph of (instance, sigma): one hyperedge per
// constraint with an essential variable. sigma must satisfy the instance.
EssentialHypergraph build_gamma(const CspModel& m, const CspInstance& inst,
                                const SignVector& sigma);

}  // namespace starcore
