#pragma once

#include <cstdint>
#include <vector>

#include "starcore/hypergraph.hpp"
#include "starcore/instance.hpp"
#include "starcore/rng.hpp"

namespace starcore {

// M independent constraints: member by weight, ordered k-tuple of distinct
// variables uniformly.
CspInstance sample_csp(const CspModel& m, std::uint32_t n, std::uint64_t M,
                       std::uint64_t seed);

struct PlantedPair {
  CspInstance instance;
  SignVector sigma;
  std::uint64_t rejections = 0;  // total rejected (tuple, member) draws
};

// Uniform sigma, then per clause rejection sampling: redraw the whole
// (tuple, member) pair until sigma satisfies it.
PlantedPair sample_planted(const CspModel& m, std::uint32_t n, std::uint64_t M,
                           std::uint64_t seed);
PlantedPair sample_planted_given(const CspModel& m, SignVector sigma,
                                 std::uint64_t M, Rng& rng);

struct UniformSmallPair {
  CspInstance instance;
  SignVector sigma;
  std::uint64_t instance_retries = 0;  // unsatisfiable instances discarded
  std::uint64_t solution_count = 0;
};

// Uniform over (instance, solution): draw an instance, enumerate all
// solutions (n <= 24), pick one uniformly; redraw unsatisfiable instances
// up to 10^4 times.
UniformSmallPair sample_uniform_small(const CspModel& m, std::uint32_t n,
                                      std::uint64_t M, std::uint64_t seed);

// Exact conditional type distribution for a planted clause given the part
// sizes: P(type | clause has an essential variable). Requires a feasible,
// 1-essential model.
struct TypeWeights {
  int k = 0;
  std::vector<EdgeType> types;    // the 2k possible types
  std::vector<double> w;          // P(type | essential)
  std::vector<double> w_plus;     // conditioned on s = +1
  std::vector<double> w_minus;    // conditioned on s = -1
  double p_essential = 0;         // P(clause has an essential variable)
  double mass_plus = 0;           // P(s = +1 | essential)

  std::size_t index_of(const EdgeType& t) const;
};

TypeWeights type_weights(const CspModel& m, std::uint64_t n_plus,
                         std::uint64_t n_minus);

// Hypergraph sampled directly: uniform vertex partition, then M edges with
// type drawn from the exact weights and vertices drawn from the sign pools.
EssentialHypergraph sample_model_a(const CspModel& m, std::uint32_t n,
                                   std::uint64_t M, std::uint64_t seed);

// Same, but the partition and each edge's essential vertex are inputs;
// types are drawn conditioned on the essential vertex's sign.
EssentialHypergraph sample_essential_model(
    const std::vector<std::int8_t>& signs,
    const std::vector<std::uint32_t>& essential_vertices, const CspModel& m,
    std::uint64_t seed);

// Expected number of +1 non-essential vertices on an edge whose essential
// vertex is +1: sum over types of a * w_plus.
double expected_plus_fanout(const TypeWeights& tw);

}  // namespace starcore
