#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "starcore/core.hpp"
#include "starcore/hypergraph.hpp"
#include "starcore/instance.hpp"

namespace starcore {

// Move graph over all solutions: masks ascending, edges between solutions
// differing on at most ell variables. Exhaustive, n <= 24.
struct SolutionGraph {
  int ell = 0;
  std::vector<std::uint32_t> solutions;
  std::vector<std::vector<std::uint32_t>> adjacency;  // indices, symmetric
};

SolutionGraph build_solution_graph(const CspModel& m, const CspInstance& inst,
                                   int ell);

// frozen[x] = 1 when every solution reachable from sigma by steps changing
// at most ell variables agrees with sigma on x.
std::vector<std::uint8_t> exact_frozen_set(const CspModel& m,
                                           const CspInstance& inst,
                                           const SignVector& sigma, int ell);

// S is flippable when every surviving edge whose essential vertex lies in S
// contains a second S-vertex. S must live inside the core.
bool is_flippable(const EssentialHypergraph& g, const StarCore& core,
                  const std::vector<std::uint32_t>& s_set);

// Out-degree <= 1 digraph on a flippable S: each S-vertex essential in
// exactly one surviving edge points at the lowest-indexed other S-vertex of
// that edge.
struct FlippableDecomposition {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;
  std::vector<std::uint32_t> a_set;  // S-vertices essential in 2+ edges
  std::vector<std::uint32_t> c_set;  // vertices on arc cycles
};

FlippableDecomposition decompose_flippable(
    const EssentialHypergraph& g, const StarCore& core,
    const std::vector<std::uint32_t>& s_set);

// a_set plus every singly-essential vertex chaining into it through
// singly-essential vertices (steps move into the current essential edge).
std::vector<std::uint32_t> closure(const EssentialHypergraph& g,
                                   const StarCore& core,
                                   const std::vector<std::uint32_t>& a_set);

// Smallest P among the singly-essential core vertices with a_set union P
// flippable, |P| <= psi; exhaustive over subsets by increasing size, so the
// singly-essential layer is capped at 24 unless heuristic (greedy repair,
// may miss witnesses) is requested.
std::optional<std::vector<std::uint32_t>> weakly_flippable_witness(
    const EssentialHypergraph& g, const StarCore& core,
    const std::vector<std::uint32_t>& a_set, std::size_t psi,
    bool heuristic = false);

// True when some permutation pi without fixed points maps each member x to
// another member inside x's essential edge. Members must be singly
// essential.
bool is_cyclic(const EssentialHypergraph& g, const StarCore& core,
               const std::vector<std::uint32_t>& c_set);

// Removal chain ending at x extracted from the radius-limited peel: x plus,
// recursively, one designated killer per essential edge of each member.
// acyclic = the constraints touching the chain form a join forest (their
// variable incidence graph has no cycle).
struct ChainWitness {
  std::vector<std::uint32_t> chain;  // removal order, x last
  bool acyclic = false;
};

ChainWitness chain_witness(const CspInstance& inst,
                           const EssentialHypergraph& g, std::uint32_t x,
                           std::uint32_t radius);

struct FreezeScanRow {
  std::uint32_t trial = 0;
  std::uint32_t variable = 0;
  bool in_core = false;
  std::uint32_t star_depth = 0;  // kInfiniteDepth inside the core
  std::vector<std::uint8_t> frozen_at;  // parallel to ell_list
  bool near_short_cycle = false;  // peeled, but chain neighborhood has a cycle
};

struct FreezeTrialSummary {
  std::uint64_t seed = 0;
  std::uint64_t solution_count = 0;
  std::uint64_t pair_checks = 0;  // solution pairs whose flip set was verified
  std::uint64_t core_size = 0;
  // Per ell: [core & frozen, core & unfrozen, peeled & frozen, peeled &
  // unfrozen] variable counts.
  std::vector<std::array<std::uint64_t, 4>> agreement;
};

struct FreezeScanResult {
  std::vector<int> ell_list;
  std::vector<FreezeScanRow> rows;  // trial-major, variable-minor
  std::vector<FreezeTrialSummary> trials;
};

// Per trial: uniform (instance, solution) pair, exact frozen sets for each
// ell, peeling against the exact depths, and two always-on checks: every
// solution pair's flip set is flippable in the left solution's core, and a
// peeled variable with acyclic chain neighborhood is never 1-frozen.
FreezeScanResult frozen_scan(const CspModel& m, std::uint32_t n,
                             std::uint64_t M, const std::vector<int>& ell_list,
                             std::uint32_t trials, std::uint64_t seed,
                             int jobs = 1);

}  // namespace starcore
