#pragma once

#include <cstdint>

#include "starcore/instance.hpp"
#include "starcore/model.hpp"

namespace starcore {

struct GreedyConfig {
  std::uint32_t repair_budget = 30;  // max distinct variables per repair
  std::uint64_t walk_cap = 10000;    // max search nodes expanded per repair
};

struct GreedyResult {
  std::uint64_t seed = 0;
  std::uint64_t target_m = 0;
  std::uint64_t reached_m = 0;  // constraints held when the run ended
  bool success = false;
  std::uint64_t repairs = 0;          // violated constraints fixed
  std::uint64_t repair_flips = 0;     // variables changed across repairs
  std::uint64_t walk_expansions = 0;  // search nodes expanded in total
};

// One constraint at a time: keep a working solution; when the next
// constraint arrives violated, search for a nearby assignment satisfying
// everything accepted plus the newcomer. Moves flip one variable at a time
// and never break an accepted constraint; candidates stay within
// constraints already touched by the repair. Heuristic: a failed repair
// ends the run without proving anything.
GreedyResult greedy_solve(const CspModel& m, std::uint32_t n, std::uint64_t M,
                          std::uint64_t seed, const GreedyConfig& cfg = {});

}  // namespace starcore
