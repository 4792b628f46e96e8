#include "starcore/greedy.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "starcore/errors.hpp"
#include "starcore/rng.hpp"
#include "starcore/sampler.hpp"

namespace starcore {

GreedyResult greedy_solve(const CspModel& m, std::uint32_t n, std::uint64_t M,
                          std::uint64_t seed, const GreedyConfig& cfg) {
  if (n == 0) throw ConfigError("n must be positive");
  if (cfg.repair_budget == 0)
    throw ConfigError("repair budget must be positive");
  CspInstance stream = sample_csp(m, n, M, derive_seed(seed, 1));
  Rng rng(derive_seed(seed, 2));
  SignVector sigma(n);
  for (auto& s : sigma) s = rng.coin_sign();

  GreedyResult res;
  res.seed = seed;
  res.target_m = M;

  std::vector<std::vector<std::uint32_t>> incidence(n);  // accepted ids

  auto eval_with = [&](const Constraint& c, const SignVector& a) {
    std::uint32_t idx = 0;
    for (std::uint32_t v : c.vars) idx = (idx << 1) | (a[v] == 1 ? 1u : 0u);
    return m.member(c.member).eval_index(idx);
  };

  // Breadth-first over change sets.  A node is the set of variables flipped
  // relative to sigma; it is a goal when the newcomer and every accepted
  // constraint hold.  Children toggle one variable of a currently violated
  // constraint, so a flip that breaks constraints forces follow-up flips
  // inside them and the search traces the same cascades peeling does.
  auto attempt_repair =
      [&](const Constraint& target) -> std::optional<std::vector<std::uint32_t>> {
    std::set<std::vector<std::uint32_t>> visited;
    std::vector<std::vector<std::uint32_t>> queue;
    queue.push_back({});
    visited.insert({});
    SignVector work = sigma;
    std::vector<std::uint32_t> toggled;
    std::uint64_t expanded = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      if (expanded >= cfg.walk_cap) break;
      ++expanded;
      ++res.walk_expansions;
      const std::vector<std::uint32_t> flips = queue[head];  // push_back below reallocates
      for (std::uint32_t v : toggled) work[v] = sigma[v];
      toggled = flips;
      for (std::uint32_t v : flips) work[v] = -sigma[v];

      std::vector<std::uint32_t> cand;
      if (!eval_with(target, work)) cand = target.vars;
      std::vector<std::uint32_t> touched;
      for (std::uint32_t v : flips)
        for (std::uint32_t id : incidence[v]) touched.push_back(id);
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (std::uint32_t id : touched) {
        const Constraint& c = stream.constraints[id];
        if (!eval_with(c, work))
          cand.insert(cand.end(), c.vars.begin(), c.vars.end());
      }
      if (cand.empty()) return flips;  // everything satisfied
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

      for (std::uint32_t v : cand) {
        std::vector<std::uint32_t> next = flips;
        auto it = std::lower_bound(next.begin(), next.end(), v);
        if (it != next.end() && *it == v)
          next.erase(it);  // undoing a flip is a legal move
        else
          next.insert(it, v);
        if (next.size() > cfg.repair_budget) continue;
        if (visited.insert(next).second) queue.push_back(std::move(next));
      }
    }
    return std::nullopt;
  };

  for (std::size_t i = 0; i < stream.constraints.size(); ++i) {
    const Constraint& c = stream.constraints[i];
    if (!eval_with(c, sigma)) {
      auto fix = attempt_repair(c);
      if (!fix) {
        res.reached_m = i;
        return res;
      }
      res.repairs++;
      res.repair_flips += fix->size();
      for (std::uint32_t v : *fix) sigma[v] = -sigma[v];
    }
    for (std::uint32_t v : c.vars)
      incidence[v].push_back(static_cast<std::uint32_t>(i));
    res.reached_m = i + 1;
  }
  res.success = true;
  return res;
}

}  // namespace starcore
