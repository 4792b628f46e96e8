// End-to-end acceptance runs. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fail. Heavier than the unit suites: full-size
// instances for the statistical checks, a 200-instance corpus for the exact
// combinatorial ones.
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "starcore/cli.hpp"
#include "starcore/core.hpp"
#include "starcore/errors.hpp"
#include "starcore/freeze.hpp"
#include "starcore/hypergraph.hpp"
#include "starcore/instance.hpp"
#include "starcore/model.hpp"
#include "starcore/rng.hpp"
#include "starcore/sampler.hpp"
#include "starcore/summary.hpp"
#include "starcore/thresholds.hpp"

using namespace starcore;

namespace {

int g_failures = 0;

void report(bool ok, const std::string& label, const std::string& detail) {
  if (!ok) ++g_failures;
  std::cout << (ok ? "PASS  " : "FAIL  ") << label;
  if (!detail.empty()) std::cout << "  (" << detail << ")";
  std::cout << std::endl;
}

int jobs() {
  unsigned hc = std::thread::hardware_concurrency();
  return static_cast<int>(hc == 0 ? 4 : std::min(hc, 8u));
}

double profile(int k, double x) {
  return x / std::pow(1 - std::exp(-x), k - 1);
}

// ---- criteria 1 and 2: threshold self-consistency ----

void criterion_1_2() {
  double worst_stat = 0, worst_root = 0, worst_fp = 0;
  bool ok1 = true, ok2 = true;
  for (int k = 3; k <= 10; ++k) {
    auto a = alpha_k(k);
    double x = a.minimizer;
    double stat = std::abs(1 - std::exp(-x) - (k - 1) * x * std::exp(-x));
    worst_stat = std::max(worst_stat, stat);
    if (stat > 1e-10) ok1 = false;
    for (double alpha : {a.alpha + 0.1, a.alpha + 1.0, 2 * a.alpha}) {
      double xk = xk_root(k, alpha);
      double root = std::abs(profile(k, xk) - alpha);
      worst_root = std::max(worst_root, root);
      if (root > 1e-10) ok1 = false;
      double fp = std::abs(fixed_point_trace(k, alpha).rho_limit -
                           (1 - std::exp(-xk)));
      worst_fp = std::max(worst_fp, fp);
      if (fp >= 1e-6) ok2 = false;
    }
  }
  std::ostringstream d1;
  d1 << "k in 3..10, worst stationarity " << worst_stat << ", worst root "
     << worst_root;
  report(ok1, "criterion 1: threshold self-consistency to 1e-10", d1.str());
  std::ostringstream d2;
  d2 << "worst |rho_limit - (1-exp(-x_k))| = " << worst_fp;
  report(ok2, "criterion 2: fixed point matches the root to 1e-6", d2.str());
}

// ---- criterion 3: essential-clause fraction ----

void criterion_3() {
  auto m3 = CspModel::hypergraph_two_colouring(3);
  const std::uint32_t n = 100000;
  auto p = sample_planted(m3, n, 200000, 301);
  auto g = build_gamma(m3, p.instance, p.sigma);
  bool exact = g.edge_count() == p.instance.constraints.size();

  auto m4 = CspModel::hypergraph_two_colouring(4);
  std::vector<double> fr = run_trials(10, jobs(), [&](std::uint32_t t) {
    auto pp = sample_planted(m4, n, 100000, derive_seed(302, t));
    auto gg = build_gamma(m4, pp.instance, pp.sigma);
    return static_cast<double>(gg.edge_count()) / 100000.0;
  });
  double mean = aggregate(fr).mean;
  bool near = std::abs(mean - 4.0 / 7.0) <= 0.01;
  std::ostringstream d;
  d << "k=3 fraction " << (exact ? "exactly 1" : "NOT 1") << "; k=4 mean "
    << format_number(mean) << " vs 4/7 = " << format_number(4.0 / 7.0);
  report(exact && near, "criterion 3: essential fraction (xi) at n=1e5",
         d.str());
}

// ---- criteria 4, 5, 6: peeling statistics at scale ----

void criterion_4_5_6() {
  auto m = CspModel::hypergraph_two_colouring(3);
  const std::uint32_t n = 100000;

  struct Stats {
    double core_frac = 0;
    double branching = 0;
  };
  std::vector<Stats> above = run_trials(20, jobs(), [&](std::uint32_t t) {
    auto p = sample_planted(m, n, 300000, derive_seed(401, t));
    auto g = build_gamma(m, p.instance, p.sigma);
    auto res = peel_star_core(g);
    auto cs = core_stats(res.core, 3);
    return Stats{static_cast<double>(cs.vertices) / n, cs.branching_ratio};
  });
  std::vector<double> fracs, branchings;
  for (const auto& s : above) {
    fracs.push_back(s.core_frac);
    branchings.push_back(s.branching);
  }
  double mean_frac = aggregate(fracs).mean;
  double rho_oracle = rho_k(3, 3.0);
  bool ok_above = std::abs(mean_frac - 0.922) <= 0.01;

  std::vector<double> below = run_trials(20, jobs(), [&](std::uint32_t t) {
    auto p = sample_planted(m, n, 200000, derive_seed(402, t));
    auto g = build_gamma(m, p.instance, p.sigma);
    return static_cast<double>(peel_star_core(g).core.vertex_count()) / n;
  });
  bool ok_below = true;
  for (double f : below) ok_below = ok_below && f < 0.01;

  std::ostringstream d4;
  d4 << "r=3.0 mean core fraction " << format_number(mean_frac)
     << " vs oracle " << format_number(rho_oracle) << "; r=2.0 max "
     << format_number(*std::max_element(below.begin(), below.end()));
  report(ok_above && ok_below, "criterion 4: *-core size at n=1e5", d4.str());

  // round-by-round densities on one instance
  auto p = sample_planted(m, n, 300000, 403);
  auto g = build_gamma(m, p.instance, p.sigma);
  auto trace = parallel_rounds(g);
  auto fp = fixed_point_trace(3, 3.0);
  bool ok5 = true;
  double worst5 = 0;
  for (std::size_t i = 0; i <= 5 && i < trace.round_stats.size(); ++i) {
    const RoundStats& s = trace.round_stats[i];
    double rho_i = fp.rho[i];
    double lambda_i = fp.lambda[i];
    double b_pred = 0.5 * lambda_i * std::exp(-lambda_i);
    for (double got : {static_cast<double>(s.x_plus) / n,
                       static_cast<double>(s.x_minus) / n}) {
      worst5 = std::max(worst5, std::abs(got - 0.5 * rho_i));
      if (std::abs(got - 0.5 * rho_i) > 0.01) ok5 = false;
    }
    for (double got : {static_cast<double>(s.b_plus) / n,
                       static_cast<double>(s.b_minus) / n}) {
      worst5 = std::max(worst5, std::abs(got - b_pred));
      if (std::abs(got - b_pred) > 0.01) ok5 = false;
    }
  }
  std::ostringstream d5;
  d5 << "rounds 0..5, worst deviation " << format_number(worst5);
  report(ok5, "criterion 5: round-by-round densities within 0.01", d5.str());

  double gamma = fp.gamma_margin;
  double bound = 1 - gamma / 2;
  double worst_branch = *std::max_element(branchings.begin(), branchings.end());
  std::ostringstream d6;
  d6 << "max branching " << format_number(worst_branch) << " < "
     << format_number(bound) << " over 20 trials";
  report(worst_branch < bound, "criterion 6: branching below 1 - gamma/2",
         d6.str());
}

// ---- criterion 7: exact combinatorial oracles on 200 small instances ----

struct Corpus7 {
  std::uint64_t pair_checks = 0, pair_bad = 0;
  std::uint64_t union_checks = 0, union_bad = 0;
  std::uint64_t closure_checks = 0, closure_bad = 0;
  std::uint64_t decompose_checks = 0, decompose_bad = 0;
  std::uint64_t chain_acyclic = 0, chain_cyclic = 0, chain_bad = 0;
  std::uint64_t instances = 0, solutions = 0;
};

std::vector<std::uint32_t> closure_rescan(const EssentialHypergraph& g,
                                          const StarCore& core,
                                          std::vector<std::uint32_t> cur) {
  std::sort(cur.begin(), cur.end());
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (!core.edge_alive[e]) continue;
      std::uint32_t v = g.edge(e).essential_vertex();
      if (!core.in_h1(v)) continue;
      if (std::binary_search(cur.begin(), cur.end(), v)) continue;
      for (std::uint32_t w : g.edge(e).vertices)
        if (w != v && std::binary_search(cur.begin(), cur.end(), w)) {
          cur.insert(std::lower_bound(cur.begin(), cur.end(), v), v);
          grew = true;
          break;
        }
    }
  }
  return cur;
}

void criterion_7() {
  auto m = CspModel::hypergraph_two_colouring(3);
  Corpus7 total;
  std::vector<Corpus7> parts =
      run_trials(200, jobs(), [&](std::uint32_t idx) {
        Corpus7 c;
        c.instances = 1;
        std::uint64_t seed = derive_seed(700, idx);
        CspInstance inst;
        SignVector sigma;
        if (idx % 4 != 3) {
          // planted, r in {2.0, 2.5, 3.0, 3.5}
          std::uint32_t n = 10 + idx % 6;
          double r = 2.0 + 0.5 * (idx % 4);
          auto p = sample_planted(
              m, n, static_cast<std::uint64_t>(std::llround(r * n)), seed);
          inst = p.instance;
          sigma = p.sigma;
        } else {
          // uniform pairs at lower density, where they are cheap to draw
          std::uint32_t n = 10 + idx % 4;
          double r = (idx % 8 < 4) ? 1.5 : 2.0;
          auto u = sample_uniform_small(
              m, n, static_cast<std::uint64_t>(std::llround(r * n)), seed);
          inst = u.instance;
          sigma = u.sigma;
        }
        const std::uint32_t n = inst.n;
        auto sols = enumerate_solutions(m, inst);
        c.solutions = sols.size();

        // (a) every ordered solution pair: diff inside the left core is
        // flippable there
        for (std::uint32_t left : sols) {
          auto gl = build_gamma(m, inst, assignment_of_mask(left, n));
          auto cl = peel_star_core(gl).core;
          if (cl.empty()) {
            c.pair_checks += sols.size() - 1;
            continue;
          }
          for (std::uint32_t right : sols) {
            if (right == left) continue;
            std::uint32_t dmask = left ^ right;
            std::vector<std::uint32_t> diff;
            for (std::uint32_t v = 0; v < n; ++v)
              if (((dmask >> v) & 1) && cl.vertex_alive[v]) diff.push_back(v);
            ++c.pair_checks;
            if (!is_flippable(gl, cl, diff)) ++c.pair_bad;
          }
        }

        // structures below live in the sampled solution's own graph
        auto g = build_gamma(m, inst, sigma);
        auto core = peel_star_core(g).core;
        std::uint32_t base = mask_of_assignment(sigma);

        std::vector<std::vector<std::uint32_t>> flips;
        for (std::uint32_t s : sols) {
          if (s == base || flips.size() >= 24) continue;
          std::uint32_t dmask = s ^ base;
          std::vector<std::uint32_t> set;
          for (std::uint32_t v = 0; v < n; ++v)
            if (((dmask >> v) & 1) && core.vertex_alive[v]) set.push_back(v);
          if (!set.empty()) flips.push_back(std::move(set));
        }

        // (b) unions of flippable sets stay flippable
        for (std::size_t i = 0; i + 1 < flips.size(); i += 2) {
          std::vector<std::uint32_t> u;
          std::set_union(flips[i].begin(), flips[i].end(), flips[i + 1].begin(),
                         flips[i + 1].end(), std::back_inserter(u));
          ++c.union_checks;
          if (!is_flippable(g, core, u)) ++c.union_bad;
        }

        // (c) worklist closure equals the brute-force rescan
        if (!core.empty()) {
          std::vector<std::vector<std::uint32_t>> seeds;
          seeds.push_back({});
          if (!core.h1_plus.empty()) seeds.push_back({core.h1_plus.front()});
          if (!core.h1_minus.empty()) seeds.push_back({core.h1_minus.front()});
          if (!flips.empty()) seeds.push_back(flips.front());
          for (const auto& a : seeds) {
            ++c.closure_checks;
            if (closure(g, core, a) != closure_rescan(g, core, a))
              ++c.closure_bad;
          }
        }

        // (d) decomposition invariants on every harvested flippable set
        for (const auto& set : flips) {
          ++c.decompose_checks;
          try {
            auto d = decompose_flippable(g, core, set);
            std::vector<std::uint32_t> parts2 = d.a_set;
            parts2.insert(parts2.end(), d.c_set.begin(), d.c_set.end());
            std::sort(parts2.begin(), parts2.end());
            auto cl = closure(g, core, parts2);
            std::vector<std::uint32_t> sorted_set = set;
            std::sort(sorted_set.begin(), sorted_set.end());
            if (!std::includes(cl.begin(), cl.end(), sorted_set.begin(),
                               sorted_set.end()))
              ++c.decompose_bad;
            if (!is_cyclic(g, core, d.c_set)) ++c.decompose_bad;
          } catch (const std::exception&) {
            ++c.decompose_bad;
          }
        }

        // (e) peeled vertices with acyclic chain neighborhoods unfreeze
        auto depth = exact_star_depth(g);
        auto frozen1 = exact_frozen_set(m, inst, sigma, 1);
        for (std::uint32_t v = 0; v < n; ++v) {
          if (depth[v] == kInfiniteDepth) continue;
          auto w = chain_witness(inst, g, v, depth[v]);
          if (w.acyclic) {
            ++c.chain_acyclic;
            if (frozen1[v]) ++c.chain_bad;
          } else {
            ++c.chain_cyclic;
          }
        }
        return c;
      });
  for (const auto& c : parts) {
    total.pair_checks += c.pair_checks;
    total.pair_bad += c.pair_bad;
    total.union_checks += c.union_checks;
    total.union_bad += c.union_bad;
    total.closure_checks += c.closure_checks;
    total.closure_bad += c.closure_bad;
    total.decompose_checks += c.decompose_checks;
    total.decompose_bad += c.decompose_bad;
    total.chain_acyclic += c.chain_acyclic;
    total.chain_cyclic += c.chain_cyclic;
    total.chain_bad += c.chain_bad;
    total.instances += c.instances;
    total.solutions += c.solutions;
  }

  std::ostringstream da;
  da << total.pair_checks << " solution pairs over " << total.instances
     << " instances, " << total.pair_bad << " violations";
  report(total.pair_bad == 0 && total.pair_checks > 0,
         "criterion 7a: solution-pair flip sets flippable", da.str());

  std::ostringstream db;
  db << total.union_checks << " unions, " << total.union_bad << " violations";
  report(total.union_bad == 0 && total.union_checks >= 100,
         "criterion 7b: unions of flippable sets flippable", db.str());

  std::ostringstream dc;
  dc << total.closure_checks << " seed sets, " << total.closure_bad
     << " mismatches";
  report(total.closure_bad == 0 && total.closure_checks > 0,
         "criterion 7c: worklist closure equals brute force", dc.str());

  std::ostringstream dd;
  dd << total.decompose_checks << " decompositions, " << total.decompose_bad
     << " violations";
  report(total.decompose_bad == 0 && total.decompose_checks > 0,
         "criterion 7d: decomposition into weakly flippable + cyclic parts",
         dd.str());

  std::ostringstream de;
  de << total.chain_acyclic << " acyclic / " << total.chain_cyclic
     << " cyclic chains, " << total.chain_bad << " frozen-despite-acyclic";
  report(total.chain_bad == 0 && total.chain_acyclic > 0,
         "criterion 7e: acyclic chain neighborhood implies not 1-frozen",
         de.str());
}

// ---- criterion 8: planted-transfer bound and the large-k gap ----

void criterion_8() {
  bool ok_bound = true, ok_gap = true;
  double worst_slack = 1e300;
  for (int k = 3; k <= 12; ++k) {
    for (const char* name : {"2col", "nae"}) {
      auto rep = threshold_report(builtin_spectrum(name, k));
      worst_slack = std::min(worst_slack, rep.r_p - rep.r_p_lower_bound);
      if (rep.r_p < rep.r_p_lower_bound - 1e-9) ok_bound = false;
    }
  }
  double min_gap = 1e300;
  for (int k = 27; k <= 35; ++k) {
    for (const char* name : {"2col", "nae"}) {
      auto rep = threshold_report(builtin_spectrum(name, k));
      min_gap = std::min(min_gap, rep.r_p - rep.r_f);
      if (!(rep.r_f < rep.r_p)) ok_gap = false;
    }
  }
  std::ostringstream d;
  d << "min r_p - 0.25/omega_p slack " << format_number(worst_slack)
    << " (k 3..12); min r_p - r_f gap " << format_number(min_gap)
    << " (k 27..35)";
  report(ok_bound && ok_gap,
         "criterion 8: r_p bound holds and r_f < r_p at large k", d.str());
}

// ---- criterion 9: byte-identical reruns of every stochastic command ----

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void criterion_9() {
  struct Cmd {
    const char* what;
    std::vector<std::string> args;
    std::string out;
  };
  std::vector<Cmd> cmds;
  cmds.push_back({"sample planted",
                  {"sample", "--model", "2col", "--k", "3", "--n", "40", "--M",
                   "80", "--seed", "901"},
                  "/tmp/starcore_acc_sample.txt"});
  cmds.push_back({"sample uniform-small",
                  {"sample", "--model", "2col", "--k", "3", "--n", "12", "--M",
                   "18", "--seed", "902", "--uniform-small"},
                  "/tmp/starcore_acc_usample.txt"});
  cmds.push_back({"core-scan",
                  {"core-scan", "--model", "2col", "--k", "3", "--n", "5000",
                   "--r", "3.0", "--trials", "4", "--seed", "903", "--jobs",
                   "4"},
                  "/tmp/starcore_acc_core.csv"});
  cmds.push_back({"freeze-scan",
                  {"freeze-scan", "--model", "2col", "--k", "3", "--n", "11",
                   "--M", "18", "--ell", "1,2", "--trials", "4", "--seed",
                   "904", "--jobs", "4"},
                  "/tmp/starcore_acc_freeze.csv"});
  cmds.push_back({"greedy-solve",
                  {"greedy-solve", "--model", "2col", "--k", "3", "--n", "500",
                   "--r", "1.0", "--trials", "4", "--seed", "905", "--jobs",
                   "4"},
                  "/tmp/starcore_acc_greedy.csv"});
  bool ok = true;
  std::string bad;
  for (auto& cmd : cmds) {
    cmd.args.push_back("--out");
    cmd.args.push_back(cmd.out);
    std::ostringstream sink;
    auto* old = std::cout.rdbuf(sink.rdbuf());
    int rc1 = run_cli(cmd.args);
    std::string first = slurp(cmd.out);
    int rc2 = run_cli(cmd.args);
    std::cout.rdbuf(old);
    std::string second = slurp(cmd.out);
    if (rc1 != 0 || rc2 != 0 || first.empty() || first != second) {
      ok = false;
      bad += std::string(cmd.what) + " ";
    }
  }
  report(ok, "criterion 9: stochastic commands rerun byte-identically",
         ok ? "sample x2, core-scan, freeze-scan, greedy-solve" : bad);
}

}  // namespace

int main() {
  std::cout << "acceptance suite" << std::endl;
  criterion_1_2();
  criterion_3();
  criterion_4_5_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::cout << "INFO  criterion 10: the large-n freezing statements are not "
               "checkable at desk scale; criteria 4-7 cover the constants "
               "and exact predicates they build on."
            << std::endl;
  if (g_failures == 0)
    std::cout << "acceptance: all criteria passed" << std::endl;
  else
    std::cout << "acceptance: " << g_failures << " criteria FAILED"
              << std::endl;
  return g_failures == 0 ? 0 : 1;
}
