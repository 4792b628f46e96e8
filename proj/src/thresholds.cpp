#include "starcore/thresholds.hpp"

#include <cmath>
#include <limits>

namespace starcore {

namespace {

double falling_density(int k, double x) {
  return x / std::pow(-std::expm1(-x), k - 1);
}

// Derivative sign driver of falling_density: negative left of the
// minimizer, positive right of it.
double stationarity_gap(int k, double x) {
  return -std::expm1(-x) - (k - 1) * x * std::exp(-x);
}

}  // namespace

AlphaK alpha_k(int k) {
  if (k < 3) throw ConfigError("alpha_k requires k >= 3");
  // Coarse grid bracket, then golden-section, then bisection polish on the
  // stationarity equation (function comparisons alone stall near sqrt(eps)).
  double hi = 10;
  while (stationarity_gap(k, hi) <= 0) hi *= 2;
  double best_x = 1, best_f = std::numeric_limits<double>::infinity();
  const int grid = 20000;
  for (int i = 1; i <= grid; ++i) {
    double x = hi * i / grid;
    double f = falling_density(k, x);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  double a = std::max(best_x - 2 * hi / grid, 1e-9);
  double b = best_x + 2 * hi / grid;
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = falling_density(k, c), fd = falling_density(k, d);
  while (b - a > 1e-9) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = falling_density(k, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = falling_density(k, d);
    }
  }
  double lo = std::max(a - 1e-3, 1e-12), up = b + 1e-3;
  while (stationarity_gap(k, lo) >= 0) lo *= 0.5;
  while (stationarity_gap(k, up) <= 0) up += 1e-3;
  for (int i = 0; i < 200 && up - lo > 1e-15 * up; ++i) {
    double mid = 0.5 * (lo + up);
    if (stationarity_gap(k, mid) < 0)
      lo = mid;
    else
      up = mid;
  }
  double x1 = 0.5 * (lo + up);
  return {falling_density(k, x1), x1};
}

double xk_root(int k, double alpha) {
  if (k < 3) throw ConfigError("xk_root requires k >= 3");
  AlphaK ak = alpha_k(k);
  if (alpha < ak.alpha - 1e-12)
    throw ConfigError("xk_root requires alpha >= alpha_k");
  // falling_density is increasing on [x1, inf); bracket by doubling.
  double lo = ak.minimizer, hi = std::max(2 * ak.minimizer, 2.0);
  while (falling_density(k, hi) < alpha) hi *= 2;
  for (int i = 0; i < 500; ++i) {
    double mid = 0.5 * (lo + hi);
    double f = falling_density(k, mid);
    if (std::abs(f - alpha) < 1e-12) return mid;
    if (f < alpha)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double rho_k(int k, double alpha) {
  if (alpha <= alpha_k(k).alpha) return 0.0;
  return -std::expm1(-xk_root(k, alpha));
}

FixedPointTrace fixed_point_trace(int k, double alpha, double tol,
                                  std::size_t max_iter) {
  if (k < 3) throw ConfigError("fixed_point_trace requires k >= 3");
  if (alpha < 0) throw ConfigError("fixed_point_trace requires alpha >= 0");
  FixedPointTrace t;
  t.alpha = alpha;
  double rho = 1.0;
  t.rho.push_back(rho);
  for (std::size_t i = 0; i < max_iter; ++i) {
    double lambda = alpha * std::pow(rho, k - 1);
    t.lambda.push_back(lambda);
    double next = -std::expm1(-lambda);
    t.rho.push_back(next);
    if (std::abs(next - rho) < tol) {
      rho = next;
      t.converged = true;
      break;
    }
    rho = next;
  }
  t.iterations = t.lambda.size();
  t.rho_limit = rho;
  t.lambda_limit = alpha * std::pow(rho, k - 1);
  if (rho > 10 * tol) {
    t.gamma_margin =
        1 - (k - 1) * t.lambda_limit * std::exp(-t.lambda_limit) / rho;
  } else {
    t.gamma_margin = std::numeric_limits<double>::quiet_NaN();
  }
  return t;
}

double binary_entropy(double theta) {
  if (theta < 0 || theta > 1)
    throw ConfigError("binary_entropy requires theta in [0, 1]");
  if (theta == 1.0) return -std::log(2.0);
  return -0.5 * ((1 + theta) * std::log1p(theta) +
                 (1 - theta) * std::log1p(-theta));
}

double p_phi_poly(const ConstraintFunction& f, double theta) {
  auto t = fourier_expand(f);
  double f0 = t.empty_coefficient();
  if (f0 == 0)
    throw ConfigError("p_phi_poly undefined for an unsatisfiable constraint");
  auto lv = t.level_sums_squared();
  double sum = 0, power = 1;
  for (std::size_t j = 0; j < lv.size(); ++j) {
    sum += lv[j] / (f0 * f0) * power;
    power *= theta;
  }
  return sum;
}

double xi(const CspModel& m) {
  const auto& pr = m.properties();
  if (!pr.feasible) throw ConfigError("xi requires a feasible model");
  if (!pr.one_essential) throw ConfigError("xi requires a 1-essential model");
  double ei = 0, es = 0;
  for (std::size_t i = 0; i < m.member_count(); ++i) {
    ei += m.weight(i) * static_cast<double>(m.member(i).unsat_count());
    es += m.weight(i) * static_cast<double>(m.member(i).sat_count());
  }
  return m.arity() * ei / es;
}

ModelSpectrum spectrum(const CspModel& m) {
  ModelSpectrum s;
  s.k = m.arity();
  s.props = m.properties();
  for (std::size_t i = 0; i < m.member_count(); ++i) {
    const auto& f = m.member(i);
    if (f.sat_count() == 0)
      throw ConfigError("spectrum undefined for an unsatisfiable member");
    auto t = fourier_expand(f);
    auto lv = t.level_sums_squared();
    double f0 = t.empty_coefficient();
    MemberProfile p;
    p.weight = m.weight(i);
    p.sat = static_cast<double>(f.sat_count());
    p.unsat = static_cast<double>(f.unsat_count());
    p.level_sq.resize(lv.size());
    for (std::size_t j = 0; j < lv.size(); ++j)
      p.level_sq[j] = lv[j] / (f0 * f0);
    // Merge members with identical profiles; threshold constants only see
    // the profile.
    bool merged = false;
    for (auto& q : s.members) {
      if (q.sat != p.sat || q.unsat != p.unsat) continue;
      bool same = true;
      for (std::size_t j = 0; j < lv.size(); ++j)
        if (std::abs(q.level_sq[j] - p.level_sq[j]) > 1e-12) {
          same = false;
          break;
        }
      if (same) {
        q.weight += p.weight;
        merged = true;
        break;
      }
    }
    if (!merged) s.members.push_back(std::move(p));
  }
  return s;
}

ModelSpectrum builtin_spectrum(const std::string& name, int k) {
  if (name != "2col" && name != "nae")
    throw ConfigError("no built-in spectrum named " + name);
  if (k < 3 || k > 50)
    throw ConfigError("built-in spectrum supports k in [3, 50]");
  // Each member forbids one antipodal pair {v, -v}: |unsat| = 2 and
  // (hat(f)(Q)/hat(f)(empty))^2 = (2 / (2^k - 2))^2 for every even |Q| >= 2,
  // regardless of v. Member count differs between the families but the
  // profile does not.
  ModelSpectrum s;
  s.k = k;
  s.props = PropertyReport{true, true, true, true, true};
  MemberProfile p;
  p.weight = 1.0;
  double size = std::pow(2.0, k);
  p.sat = size - 2;
  p.unsat = 2;
  p.level_sq.assign(k + 1, 0.0);
  p.level_sq[0] = 1.0;
  double ratio_sq = std::pow(2.0 / (size - 2), 2);
  double binom = 1.0;  // C(k, j), updated incrementally
  for (int j = 1; j <= k; ++j) {
    binom = binom * (k - j + 1) / j;
    if (j >= 2 && j % 2 == 0) p.level_sq[j] = binom * ratio_sq;
  }
  s.members.push_back(std::move(p));
  return s;
}

namespace {

// E over members of ln p_phi(theta), via log1p on the tail sum.
double expected_log_p(const ModelSpectrum& s, double theta) {
  double acc = 0;
  for (const auto& p : s.members) {
    double tail = 0, power = 1;
    for (std::size_t j = 1; j < p.level_sq.size(); ++j) {
      power *= theta;
      if (p.level_sq[j] != 0.0) tail += p.level_sq[j] * power;
    }
    acc += p.weight * std::log1p(tail);
  }
  return acc;
}

void require_spectrum_props(const ModelSpectrum& s, const char* op) {
  PropertyReport pr = s.props;
  if (!pr.symmetric || !pr.feasible || !pr.balance_dominated ||
      !pr.non_trivial) {
    auto gaps = pr.missing();
    for (const auto& g : gaps)
      if (g != "1-essential")
        throw ConfigError(std::string(op) + " requires a " + g + " model");
  }
}

}  // namespace

double r_p(const ModelSpectrum& s, int grid_steps) {
  require_spectrum_props(s, "r_p");
  if (grid_steps < 2) throw ConfigError("r_p grid must have at least 2 steps");
  double best = std::numeric_limits<double>::infinity();
  // theta -> 0 limit: both numerator and denominator are quadratic; the
  // ratio tends to 0.5 / E[level-2 mass].
  double pair_mass = 0;
  for (const auto& p : s.members)
    if (p.level_sq.size() > 2) pair_mass += p.weight * p.level_sq[2];
  if (pair_mass > 0) best = 0.5 / pair_mass;

  bool any_positive = false;
  for (int i = 1; i <= grid_steps; ++i) {
    double theta = static_cast<double>(i) / grid_steps;
    double denom = expected_log_p(s, theta);
    if (denom <= 0) continue;
    any_positive = true;
    double val = -binary_entropy(theta) / denom;
    if (val < best) best = val;
  }
  if (!any_positive && pair_mass == 0)
    throw ConfigError("r_p undefined: E[ln p_phi] vanishes on the whole grid");
  return best;
}

double r_p(const CspModel& m, int grid_steps) {
  return r_p(spectrum(m), grid_steps);
}

ThresholdReport threshold_report(const ModelSpectrum& s, int grid_steps) {
  {
    auto gaps = s.props.missing();
    if (!gaps.empty())
      throw ConfigError("threshold_report requires a " + gaps.front() +
                        " model");
  }
  ThresholdReport rep;
  rep.k = s.k;
  AlphaK ak = alpha_k(s.k);
  rep.alpha_k = ak.alpha;
  rep.x1 = ak.minimizer;
  double ei = 0, es = 0, ratio = 0, log_ratio = 0;
  for (const auto& p : s.members) {
    ei += p.weight * p.unsat;
    es += p.weight * p.sat;
    ratio += p.weight * (p.unsat / p.sat);
    log_ratio += p.weight * std::log1p(p.unsat / p.sat);
  }
  rep.omega_f = ei / es;
  rep.omega_p = ratio;
  rep.xi = s.k * rep.omega_f;
  rep.r_f = rep.alpha_k / rep.xi;
  rep.r_p = r_p(s, grid_steps);
  rep.r_p_lower_bound = 0.25 / rep.omega_p;
  rep.r_sat_reference = std::log(2.0) / log_ratio;
  return rep;
}

ThresholdReport threshold_report(const CspModel& m, int grid_steps) {
  m.require_properties("threshold_report");
  return threshold_report(spectrum(m), grid_steps);
}

double essential_density(const ThresholdReport& rep, double r) {
  if (r < 0) throw ConfigError("density r must be nonnegative");
  return rep.xi * r;
}

double predicted_survival(const ThresholdReport& rep, double r) {
  double alpha = essential_density(rep, r);
  if (alpha <= rep.alpha_k) return 0.0;
  return rho_k(rep.k, alpha);
}

}  // namespace starcore
