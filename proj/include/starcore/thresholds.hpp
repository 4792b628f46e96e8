#pragma once

#include <string>
#include <vector>

#include "starcore/model.hpp"

namespace starcore {

// Clause-density constants. Throughout, alpha denotes the density of
// essential hyperedges (edges per vertex) and k the constraint arity.

struct AlphaK {
  double alpha;      // inf over x > 0 of x / (1 - e^-x)^(k-1)
  double minimizer;  // the unique stationary point x1
};

// Requires k >= 3. The minimizer satisfies
// 1 - e^-x = (k-1) x e^-x to within 1e-10.
AlphaK alpha_k(int k);

// Largest root of x / (1 - e^-x)^(k-1) = alpha, for alpha >= alpha_k(k).
// Residual below 1e-10.
double xk_root(int k, double alpha);

// Survival fraction: 1 - e^-xk_root for alpha > alpha_k, else 0.
double rho_k(int k, double alpha);

struct FixedPointTrace {
  double alpha = 0;
  std::vector<double> rho;     // rho_0 = 1, rho_{i+1} = 1 - e^(-lambda_i)
  std::vector<double> lambda;  // lambda_i = alpha * rho_i^(k-1)
  double rho_limit = 0;
  double lambda_limit = 0;
  // 1 - (k-1) * lambda * e^-lambda / rho at the limit; NaN when the limit
  // is 0. Positive above alpha_k.
  double gamma_margin = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

FixedPointTrace fixed_point_trace(int k, double alpha, double tol = 1e-12,
                                  std::size_t max_iter = 1000000);

// Expected essential hyperedges per constraint: k * E|unsat| / E|sat|.
// Requires a feasible, 1-essential model.
double xi(const CspModel& m);

// sum over subsets Q of (hat(f)(Q)/hat(f)(empty))^2 * theta^|Q|.
double p_phi_poly(const ConstraintFunction& f, double theta);

// ((1+t)/2) ln(1/(1+t)) + ((1-t)/2) ln(1/(1-t)); 0 at t=0, -ln 2 at t=1.
double binary_entropy(double theta);

// Per-member data sufficient for every threshold constant; lets built-in
// families bypass the truth-table arity cap.
struct MemberProfile {
  double weight = 0;
  double sat = 0;    // |satisfying patterns|
  double unsat = 0;  // |unsatisfying patterns|
  // level_sq[j] = sum over |Q| = j of (hat(f)(Q)/hat(f)(empty))^2.
  std::vector<double> level_sq;
};

struct ModelSpectrum {
  int k = 0;
  std::vector<MemberProfile> members;
  PropertyReport props;
};

ModelSpectrum spectrum(const CspModel& m);
// Closed-form spectrum of "2col"/"nae" at any k in [3, 50]; identical
// threshold constants for the two families.
ModelSpectrum builtin_spectrum(const std::string& name, int k);

// inf over theta in (0,1] of -H(theta) / E[ln p_phi(theta)], evaluated on a
// grid plus the analytic theta -> 0 boundary value.
double r_p(const ModelSpectrum& s, int grid_steps = 10000);
double r_p(const CspModel& m, int grid_steps = 10000);

struct ThresholdReport {
  int k = 0;
  double alpha_k = 0;
  double x1 = 0;
  double xi = 0;
  double omega_f = 0;           // E|unsat| / E|sat|
  double omega_p = 0;           // E[|unsat| / |sat|]
  double r_f = 0;               // alpha_k / xi
  double r_p = 0;
  double r_p_lower_bound = 0;   // 0.25 / omega_p
  double r_sat_reference = 0;   // ln 2 / E[ln(1 + |unsat|/|sat|)]
};

ThresholdReport threshold_report(const ModelSpectrum& s,
                                 int grid_steps = 10000);
ThresholdReport threshold_report(const CspModel& m, int grid_steps = 10000);

// Predicted essential-edge density at constraint density r, and the
// resulting survival fraction.
double essential_density(const ThresholdReport& rep, double r);
double predicted_survival(const ThresholdReport& rep, double r);

}  // namespace starcore
