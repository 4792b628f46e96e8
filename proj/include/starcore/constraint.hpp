#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "starcore/errors.hpp"

namespace starcore {

// Assignment over {-1,+1}; length k for local patterns, n for full
// assignments.
using SignVector = std::vector<std::int8_t>;

// Truth-table index of a local pattern. Variable 0 is the most significant
// bit, +1 maps to bit 1.
std::size_t pattern_index(const SignVector& x);
SignVector pattern_of(std::size_t index, int arity);

// A single boolean constraint of arity k as an explicit truth table.
// Entry 1 = the pattern satisfies the constraint.
class ConstraintFunction {
 public:
  static constexpr int kMaxArity = 20;

  ConstraintFunction(int arity, std::vector<std::uint8_t> truth_table);
  static ConstraintFunction from_forbidden(
      int arity, const std::vector<SignVector>& forbidden);
  static ConstraintFunction constant_one(int arity);

  int arity() const { return arity_; }
  std::size_t table_size() const { return table_.size(); }
  bool eval_index(std::size_t pattern) const;
  bool eval(const SignVector& x) const;

  std::size_t sat_count() const { return sat_count_; }
  std::size_t unsat_count() const { return table_.size() - sat_count_; }
  std::vector<std::size_t> sat_indices() const;
  std::vector<std::size_t> unsat_indices() const;

  // Variables whose single flip unsatisfies the given satisfying pattern.
  // Calling on an unsatisfying pattern is a contract violation.
  std::vector<int> essential_variables(std::size_t pattern) const;
  std::vector<int> essential_variables(const SignVector& x) const;
  // At most one essential variable may exist; more than one is a contract
  // violation (use essential_variables for general tables).
  std::optional<int> essential_variable(std::size_t pattern) const;
  std::optional<int> essential_variable(const SignVector& x) const;

  bool satisfied_by_uniform(int sign) const;  // all-(+1) or all-(-1) pattern
  bool is_feasible() const;       // no two unsat patterns within distance 1
  bool is_symmetric() const;      // f(x) == f(-x)
  bool is_one_essential() const;  // every satisfying pattern has <= 1

  // f composed with per-variable sign flips: (s*f)(x) = f(s1 x1,...,sk xk).
  ConstraintFunction signed_variant(const SignVector& s) const;

  bool operator==(const ConstraintFunction&) const = default;

 private:
  int arity_;
  std::vector<std::uint8_t> table_;
  std::size_t sat_count_;
};

// Normalized Fourier coefficients: hat(f)(Q) = 2^-k sum_x f(x) prod_{i in Q}
// x_i, indexed by subset mask (same bit order as pattern_index).
struct FourierTable {
  int arity = 0;
  std::vector<double> coeff;

  double at(std::size_t subset) const { return coeff.at(subset); }
  double empty_coefficient() const { return coeff.at(0); }
  double parseval_sum() const;
  double reconstruct(std::size_t pattern) const;
  // level_sums_squared()[j] = sum over |Q| = j of hat(f)(Q)^2.
  std::vector<double> level_sums_squared() const;
};

FourierTable fourier_expand(const ConstraintFunction& f);

// True iff every pair of unsatisfying patterns is at Hamming distance >= 3.
// Equivalent to is_feasible() && is_one_essential().
bool unsat_patterns_distance_ge3(const ConstraintFunction& f);

}  // namespace starcore
