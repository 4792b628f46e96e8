#pragma once

#include <string>
#include <vector>

#include "starcore/constraint.hpp"

namespace starcore {

// The five structural properties a model must satisfy before the threshold
// and core machinery applies to it.
struct PropertyReport {
  bool non_trivial = false;
  bool feasible = false;
  bool symmetric = false;
  bool balance_dominated = false;
  bool one_essential = false;

  bool all_hold() const {
    return non_trivial && feasible && symmetric && balance_dominated &&
           one_essential;
  }
  std::vector<std::string> missing() const;
};

// A weighted family of constraint functions of common arity. Weights are
// normalized to sum to 1 at construction.
class CspModel {
 public:
  CspModel(std::vector<ConstraintFunction> members, std::vector<double> weights);

  int arity() const { return arity_; }
  std::size_t member_count() const { return members_.size(); }
  const ConstraintFunction& member(std::size_t i) const {
    return members_.at(i);
  }
  double weight(std::size_t i) const { return weights_.at(i); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<ConstraintFunction>& members() const { return members_; }
  const PropertyReport& properties() const { return props_; }

  // Throws ConfigError naming the first missing flag.
  void require_properties(const std::string& operation) const;

  // Forbids the two monochromatic patterns; single member, weight 1.
  static CspModel hypergraph_two_colouring(int k);
  // Closure of the above under per-variable sign flips: 2^(k-1) members.
  static CspModel not_all_equal_sat(int k);

 private:
  int arity_;
  std::vector<ConstraintFunction> members_;
  std::vector<double> weights_;
  PropertyReport props_;
};

// Recomputes the five flags exhaustively (grid check for balance dominance:
// q in {0, 0.001, ..., 1}, tolerance 1e-12 against q = 1/2).
PropertyReport validate_model(const std::vector<ConstraintFunction>& members,
                              const std::vector<double>& weights);
inline PropertyReport validate_model(const CspModel& m) {
  return validate_model(m.members(), m.weights());
}

// Probability that an assignment with i.i.d. P(+1) = q satisfies a random
// member. Balance dominance means this peaks at q = 1/2.
double satisfaction_probability(const CspModel& m, double q);

// Builds the model forbidding J = I union -I; with close_under_sign_flips,
// the family of all distinct sign-flip variants with uniform weights.
// Preconditions: patterns in I pairwise Hamming distance >= 3 and each with
// sign sum > epsilon * k. The result is validated; failures throw.
CspModel build_distance_model(int k, const std::vector<SignVector>& I,
                              double epsilon, bool close_under_sign_flips);

// JSON model files: {"k": int, "constraints": [{"forbidden": [[+-1,...]...],
// "weight": w}...]}.
CspModel model_from_json_text(const std::string& text);
CspModel load_model_file(const std::string& path);
std::string model_to_json_text(const CspModel& m);

// Resolves a --model argument: "2col" or "nae" (requires k) or a file path.
CspModel resolve_model(const std::string& name_or_path, int k);
bool is_builtin_model_name(const std::string& name);

}  // namespace starcore
