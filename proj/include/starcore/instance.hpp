#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "starcore/model.hpp"

namespace starcore {

// One drawn constraint: which model member, applied to which ordered
// variable tuple (0-based, distinct).
struct Constraint {
  std::uint32_t member = 0;
  std::vector<std::uint32_t> vars;
};

struct CspInstance {
  std::uint32_t n = 0;
  int k = 0;
  std::vector<Constraint> constraints;
};

// Local pattern of a constraint under a full assignment.
SignVector local_pattern(const Constraint& c, const SignVector& sigma);
bool satisfies(const CspModel& m, const CspInstance& inst,
               const SignVector& sigma);

// Assignments as n-bit masks (bit i set = variable i is +1); usable for
// n <= 32, exhaustive enumeration capped at n <= 24.
constexpr std::uint32_t kEnumerationCap = 24;
SignVector assignment_of_mask(std::uint32_t mask, std::uint32_t n);
std::uint32_t mask_of_assignment(const SignVector& sigma);

// All satisfying assignments, ascending. DFS over variables with
// constraints checked as soon as their last variable is assigned.
std::vector<std::uint32_t> enumerate_solutions(const CspModel& m,
                                               const CspInstance& inst);

// Text format:
//   n M k <model-name>
//   member v1 ... vk        (M lines, 0-based)
//   +-++-...                (optional planted assignment)
void write_instance(std::ostream& out, const CspInstance& inst,
                    const std::string& model_name,
                    const SignVector* sigma = nullptr);
struct ParsedInstance {
  CspInstance instance;
  std::string model_name;
  std::optional<SignVector> sigma;
};
ParsedInstance read_instance(std::istream& in);

}  // namespace starcore
