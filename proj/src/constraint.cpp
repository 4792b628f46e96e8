#include "starcore/constraint.hpp"

#include <bit>
#include <string>

namespace starcore {

namespace {

void check_arity(int arity) {
  if (arity < 2 || arity > ConstraintFunction::kMaxArity)
    throw ScaleError("constraint arity " + std::to_string(arity) +
                     " outside supported range [2, " +
                     std::to_string(ConstraintFunction::kMaxArity) + "]");
}

}  // namespace

std::size_t pattern_index(const SignVector& x) {
  std::size_t idx = 0;
  for (std::int8_t v : x) {
    if (v != 1 && v != -1)
      throw ConfigError("sign vector entries must be +1 or -1");
    idx = (idx << 1) | static_cast<std::size_t>(v == 1);
  }
  return idx;
}

SignVector pattern_of(std::size_t index, int arity) {
  SignVector x(arity);
  for (int i = 0; i < arity; ++i) {
    bool bit = (index >> (arity - 1 - i)) & 1u;
    x[i] = bit ? 1 : -1;
  }
  return x;
}

ConstraintFunction::ConstraintFunction(int arity,
                                       std::vector<std::uint8_t> truth_table)
    : arity_(arity), table_(std::move(truth_table)) {
  check_arity(arity);
  if (table_.size() != (std::size_t{1} << arity))
    throw ConfigError("truth table size does not match arity");
  sat_count_ = 0;
  for (auto& v : table_) {
    if (v > 1) throw ConfigError("truth table entries must be 0 or 1");
    sat_count_ += v;
  }
}

ConstraintFunction ConstraintFunction::from_forbidden(
    int arity, const std::vector<SignVector>& forbidden) {
  check_arity(arity);
  std::vector<std::uint8_t> table(std::size_t{1} << arity, 1);
  for (const auto& x : forbidden) {
    if (static_cast<int>(x.size()) != arity)
      throw ConfigError("forbidden pattern length does not match arity");
    table[pattern_index(x)] = 0;
  }
  return ConstraintFunction(arity, std::move(table));
}

ConstraintFunction ConstraintFunction::constant_one(int arity) {
  check_arity(arity);
  return ConstraintFunction(arity,
                            std::vector<std::uint8_t>(std::size_t{1} << arity, 1));
}

bool ConstraintFunction::eval_index(std::size_t pattern) const {
  if (pattern >= table_.size()) throw ConfigError("pattern index out of range");
  return table_[pattern] != 0;
}

bool ConstraintFunction::eval(const SignVector& x) const {
  if (static_cast<int>(x.size()) != arity_)
    throw ConfigError("pattern length does not match constraint arity");
  return table_[pattern_index(x)] != 0;
}

std::vector<std::size_t> ConstraintFunction::sat_indices() const {
  std::vector<std::size_t> out;
  out.reserve(sat_count_);
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (table_[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> ConstraintFunction::unsat_indices() const {
  std::vector<std::size_t> out;
  out.reserve(unsat_count());
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (!table_[i]) out.push_back(i);
  return out;
}

std::vector<int> ConstraintFunction::essential_variables(
    std::size_t pattern) const {
  if (!eval_index(pattern))
    throw ContractError("essential_variables called on unsatisfying pattern");
  std::vector<int> out;
  for (int i = 0; i < arity_; ++i) {
    std::size_t flipped = pattern ^ (std::size_t{1} << (arity_ - 1 - i));
    if (!table_[flipped]) out.push_back(i);
  }
  return out;
}

std::vector<int> ConstraintFunction::essential_variables(
    const SignVector& x) const {
  if (static_cast<int>(x.size()) != arity_)
    throw ConfigError("pattern length does not match constraint arity");
  return essential_variables(pattern_index(x));
}

std::optional<int> ConstraintFunction::essential_variable(
    std::size_t pattern) const {
  auto vars = essential_variables(pattern);
  if (vars.size() > 1)
    throw ContractError(
        "pattern has several essential variables; constraint is not "
        "1-essential");
  if (vars.empty()) return std::nullopt;
  return vars[0];
}

std::optional<int> ConstraintFunction::essential_variable(
    const SignVector& x) const {
  if (static_cast<int>(x.size()) != arity_)
    throw ConfigError("pattern length does not match constraint arity");
  return essential_variable(pattern_index(x));
}

bool ConstraintFunction::satisfied_by_uniform(int sign) const {
  if (sign != 1 && sign != -1) throw ConfigError("sign must be +1 or -1");
  std::size_t idx = sign == 1 ? table_.size() - 1 : 0;
  return table_[idx] != 0;
}

bool ConstraintFunction::is_feasible() const {
  // No unsatisfying pattern may have an unsatisfying single-flip neighbour:
  // then every partial assignment to k-1 variables has a satisfying
  // completion.
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (table_[i]) continue;
    for (int b = 0; b < arity_; ++b)
      if (!table_[i ^ (std::size_t{1} << b)]) return false;
  }
  return true;
}

bool ConstraintFunction::is_symmetric() const {
  const std::size_t mask = table_.size() - 1;
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (table_[i] != table_[~i & mask]) return false;
  return true;
}

bool ConstraintFunction::is_one_essential() const {
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (!table_[i]) continue;
    int count = 0;
    for (int b = 0; b < arity_; ++b)
      if (!table_[i ^ (std::size_t{1} << b)]) ++count;
    if (count > 1) return false;
  }
  return true;
}

ConstraintFunction ConstraintFunction::signed_variant(
    const SignVector& s) const {
  if (static_cast<int>(s.size()) != arity_)
    throw ConfigError("sign pattern length does not match constraint arity");
  // Flipping variable i corresponds to XOR-ing bit (k-1-i) of the index.
  std::size_t flip_mask = 0;
  for (int i = 0; i < arity_; ++i) {
    if (s[i] != 1 && s[i] != -1)
      throw ConfigError("sign vector entries must be +1 or -1");
    if (s[i] == -1) flip_mask |= std::size_t{1} << (arity_ - 1 - i);
  }
  std::vector<std::uint8_t> table(table_.size());
  for (std::size_t i = 0; i < table_.size(); ++i)
    table[i] = table_[i ^ flip_mask];
  return ConstraintFunction(arity_, std::move(table));
}

double FourierTable::parseval_sum() const {
  double s = 0;
  for (double c : coeff) s += c * c;
  return s;
}

double FourierTable::reconstruct(std::size_t pattern) const {
  // chi_Q(x) = prod_{i in Q} x_i = (-1)^(|Q| + |Q & pattern|) in mask form.
  double s = 0;
  for (std::size_t q = 0; q < coeff.size(); ++q) {
    int parity = (std::popcount(q) + std::popcount(q & pattern)) & 1;
    s += parity ? -coeff[q] : coeff[q];
  }
  return s;
}

std::vector<double> FourierTable::level_sums_squared() const {
  std::vector<double> out(arity + 1, 0.0);
  for (std::size_t q = 0; q < coeff.size(); ++q)
    out[std::popcount(q)] += coeff[q] * coeff[q];
  return out;
}

FourierTable fourier_expand(const ConstraintFunction& f) {
  const std::size_t size = f.table_size();
  std::vector<double> w(size);
  for (std::size_t i = 0; i < size; ++i) w[i] = f.eval_index(i) ? 1.0 : 0.0;
  // In-place Walsh-Hadamard: W[q] = sum_m w[m] (-1)^popcount(q & m).
  for (std::size_t len = 1; len < size; len <<= 1) {
    for (std::size_t i = 0; i < size; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        double a = w[j], b = w[j + len];
        w[j] = a + b;
        w[j + len] = a - b;
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(size);
  FourierTable table;
  table.arity = f.arity();
  table.coeff.resize(size);
  for (std::size_t q = 0; q < size; ++q) {
    double v = w[q] * scale;
    table.coeff[q] = (std::popcount(q) & 1) ? -v : v;
  }
  return table;
}

bool unsat_patterns_distance_ge3(const ConstraintFunction& f) {
  // Scan radius-2 balls around each unsatisfying pattern instead of all
  // pairs; O(|I| k^2) regardless of |I|.
  const int k = f.arity();
  for (std::size_t i = 0; i < f.table_size(); ++i) {
    if (f.eval_index(i)) continue;
    for (int a = 0; a < k; ++a) {
      std::size_t one = i ^ (std::size_t{1} << a);
      if (!f.eval_index(one)) return false;
      for (int b = a + 1; b < k; ++b) {
        std::size_t two = one ^ (std::size_t{1} << b);
        if (!f.eval_index(two)) return false;
      }
    }
  }
  return true;
}

}  // namespace starcore
