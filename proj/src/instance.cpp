#include "starcore/instance.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace starcore {

SignVector local_pattern(const Constraint& c, const SignVector& sigma) {
  SignVector x(c.vars.size());
  for (std::size_t i = 0; i < c.vars.size(); ++i) x[i] = sigma.at(c.vars[i]);
  return x;
}

bool satisfies(const CspModel& m, const CspInstance& inst,
               const SignVector& sigma) {
  if (sigma.size() != inst.n)
    throw ConfigError("assignment length does not match instance");
  for (const auto& c : inst.constraints)
    if (!m.member(c.member).eval(local_pattern(c, sigma))) return false;
  return true;
}

SignVector assignment_of_mask(std::uint32_t mask, std::uint32_t n) {
  SignVector sigma(n);
  for (std::uint32_t i = 0; i < n; ++i)
    sigma[i] = (mask >> i) & 1u ? 1 : -1;
  return sigma;
}

std::uint32_t mask_of_assignment(const SignVector& sigma) {
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (sigma[i] == 1) mask |= std::uint32_t{1} << i;
  return mask;
}

std::vector<std::uint32_t> enumerate_solutions(const CspModel& m,
                                               const CspInstance& inst) {
  if (inst.n > kEnumerationCap)
    throw ScaleError("solution enumeration supports n <= 24");
  const std::uint32_t n = inst.n;
  // Check each constraint as soon as its highest variable gets a value;
  // violated branches prune early.
  std::vector<std::vector<std::uint32_t>> due(n);
  for (std::uint32_t ci = 0; ci < inst.constraints.size(); ++ci) {
    std::uint32_t last = 0;
    for (auto v : inst.constraints[ci].vars) {
      if (v >= n) throw ConfigError("constraint variable out of range");
      last = std::max(last, v);
    }
    due[last].push_back(ci);
  }
  std::vector<std::uint32_t> out;
  SignVector sigma(n, -1);
  auto rec = [&](auto&& self, std::uint32_t depth) -> void {
    if (depth == n) {
      out.push_back(mask_of_assignment(sigma));
      return;
    }
    for (int val : {-1, 1}) {
      sigma[depth] = static_cast<std::int8_t>(val);
      bool ok = true;
      for (auto ci : due[depth]) {
        const auto& c = inst.constraints[ci];
        std::size_t idx = 0;
        for (auto v : c.vars)
          idx = (idx << 1) | static_cast<std::size_t>(sigma[v] == 1);
        if (!m.member(c.member).eval_index(idx)) {
          ok = false;
          break;
        }
      }
      if (ok) self(self, depth + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

void write_instance(std::ostream& out, const CspInstance& inst,
                    const std::string& model_name, const SignVector* sigma) {
  out << inst.n << ' ' << inst.constraints.size() << ' ' << inst.k << ' '
      << model_name << '\n';
  for (const auto& c : inst.constraints) {
    out << c.member;
    for (auto v : c.vars) out << ' ' << v;
    out << '\n';
  }
  if (sigma) {
    for (auto s : *sigma) out << (s == 1 ? '+' : '-');
    out << '\n';
  }
}

ParsedInstance read_instance(std::istream& in) {
  ParsedInstance parsed;
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("instance file is empty");
  std::istringstream head(line);
  std::uint64_t m_count = 0;
  if (!(head >> parsed.instance.n >> m_count >> parsed.instance.k >>
        parsed.model_name))
    throw ConfigError("bad instance header");
  for (std::uint64_t i = 0; i < m_count; ++i) {
    if (!std::getline(in, line))
      throw ConfigError("instance file ends before all constraints");
    std::istringstream row(line);
    Constraint c;
    if (!(row >> c.member)) throw ConfigError("bad constraint line");
    std::uint32_t v;
    while (row >> v) c.vars.push_back(v);
    if (static_cast<int>(c.vars.size()) != parsed.instance.k)
      throw ConfigError("constraint tuple length does not match k");
    parsed.instance.constraints.push_back(std::move(c));
  }
  if (std::getline(in, line) && !line.empty()) {
    SignVector sigma;
    for (char ch : line) {
      if (ch == '+')
        sigma.push_back(1);
      else if (ch == '-')
        sigma.push_back(-1);
      else
        throw ConfigError("assignment line must contain only + and -");
    }
    if (sigma.size() != parsed.instance.n)
      throw ConfigError("assignment length does not match n");
    parsed.sigma = std::move(sigma);
  }
  return parsed;
}

}  // namespace starcore
