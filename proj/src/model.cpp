#include "starcore/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace starcore {

std::vector<std::string> PropertyReport::missing() const {
  std::vector<std::string> out;
  if (!non_trivial) out.push_back("non-trivial");
  if (!feasible) out.push_back("feasible");
  if (!symmetric) out.push_back("symmetric");
  if (!balance_dominated) out.push_back("balance-dominated");
  if (!one_essential) out.push_back("1-essential");
  return out;
}

CspModel::CspModel(std::vector<ConstraintFunction> members,
                   std::vector<double> weights)
    : members_(std::move(members)), weights_(std::move(weights)) {
  if (members_.empty()) throw ConfigError("model has no constraint functions");
  if (weights_.size() != members_.size())
    throw ConfigError("model weight count does not match member count");
  arity_ = members_[0].arity();
  for (const auto& f : members_)
    if (f.arity() != arity_)
      throw ConfigError("model members must share one arity");
  double total = 0;
  for (double w : weights_) {
    if (!(w > 0)) throw ConfigError("model weights must be strictly positive");
    total += w;
  }
  for (double& w : weights_) w /= total;
  props_ = validate_model(members_, weights_);
}

void CspModel::require_properties(const std::string& operation) const {
  auto gaps = props_.missing();
  if (!gaps.empty())
    throw ConfigError(operation + " requires a " + gaps.front() + " model");
}

CspModel CspModel::hypergraph_two_colouring(int k) {
  SignVector ones(k, 1), minus(k, -1);
  return CspModel({ConstraintFunction::from_forbidden(k, {ones, minus})},
                  {1.0});
}

CspModel CspModel::not_all_equal_sat(int k) {
  SignVector ones(k, 1);
  return build_distance_model(k, {ones}, 0.0, true);
}

namespace {

bool balance_dominated_on_grid(const std::vector<ConstraintFunction>& members,
                               const std::vector<double>& weights) {
  const int k = members[0].arity();
  // Per-member histogram of satisfying patterns by number of +1 entries.
  std::vector<std::vector<double>> hist(members.size(),
                                        std::vector<double>(k + 1, 0.0));
  for (std::size_t m = 0; m < members.size(); ++m)
    for (std::size_t i = 0; i < members[m].table_size(); ++i)
      if (members[m].eval_index(i)) hist[m][std::popcount(i)] += 1.0;

  auto prob = [&](double q) {
    double total = 0;
    for (std::size_t m = 0; m < members.size(); ++m) {
      double s = 0;
      for (int u = 0; u <= k; ++u)
        if (hist[m][u] != 0.0)
          s += hist[m][u] * std::pow(q, u) * std::pow(1 - q, k - u);
      total += weights[m] * s;
    }
    return total;
  };

  const double at_half = prob(0.5);
  for (int i = 0; i <= 1000; ++i) {
    if (at_half < prob(i / 1000.0) - 1e-12) return false;
  }
  return true;
}

}  // namespace

double satisfaction_probability(const CspModel& m, double q) {
  if (q < 0 || q > 1) throw ConfigError("q must lie in [0, 1]");
  const int k = m.arity();
  double total = 0;
  for (std::size_t i = 0; i < m.member_count(); ++i) {
    double s = 0;
    for (std::size_t p = 0; p < m.member(i).table_size(); ++p)
      if (m.member(i).eval_index(p)) {
        int u = std::popcount(p);
        s += std::pow(q, u) * std::pow(1 - q, k - u);
      }
    total += m.weight(i) * s;
  }
  return total;
}

PropertyReport validate_model(const std::vector<ConstraintFunction>& members,
                              const std::vector<double>& weights) {
  if (members.empty()) throw ConfigError("model has no constraint functions");
  PropertyReport r;
  bool some_rejects_ones = false, some_rejects_minus = false;
  r.feasible = r.symmetric = r.one_essential = true;
  for (const auto& f : members) {
    if (!f.satisfied_by_uniform(1)) some_rejects_ones = true;
    if (!f.satisfied_by_uniform(-1)) some_rejects_minus = true;
    if (!f.is_feasible()) r.feasible = false;
    if (!f.is_symmetric()) r.symmetric = false;
    if (!f.is_one_essential()) r.one_essential = false;
  }
  r.non_trivial = some_rejects_ones && some_rejects_minus;
  r.balance_dominated = balance_dominated_on_grid(members, weights);
  return r;
}

CspModel build_distance_model(int k, const std::vector<SignVector>& I,
                              double epsilon, bool close_under_sign_flips) {
  if (I.empty()) throw ConfigError("distance model needs a nonempty core set");
  std::vector<std::size_t> idx;
  for (const auto& x : I) {
    if (static_cast<int>(x.size()) != k)
      throw ConfigError("core-set pattern length does not match k");
    int sum = 0;
    for (auto v : x) sum += v;
    if (!(sum > epsilon * k))
      throw ConfigError(
          "core-set pattern violates the sign-sum margin epsilon*k");
    idx.push_back(pattern_index(x));
  }
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b)
      if (std::popcount(idx[a] ^ idx[b]) < 3)
        throw ConfigError(
            "core-set patterns closer than Hamming distance 3");

  std::vector<SignVector> forbidden = I;
  for (const auto& x : I) {
    SignVector neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    forbidden.push_back(neg);
  }
  ConstraintFunction base = ConstraintFunction::from_forbidden(k, forbidden);

  std::vector<ConstraintFunction> members;
  if (!close_under_sign_flips) {
    members.push_back(base);
  } else {
    std::set<std::vector<std::uint8_t>> seen;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      SignVector s = pattern_of(mask, k);
      ConstraintFunction variant = base.signed_variant(s);
      std::vector<std::uint8_t> key(variant.table_size());
      for (std::size_t i = 0; i < key.size(); ++i)
        key[i] = variant.eval_index(i);
      if (seen.insert(key).second) members.push_back(std::move(variant));
    }
  }
  std::vector<double> weights(members.size(), 1.0);
  CspModel model(std::move(members), std::move(weights));
  auto gaps = model.properties().missing();
  if (!gaps.empty()) {
    std::string msg = "distance model fails validation:";
    for (const auto& g : gaps) msg += " " + g;
    throw ConfigError(msg);
  }
  return model;
}

CspModel model_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.contains("k") || !j["k"].is_number_integer())
    throw ConfigError("model file needs an integer \"k\"");
  const int k = j["k"].get<int>();
  if (!j.contains("constraints") || !j["constraints"].is_array() ||
      j["constraints"].empty())
    throw ConfigError("model file needs a nonempty \"constraints\" array");

  std::vector<ConstraintFunction> members;
  std::vector<double> weights;
  for (const auto& c : j["constraints"]) {
    if (!c.contains("forbidden") || !c["forbidden"].is_array())
      throw ConfigError("each constraint needs a \"forbidden\" array");
    std::vector<SignVector> forbidden;
    for (const auto& row : c["forbidden"]) {
      SignVector x;
      for (const auto& v : row) {
        int s = v.get<int>();
        if (s != 1 && s != -1)
          throw ConfigError("forbidden entries must be +1 or -1");
        x.push_back(static_cast<std::int8_t>(s));
      }
      forbidden.push_back(std::move(x));
    }
    members.push_back(ConstraintFunction::from_forbidden(k, forbidden));
    weights.push_back(c.value("weight", 1.0));
  }
  return CspModel(std::move(members), std::move(weights));
}

CspModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json_text(ss.str());
}

std::string model_to_json_text(const CspModel& m) {
  nlohmann::json j;
  j["k"] = m.arity();
  j["constraints"] = nlohmann::json::array();
  for (std::size_t i = 0; i < m.member_count(); ++i) {
    nlohmann::json c;
    c["weight"] = m.weight(i);
    c["forbidden"] = nlohmann::json::array();
    for (std::size_t p : m.member(i).unsat_indices()) {
      auto x = pattern_of(p, m.arity());
      c["forbidden"].push_back(std::vector<int>(x.begin(), x.end()));
    }
    j["constraints"].push_back(std::move(c));
  }
  return j.dump(2);
}

bool is_builtin_model_name(const std::string& name) {
  return name == "2col" || name == "nae";
}

CspModel resolve_model(const std::string& name_or_path, int k) {
  if (name_or_path == "2col") return CspModel::hypergraph_two_colouring(k);
  if (name_or_path == "nae") return CspModel::not_all_equal_sat(k);
  CspModel m = load_model_file(name_or_path);
  if (k > 0 && m.arity() != k)
    throw ConfigError("--k disagrees with the model file arity");
  return m;
}

}  // namespace starcore
