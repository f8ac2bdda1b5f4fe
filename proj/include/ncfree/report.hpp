#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace ncfree {

/// One named verification outcome. `witness` is free-form JSON (null when
/// there is nothing to show).
struct Check {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  nlohmann::json witness;
};

struct Report {
  std::vector<Check> checks;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;

  void add(std::string name, bool pass, double residual, nlohmann::json witness = nullptr) {
    checks.push_back({std::move(name), pass, residual, std::move(witness)});
  }

  void append(const Report& other, const std::string& prefix = {}) {
    for (const auto& c : other.checks) checks.push_back({prefix + c.name, c.pass, c.residual, c.witness});
    for (const auto& [k, v] : other.tolerances) tolerances.emplace(k, v);
  }

  bool passed() const {
    if (checks.empty()) return false;
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}, {"witness", c.witness}});
  nlohmann::json tol = nlohmann::json::object();
  for (const auto& [k, v] : r.tolerances) tol[k] = v;
  return {{"checks", checks}, {"pass", r.passed()}, {"seed", r.seed}, {"tolerances", tol}};
}

}  // namespace ncfree
