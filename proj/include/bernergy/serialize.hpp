#pragma once

// JSON views of the report types. Doubles are written by nlohmann's
// shortest round-trip formatter; non-finite values become null.

#include <json.hpp>

#include <string>

#include "bernergy/cmfun.hpp"
#include "bernergy/energy.hpp"
#include "bernergy/stats.hpp"
#include "bernergy/verify.hpp"

namespace bernergy {

using json = nlohmann::ordered_json;

inline json to_json(const point& p) {
  json j = json::array();
  for (double c : p.coords()) j.push_back(c);
  if (p.space() == space_kind::hyperboloid) j.push_back(p.t());
  return j;
}

inline json to_json(const signed_measure& mu) {
  json atoms = json::array(), weights = json::array();
  for (const auto& a : mu.atoms()) atoms.push_back(to_json(a));
  for (double w : mu.weights()) weights.push_back(w);
  json j;
  j["space"] = mu.space() ? std::string(to_string(*mu.space())) : std::string("none");
  j["atoms"] = std::move(atoms);
  j["weights"] = std::move(weights);
  return j;
}

inline json to_json(const verification_report& r) {
  json j;
  j["check"] = r.check;
  j["pass"] = r.pass;
  j["worst"] = r.worst;
  j["threshold"] = r.threshold;
  j["margin"] = r.margin;
  j["tolerance"] = r.tolerance;
  j["samples"] = r.samples;
  j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  j["witness"] = {{"indices", r.witness_indices}, {"values", r.witness_values},
                  {"measure", r.witness_measure ? to_json(*r.witness_measure) : json(nullptr)}};
  j["warnings"] = r.warnings;
  return j;
}

inline json to_json(const constraint_report& r) {
  json j;
  j["level"] = r.level;
  j["mass"] = r.mass;
  j["mass_tolerance"] = r.mass_tolerance;
  j["centered_powers"] = r.centered_powers;
  j["power_tolerances"] = r.power_tolerances;
  j["satisfied"] = r.satisfied;
  j["violated"] = r.violated.empty() ? json(nullptr) : json(r.violated);
  return j;
}

inline json to_json(const test_result& r) {
  json j;
  j["statistic"] = r.statistic;
  j["B"] = r.permutations;
  j["p_value"] = r.p_value;
  j["exceed"] = r.exceed;
  j["seed"] = r.seed;
  j["rng"] = r.rng;
  j["psi"] = r.psi;
  j["kernel"] = r.kernel;
  j["n"] = r.n;
  j["m"] = r.m;
  return j;
}

}  // namespace bernergy
