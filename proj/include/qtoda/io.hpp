#pragma once

#include <charconv>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtoda/koornwinder.hpp"
#include "qtoda/params.hpp"
#include "qtoda/partition.hpp"
#include "qtoda/polynomial.hpp"
#include "qtoda/whittaker.hpp"

namespace qtoda {

using json = nlohmann::json;

inline constexpr const char* kReportVersion = "1";

// Shortest decimal that round-trips the double.
inline std::string double_str(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// Key form of a partition: "[2,1]".  Doubles as the JSON map key for
// polynomial coefficient tables.
inline std::string partition_key(const Partition& lambda) {
  std::string s = "[";
  for (int j = 0; j < lambda.rank(); ++j) {
    if (j) s += ',';
    s += std::to_string(lambda[j]);
  }
  return s + "]";
}

inline json partition_json(const Partition& lambda) {
  json a = json::array();
  for (int j = 0; j < lambda.rank(); ++j) a.push_back(lambda[j]);
  return a;
}

inline json poly_json(const InvariantPoly& p) {
  json o = json::object();
  for (const auto& [lambda, c] : p.coeffs()) o[partition_key(lambda)] = c.to_string();
  return o;
}

inline json params_json(const ParamSet& P) {
  json o;
  o["n"] = P.n();
  o["q"] = P.q().to_string();
  o["t"] = P.t().to_string();
  json that = json::array();
  for (int r = 0; r < 4; ++r) that.push_back(P.that(r).to_string());
  o["that"] = that;
  o["mode"] = mode_to_string(P.mode());
  return o;
}

// One verification check; exact checks carry residual "0" (or an exact nonzero
// value) with tolerance "0", numeric checks carry decimal strings.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string residual;
  std::string tolerance;
  double seconds = 0.0;
  std::string note;
};

struct Report {
  json params;
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }

  json to_json() const {
    json o;
    o["version"] = kReportVersion;
    o["params"] = params;
    json arr = json::array();
    for (const auto& c : checks) {
      json e;
      e["name"] = c.name;
      e["status"] = c.pass ? "pass" : "fail";
      e["residual"] = c.residual;
      e["tolerance"] = c.tolerance;
      e["seconds"] = c.seconds;
      if (!c.note.empty()) e["note"] = c.note;
      arr.push_back(e);
    }
    o["checks"] = arr;
    return o;
  }
};

// Vanishing-interpolation table: polynomials, exact norm ratios, the numeric
// norm constant, and the eigenvalue tensor over the operator family.
inline json whittaker_table_json(const ParamSet& P, const DualTable& tab) {
  json o;
  o["version"] = kReportVersion;
  o["params"] = params_json(P);
  o["basis"] = "monomial";
  json entries = json::array();
  for (const auto& lambda : tab.basis) {
    json e;
    e["lambda"] = partition_json(lambda);
    e["coeffs"] = poly_json(tab.polys.at(lambda));
    entries.push_back(e);
  }
  o["entries"] = entries;
  json norms = json::object();
  for (const auto& lambda : tab.basis)
    norms[partition_key(lambda)] = lattice_delta_ratio(P, lambda).to_string();
  o["norm_ratios"] = norms;
  o["norm_constant"] = lattice_delta0(P);
  json eig = json::object();
  for (const auto& lambda : tab.basis) {
    json row = json::array();
    for (int l = 1; l <= P.n(); ++l) row.push_back(dual_eigenvalue(P, lambda, l).to_string());
    eig[partition_key(lambda)] = row;
  }
  o["eigenvalues"] = eig;
  return o;
}

// Generic-parameter table: same shape, scalar eigenvalue per member.
inline json mk_table_json(const ParamSet& P, const OperatorTable& tab) {
  json o;
  o["version"] = kReportVersion;
  o["params"] = params_json(P);
  o["basis"] = "monomial";
  json entries = json::array();
  for (const auto& lambda : tab.basis) {
    json e;
    e["lambda"] = partition_json(lambda);
    e["coeffs"] = poly_json(tab.polys.at(lambda));
    entries.push_back(e);
  }
  o["entries"] = entries;
  json norms = json::object();
  for (const auto& lambda : tab.basis)
    norms[partition_key(lambda)] = mk_delta_ratio(P, lambda).to_string();
  o["norm_ratios"] = norms;
  o["norm_constant"] = mk_delta0(P);
  json eig = json::object();
  for (const auto& lambda : tab.basis)
    eig[partition_key(lambda)] = mk_eigenvalue(P, lambda).to_string();
  o["eigenvalues"] = eig;
  return o;
}

}  // namespace qtoda
