#pragma once

/**
 * @file io.hpp
 * @brief Function-spec documents and report serialization.
 *
 * A function spec is one JSON object:
 *
 *   {"type": "cobb_douglas", "gamma": 1, "alpha": [0.5, 0.5]}
 *   {"type": "acms", "gamma": 1, "a": [1, 1], "rho": 0.5, "d": 1}
 *   {"type": "quasi_sum", "outer": <fn>, "inner": [<fn>, ...]}
 *   {"type": "ratio", "outer": <fn>}
 *   {"type": "composite", "outer": <fn>, "inner": <function spec>}
 *
 * where <fn> is {"form": "power"|"log"|"exp"|"affine", "coefficient": c,
 * "exponent": p, "shift": s}. "coefficient" defaults to 1, "shift" to 0;
 * "exponent" is required for the power form.
 *
 * Reports are nlohmann::json trees; dump_json prints every number with 17
 * significant digits and non-finite values as the strings "inf", "-inf"
 * and "nan".
 */

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prodgeom/classify.hpp"
#include "prodgeom/elasticity.hpp"
#include "prodgeom/geometry.hpp"
#include "prodgeom/prodfun.hpp"
#include "prodgeom/scan.hpp"

namespace prodgeom {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

// Parsing

inline ScalarFn parse_scalar_fn(const json& j) {
  if (!j.is_object()) throw ValidationError("scalar function must be a JSON object");
  try {
    if (!j.contains("form")) throw ValidationError("scalar function: missing \"form\"");
    const ScalarForm form = scalar_form_from_string(j.at("form").get<std::string>());
    const double coefficient = j.value("coefficient", 1.0);
    const double shift = j.value("shift", 0.0);
    double exponent = 1.0;
    if (form == ScalarForm::power) {
      if (!j.contains("exponent")) throw ValidationError("scalar function: power form needs \"exponent\"");
      exponent = j.at("exponent").get<double>();
    }
    return ScalarFn(form, coefficient, exponent, shift);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scalar function: ") + e.what());
  }
}

namespace detail {

inline std::vector<double> number_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ValidationError(std::string("function spec: \"") + key + "\" must be an array of numbers");
  }
  return j.at(key).get<std::vector<double>>();
}

inline double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ValidationError(std::string("function spec: \"") + key + "\" must be a number");
  }
  return j.at(key).get<double>();
}

}  // namespace detail

/// Builds the FunctionExpr described by `j`. Quasi-sum monotonicity is
/// checked on `domain` when given, otherwise on [0.5, 2]^n.
inline FunctionExpr parse_function_spec(const json& j, const Box* domain = nullptr) {
  if (!j.is_object()) throw ValidationError("function spec must be a JSON object");
  if (!j.contains("type") || !j.at("type").is_string()) throw ValidationError("function spec: missing \"type\"");
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "cobb_douglas") {
      return build_cobb_douglas(detail::number(j, "gamma"), detail::number_array(j, "alpha"));
    }
    if (type == "acms") {
      return build_acms(detail::number(j, "gamma"), detail::number_array(j, "a"), detail::number(j, "rho"),
                        detail::number(j, "d"));
    }
    if (type == "quasi_sum") {
      if (!j.contains("outer") || !j.contains("inner") || !j.at("inner").is_array()) {
        throw ValidationError("quasi_sum spec needs \"outer\" and an \"inner\" array");
      }
      QuasiSumSpec spec{parse_scalar_fn(j.at("outer")), {}};
      for (const auto& h : j.at("inner")) spec.inner.push_back(parse_scalar_fn(h));
      return domain ? build_quasi_sum(std::move(spec), *domain) : build_quasi_sum(std::move(spec));
    }
    if (type == "ratio") {
      if (!j.contains("outer")) throw ValidationError("ratio spec needs \"outer\"");
      return build_ratio(parse_scalar_fn(j.at("outer")));
    }
    if (type == "composite") {
      if (!j.contains("outer") || !j.contains("inner")) throw ValidationError("composite spec needs \"outer\" and \"inner\"");
      return build_composite(parse_scalar_fn(j.at("outer")), parse_function_spec(j.at("inner"), domain));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("function spec: ") + e.what());
  }
  throw ValidationError("function spec: unknown type \"" + type + "\"");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read function spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("function spec is not valid JSON: ") + e.what());
  }
}

/// 64-bit FNV-1a of the compact canonical dump, as 16 hex digits.
inline std::string spec_digest(const json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Formatting

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Number node, or a string for non-finite values.
inline json num(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

inline json num_array(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

inline json num_array(const Vector& v) { return num_array(std::span<const double>(v.data(), static_cast<std::size_t>(v.size()))); }

inline json num_matrix(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(num(m(r, c)));
    a.push_back(std::move(row));
  }
  return a;
}

namespace detail {

inline void escape_string(std::string& out, const std::string& s) {
  out += json(s).dump();
}

inline void dump_node(std::string& out, const json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        escape_string(out, k);
        out += indent < 0 ? ":" : ": ";
        dump_node(out, v, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_node(out, v, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: out += format_double(j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

}  // namespace detail

/// Serializes with 17 significant digits for every floating-point number.
inline std::string dump_json(const json& j, int indent = 2) {
  std::string out;
  detail::dump_node(out, j, indent, 0);
  return out;
}

// Report serialization

inline json tolerances_json() {
  json t;
  t["hicks_numerator_threshold"] = kNumeratorThreshold;
  t["hicks_denominator_threshold"] = kDenominatorThreshold;
  t["ces_constancy_tolerance"] = kCesTolerance;
  t["ces_residual_tolerance"] = kCesResidualTolerance;
  t["structure_tolerance"] = kStructureTolerance;
  t["unit_sigma_tolerance"] = kUnitSigmaTolerance;
  t["euler_tolerance"] = kEulerTolerance;
  t["ode_tolerance"] = kOdeTolerance;
  t["vanishing_curvature_threshold"] = kVanishingCurvatureThreshold;
  t["flatness_threshold"] = kFlatnessThreshold;
  t["monotonicity_samples_per_axis"] = kMonotonicitySamples;
  return t;
}

inline json to_json(const Jet2& jet) {
  json j;
  j["value"] = num(jet.value);
  j["gradient"] = num_array(jet.gradient);
  j["hessian"] = num_matrix(jet.hessian);
  return j;
}

inline json to_json(const HicksValue& h) {
  json j;
  j["kind"] = std::string(to_string(h.kind));
  j["value"] = h.kind == HicksKind::degenerate ? json(nullptr) : num(h.value);
  j["numerator_scaled"] = num(h.numerator_scaled);
  j["denominator_scaled"] = num(h.denominator_scaled);
  return j;
}

inline json to_json(const ElasticityReport& r) {
  json j;
  j["verdict"] = std::string(to_string(r.verdict));
  j["sigma_estimate"] = r.sigma_estimate ? num(*r.sigma_estimate) : json(nullptr);
  j["max_deviation"] = num(r.max_deviation);
  j["samples"] = r.samples;
  j["anchor"] = num_array(r.anchor);
  json pairs = json::array();
  for (const auto& p : r.pairs) {
    json e;
    e["pair"] = {p.i + 1, p.j + 1};
    e["hicks"] = to_json(p.value);
    pairs.push_back(std::move(e));
  }
  j["pairs_at_anchor"] = std::move(pairs);
  j["counts"] = {{"finite", r.finite_count}, {"infinite", r.infinite_count}, {"degenerate", r.degenerate_count}};
  return j;
}

inline json to_json(const GraphGeometry& g) {
  json j;
  j["point"] = num_array(g.point);
  j["value"] = num(g.value);
  j["W"] = num(g.W);
  j["unit_normal"] = num_array(g.unit_normal);
  j["metric"] = num_matrix(g.metric);
  j["second_fundamental_form"] = num_matrix(g.second_fundamental_form);
  j["shape_operator"] = num_matrix(g.shape_operator);
  j["principal_curvatures"] = num_array(g.principal_curvatures);
  j["hessian_det"] = num(g.hessian_det);
  j["gauss_kronecker"] = num(g.gauss_kronecker);
  j["scaled_gauss_kronecker"] = num(g.scaled_gauss_kronecker);
  j["max_riemann"] = num(g.max_riemann);
  j["flatness_residual"] = num(g.flatness_residual);
  return j;
}

inline json to_json(const ClassificationResult& c) {
  json j;
  j["case"] = std::string(to_string(c.verdict));
  j["sigma"] = c.sigma ? num(*c.sigma) : json(nullptr);
  j["fitted_inner_parameters"] = num_array(c.fitted_inner);
  j["separation_constant_k"] = c.separation_k ? num(*c.separation_k) : json(nullptr);
  j["residuals"] = {{"ces", num(c.ces_residual)}, {"structure", num(c.structure_residual)}};
  j["elasticity"] = to_json(c.ces);
  return j;
}

inline json to_json(const TheoremReport& r) {
  json j;
  j["theorem"] = std::string(to_string(r.theorem));
  j["verdict"] = std::string(to_string(r.verdict));
  json hyp;
  hyp["ces_verdict"] = std::string(to_string(r.ces_verdict));
  hyp["sigma"] = r.sigma ? num(*r.sigma) : json(nullptr);
  j["hypothesis_check"] = std::move(hyp);
  json concl;
  concl["geometric_measure"] = r.theorem == TheoremId::curvature ? "scaled_gauss_kronecker" : "flatness_residual";
  concl["geometric_holds"] = r.geometric_holds;
  concl["geometric_max"] = num(r.geometric_max);
  concl["geometric_threshold"] = num(r.geometric_threshold);
  concl["linearly_homogeneous_family"] = r.family_holds;
  concl["euler_max_deviation"] = num(r.euler_max_deviation);
  if (r.ode_kind) {
    concl["outer_ode"] = *r.ode_kind == HomotheticKind::acms ? "acms" : "cobb_douglas";
    concl["outer_ode_holds"] = r.ode_holds;
    concl["outer_ode_max_residual"] = num(r.ode_max);
  } else {
    concl["outer_ode"] = nullptr;
  }
  j["conclusion_check"] = std::move(concl);
  json rows = json::array();
  for (const auto& row : r.rows) {
    json e;
    e["x"] = num_array(row.x);
    e["f"] = num(row.value);
    e["W"] = num(row.W);
    e["G"] = num(row.gauss_kronecker);
    e["scaled_G"] = num(row.scaled_gauss_kronecker);
    e["max_riemann"] = num(row.max_riemann);
    e["flatness_residual"] = num(row.flatness_residual);
    e["euler_quotient"] = num(row.euler_quotient);
    e["ode_residual"] = row.ode_residual ? num(*row.ode_residual) : json(nullptr);
    rows.push_back(std::move(e));
  }
  j["per_point_data"] = std::move(rows);
  return j;
}

/// Scan table: x_1..x_n, f, W, G, flatness_residual, H_ij.
inline std::string scan_csv(const std::vector<ScanRow>& rows, std::size_t n, std::size_t pair_i, std::size_t pair_j) {
  std::string out;
  for (std::size_t k = 0; k < n; ++k) out += "x" + std::to_string(k + 1) + ",";
  out += "f,W,G,flatness_residual,H" + std::to_string(pair_i + 1) + std::to_string(pair_j + 1) + "\n";
  for (const auto& r : rows) {
    for (double x : r.x) out += format_double(x) + ",";
    out += format_double(r.value) + "," + format_double(r.W) + "," + format_double(r.gauss_kronecker) + "," +
           format_double(r.flatness_residual) + ",";
    out += r.hicks.kind == HicksKind::degenerate ? std::string("degenerate") : format_double(r.hicks.value);
    out += "\n";
  }
  return out;
}

/// key,value rows for a JSON report; nested keys are joined with '.'.
inline void flatten_csv(std::string& out, const json& j, const std::string& prefix) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten_csv(out, v, prefix.empty() ? k : prefix + "." + k);
  } else if (j.is_array()) {
    std::size_t idx = 0;
    for (const auto& v : j) flatten_csv(out, v, prefix + "." + std::to_string(idx++));
  } else {
    out += prefix + ",";
    if (j.is_string()) {
      out += j.get<std::string>();
    } else {
      detail::dump_node(out, j, -1, 0);
    }
    out += "\n";
  }
}

inline std::string report_csv(const json& j) {
  std::string out = "key,value\n";
  flatten_csv(out, j, "");
  return out;
}

}  // namespace prodgeom
