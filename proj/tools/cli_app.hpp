#pragma once

// Command-line front end. Kept in a header so the acceptance suite can drive
// it in-process.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prodgeom.hpp"
#include "prodgeom/io.hpp"

namespace prodgeom::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kDomain = 2 };

struct RunConfig {
  std::string command;
  std::string fn_path;
  std::string at;
  std::string box;
  std::size_t samples = 0;  // 0: command default
  std::string pair = "1,2";
  std::string theorem = "4.1";
  std::string out;  // empty: command default
  std::uint64_t seed = kDefaultSeed;
  std::size_t threads = 1;
};

inline std::vector<double> parse_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string("cannot parse ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw ValidationError(std::string("empty ") + what);
  return out;
}

/// "lo:hi,lo:hi,..."; a single axis is repeated to dimension n.
inline Box parse_box(const std::string& text, std::size_t n) {
  Box box;
  std::stringstream ss(text);
  std::string axis;
  while (std::getline(ss, axis, ',')) {
    const auto colon = axis.find(':');
    if (colon == std::string::npos) throw ValidationError("box axis '" + axis + "' is not of the form lo:hi");
    const auto lo = parse_numbers(axis.substr(0, colon), "box bound");
    const auto hi = parse_numbers(axis.substr(colon + 1), "box bound");
    box.lo.push_back(lo.front());
    box.hi.push_back(hi.front());
  }
  if (box.lo.size() == 1 && n > 1) box = Box::cube(n, box.lo[0], box.hi[0]);
  if (box.size() != n) throw ValidationError("box has " + std::to_string(box.size()) + " axes, function takes " + std::to_string(n));
  box.validate();
  return box;
}

inline std::pair<std::size_t, std::size_t> parse_pair(const std::string& text, std::size_t n) {
  const auto v = parse_numbers(text, "pair");
  if (v.size() != 2) throw ValidationError("pair must be two comma-separated indices");
  const auto to_index = [n](double d) {
    if (d < 1 || d > static_cast<double>(n) || d != std::floor(d)) throw ValidationError("pair index out of range (indices are 1-based)");
    return static_cast<std::size_t>(d) - 1;
  };
  const auto i = to_index(v[0]);
  const auto j = to_index(v[1]);
  if (i == j) throw ValidationError("pair indices must differ");
  return {i, j};
}

inline json error_record(const char* kind, const std::string& message) {
  json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  return j;
}

/// Executes one command; writes the report (or an error record) to `out`.
inline int run(const RunConfig& cfg, std::ostream& out) {
  try {
    const json spec_doc = read_json_file(cfg.fn_path);
    const std::size_t n_guess = [&] {
      // Dimension is needed to broadcast a one-axis box before quasi-sum validation.
      const FunctionExpr probe = parse_function_spec(spec_doc);
      return probe.input_count();
    }();
    std::optional<Box> box;
    if (!cfg.box.empty()) box = parse_box(cfg.box, n_guess);
    const FunctionExpr expr = parse_function_spec(spec_doc, box ? &*box : nullptr);
    const std::size_t n = expr.input_count();
    const Box domain = box ? *box : Box::cube(n, 0.5, 2.0);

    const auto point = [&] {
      if (cfg.at.empty()) throw ValidationError("--at is required for '" + cfg.command + "'");
      Point x = parse_numbers(cfg.at, "point");
      check_point(expr, x);
      return x;
    };

    json report;
    report["tool"] = "prodgeom";
    report["version"] = kToolVersion;
    report["command"] = cfg.command;
    report["spec_digest"] = spec_digest(spec_doc);
    report["seed"] = cfg.seed;
    report["tolerances"] = tolerances_json();

    const std::string format = cfg.out.empty() ? (cfg.command == "scan" ? "csv" : "json") : cfg.out;
    if (format != "json" && format != "csv") throw ValidationError("--out must be json or csv");

    if (cfg.command == "eval") {
      const Point x = point();
      report["point"] = num_array(x);
      report["result"] = to_json(evaluate_jet(expr, x));
    } else if (cfg.command == "elasticity") {
      if (!cfg.at.empty()) {
        const Point x = point();
        const auto [i, j] = parse_pair(cfg.pair, n);
        report["point"] = num_array(x);
        report["pair"] = {i + 1, j + 1};
        report["result"] = to_json(hicks_elasticity(expr, x, i, j));
      } else {
        const std::size_t samples = cfg.samples ? cfg.samples : 100;
        report["box"] = {{"lo", num_array(domain.lo)}, {"hi", num_array(domain.hi)}};
        report["result"] = to_json(detect_ces(expr, domain, samples, cfg.seed));
      }
    } else if (cfg.command == "curvature") {
      const Point x = point();
      report["result"] = to_json(graph_geometry(expr, x));
    } else if (cfg.command == "classify" || (cfg.command == "verify" && cfg.theorem == "1.1")) {
      const auto* qs = expr.get_if<QuasiSumParams>();
      if (!qs) throw ValidationError("classification needs a quasi_sum function spec");
      const std::size_t samples = cfg.samples ? cfg.samples : 100;
      report["box"] = {{"lo", num_array(domain.lo)}, {"hi", num_array(domain.hi)}};
      report["result"] = to_json(classify_quasi_sum(qs->spec, domain, samples, cfg.seed));
    } else if (cfg.command == "verify") {
      TheoremId id;
      if (cfg.theorem == "4.1") {
        id = TheoremId::curvature;
      } else if (cfg.theorem == "4.2") {
        id = TheoremId::flatness;
      } else {
        throw ValidationError("--theorem must be 1.1, 4.1 or 4.2");
      }
      const std::size_t samples = cfg.samples ? cfg.samples : 100;
      report["box"] = {{"lo", num_array(domain.lo)}, {"hi", num_array(domain.hi)}};
      report["result"] = to_json(verify_theorem(id, expr, domain, samples, cfg.seed));
    } else if (cfg.command == "scan") {
      const std::size_t per_axis = cfg.samples ? cfg.samples : 5;
      const auto [i, j] = parse_pair(cfg.pair, n);
      const auto rows = scan_grid(expr, domain, per_axis, i, j, cfg.threads);
      if (format == "csv") {
        out << "# tool=prodgeom version=" << kToolVersion << " spec_digest=" << spec_digest(spec_doc)
            << " seed=" << cfg.seed << "\n";
        out << "# tolerances " << dump_json(tolerances_json(), -1) << "\n";
        out << scan_csv(rows, n, i, j);
        return kOk;
      }
      json table = json::array();
      for (const auto& r : rows) {
        table.push_back({{"x", num_array(r.x)},
                         {"f", num(r.value)},
                         {"W", num(r.W)},
                         {"G", num(r.gauss_kronecker)},
                         {"flatness_residual", num(r.flatness_residual)},
                         {"hicks", to_json(r.hicks)}});
      }
      report["pair"] = {i + 1, j + 1};
      report["result"] = std::move(table);
    } else {
      throw ValidationError("unknown command '" + cfg.command + "'");
    }

    out << (format == "json" ? dump_json(report) + "\n" : report_csv(report));
    return kOk;
  } catch (const ValidationError& e) {
    out << dump_json(error_record("validation", e.what())) << "\n";
    return kValidation;
  } catch (const DomainError& e) {
    out << dump_json(error_record("domain", e.what())) << "\n";
    return kDomain;
  }
}

/// Parses argv into a RunConfig and runs it.
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elasticity of substitution and graph curvature of production functions", "prodgeom"};
  app.require_subcommand(1, 1);
  RunConfig cfg;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"eval", "value, gradient and Hessian at --at"},
      {"elasticity", "Hicks elasticity at --at for --pair, or CES detection over --box"},
      {"curvature", "graph metric, shape operator and curvatures at --at"},
      {"classify", "classify a quasi-sum with the CES property"},
      {"verify", "check a characterization theorem on samples (--theorem 1.1|4.1|4.2)"},
      {"scan", "CSV table of f, W, G, flatness residual and H_ij over a log grid"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--fn", cfg.fn_path, "function spec JSON file")->required();
    sub->add_option("--at", cfg.at, "point p1,p2,...");
    sub->add_option("--box", cfg.box, "box lo:hi,lo:hi,... (default 0.5:2 per axis)");
    sub->add_option("--samples", cfg.samples, "sample count (scan: points per axis)")->check(CLI::PositiveNumber);
    sub->add_option("--pair", cfg.pair, "input pair i,j (1-based)");
    sub->add_option("--theorem", cfg.theorem, "theorem id: 1.1, 4.1 or 4.2");
    sub->add_option("--out", cfg.out, "json or csv");
    sub->add_option("--seed", cfg.seed, "sampling seed");
    sub->add_option("--threads", cfg.threads, "worker threads for scan")->check(CLI::PositiveNumber);
    sub->callback([&cfg, name = std::string(name)] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidation;
  }
  return run(cfg, out);
}

}  // namespace prodgeom::cli
