#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uet/envelope.hpp"
#include "uet/report_json.hpp"
#include "uet/scenario.hpp"
#include "uet/transforms.hpp"
#include "uet/verify.hpp"
#include "uet/version.hpp"

namespace uet {

// Exit codes: 0 all checks pass, 1 a mathematical condition failed,
// 2 configuration or usage error. No other codes are produced.
inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;

struct RunOptions {
  int threads = 1;
};

struct CommandResult {
  int exit_code = kExitPass;
  json report;
  std::string csv;      // envelope table (estimate only)
  std::string summary;  // human-readable lines
};

namespace detail {

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::string brief_failure(const ComplianceReport& r) {
  const ConditionResult* bad = r.first_failure();
  if (!bad) return "";
  std::string msg = bad->id;
  if (bad->witness) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), " at (t=%g, s=%g, t0=%g), vector %s, lhs=%.6g, rhs=%.6g",
                  bad->witness->when.t, bad->witness->when.s, bad->witness->when.t0,
                  bad->witness->vector_id.c_str(), bad->witness->lhs, bad->witness->rhs);
    msg += buf;
  }
  return msg;
}

inline json make_document(const char* command, const Scenario& s) {
  json doc;
  doc["command"] = command;
  doc["tool_version"] = kVersion;
  doc["scenario"] = scenario_to_json(s);
  return doc;
}

}  // namespace detail

/// check: idempotency, the composition law, and the compatibility system
/// matching the family arity.
inline CommandResult cmd_check(const Scenario& s, const RunOptions& opt = {}) {
  detail::StopWatch watch;
  CommandResult res;
  res.report = detail::make_document("check", s);
  try {
    const EvolutionOperator op = build_operator(s);
    const ComplianceReport evolution =
        check_evolution_property(op, s.grid, s.check_tol, s.norm, opt.threads);
    ComplianceReport compat;
    switch (family_kind(s)) {
      case FamilyKind::Triple:
        compat = check_compat3(build_triple(s), op, s.norm, s.grid, s.check_tol, opt.threads);
        break;
      case FamilyKind::Pair:
        compat = check_compat2(build_pair(s), op, s.norm, s.grid, s.check_tol, opt.threads);
        break;
      case FamilyKind::Quad:
        compat = check_compat4(build_quad(s), op, s.norm, s.grid, s.check_tol, opt.threads);
        break;
    }
    res.report["evolution"] = report_to_json(evolution);
    res.report["compatibility"] = report_to_json(compat);
    const bool ok = evolution.passed() && compat.passed();
    res.report["verdict"] = ok ? "pass" : "fail";
    res.exit_code = ok ? kExitPass : kExitViolation;
    res.summary = "check: " + std::string(ok ? "pass" : "fail");
    if (!ok)
      res.summary += " (" + detail::brief_failure(evolution.passed() ? compat : evolution) + ")";
  } catch (const ConstructionError& e) {
    res.report["verdict"] = "fail";
    res.report["refusal"] = e.what();
    res.exit_code = kExitViolation;
    res.summary = std::string("check: fail (") + e.what() + ")";
  }
  res.report["duration_ms"] = watch.elapsed_ms();
  return res;
}

/// verify: the inequality system matching the family arity, with the
/// scenario's constants. Requires constants.
inline CommandResult cmd_verify(const Scenario& s, const RunOptions& opt = {}) {
  detail::StopWatch watch;
  CommandResult res;
  res.report = detail::make_document("verify", s);
  if (!s.has_constants()) {
    res.report["verdict"] = "error";
    res.report["error"] = "scenario supplies no constants";
    res.exit_code = kExitConfig;
    res.summary = "verify: missing constants";
    res.report["duration_ms"] = watch.elapsed_ms();
    return res;
  }
  try {
    const EvolutionOperator op = build_operator(s);
    ComplianceReport compat;
    ComplianceReport conditions;
    bool compatible = false;
    switch (family_kind(s)) {
      case FamilyKind::Triple: {
        const FamilyTriple fam = build_triple(s);
        compat = check_compat3(fam, op, s.norm, s.grid, s.check_tol, opt.threads);
        compatible = compat.passed();
        if (compatible)
          conditions = verify_trichotomy(op, fam, s.full_constants(), s.norm, s.grid, s.verify_tol,
                                         opt.threads);
        break;
      }
      case FamilyKind::Pair: {
        const FamilyPair fam = build_pair(s);
        compat = check_compat2(fam, op, s.norm, s.grid, s.check_tol, opt.threads);
        compatible = compat.passed();
        if (compatible)
          conditions = verify_pair_conditions(op, fam, s.normalized_constants(), s.norm, s.grid,
                                              s.verify_tol, opt.threads);
        break;
      }
      case FamilyKind::Quad: {
        const FamilyQuad fam = build_quad(s);
        compat = check_compat4(fam, op, s.norm, s.grid, s.check_tol, opt.threads);
        compatible = compat.passed();
        if (compatible)
          conditions = verify_quad_conditions(op, fam, s.normalized_constants(), s.norm, s.grid,
                                              s.verify_tol, opt.threads);
        break;
      }
    }
    res.report["compatibility"] = report_to_json(compat);
    if (compatible) res.report["conditions"] = report_to_json(conditions);
    const bool ok = compatible && conditions.passed();
    res.report["verdict"] = ok ? "pass" : "fail";
    res.exit_code = ok ? kExitPass : kExitViolation;
    res.summary = "verify: " + std::string(ok ? "pass" : "fail");
    if (!ok)
      res.summary += " (" + detail::brief_failure(compatible ? conditions : compat) + ")";
  } catch (const ConstructionError& e) {
    res.report["verdict"] = "fail";
    res.report["refusal"] = e.what();
    res.exit_code = kExitViolation;
    res.summary = std::string("verify: fail (") + e.what() + ")";
  }
  res.report["duration_ms"] = watch.elapsed_ms();
  return res;
}

/// estimate: per-direction feasible-constant envelopes plus the
/// classification verdict. Descriptive, so it exits 0 unless the scenario
/// itself is unusable.
inline CommandResult cmd_estimate(const Scenario& s, const RunOptions& opt = {}) {
  detail::StopWatch watch;
  CommandResult res;
  res.report = detail::make_document("estimate", s);
  try {
    const EvolutionOperator op = build_operator(s);
    FamilyTriple triple;
    switch (family_kind(s)) {
      case FamilyKind::Triple: triple = build_triple(s); break;
      case FamilyKind::Pair: {
        TripleTransform tr = pair_to_triple(build_pair(s), op, s.norm, s.grid, s.check_tol, opt.threads);
        res.report["derived_from"] = transform_record_to_json(tr.record);
        triple = std::move(tr.family);
        break;
      }
      case FamilyKind::Quad: {
        TripleTransform tr = quad_to_triple(build_quad(s), op, s.norm, s.grid, s.check_tol, opt.threads);
        res.report["derived_from"] = transform_record_to_json(tr.record);
        triple = std::move(tr.family);
        break;
      }
    }
    const Classification cls =
        classify(op, triple, s.norm, s.grid, s.nu_grid, s.n_ceiling, s.check_tol, opt.threads);
    json curves = json::array();
    for (const ParetoCurve& c : cls.curves) curves.push_back(curve_to_json(c));
    res.report["curves"] = curves;
    res.report["classification"] = classification_to_json(cls);
    res.csv = curves_to_csv(cls.curves);
    res.summary = std::string("estimate: ") + to_string(cls.verdict);
    if (cls.constants) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), " (N=%.6g, nu=%.6g, nu0=%.6g)", cls.constants->N,
                    cls.constants->nu, cls.constants->nu0);
      res.summary += buf;
    }
  } catch (const ConstructionError& e) {
    res.report["classification"] = {{"verdict", "no-evidence"}, {"note", e.what()}};
    res.summary = std::string("estimate: no-evidence (") + e.what() + ")";
  } catch (const IncompatibleError& e) {
    res.report["classification"] = {{"verdict", "no-evidence"}, {"note", e.what()}};
    res.summary = std::string("estimate: no-evidence (") + e.what() + ")";
  }
  res.report["duration_ms"] = watch.elapsed_ms();
  return res;
}

namespace detail {

inline Scenario transformed_scenario(const Scenario& base, const json& family_spec,
                                     const std::string& suffix) {
  json j = scenario_to_json(base);
  j["family"] = family_spec;
  j["name"] = base.name.empty() ? suffix : base.name + ":" + suffix;
  return parse_scenario(j);
}

inline json family_spec_of_pair(const FamilyPair& f) {
  return json{{"kind", "pair"},
              {"stable", projection_to_spec(f.stable)},
              {"unstable", projection_to_spec(f.unstable)}};
}

inline json family_spec_of_triple(const FamilyTriple& f) {
  return json{{"kind", "triple"},
              {"center", projection_to_spec(f.center)},
              {"stable", projection_to_spec(f.stable)},
              {"unstable", projection_to_spec(f.unstable)}};
}

inline json family_spec_of_quad(const FamilyQuad& f) {
  return json{{"kind", "quad"},
              {"stable", projection_to_spec(f.stable)},
              {"unstable", projection_to_spec(f.unstable)},
              {"co_stable", projection_to_spec(f.co_stable)},
              {"co_unstable", projection_to_spec(f.co_unstable)}};
}

}  // namespace detail

/// convert: runs one of the four constructions, emits the transformed family
/// as a scenario, checks the target compatibility system and, when constants
/// are present, verifies that certification carries over to the target.
inline CommandResult cmd_convert(const Scenario& s, const std::string& construction,
                                 const RunOptions& opt = {}) {
  detail::StopWatch watch;
  CommandResult res;
  res.report = detail::make_document("convert", s);
  res.report["construction"] = construction;

  const FamilyKind kind = family_kind(s);
  const bool arity_ok = (construction == "triple_to_pair" && kind == FamilyKind::Triple) ||
                        (construction == "pair_to_triple" && kind == FamilyKind::Pair) ||
                        (construction == "triple_to_quad" && kind == FamilyKind::Triple) ||
                        (construction == "quad_to_triple" && kind == FamilyKind::Quad);
  if (!arity_ok) {
    res.report["verdict"] = "error";
    res.report["error"] = "construction '" + construction + "' does not accept a " +
                          std::string(to_string(kind)) + " family";
    res.exit_code = kExitConfig;
    res.summary = "convert: arity mismatch";
    res.report["duration_ms"] = watch.elapsed_ms();
    return res;
  }

  try {
    const EvolutionOperator op = build_operator(s);
    TransformRecord record;
    json target_spec;
    ComplianceReport target_compat;
    ComplianceReport source_verify, target_verify;
    bool source_certified = false, target_certified = false;
    const bool with_constants = s.has_constants();
    const NormalizedConstants nc = with_constants ? s.normalized_constants() : NormalizedConstants{2, 1, 1};

    if (construction == "triple_to_pair") {
      const FamilyTriple src = build_triple(s);
      PairTransform tr = triple_to_pair(src, op, s.norm, s.grid, s.check_tol, opt.threads);
      record = tr.record;
      target_spec = detail::family_spec_of_pair(tr.family);
      target_compat = check_compat2(tr.family, op, s.norm, s.grid, s.check_tol, opt.threads);
      if (with_constants) {
        source_verify = verify_trichotomy(op, src, expand_constants(nc), s.norm, s.grid,
                                          s.verify_tol, opt.threads);
        target_verify = verify_pair_conditions(op, tr.family, nc, s.norm, s.grid, s.verify_tol,
                                               opt.threads);
      }
    } else if (construction == "pair_to_triple") {
      const FamilyPair src = build_pair(s);
      TripleTransform tr = pair_to_triple(src, op, s.norm, s.grid, s.check_tol, opt.threads);
      record = tr.record;
      target_spec = detail::family_spec_of_triple(tr.family);
      target_compat = check_compat3(tr.family, op, s.norm, s.grid, s.check_tol, opt.threads);
      if (with_constants) {
        source_verify = verify_pair_conditions(op, src, nc, s.norm, s.grid, s.verify_tol, opt.threads);
        target_verify = verify_trichotomy(op, tr.family, expand_constants(nc), s.norm, s.grid,
                                          s.verify_tol, opt.threads);
      }
    } else if (construction == "triple_to_quad") {
      const FamilyTriple src = build_triple(s);
      QuadTransform tr = triple_to_quad(src, op, s.norm, s.grid, s.check_tol, opt.threads);
      record = tr.record;
      target_spec = detail::family_spec_of_quad(tr.family);
      target_compat = check_compat4(tr.family, op, s.norm, s.grid, s.check_tol, opt.threads);
      if (with_constants) {
        source_verify = verify_trichotomy(op, src, expand_constants(nc), s.norm, s.grid,
                                          s.verify_tol, opt.threads);
        target_verify = verify_quad_conditions(op, tr.family, nc, s.norm, s.grid, s.verify_tol,
                                               opt.threads);
      }
    } else {  // quad_to_triple
      const FamilyQuad src = build_quad(s);
      TripleTransform tr = quad_to_triple(src, op, s.norm, s.grid, s.check_tol, opt.threads);
      record = tr.record;
      target_spec = detail::family_spec_of_triple(tr.family);
      target_compat = check_compat3(tr.family, op, s.norm, s.grid, s.check_tol, opt.threads);
      if (with_constants) {
        source_verify = verify_quad_conditions(op, src, nc, s.norm, s.grid, s.verify_tol, opt.threads);
        target_verify = verify_trichotomy(op, tr.family, expand_constants(nc), s.norm, s.grid,
                                          s.verify_tol, opt.threads);
      }
    }

    res.report["transform"] = transform_record_to_json(record);
    const Scenario target = detail::transformed_scenario(s, target_spec, construction);
    res.report["transformed_scenario"] = scenario_to_json(target);
    res.report["target_compatibility"] = report_to_json(target_compat);

    bool transferred = true;
    if (with_constants) {
      source_certified = source_verify.passed();
      target_certified = target_verify.passed();
      // Certification must carry over whenever the source is certified.
      transferred = !source_certified || target_certified;
      res.report["constant_transport"] = {{"source_certified", source_certified},
                                          {"target_certified", target_certified},
                                          {"transferred", transferred},
                                          {"source", report_to_json(source_verify)},
                                          {"target", report_to_json(target_verify)}};
    }

    const bool ok = target_compat.passed() && transferred;
    res.report["verdict"] = ok ? "pass" : "fail";
    res.exit_code = ok ? kExitPass : kExitViolation;
    res.summary = "convert " + construction + ": " + (ok ? "pass" : "fail");
  } catch (const IncompatibleError& e) {
    res.report["verdict"] = "fail";
    res.report["refusal"] = e.what();
    res.exit_code = kExitViolation;
    res.summary = std::string("convert: refused (") + e.what() + ")";
  } catch (const ConstructionError& e) {
    res.report["verdict"] = "fail";
    res.report["refusal"] = e.what();
    res.exit_code = kExitViolation;
    res.summary = std::string("convert: refused (") + e.what() + ")";
  }
  res.report["duration_ms"] = watch.elapsed_ms();
  return res;
}

// ---------------------------------------------------------------------------
// Built-in fixtures for the demo command. The same definitions live under
// scenarios/ for direct CLI use; a unit test keeps the two in sync.
// ---------------------------------------------------------------------------

inline const char* kFixtureConstant = R"json({
  "name": "constant",
  "dimension": 1,
  "operator": {"kind": "scalar_quotient", "f": {"form": "constant", "value": 1.0}},
  "family": {"kind": "triple",
             "center": {"kind": "identity"},
             "stable": {"kind": "zero"},
             "unstable": {"kind": "zero"}},
  "constants": {"N": 1.01, "nu": 1.0, "nu0": 0.5}
})json";

inline const char* kFixtureDecay = R"json({
  "name": "decay",
  "dimension": 1,
  "operator": {"kind": "scalar_quotient", "f": {"form": "exp_linear", "rate": -1.0}},
  "family": {"kind": "triple",
             "center": {"kind": "zero"},
             "stable": {"kind": "identity"},
             "unstable": {"kind": "zero"}},
  "constants": {"N": 1.01, "nu": 1.0, "nu0": 1.0}
})json";

inline const char* kFixtureGrowth = R"json({
  "name": "growth",
  "dimension": 1,
  "operator": {"kind": "scalar_quotient", "f": {"form": "exp_linear", "rate": 1.0}},
  "family": {"kind": "triple",
             "center": {"kind": "zero"},
             "stable": {"kind": "zero"},
             "unstable": {"kind": "identity"}},
  "constants": {"N": 1.01, "nu": 1.0, "nu0": 1.0}
})json";

inline const char* kFixtureDiag3 = R"json({
  "name": "diag3",
  "dimension": 3,
  "operator": {"kind": "diagonal_integrand", "rules": [
    {"kind": "integral_of_phi", "sign": -1,
     "phi": {"form": "offset_exp_decay", "limit": 1.0, "amplitude": 1.0, "decay": 1.0}},
    {"kind": "integral_of_phi", "sign": 1,
     "phi": {"form": "offset_exp_decay", "limit": 1.0, "amplitude": 1.0, "decay": 1.0}},
    {"kind": "linear_rate", "rate": -2.0}
  ]},
  "family": {"kind": "triple",
             "center": {"kind": "coordinate", "axes": [3]},
             "stable": {"kind": "coordinate", "axes": [1]},
             "unstable": {"kind": "coordinate", "axes": [2]}},
  "constants": {"N": 1.01, "nu": 1.0, "nu0": 2.0}
})json";

inline const char* kFixtureQuadraticCenter = R"json({
  "name": "quadratic_center",
  "dimension": 1,
  "operator": {"kind": "scalar_quotient", "f": {"form": "exp_quadratic", "coeff": 1.0}},
  "family": {"kind": "triple",
             "center": {"kind": "identity"},
             "stable": {"kind": "zero"},
             "unstable": {"kind": "zero"}},
  "grid": {"offsets_t": [0.0, 0.25, 1.0, 2.5, 5.0, 10.0]},
  "constants": {"N": 1000000.0, "nu": 1.0, "nu0": 2.0},
  "nu_grid": [0.5, 1.0, 2.0, 4.0, 8.0]
})json";

inline std::vector<std::pair<std::string, const char*>> demo_fixture_sources() {
  return {{"constant", kFixtureConstant},
          {"decay", kFixtureDecay},
          {"growth", kFixtureGrowth},
          {"diag3", kFixtureDiag3},
          {"quadratic_center", kFixtureQuadraticCenter}};
}

struct DemoOptions {
  std::optional<NormKind> norm;
  std::optional<double> t_max;
  int threads = 1;
};

namespace detail {

inline Scenario demo_fixture(const std::string& name, const char* text, const DemoOptions& opt) {
  Scenario s = parse_scenario_text(text);
  if (opt.norm) s.norm = *opt.norm;
  if (opt.t_max) {
    s.grid.t_max = *opt.t_max;
    if (name == "quadratic_center") {
      // This fixture's point is the grid corner: keep an offset reaching t_max.
      s.grid.t_offsets = {0.0, 0.25, 1.0, 2.5, 5.0};
      s.grid.t_offsets.push_back(*opt.t_max);
    }
  }
  return s;
}

}  // namespace detail

/// demo: check + verify + estimate + the four conversions over the built-in
/// fixtures, with a one-line-per-fixture summary table. Always exits 0.
inline CommandResult cmd_demo(const DemoOptions& opt = {}) {
  detail::StopWatch watch;
  CommandResult res;
  res.report["command"] = "demo";
  res.report["tool_version"] = kVersion;
  RunOptions run{opt.threads};

  json fixtures = json::array();
  std::string table;
  table += "fixture           check  verify  classification        conversions\n";
  for (const auto& [name, text] : demo_fixture_sources()) {
    const Scenario s = detail::demo_fixture(name, text, opt);
    json entry;
    entry["name"] = name;

    const CommandResult check = cmd_check(s, run);
    entry["check"] = check.report;

    const CommandResult verify = cmd_verify(s, run);
    entry["verify"] = verify.report;

    const CommandResult estimate = cmd_estimate(s, run);
    entry["estimate"] = estimate.report;

    // Round trips through both constructions.
    int conv_pass = 0, conv_total = 0;
    json conversions = json::array();
    for (const char* first : {"triple_to_pair", "triple_to_quad"}) {
      const CommandResult forward = cmd_convert(s, first, run);
      conversions.push_back(forward.report);
      ++conv_total;
      if (forward.exit_code == kExitPass) ++conv_pass;
      if (forward.report.contains("transformed_scenario")) {
        const Scenario target = parse_scenario(forward.report["transformed_scenario"]);
        const std::string back =
            std::string(first) == "triple_to_pair" ? "pair_to_triple" : "quad_to_triple";
        const CommandResult backward = cmd_convert(target, back, run);
        conversions.push_back(backward.report);
        ++conv_total;
        if (backward.exit_code == kExitPass) ++conv_pass;
      }
    }
    entry["conversions"] = conversions;
    fixtures.push_back(entry);

    std::string cls = "-";
    if (estimate.report.contains("classification"))
      cls = estimate.report["classification"].value("verdict", "-");
    char line[160];
    std::snprintf(line, sizeof(line), "%-17s %-6s %-7s %-21s %d/%d\n", name.c_str(),
                  check.exit_code == kExitPass ? "pass" : "FAIL",
                  verify.exit_code == kExitPass ? "pass" : "FAIL", cls.c_str(), conv_pass,
                  conv_total);
    table += line;
  }
  res.report["fixtures"] = fixtures;
  res.summary = table;
  res.exit_code = kExitPass;
  res.report["duration_ms"] = watch.elapsed_ms();
  return res;
}

/// Removes the single wall-clock field at every document level, for
/// byte-comparison of otherwise identical runs.
inline json strip_durations(json j) {
  if (j.is_object()) {
    j.erase("duration_ms");
    for (auto& item : j.items()) item.value() = strip_durations(item.value());
  } else if (j.is_array()) {
    for (auto& item : j) item = strip_durations(item);
  }
  return j;
}

}  // namespace uet
