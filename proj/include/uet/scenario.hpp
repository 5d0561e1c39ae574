#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uet/constants.hpp"
#include "uet/envelope.hpp"
#include "uet/errors.hpp"
#include "uet/evolution.hpp"
#include "uet/projection.hpp"
#include "uet/sampling.hpp"
#include "uet/scalar_function.hpp"
#include "uet/verify.hpp"

namespace uet {

using nlohmann::json;

enum class FamilyKind { Triple, Pair, Quad };

inline const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::Triple: return "triple";
    case FamilyKind::Pair: return "pair";
    case FamilyKind::Quad: return "quad";
  }
  return "triple";
}

/// Fully resolved run configuration. Unknown fields are rejected at parse
/// time; every default the tool fills in reappears explicitly in the echo.
struct Scenario {
  std::string name;
  std::size_t dimension = 1;
  json operator_spec;
  json family_spec;
  NormKind norm = NormKind::L2;
  SampleGrid grid;
  std::optional<TrichotomyConstants> constants_full;
  std::optional<NormalizedConstants> constants_norm;
  bool constants_given_normalized = true;
  double check_tol = kDefaultCheckTol;
  double verify_tol = kDefaultVerifyTol;
  std::vector<double> nu_grid = default_nu_grid();
  double n_ceiling = kDefaultCeiling;

  bool has_constants() const { return constants_full.has_value() || constants_norm.has_value(); }

  TrichotomyConstants full_constants() const {
    if (constants_full) return *constants_full;
    if (constants_norm) return expand_constants(*constants_norm);
    throw ScenarioError("scenario supplies no constants");
  }

  NormalizedConstants normalized_constants() const {
    if (constants_norm) return *constants_norm;
    if (constants_full) return normalize_constants(*constants_full);
    throw ScenarioError("scenario supplies no constants");
  }
};

namespace detail {

inline void check_keys(const json& obj, const std::string& path,
                       std::initializer_list<const char*> required,
                       std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object()) throw ScenarioError(path + ": expected an object");
  for (const auto& item : obj.items()) {
    const std::string& key = item.key();
    bool known = false;
    for (const char* k : required)
      if (key == k) known = true;
    for (const char* k : optional)
      if (key == k) known = true;
    if (!known) throw ScenarioError(path + ": unknown field '" + key + "'");
  }
  for (const char* k : required)
    if (!obj.contains(k)) throw ScenarioError(path + ": missing field '" + std::string(k) + "'");
}

inline double get_number(const json& obj, const std::string& path, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ScenarioError(path + "." + key + ": expected a number");
  return v.get<double>();
}

inline double get_number_or(const json& obj, const std::string& path, const char* key, double dflt) {
  if (!obj.contains(key)) return dflt;
  return get_number(obj, path, key);
}

inline std::string get_string(const json& obj, const std::string& path, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw ScenarioError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline std::vector<double> get_number_list(const json& v, const std::string& path,
                                           bool nonnegative) {
  if (!v.is_array() || v.empty()) throw ScenarioError(path + ": expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ScenarioError(path + "[" + std::to_string(i) + "]: expected a number");
    const double x = v[i].get<double>();
    if (nonnegative && x < 0.0)
      throw ScenarioError(path + "[" + std::to_string(i) + "]: must be nonnegative");
    out.push_back(x);
  }
  return out;
}

inline ScalarFn build_scalar(const json& j, const std::string& path) {
  check_keys(j, path, {"form"}, {"value", "rate", "coeff"});
  const std::string form = get_string(j, path, "form");
  if (form == "constant") {
    check_keys(j, path, {"form", "value"});
    return constant_fn(get_number(j, path, "value"));
  }
  if (form == "exp_linear") {
    check_keys(j, path, {"form", "rate"});
    return exp_linear_fn(get_number(j, path, "rate"));
  }
  if (form == "exp_quadratic") {
    check_keys(j, path, {"form", "coeff"});
    return exp_quadratic_fn(get_number(j, path, "coeff"));
  }
  throw ScenarioError(path + ".form: unknown scalar form '" + form + "'");
}

inline RateFn build_rate(const json& j, const std::string& path) {
  check_keys(j, path, {"form"}, {"value", "limit", "amplitude", "decay"});
  const std::string form = get_string(j, path, "form");
  if (form == "constant") {
    check_keys(j, path, {"form", "value"});
    const double c = get_number(j, path, "value");
    if (!(c > 0.0)) throw ScenarioError(path + ".value: constant rate must be positive");
    return constant_rate(c);
  }
  if (form == "offset_exp_decay") {
    check_keys(j, path, {"form", "limit", "amplitude", "decay"});
    const double limit = get_number(j, path, "limit");
    const double amplitude = get_number(j, path, "amplitude");
    const double decay = get_number(j, path, "decay");
    if (!(limit > 0.0)) throw ScenarioError(path + ".limit: must be positive");
    if (!(amplitude >= 0.0)) throw ScenarioError(path + ".amplitude: must be nonnegative");
    if (!(decay > 0.0)) throw ScenarioError(path + ".decay: must be positive");
    return offset_exp_decay_rate(limit, amplitude, decay);
  }
  throw ScenarioError(path + ".form: unknown rate form '" + form + "'");
}

inline void validate_operator_spec(const json& j, std::size_t dimension) {
  const std::string path = "operator";
  check_keys(j, path, {"kind"}, {"f", "rate", "rules"});
  const std::string kind = get_string(j, path, "kind");
  if (kind == "scalar_quotient") {
    check_keys(j, path, {"kind", "f"});
    build_scalar(j.at("f"), path + ".f");
  } else if (kind == "semigroup") {
    check_keys(j, path, {"kind", "rate"});
    get_number(j, path, "rate");
  } else if (kind == "diagonal_integrand") {
    check_keys(j, path, {"kind", "rules"});
    const json& rules = j.at("rules");
    if (!rules.is_array()) throw ScenarioError(path + ".rules: expected an array");
    if (rules.size() != dimension)
      throw ScenarioError(path + ".rules: need exactly one rule per coordinate (" +
                          std::to_string(dimension) + ")");
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const std::string rpath = path + ".rules[" + std::to_string(i) + "]";
      check_keys(rules[i], rpath, {"kind"}, {"sign", "phi", "rate"});
      const std::string rkind = get_string(rules[i], rpath, "kind");
      if (rkind == "integral_of_phi") {
        check_keys(rules[i], rpath, {"kind", "sign", "phi"});
        const double sign = get_number(rules[i], rpath, "sign");
        if (sign != 1.0 && sign != -1.0) throw ScenarioError(rpath + ".sign: must be 1 or -1");
        build_rate(rules[i].at("phi"), rpath + ".phi");
      } else if (rkind == "linear_rate") {
        check_keys(rules[i], rpath, {"kind", "rate"});
        get_number(rules[i], rpath, "rate");
      } else {
        throw ScenarioError(rpath + ".kind: unknown rule kind '" + rkind + "'");
      }
    }
  } else {
    throw ScenarioError(path + ".kind: unknown operator kind '" + kind + "'");
  }
}

inline ProjectionFamily build_projection(const json& j, std::size_t n, const std::string& path) {
  check_keys(j, path, {"kind"}, {"axes", "rows"});
  const std::string kind = get_string(j, path, "kind");
  if (kind == "zero") {
    check_keys(j, path, {"kind"});
    return zero_family(n);
  }
  if (kind == "identity") {
    check_keys(j, path, {"kind"});
    return identity_family(n);
  }
  if (kind == "coordinate") {
    check_keys(j, path, {"kind", "axes"});
    const json& axes = j.at("axes");
    if (!axes.is_array()) throw ScenarioError(path + ".axes: expected an array");
    std::vector<std::size_t> zero_based;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      if (!axes[i].is_number_integer())
        throw ScenarioError(path + ".axes[" + std::to_string(i) + "]: expected an integer");
      const long long a = axes[i].get<long long>();
      if (a < 1 || static_cast<std::size_t>(a) > n)
        throw ScenarioError(path + ".axes[" + std::to_string(i) + "]: axis out of range 1.." +
                            std::to_string(n));
      zero_based.push_back(static_cast<std::size_t>(a - 1));
    }
    return coordinate_family(n, std::move(zero_based));
  }
  if (kind == "matrix") {
    check_keys(j, path, {"kind", "rows"});
    const json& rows = j.at("rows");
    if (!rows.is_array() || rows.size() != n)
      throw ScenarioError(path + ".rows: expected " + std::to_string(n) + " rows");
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!rows[i].is_array() || rows[i].size() != n)
        throw ScenarioError(path + ".rows[" + std::to_string(i) + "]: expected " +
                            std::to_string(n) + " numbers");
      for (std::size_t k = 0; k < n; ++k) {
        if (!rows[i][k].is_number())
          throw ScenarioError(path + ".rows[" + std::to_string(i) + "][" + std::to_string(k) +
                              "]: expected a number");
        m(i, k) = rows[i][k].get<double>();
      }
    }
    return matrix_family(std::move(m));
  }
  throw ScenarioError(path + ".kind: unknown projection kind '" + kind + "'");
}

inline FamilyKind validate_family_spec(const json& j, std::size_t n) {
  const std::string path = "family";
  check_keys(j, path, {"kind"}, {"center", "stable", "unstable", "co_stable", "co_unstable"});
  const std::string kind = get_string(j, path, "kind");
  if (kind == "triple") {
    check_keys(j, path, {"kind", "center", "stable", "unstable"});
    build_projection(j.at("center"), n, path + ".center");
    build_projection(j.at("stable"), n, path + ".stable");
    build_projection(j.at("unstable"), n, path + ".unstable");
    return FamilyKind::Triple;
  }
  if (kind == "pair") {
    check_keys(j, path, {"kind", "stable", "unstable"});
    build_projection(j.at("stable"), n, path + ".stable");
    build_projection(j.at("unstable"), n, path + ".unstable");
    return FamilyKind::Pair;
  }
  if (kind == "quad") {
    check_keys(j, path, {"kind", "stable", "unstable", "co_stable", "co_unstable"});
    build_projection(j.at("stable"), n, path + ".stable");
    build_projection(j.at("unstable"), n, path + ".unstable");
    build_projection(j.at("co_stable"), n, path + ".co_stable");
    build_projection(j.at("co_unstable"), n, path + ".co_unstable");
    return FamilyKind::Quad;
  }
  throw ScenarioError(path + ".kind: unknown family kind '" + kind + "'");
}

}  // namespace detail

inline FamilyKind family_kind(const Scenario& s) {
  const std::string kind = s.family_spec.at("kind").get<std::string>();
  if (kind == "triple") return FamilyKind::Triple;
  if (kind == "pair") return FamilyKind::Pair;
  return FamilyKind::Quad;
}

inline Scenario parse_scenario(const json& j) {
  detail::check_keys(j, "scenario", {"dimension", "operator", "family"},
                     {"name", "norm", "grid", "constants", "tolerances", "nu_grid", "n_ceiling"});
  Scenario s;
  if (j.contains("name")) s.name = detail::get_string(j, "scenario", "name");

  if (!j.at("dimension").is_number_integer() || j.at("dimension").get<long long>() < 1)
    throw ScenarioError("scenario.dimension: expected a positive integer");
  s.dimension = j.at("dimension").get<std::size_t>();

  detail::validate_operator_spec(j.at("operator"), s.dimension);
  s.operator_spec = j.at("operator");
  detail::validate_family_spec(j.at("family"), s.dimension);
  s.family_spec = j.at("family");

  if (j.contains("norm")) s.norm = norm_from_string(detail::get_string(j, "scenario", "norm"));

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    detail::check_keys(g, "grid", {},
                       {"t0", "offsets_s", "offsets_t", "t_max", "vector_count", "seed", "extra_vectors"});
    if (g.contains("t0")) s.grid.t0_values = detail::get_number_list(g.at("t0"), "grid.t0", true);
    if (g.contains("offsets_s"))
      s.grid.s_offsets = detail::get_number_list(g.at("offsets_s"), "grid.offsets_s", true);
    if (g.contains("offsets_t"))
      s.grid.t_offsets = detail::get_number_list(g.at("offsets_t"), "grid.offsets_t", true);
    if (g.contains("t_max")) {
      s.grid.t_max = detail::get_number(g, "grid", "t_max");
      if (!(s.grid.t_max > 0.0)) throw ScenarioError("grid.t_max: must be positive");
    }
    if (g.contains("vector_count")) {
      if (!g.at("vector_count").is_number_integer() || g.at("vector_count").get<long long>() < 0)
        throw ScenarioError("grid.vector_count: expected a nonnegative integer");
      s.grid.vector_count = g.at("vector_count").get<int>();
    }
    if (g.contains("seed")) {
      if (!g.at("seed").is_number_integer() || g.at("seed").get<long long>() < 0)
        throw ScenarioError("grid.seed: expected a nonnegative integer");
      s.grid.seed = g.at("seed").get<std::uint64_t>();
    }
    if (g.contains("extra_vectors")) {
      const json& xs = g.at("extra_vectors");
      if (!xs.is_array()) throw ScenarioError("grid.extra_vectors: expected an array");
      for (std::size_t i = 0; i < xs.size(); ++i) {
        auto v = detail::get_number_list(xs[i], "grid.extra_vectors[" + std::to_string(i) + "]", false);
        if (v.size() != s.dimension)
          throw ScenarioError("grid.extra_vectors[" + std::to_string(i) + "]: expected dimension " +
                              std::to_string(s.dimension));
        s.grid.extra_vectors.push_back(std::move(v));
      }
    }
    if (s.grid.triples().empty())
      throw ScenarioError("grid: no sample triple satisfies t <= t_max");
  }

  if (j.contains("constants")) {
    const json& c = j.at("constants");
    if (c.contains("N")) {
      detail::check_keys(c, "constants", {"N", "nu", "nu0"});
      NormalizedConstants n;
      n.N = detail::get_number(c, "constants", "N");
      n.nu = detail::get_number(c, "constants", "nu");
      n.nu0 = detail::get_number(c, "constants", "nu0");
      try {
        n.validate();
      } catch (const Error& e) {
        throw ScenarioError(std::string("constants: ") + e.what());
      }
      s.constants_norm = n;
      s.constants_given_normalized = true;
    } else {
      detail::check_keys(c, "constants", {"N0", "N1", "N2", "nu0", "nu1", "nu2"});
      TrichotomyConstants f;
      f.N0 = detail::get_number(c, "constants", "N0");
      f.N1 = detail::get_number(c, "constants", "N1");
      f.N2 = detail::get_number(c, "constants", "N2");
      f.nu0 = detail::get_number(c, "constants", "nu0");
      f.nu1 = detail::get_number(c, "constants", "nu1");
      f.nu2 = detail::get_number(c, "constants", "nu2");
      try {
        f.validate();
      } catch (const Error& e) {
        throw ScenarioError(std::string("constants: ") + e.what());
      }
      s.constants_full = f;
      s.constants_given_normalized = false;
    }
  }

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    detail::check_keys(t, "tolerances", {}, {"check", "verify"});
    s.check_tol = detail::get_number_or(t, "tolerances", "check", kDefaultCheckTol);
    s.verify_tol = detail::get_number_or(t, "tolerances", "verify", kDefaultVerifyTol);
    if (!(s.check_tol >= 0.0 && s.verify_tol >= 0.0))
      throw ScenarioError("tolerances: must be nonnegative");
  }

  if (j.contains("nu_grid")) {
    s.nu_grid = detail::get_number_list(j.at("nu_grid"), "nu_grid", false);
    for (std::size_t i = 0; i < s.nu_grid.size(); ++i) {
      if (!(s.nu_grid[i] > 0.0)) throw ScenarioError("nu_grid[" + std::to_string(i) + "]: must be positive");
      if (i > 0 && s.nu_grid[i] <= s.nu_grid[i - 1])
        throw ScenarioError("nu_grid: values must be strictly ascending");
    }
  }

  if (j.contains("n_ceiling")) {
    s.n_ceiling = detail::get_number(j, "scenario", "n_ceiling");
    if (!(s.n_ceiling > 1.0)) throw ScenarioError("n_ceiling: must exceed 1");
  }

  return s;
}

inline Scenario parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

/// Echo with every default resolved.
inline json scenario_to_json(const Scenario& s) {
  json g;
  g["t0"] = s.grid.t0_values;
  g["offsets_s"] = s.grid.s_offsets;
  g["offsets_t"] = s.grid.t_offsets;
  g["t_max"] = s.grid.t_max;
  g["vector_count"] = s.grid.vector_count;
  g["seed"] = s.grid.seed;
  g["extra_vectors"] = s.grid.extra_vectors;

  json out;
  out["name"] = s.name;
  out["dimension"] = s.dimension;
  out["operator"] = s.operator_spec;
  out["family"] = s.family_spec;
  out["norm"] = to_string(s.norm);
  out["grid"] = g;
  if (s.constants_norm && s.constants_given_normalized) {
    out["constants"] = {{"N", s.constants_norm->N}, {"nu", s.constants_norm->nu}, {"nu0", s.constants_norm->nu0}};
  } else if (s.constants_full) {
    out["constants"] = {{"N0", s.constants_full->N0}, {"N1", s.constants_full->N1},
                        {"N2", s.constants_full->N2}, {"nu0", s.constants_full->nu0},
                        {"nu1", s.constants_full->nu1}, {"nu2", s.constants_full->nu2}};
  }
  out["tolerances"] = {{"check", s.check_tol}, {"verify", s.verify_tol}};
  out["nu_grid"] = s.nu_grid;
  out["n_ceiling"] = s.n_ceiling;
  return out;
}

inline EvolutionOperator build_operator(const Scenario& s) {
  const json& j = s.operator_spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "scalar_quotient") {
    return make_scalar_quotient(detail::build_scalar(j.at("f"), "operator.f"), s.dimension, s.grid);
  }
  if (kind == "semigroup") {
    const double rate = j.at("rate").get<double>();
    char label[48];
    std::snprintf(label, sizeof(label), "scale(%g)", rate);
    return make_semigroup_induced(
        label, [rate](double tau, const Vec& x) { return scale(std::exp(rate * tau), x); },
        s.dimension, s.grid, s.check_tol);
  }
  // diagonal_integrand
  std::vector<ExponentRule> rules;
  for (const json& r : j.at("rules")) {
    const std::string rkind = r.at("kind").get<std::string>();
    if (rkind == "integral_of_phi") {
      IntegralRate ir;
      ir.sign = static_cast<int>(r.at("sign").get<double>());
      ir.phi = detail::build_rate(r.at("phi"), "operator.rules.phi");
      rules.emplace_back(std::move(ir));
    } else {
      rules.emplace_back(LinearRate{r.at("rate").get<double>()});
    }
  }
  return make_diagonal_integrand(s.name.empty() ? "scenario" : s.name, std::move(rules), s.grid);
}

inline FamilyTriple build_triple(const Scenario& s) {
  if (family_kind(s) != FamilyKind::Triple) throw ScenarioError("scenario family is not a triple");
  const json& f = s.family_spec;
  return FamilyTriple{detail::build_projection(f.at("center"), s.dimension, "family.center"),
                      detail::build_projection(f.at("stable"), s.dimension, "family.stable"),
                      detail::build_projection(f.at("unstable"), s.dimension, "family.unstable")};
}

inline FamilyPair build_pair(const Scenario& s) {
  if (family_kind(s) != FamilyKind::Pair) throw ScenarioError("scenario family is not a pair");
  const json& f = s.family_spec;
  return FamilyPair{detail::build_projection(f.at("stable"), s.dimension, "family.stable"),
                    detail::build_projection(f.at("unstable"), s.dimension, "family.unstable")};
}

inline FamilyQuad build_quad(const Scenario& s) {
  if (family_kind(s) != FamilyKind::Quad) throw ScenarioError("scenario family is not a quad");
  const json& f = s.family_spec;
  return FamilyQuad{detail::build_projection(f.at("stable"), s.dimension, "family.stable"),
                    detail::build_projection(f.at("unstable"), s.dimension, "family.unstable"),
                    detail::build_projection(f.at("co_stable"), s.dimension, "family.co_stable"),
                    detail::build_projection(f.at("co_unstable"), s.dimension, "family.co_unstable")};
}

/// Serializes a (materializable) projection family back into scenario form.
inline json projection_to_spec(const ProjectionFamily& p) {
  switch (p.kind) {
    case ProjectionKind::Zero: return json{{"kind", "zero"}};
    case ProjectionKind::Identity: return json{{"kind", "identity"}};
    case ProjectionKind::Coordinate: {
      std::vector<std::size_t> axes;
      for (std::size_t i : p.coords) axes.push_back(i + 1);
      return json{{"kind", "coordinate"}, {"axes", axes}};
    }
    case ProjectionKind::Matrix: {
      std::vector<std::vector<double>> rows(p.dimension, std::vector<double>(p.dimension));
      for (std::size_t i = 0; i < p.dimension; ++i)
        for (std::size_t k = 0; k < p.dimension; ++k) rows[i][k] = (*p.mat)(i, k);
      return json{{"kind", "matrix"}, {"rows", rows}};
    }
    default:
      throw ScenarioError("projection family '" + p.label + "' is not serializable");
  }
}

}  // namespace uet
