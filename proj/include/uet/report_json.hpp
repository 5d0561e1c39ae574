#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "uet/envelope.hpp"
#include "uet/report.hpp"
#include "uet/transforms.hpp"

namespace uet {

using nlohmann::json;

/// CSV numbers carry 17 significant digits so parsed values round-trip.
inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline json witness_to_json(const Witness& w) {
  json j;
  j["t"] = w.when.t;
  j["s"] = w.when.s;
  j["t0"] = w.when.t0;
  j["vector"] = w.vector_id;
  if (!w.detail.empty()) j["detail"] = w.detail;
  j["lhs"] = w.lhs;
  j["rhs"] = w.rhs;
  return j;
}

inline json condition_to_json(const ConditionResult& c) {
  json j;
  j["id"] = c.id;
  j["passed"] = c.passed;
  if (c.margin) j["margin"] = *c.margin;
  if (c.worst_residual) j["worst_residual"] = *c.worst_residual;
  j["samples"] = c.samples;
  j["vacuous"] = c.vacuous;
  if (c.witness) j["witness"] = witness_to_json(*c.witness);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline json report_to_json(const ComplianceReport& r) {
  json j;
  j["norm"] = r.norm;
  j["tol"] = r.tol;
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back(condition_to_json(e));
  j["entries"] = entries;
  j["verdict"] = r.passed() ? "pass" : "fail";
  return j;
}

inline json curve_to_json(const ParetoCurve& c) {
  json j;
  j["condition"] = c.condition_id;
  j["direction"] = to_string(c.direction);
  j["vacuous"] = c.vacuous;
  j["samples"] = c.samples;
  j["vacuous_samples"] = c.vacuous_samples;
  j["trivial_samples"] = c.trivial_samples;
  json pts = json::array();
  for (const auto& p : c.points) {
    json pj;
    pj["nu"] = p.nu;
    pj["logN"] = p.logN;
    pj["witness"] = witness_to_json(p.witness);
    pts.push_back(pj);
  }
  j["points"] = pts;
  if (c.unbounded_witness) j["unbounded_witness"] = witness_to_json(*c.unbounded_witness);
  if (!c.error.empty()) j["error"] = c.error;
  return j;
}

inline json classification_to_json(const Classification& c) {
  json j;
  j["verdict"] = to_string(c.verdict);
  if (c.constants) {
    j["constants"] = {{"N", c.constants->N}, {"nu", c.constants->nu}, {"nu0", c.constants->nu0}};
  }
  if (c.witness) j["witness"] = witness_to_json(*c.witness);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline json transform_record_to_json(const TransformRecord& r) {
  json j;
  j["construction"] = r.construction;
  j["source"] = r.source;
  j["target"] = r.target;
  j["constant_note"] = r.constant_note;
  return j;
}

/// Envelope table: one row per (direction, demanded rate).
inline std::string curves_to_csv(const std::vector<ParetoCurve>& curves) {
  std::string out = "direction,nu,logN,witness_t,witness_s,witness_t0,witness_vec\n";
  for (const ParetoCurve& c : curves) {
    for (const ParetoPoint& p : c.points) {
      out += to_string(c.direction);
      out += ',';
      out += csv_number(p.nu);
      out += ',';
      out += csv_number(p.logN);
      out += ',';
      out += csv_number(p.witness.when.t);
      out += ',';
      out += csv_number(p.witness.when.s);
      out += ',';
      out += csv_number(p.witness.when.t0);
      out += ',';
      out += p.witness.vector_id;
      out += '\n';
    }
  }
  return out;
}

}  // namespace uet
