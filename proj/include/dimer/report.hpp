#pragma once

#include <json.hpp>
#include <string>

#include "dimer/kernels.hpp"
#include "dimer/series.hpp"
#include "dimer/version.hpp"

namespace dimer {

using Json = nlohmann::json;  // object keys stay sorted, so dumps are stable

inline Json to_json(const KernelSample& sample) {
  return Json::array({sample.N, rat_str(sample.value)});
}

inline Json to_json(const KernelResult& result) {
  Json j;
  j["s"] = result.s;
  j["d"] = result.d;
  Json per_n = Json::array();
  for (const auto& sample : result.per_N) per_n.push_back(to_json(sample));
  j["per_N"] = per_n;
  j["limit"] = rat_str(result.limit);
  if (!result.d_poly.empty()) {
    Json poly;
    for (const auto& [k, c] : result.d_poly) poly[std::to_string(k)] = rat_str(c);
    j["d_poly"] = poly;
    j["verified_r"] = result.verified_r;
  }
  return j;
}

inline Json to_json(const KernelFamily& fam) {
  Json j;
  j["s"] = fam.s;
  j["dimensions"] = fam.dimensions;
  Json by_d;
  for (const auto& [d, res] : fam.by_d) by_d[std::to_string(d)] = to_json(res);
  j["by_d"] = by_d;
  Json poly;
  for (const auto& [k, c] : fam.d_poly) poly[std::to_string(k)] = rat_str(c);
  j["d_poly"] = poly;
  j["verified_r"] = fam.verified_r;
  return j;
}

inline Json to_json(const AppendixReport& rep) {
  Json j;
  Json terms;
  for (int t = 0; t < 6; ++t) {
    Json term;
    Json per_n = Json::array();
    for (size_t i = 0; i < rep.kernel_per_N.size(); ++i)
      per_n.push_back(Json::array({rep.kernel_per_N[i].N, rat_str(rep.term_per_N[t][i])}));
    term["per_N"] = per_n;
    term["limit"] = rat_str(rep.term_limits[t]);
    terms[AppendixReport::kNames[t]] = term;
  }
  j["terms"] = terms;
  Json kernel_per_n = Json::array();
  for (const auto& sample : rep.kernel_per_N) kernel_per_n.push_back(to_json(sample));
  j["kernel_per_N"] = kernel_per_n;
  j["kernel_limit"] = rat_str(rep.kernel_limit_value);
  return j;
}

inline Json to_json(const LambdaExpansion& exp) {
  Json j;
  j["order"] = exp.order;
  Json c;
  for (int i = 0; i < exp.order; ++i) c[std::to_string(i + 1)] = rat_str(exp.c[i]);
  j["c"] = c;
  j["leading"] = exp.leading;
  Json signs;
  for (const auto& [s, sign] : exp.kernel_signs) signs[std::to_string(s)] = sign;
  j["kernel_signs"] = signs;
  if (exp.eval_d) {
    Json eval;
    eval["d"] = *exp.eval_d;
    eval["value"] = exp.eval_value;
    j["eval"] = eval;
  }
  j["note"] = exp.note;
  return j;
}

/// Parses a kernels-command JSON report back into the (s, d_poly) pair the
/// series assembler consumes.
inline std::pair<int, std::map<int, Rat>> kernel_d_poly_from_json(const Json& j) {
  const Json& result = j.contains("result") ? j.at("result") : j;
  int s = result.at("s").get<int>();
  std::map<int, Rat> d_poly;
  if (!result.contains("d_poly"))
    throw std::invalid_argument("kernel report lacks a d_poly (run with --all-d)");
  for (const auto& [key, value] : result.at("d_poly").items())
    d_poly[std::stoi(key)] = parse_rat(value.get<std::string>());
  return {s, d_poly};
}

}  // namespace dimer
