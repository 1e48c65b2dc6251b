#pragma once

// Text serialization: CoeffTable as CSV or JSON, check records and
// orthogonality summaries as JSON. Numbers use 17 significant digits.

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hsh4/error.hpp"
#include "hsh4/multipole.hpp"
#include "hsh4/verify.hpp"

namespace hsh4 {

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string to_csv(const CoeffTable& t) {
  std::string out = "l,lp,value\n";
  for (const auto& [key, value] : t.entries)
    out += std::to_string(key.first) + "," + std::to_string(key.second) + "," + format_double(value) + "\n";
  return out;
}

/// Parses `l,lp,value` rows. Only the entries are recovered.
inline CoeffTable from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "l,lp,value")
    throw std::invalid_argument("from_csv: missing header 'l,lp,value'");
  CoeffTable t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::invalid_argument("from_csv: malformed row '" + line + "'");
    const int l = std::stoi(line.substr(0, c1));
    const int lp = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
    t.entries[{l, lp}] = std::strtod(line.c_str() + c2 + 1, nullptr);
  }
  return t;
}

inline nlohmann::json to_json(const CoeffTable& t) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [key, value] : t.entries) entries.push_back({{"l", key.first}, {"lp", key.second}, {"value", value}});
  return {{"n", t.spec.n},
          {"j", t.spec.j},
          {"r1", t.spec.r1},
          {"r2", t.spec.r2},
          {"l_max", t.spec.l_max},
          {"tol", t.spec.ctl.tol},
          {"max_terms", t.spec.ctl.max_terms},
          {"terminated", t.terminated},
          {"entries", entries}};
}

inline CoeffTable coeff_table_from_json(const nlohmann::json& j) {
  CoeffTable t;
  t.spec.n = j.at("n").get<double>();
  t.spec.j = j.at("j").get<int>();
  t.spec.r1 = j.at("r1").get<double>();
  t.spec.r2 = j.at("r2").get<double>();
  t.spec.l_max = j.at("l_max").get<int>();
  t.spec.ctl.tol = j.at("tol").get<double>();
  t.spec.ctl.max_terms = j.at("max_terms").get<int>();
  t.terminated = j.at("terminated").get<bool>();
  for (const auto& e : j.at("entries")) t.entries[{e.at("l").get<int>(), e.at("lp").get<int>()}] = e.at("value").get<double>();
  return t;
}

inline nlohmann::json to_json(const CheckResult& r) {
  return {{"check", r.check},     {"params", r.params},   {"expected", r.expected}, {"observed", r.observed},
          {"abs_err", r.abs_err}, {"rel_err", r.rel_err}, {"pass", r.pass}};
}

inline nlohmann::json to_json(const OrthogonalityReport& rep, bool with_matrices = false) {
  auto family = [&](const GramMatrix& g) {
    nlohmann::json f = {{"harmonics", g.size()},
                        {"max_diag_error", g.max_diag_error},
                        {"max_offdiag_error", g.max_offdiag_error}};
    if (with_matrices) {
      nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
      for (const auto& v : g.overlap) re.push_back(v.real()), im.push_back(v.imag());
      f["labels"] = g.labels;
      f["overlap_re"] = re;
      f["overlap_im"] = im;
    }
    return f;
  };
  return {{"j_max", rep.j_max},
          {"nodes", rep.nodes},
          {"exact_degree", rep.exact_degree},
          {"c_family", family(rep.c_family)},
          {"h_family", family(rep.h_family)},
          {"max_diag_family_gap", rep.max_diag_family_gap}};
}

}  // namespace hsh4
