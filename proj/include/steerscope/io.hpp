/*
Copyright 2026 The steerscope Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

/**
 * @file    io.hpp
 * @brief   JSON state files, JSON report files and state presets.
 *
 * State file:
 *
 *     {"dims": [dimA, dimB],
 *      "matrix": [[[re, im], ...], ...]}     // row-major, i*dimB + j basis
 *
 * Entries may be JSON numbers or decimal strings. Report files store every
 * real as a 17-significant-digit decimal string so they round-trip exactly.
 */

#ifndef STEERSCOPE_IO_HPP
#define STEERSCOPE_IO_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "activation.hpp"
#include "bigfloat.hpp"
#include "linalg.hpp"
#include "states.hpp"

#ifndef STEERSCOPE_VERSION
#define STEERSCOPE_VERSION "0.1.0"
#endif

namespace steerscope {

using json = nlohmann::json;

/// Malformed file or preset syntax (as opposed to a state that parses but
/// fails a physical invariant, which raises InvariantViolation).
class FormatError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

//============================================================================
// State files
//============================================================================

namespace detail {

inline double json_real(const json &v, const std::string &where) {
  if (v.is_number())
    return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::size_t pos = 0;
    double x = 0.0;
    try {
      if (s.find('/') != std::string::npos)
        return parse_rational(s).get_d();
      x = std::stod(s, &pos);
    } catch (const std::exception &) {
      throw FormatError(where + ": not a number: '" + s + "'");
    }
    if (pos != s.size())
      throw FormatError(where + ": not a number: '" + s + "'");
    return x;
  }
  throw FormatError(where + ": expected a number");
}

} // namespace detail

inline DensityMatrix state_from_json(const json &j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("matrix"))
    throw FormatError("state file: expected an object with 'dims' and 'matrix'");
  const json &dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_integer() || !dims[1].is_number_integer() ||
      dims[0].get<long long>() < 1 || dims[1].get<long long>() < 1)
    throw FormatError("state file: 'dims' must be two positive integers");
  const auto dA = dims[0].get<std::size_t>();
  const auto dB = dims[1].get<std::size_t>();
  const std::size_t n = dA * dB;
  const json &rows = j.at("matrix");
  if (!rows.is_array() || rows.size() != n)
    throw FormatError("state file: 'matrix' must have " + std::to_string(n) + " rows");
  ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const json &row = rows[r];
    if (!row.is_array() || row.size() != n)
      throw FormatError("state file: row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) {
      const json &e = row[c];
      const std::string where = "state file: entry (" + std::to_string(r) + "," + std::to_string(c) + ")";
      if (!e.is_array() || e.size() != 2)
        throw FormatError(where + ": expected [re, im]");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          Complex(detail::json_real(e[0], where), detail::json_real(e[1], where));
    }
  }
  return DensityMatrix(dA, dB, std::move(m));
}

inline json state_to_json(const DensityMatrix &rho) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < rho.matrix().rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < rho.matrix().cols(); ++c)
      row.push_back({rho.matrix()(r, c).real(), rho.matrix()(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return {{"dims", {rho.dimA(), rho.dimB()}}, {"matrix", std::move(rows)}};
}

inline DensityMatrix load_state_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw FormatError("cannot open state file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw FormatError("state file '" + path + "': " + e.what());
  }
  return state_from_json(j);
}

//============================================================================
// Presets
//============================================================================

namespace detail {

inline std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep))
    out.push_back(cur);
  if (!s.empty() && s.back() == sep)
    out.emplace_back();
  return out;
}

inline std::uint64_t parse_count(const std::string &s, const std::string &what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (s.empty() || s[0] == '-')
      throw std::invalid_argument(s);
    v = std::stoull(s, &pos);
  } catch (const std::exception &) {
    throw FormatError("preset: " + what + " must be a nonnegative integer, got '" + s + "'");
  }
  if (pos != s.size())
    throw FormatError("preset: " + what + " must be a nonnegative integer, got '" + s + "'");
  return v;
}

inline double parse_real(const std::string &s, const std::string &what) {
  try {
    return parse_rational(s).get_d();
  } catch (const std::exception &) {
    throw FormatError("preset: " + what + " is not a number: '" + s + "'");
  }
}

/// "d=2,F=0.5" -> {{"d","2"},{"F","0.5"}}
inline std::vector<std::pair<std::string, std::string>> parse_kv(const std::string &body) {
  std::vector<std::pair<std::string, std::string>> kv;
  for (const std::string &item : split(body, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw FormatError("preset: expected key=value, got '" + item + "'");
    kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return kv;
}

inline const std::string &kv_get(const std::vector<std::pair<std::string, std::string>> &kv,
                                 const std::string &key, const std::string &preset) {
  for (const auto &[k, v] : kv)
    if (k == key)
      return v;
  throw FormatError("preset '" + preset + "': missing " + key + "=");
}

} // namespace detail

/// Builds a state from a preset string:
///   phi+:d=N            maximally entangled state
///   iso:d=N,F=X         isotropic state; X decimal or p/q
///   schmidt:c1,c2,...   pure state sum_i c_i |ii>, coefficients rescaled to unit norm
///   random:dA,dB,rank,seed
inline DensityMatrix state_from_preset(const std::string &spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw FormatError("preset '" + spec + "': expected kind:arguments");
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);

  if (kind == "phi+") {
    const auto kv = detail::parse_kv(body);
    const auto d = detail::parse_count(detail::kv_get(kv, "d", spec), "d");
    return DensityMatrix::from_unnormalized(d, d, phi_plus(d).projector());
  }
  if (kind == "iso") {
    const auto kv = detail::parse_kv(body);
    const auto d = detail::parse_count(detail::kv_get(kv, "d", spec), "d");
    const double F = detail::parse_real(detail::kv_get(kv, "F", spec), "F");
    return isotropic(d, F);
  }
  if (kind == "schmidt") {
    std::vector<double> c;
    for (const std::string &s : detail::split(body, ','))
      c.push_back(detail::parse_real(s, "Schmidt coefficient"));
    double sq = 0.0;
    for (double x : c)
      sq += x * x;
    if (c.size() < 2 || !(sq > 0.0))
      throw FormatError("preset '" + spec + "': need at least two coefficients, not all zero");
    for (double &x : c)
      x /= std::sqrt(sq);
    return pure_schmidt(std::span<const double>(c));
  }
  if (kind == "random") {
    const auto parts = detail::split(body, ',');
    if (parts.size() != 4)
      throw FormatError("preset '" + spec + "': expected random:dA,dB,rank,seed");
    return random_density(detail::parse_count(parts[0], "dA"), detail::parse_count(parts[1], "dB"),
                          detail::parse_count(parts[2], "rank"), detail::parse_count(parts[3], "seed"));
  }
  throw FormatError("preset '" + spec + "': unknown kind '" + kind + "'");
}

//============================================================================
// Report files
//============================================================================

namespace detail {

inline json real_str(double x) { return format_double(x); }

inline double real_from(const json &j, const char *key) {
  return json_real(j.at(key), std::string("report: ") + key);
}

template <class T> json opt_json(const std::optional<T> &v) { return v ? json(*v) : json(nullptr); }

template <class T> std::optional<T> opt_from(const json &j, const char *key) {
  if (!j.contains(key) || j.at(key).is_null())
    return std::nullopt;
  return j.at(key).get<T>();
}

} // namespace detail

inline json report_to_json(const ActivationReport &r) {
  json j;
  j["tool"] = "steerscope";
  j["version"] = STEERSCOPE_VERSION;
  j["flags"] = {{"variant", r.variant}, {"povm_form", r.povm_form}, {"kmax", r.k_max}, {"seed", r.seed}};
  j["input"] = {{"source", r.source}, {"dimA", r.dimA}, {"dimB", r.dimB}};
  j["d"] = r.d;
  j["F"] = detail::real_str(r.F);
  j["reduction_min_eig"] = detail::real_str(r.reduction_min_eig);
  j["reduction_violated"] = r.reduction_violated;
  j["embedded"] = r.embedded;
  j["filtered_fidelity"] = r.filtered_fidelity ? detail::real_str(*r.filtered_fidelity) : json(nullptr);
  j["optimizer_converged"] = r.optimizer_converged;
  j["iso_lhs_projective"] = r.iso_lhs_projective;
  j["iso_lhs_povm"] = r.iso_lhs_povm;
  j["k_min_proj"] = detail::opt_json(r.k_min_proj);
  j["k_min_eq10"] = detail::opt_json(r.k_min_eq10);
  if (r.window)
    j["window"] = {{"k", r.window->k},
                   {"class", r.window->mclass},
                   {"low", detail::real_str(r.window->low)},
                   {"high", detail::real_str(r.window->high)},
                   {"high_exact", r.window->high_exact}};
  else
    j["window"] = nullptr;
  if (r.bootstrap)
    j["bootstrap"] = {{"critical_copies", r.bootstrap->critical_copies}, {"new_dim", r.bootstrap->new_dim}};
  else
    j["bootstrap"] = nullptr;
  j["hashing_distillable"] = r.hashing_distillable;
  j["entropy_rho"] = detail::real_str(r.entropy_rho);
  j["entropy_rho_b"] = detail::real_str(r.entropy_rho_b);
  j["notes"] = r.notes;
  return j;
}

inline ActivationReport report_from_json(const json &j) {
  try {
    if (j.value("tool", std::string()) != "steerscope")
      throw FormatError("report: not a steerscope report");
    ActivationReport r;
    const json &flags = j.at("flags");
    r.variant = flags.at("variant").get<std::string>();
    r.povm_form = flags.at("povm_form").get<std::string>();
    r.k_max = flags.at("kmax").get<unsigned>();
    r.seed = flags.at("seed").get<std::uint64_t>();
    const json &input = j.at("input");
    r.source = input.at("source").get<std::string>();
    r.dimA = input.at("dimA").get<std::size_t>();
    r.dimB = input.at("dimB").get<std::size_t>();
    r.d = j.at("d").get<std::size_t>();
    r.F = detail::real_from(j, "F");
    r.reduction_min_eig = detail::real_from(j, "reduction_min_eig");
    r.reduction_violated = j.at("reduction_violated").get<bool>();
    r.embedded = j.at("embedded").get<bool>();
    if (!j.at("filtered_fidelity").is_null())
      r.filtered_fidelity = detail::real_from(j, "filtered_fidelity");
    r.optimizer_converged = j.at("optimizer_converged").get<bool>();
    r.iso_lhs_projective = j.at("iso_lhs_projective").get<bool>();
    r.iso_lhs_povm = j.at("iso_lhs_povm").get<bool>();
    r.k_min_proj = detail::opt_from<unsigned>(j, "k_min_proj");
    r.k_min_eq10 = detail::opt_from<unsigned>(j, "k_min_eq10");
    if (!j.at("window").is_null()) {
      const json &w = j.at("window");
      r.window = ReportWindow{w.at("k").get<unsigned>(), w.at("class").get<std::string>(),
                              detail::real_from(w, "low"), detail::real_from(w, "high"),
                              w.at("high_exact").get<std::string>()};
    }
    if (!j.at("bootstrap").is_null()) {
      const json &b = j.at("bootstrap");
      r.bootstrap = ReportBootstrap{b.at("critical_copies").get<unsigned>(), b.at("new_dim").get<std::string>()};
    }
    r.hashing_distillable = j.at("hashing_distillable").get<bool>();
    r.entropy_rho = detail::real_from(j, "entropy_rho");
    r.entropy_rho_b = detail::real_from(j, "entropy_rho_b");
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception &e) {
    throw FormatError(std::string("report: ") + e.what());
  }
}

} // namespace steerscope

#endif // STEERSCOPE_IO_HPP
