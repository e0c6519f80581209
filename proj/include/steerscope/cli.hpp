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
 * @file    cli.hpp
 * @brief   The analyze / thresholds / scan commands, stream-in stream-out so
 *          they can be driven from tests as well as from the executable.
 *
 * Exit codes: 0 success, 2 input validation, 3 precision escalation failure.
 */

#ifndef STEERSCOPE_CLI_HPP
#define STEERSCOPE_CLI_HPP

#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "activation.hpp"
#include "io.hpp"
#include "thresholds.hpp"

namespace steerscope::cli {

enum ExitCode : int { Ok = 0, ValidationFailure = 2, PrecisionFailure = 3 };

enum class Format { Table, Json, Csv };

inline Format parse_format(const std::string &s) {
  if (s == "table")
    return Format::Table;
  if (s == "json")
    return Format::Json;
  if (s == "csv")
    return Format::Csv;
  throw FormatError("unknown format '" + s + "' (expected table, json or csv)");
}

inline KCopyForm parse_variant(const std::string &s) {
  if (s == "proof")
    return KCopyForm::Proof;
  if (s == "printed-eq10")
    return KCopyForm::AsPrinted;
  throw FormatError("unknown variant '" + s + "' (expected proof or printed-eq10)");
}

inline MeasurementClass parse_mclass(const std::string &s) {
  if (s == "projective" || s == "proj")
    return MeasurementClass::Projective;
  if (s == "povm")
    return MeasurementClass::POVM;
  throw FormatError("unknown measurement class '" + s + "' (expected projective or povm)");
}

/// "a..b" or "a"
inline std::pair<unsigned, unsigned> parse_range(const std::string &s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const unsigned v = static_cast<unsigned>(std::stoul(s));
      return {v, v};
    }
    const unsigned lo = static_cast<unsigned>(std::stoul(s.substr(0, dots)));
    const unsigned hi = static_cast<unsigned>(std::stoul(s.substr(dots + 2)));
    if (lo > hi)
      throw FormatError("empty range '" + s + "'");
    return {lo, hi};
  } catch (const FormatError &) {
    throw;
  } catch (const std::exception &) {
    throw FormatError("malformed range '" + s + "' (expected a..b)");
  }
}

/// Runs `body`, mapping exceptions onto exit codes with a message on `err`.
template <class Body> int guarded(std::ostream &err, Body &&body) {
  try {
    return body();
  } catch (const InvariantViolation &e) {
    err << "error: invalid input: " << e.what() << " [invariant: " << e.invariant() << "]\n";
    return ValidationFailure;
  } catch (const PrecisionExhausted &e) {
    err << "error: numerical escalation failed: " << e.what() << "\n";
    return PrecisionFailure;
  } catch (const std::invalid_argument &e) {
    err << "error: invalid input: " << e.what() << "\n";
    return ValidationFailure;
  } catch (const json::exception &e) {
    err << "error: invalid input: " << e.what() << "\n";
    return ValidationFailure;
  }
}

inline std::string csv_escape(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string join_csv(const std::vector<std::string> &cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i)
      line += ',';
    line += csv_escape(cells[i]);
  }
  return line;
}

inline std::string opt_str(const std::optional<unsigned> &v) { return v ? std::to_string(*v) : "none"; }

//============================================================================
// analyze
//============================================================================

struct AnalyzeArgs {
  std::string input; ///< state file path, or a preset
  KCopyForm variant = KCopyForm::Proof;
  PovmForm povm_form = PovmForm::Converted;
  unsigned k_max = 64;
  Format format = Format::Table;
  std::string out_path;
  std::uint64_t seed = 0;
};

inline bool looks_like_preset(const std::string &s) {
  for (const char *p : {"phi+:", "iso:", "schmidt:", "random:"})
    if (s.rfind(p, 0) == 0)
      return true;
  return false;
}

inline void print_report_table(const ActivationReport &r, std::ostream &out) {
  auto row = [&](const std::string &k, const std::string &v) {
    out << "  " << std::left << std::setw(26) << k << v << "\n";
  };
  out << "steerscope " << STEERSCOPE_VERSION << " analysis of " << (r.source.empty() ? "<state>" : r.source)
      << "\n";
  row("dims", std::to_string(r.dimA) + "x" + std::to_string(r.dimB) + (r.embedded ? " (embedded)" : ""));
  row("variant", r.variant);
  row("povm bound", r.povm_form);
  row("reduction min eigenvalue", format_double(r.reduction_min_eig));
  row("reduction violated", r.reduction_violated ? "yes" : "no");
  row("filtered fidelity", r.filtered_fidelity ? format_double(*r.filtered_fidelity) : "n/a");
  row("entanglement fraction F", format_double(r.F) + (r.optimizer_converged ? "" : " (not converged)"));
  row("ISO LHS (projective)", r.iso_lhs_projective ? "yes" : "no");
  row("ISO LHS (povm)", r.iso_lhs_povm ? "yes" : "no");
  row("k_min (proof)", opt_str(r.k_min_proj));
  row("k_min (printed-eq10)", opt_str(r.k_min_eq10));
  if (r.window)
    row("window", "k=" + std::to_string(r.window->k) + " " + r.window->mclass + " (" +
                      format_double(r.window->low) + ", " + format_double(r.window->high) + "]");
  else
    row("window", "none");
  if (r.bootstrap)
    row("bootstrap", "k_c=" + std::to_string(r.bootstrap->critical_copies) + " new_dim=" + r.bootstrap->new_dim);
  else
    row("bootstrap", "none");
  row("S(rho), S(rho_B)", format_double(r.entropy_rho) + ", " + format_double(r.entropy_rho_b));
  row("hashing distillable", r.hashing_distillable ? "yes" : "no");
  out << "notes:\n";
  for (const std::string &n : r.notes)
    out << "  - " << n << "\n";
}

inline int cmd_analyze(const AnalyzeArgs &args, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    const DensityMatrix rho =
        looks_like_preset(args.input) ? state_from_preset(args.input) : load_state_file(args.input);
    AnalyzeOptions opts;
    opts.variant = args.variant;
    opts.povm_form = args.povm_form;
    opts.k_max = args.k_max;
    opts.optimizer.seed = args.seed;
    const ActivationReport report = analyze(rho, opts, args.input);
    const json j = report_to_json(report);

    switch (args.format) {
    case Format::Json:
      out << j.dump(2) << "\n";
      break;
    case Format::Csv:
      out << "key,value\n";
      for (auto it = j.begin(); it != j.end(); ++it)
        out << csv_escape(it.key()) << ","
            << csv_escape(it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
      break;
    case Format::Table:
      print_report_table(report, out);
      break;
    }
    if (!args.out_path.empty()) {
      std::ofstream f(args.out_path);
      if (!f)
        throw FormatError("cannot write report file '" + args.out_path + "'");
      f << j.dump(2) << "\n";
    }
    return static_cast<int>(Ok);
  });
}

//============================================================================
// thresholds
//============================================================================

struct ThresholdArgs {
  unsigned d_max = 2;
  unsigned k_max = 1;
  KCopyForm variant = KCopyForm::Proof;
  PovmForm povm_form = PovmForm::Converted;
  Format format = Format::Csv;
};

struct ThresholdRow {
  unsigned d = 2, k = 1;
  ThresholdValue proj, povm, kcopy;
};

inline std::vector<ThresholdRow> threshold_rows(const ThresholdArgs &args) {
  if (args.d_max < 2)
    throw std::invalid_argument("thresholds: d_max must be >= 2");
  if (args.k_max < 1)
    throw std::invalid_argument("thresholds: k_max must be >= 1");
  std::vector<ThresholdRow> rows;
  for (unsigned d = 2; d <= args.d_max; ++d) {
    const ThresholdValue proj = projective_lhs_threshold(d);
    const ThresholdValue povm = povm_lhs_threshold(d, args.povm_form);
    for (unsigned k = 1; k <= args.k_max; ++k)
      rows.push_back({d, k, proj, povm, kcopy_threshold(d, k, args.variant)});
  }
  return rows;
}

inline const std::vector<std::string> &threshold_columns() {
  static const std::vector<std::string> cols = {
      "d",           "k",           "f_proj",      "f_proj_exact", "f_povm",           "f_povm_exact",
      "povm_form",   "kcopy",       "kcopy_form",  "kcopy_repr",   "kcopy_error_bound", "kcopy_exact",
      "warning"};
  return cols;
}

inline std::vector<std::string> threshold_cells(const ThresholdRow &r, const ThresholdArgs &args) {
  return {std::to_string(r.d),
          std::to_string(r.k),
          r.proj.decimal(),
          r.proj.exact_string(),
          r.povm.decimal(),
          r.povm.exact_string(),
          to_string(args.povm_form),
          r.kcopy.decimal(),
          to_string(args.variant),
          to_string(r.kcopy.representation),
          format_double(r.kcopy.error_bound),
          r.kcopy.exact_string(),
          r.povm.note};
}

inline int cmd_thresholds(const ThresholdArgs &args, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    const auto rows = threshold_rows(args);
    const auto &cols = threshold_columns();
    if (args.format == Format::Csv) {
      out << join_csv(cols) << "\n";
      for (const auto &r : rows)
        out << join_csv(threshold_cells(r, args)) << "\n";
    } else if (args.format == Format::Json) {
      json arr = json::array();
      for (const auto &r : rows) {
        const auto cells = threshold_cells(r, args);
        json o;
        for (std::size_t i = 0; i < cols.size(); ++i)
          o[cols[i]] = cells[i];
        arr.push_back(std::move(o));
      }
      out << json{{"tool", "steerscope"}, {"version", STEERSCOPE_VERSION}, {"rows", arr}}.dump(2) << "\n";
    } else {
      out << std::left << std::setw(4) << "d" << std::setw(4) << "k" << std::setw(22) << "f_proj" << std::setw(22)
          << "f_povm" << std::setw(24) << "kcopy" << std::setw(17) << "repr"
          << "error_bound\n";
      for (const auto &r : rows) {
        out << std::setw(4) << r.d << std::setw(4) << r.k << std::setw(22) << r.proj.decimal() << std::setw(22)
            << r.povm.decimal() << std::setw(24) << r.kcopy.decimal() << std::setw(17)
            << to_string(r.kcopy.representation) << format_double(r.kcopy.error_bound);
        if (!r.povm.note.empty())
          out << "  WARNING: " << r.povm.note;
        out << "\n";
      }
    }
    return static_cast<int>(Ok);
  });
}

//============================================================================
// scan
//============================================================================

struct ScanArgs {
  std::pair<unsigned, unsigned> d_range{2, 8};
  std::pair<unsigned, unsigned> k_range{2, 2};
  MeasurementClass mclass = MeasurementClass::Projective;
  PovmForm povm_form = PovmForm::Converted;
  Format format = Format::Csv;
};

struct ScanCell {
  unsigned d = 2, k = 2;
  Window window;
};

struct ScanResult {
  std::vector<ScanCell> cells;
  std::vector<std::pair<unsigned, std::optional<unsigned>>> min_k; ///< per d
  std::vector<std::pair<unsigned, std::optional<unsigned>>> min_d; ///< per k
  std::vector<std::string> notes;
};

/// Published copy-count and dimension claims the scan is checked against.
struct PublishedClaim {
  MeasurementClass mclass;
  unsigned fixed;  ///< d for a copy-count claim, k for a dimension claim
  bool is_dimension;
  unsigned value;
};

inline const std::vector<PublishedClaim> &published_claims() {
  static const std::vector<PublishedClaim> claims = {
      {MeasurementClass::Projective, 2, false, 7},
      {MeasurementClass::POVM, 2, false, 24},
      {MeasurementClass::Projective, 2, true, 6},
  };
  return claims;
}

inline ScanResult run_scan(const ScanArgs &args) {
  const auto [d_lo, d_hi] = args.d_range;
  const auto [k_lo, k_hi] = args.k_range;
  if (d_lo < 2)
    throw std::invalid_argument("scan: d must be >= 2");
  if (k_lo < 1)
    throw std::invalid_argument("scan: k must be >= 1");
  ScanResult res;
  const unsigned k_start = std::max(k_lo, 2u);
  if (k_lo < 2)
    res.notes.push_back("k=1 has no super-activation window (F_low = F_high); scanned from k=2");

  for (unsigned d = d_lo; d <= d_hi; ++d)
    for (unsigned k = k_start; k <= k_hi; ++k)
      res.cells.push_back({d, k, window_bounds(d, k, args.mclass, args.povm_form)});

  for (unsigned d = d_lo; d <= d_hi; ++d) {
    std::optional<unsigned> first;
    for (const auto &c : res.cells)
      if (c.d == d && c.window.nonempty) {
        first = c.k;
        break;
      }
    res.min_k.emplace_back(d, first);
  }
  for (unsigned k = k_start; k <= k_hi; ++k) {
    std::optional<unsigned> first;
    for (const auto &c : res.cells)
      if (c.k == k && c.window.nonempty) {
        first = c.d;
        break;
      }
    res.min_d.emplace_back(k, first);
  }

  for (const PublishedClaim &claim : published_claims()) {
    if (claim.mclass != args.mclass)
      continue;
    if (claim.mclass == MeasurementClass::POVM && args.povm_form != PovmForm::Converted)
      continue;
    const auto &summary = claim.is_dimension ? res.min_d : res.min_k;
    for (const auto &[fixed, found] : summary) {
      if (fixed != claim.fixed)
        continue;
      const std::string what = claim.is_dimension
                                   ? std::string("minimal d for k=") + std::to_string(fixed) + " " + to_string(claim.mclass)
                                   : std::string("minimal k for d=") + std::to_string(fixed) + " " + to_string(claim.mclass);
      const unsigned lo = claim.is_dimension ? d_lo : k_start;
      const unsigned hi = claim.is_dimension ? d_hi : k_hi;
      if (claim.value < lo || claim.value > hi) {
        if (!found)
          continue; // claim outside the scanned range and nothing found
      }
      if (found && *found == claim.value) {
        res.notes.push_back(what + ": computed " + std::to_string(*found) + ", agrees with the published claim " +
                            std::to_string(claim.value));
      } else {
        std::string detail;
        if (claim.is_dimension && found && claim.mclass == MeasurementClass::Projective && fixed == 2) {
          const mpq_class fp = projective_lhs_threshold(*found).exact;
          const mpq_class t = projective_lhs_threshold(std::uint64_t(*found) * *found).exact;
          detail = " (exact: f_proj(" + std::to_string(*found) + ")^2 = " + format_double(mpq_class(fp * fp).get_d()) +
                   " > f_proj(" + std::to_string(*found * *found) + ") = " + format_double(t.get_d()) + ")";
        }
        res.notes.push_back("DISCREPANCY: " + what + ": computed " + (found ? std::to_string(*found) : "none") +
                            " in exact arithmetic, published claim " +
                            (claim.is_dimension ? "d >= " : "k = ") + std::to_string(claim.value) + detail);
      }
    }
  }
  return res;
}

inline int cmd_scan(const ScanArgs &args, std::ostream &out, std::ostream &err) {
  return guarded(err, [&] {
    const ScanResult res = run_scan(args);
    if (args.format == Format::Json) {
      json cells = json::array();
      for (const auto &c : res.cells)
        cells.push_back({{"d", c.d},
                         {"k", c.k},
                         {"class", to_string(args.mclass)},
                         {"f_low", c.window.low.decimal()},
                         {"f_low_error_bound", format_double(c.window.low.error_bound)},
                         {"f_high", c.window.high.decimal()},
                         {"f_high_exact", c.window.high.exact_string()},
                         {"nonempty", c.window.nonempty}});
      json mk = json::array(), md = json::array();
      for (const auto &[d, k] : res.min_k)
        mk.push_back({{"d", d}, {"k", k ? json(*k) : json(nullptr)}});
      for (const auto &[k, d] : res.min_d)
        md.push_back({{"k", k}, {"d", d ? json(*d) : json(nullptr)}});
      out << json{{"tool", "steerscope"},
                  {"version", STEERSCOPE_VERSION},
                  {"class", to_string(args.mclass)},
                  {"povm_form", to_string(args.povm_form)},
                  {"cells", cells},
                  {"minimal_k", mk},
                  {"minimal_d", md},
                  {"notes", res.notes}}
                 .dump(2)
          << "\n";
    } else if (args.format == Format::Csv) {
      out << "row,d,k,class,f_low,f_high,f_high_exact,nonempty,detail\n";
      const std::string cls = to_string(args.mclass);
      for (const auto &c : res.cells)
        out << join_csv({"window", std::to_string(c.d), std::to_string(c.k), cls, c.window.low.decimal(),
                         c.window.high.decimal(), c.window.high.exact_string(), c.window.nonempty ? "1" : "0", ""})
            << "\n";
      for (const auto &[d, k] : res.min_k)
        out << join_csv({"min_k", std::to_string(d), k ? std::to_string(*k) : "", cls, "", "", "", k ? "1" : "0", ""})
            << "\n";
      for (const auto &[k, d] : res.min_d)
        out << join_csv({"min_d", d ? std::to_string(*d) : "", std::to_string(k), cls, "", "", "", d ? "1" : "0", ""})
            << "\n";
      for (const auto &n : res.notes)
        out << join_csv({"note", "", "", cls, "", "", "", "", n}) << "\n";
    } else {
      out << std::left << std::setw(4) << "d" << std::setw(4) << "k" << std::setw(24) << "F_low" << std::setw(24)
          << "F_high"
          << "window\n";
      for (const auto &c : res.cells)
        out << std::setw(4) << c.d << std::setw(4) << c.k << std::setw(24) << c.window.low.decimal() << std::setw(24)
            << c.window.high.decimal() << (c.window.nonempty ? "nonempty" : "empty") << "\n";
      for (const auto &[d, k] : res.min_k)
        out << "minimal k at d=" << d << ": " << opt_str(k) << "\n";
      for (const auto &[k, d] : res.min_d)
        out << "minimal d at k=" << k << ": " << opt_str(d) << "\n";
      for (const auto &n : res.notes)
        out << "note: " << n << "\n";
    }
    return static_cast<int>(Ok);
  });
}

} // namespace steerscope::cli

#endif // STEERSCOPE_CLI_HPP
