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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include <steerscope/cli.hpp>

using namespace steerscope;
using namespace steerscope::cli;

namespace {

const std::string samples = STEERSCOPE_SAMPLES_DIR;

struct CmdResult {
  int code;
  std::string out;
  std::string err;
};

template <class Args, class Cmd> CmdResult run(const Args &args, Cmd cmd) {
  std::ostringstream out, err;
  const int code = cmd(args, out, err);
  return {code, out.str(), err.str()};
}

// Runs the installed binary and captures stdout.
CmdResult run_binary(const std::string &arguments) {
  const std::string cmd = std::string(STEERSCOPE_CLI_PATH) + " " + arguments + " 2>/dev/null";
  FILE *p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0)
    out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, {}};
}

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"')
        cell += '"', ++i;
      else if (c == '"')
        quoted = false;
      else
        cell += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else {
      cell += c;
    }
  }
  return rows;
}

std::string slurp(const std::string &path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

} // namespace

TEST(StateFile, ParsesSample) {
  const DensityMatrix rho = load_state_file(samples + "/noisy_bell.json");
  EXPECT_EQ(rho.dimA(), 2u);
  EXPECT_NEAR(fidelity_phi_plus(rho), 0.775, 1e-12);
}

TEST(StateFile, RoundTrip) {
  const DensityMatrix rho = random_density(2, 3, 3, 5);
  EXPECT_TRUE(state_from_json(state_to_json(rho)) == rho);
}

TEST(StateFile, StringEntriesAccepted) {
  const json j = json::parse(R"({"dims":[1,2],"matrix":[[["0.5","0"],[0,0]],[[0,0],["1/2",0]]]})");
  const DensityMatrix rho = state_from_json(j);
  EXPECT_NEAR(rho.matrix()(1, 1).real(), 0.5, 1e-15);
}

TEST(StateFile, Errors) {
  try {
    load_state_file(samples + "/bad_trace.json");
    FAIL();
  } catch (const InvariantViolation &e) {
    EXPECT_EQ(e.invariant(), "unit trace");
  }
  EXPECT_THROW(state_from_json(json::parse(R"({"dims":[2,2],"matrix":[[[1,0]]]})")), std::invalid_argument);
  EXPECT_THROW(state_from_json(json::parse(R"({"matrix":[]})")), std::invalid_argument);
  EXPECT_THROW(load_state_file(samples + "/does_not_exist.json"), std::invalid_argument);
}

TEST(Preset, Kinds) {
  EXPECT_NEAR(fidelity_phi_plus(state_from_preset("phi+:d=3")), 1.0, 1e-12);
  EXPECT_NEAR(fidelity_phi_plus(state_from_preset("iso:d=2,F=0.625")), 0.625, 1e-12);
  EXPECT_NEAR(fidelity_phi_plus(state_from_preset("iso:d=2,F=5/8")), 0.625, 1e-12);
  const DensityMatrix s = state_from_preset("schmidt:3,1");
  EXPECT_NEAR(s.matrix()(0, 0).real(), 0.9, 1e-12);
  EXPECT_TRUE(state_from_preset("random:2,2,3,7") == random_density(2, 2, 3, 7));
  EXPECT_THROW(state_from_preset("iso:d=2"), std::invalid_argument);
  EXPECT_THROW(state_from_preset("iso:d=2,F=1.5"), InvariantViolation);
  EXPECT_THROW(state_from_preset("ghz:n=3"), std::invalid_argument);
  EXPECT_THROW(state_from_preset("random:2,2"), std::invalid_argument);
}

TEST(Report, RoundTrip) {
  for (const char *spec : {"iso:d=2,F=0.625", "phi+:d=3", "random:2,3,2,1", "random:2,2,4,3"}) {
    AnalyzeOptions o;
    const ActivationReport r = analyze(state_from_preset(spec), o, spec);
    const ActivationReport back = report_from_json(json::parse(report_to_json(r).dump()));
    EXPECT_TRUE(back == r) << spec;
  }
  EXPECT_THROW(report_from_json(json::parse(R"({"tool":"other"})")), std::invalid_argument);
}

TEST(Analyze, BoundaryPreset) {
  AnalyzeArgs a;
  a.input = "iso:d=2,F=0.625";
  a.format = Format::Json;
  const CmdResult r = run(a, cmd_analyze);
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("k_min_proj"), 7);
  EXPECT_EQ(j.at("flags").at("variant"), "proof");
  EXPECT_EQ(j.at("flags").at("povm_form"), "converted");
  bool variant_note = false;
  for (const auto &n : j.at("notes"))
    variant_note |= n.get<std::string>().find("proof form") != std::string::npos;
  EXPECT_TRUE(variant_note);
}

TEST(Analyze, PhiPlus3) {
  AnalyzeArgs a;
  a.input = "phi+:d=3";
  a.format = Format::Json;
  const json j = json::parse(run(a, cmd_analyze).out);
  EXPECT_EQ(j.at("k_min_proj"), 1);
  EXPECT_EQ(j.at("hashing_distillable"), true);
}

TEST(Analyze, MalformedTraceExitsTwo) {
  AnalyzeArgs a;
  a.input = samples + "/bad_trace.json";
  const CmdResult r = run(a, cmd_analyze);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unit trace"), std::string::npos);
}

TEST(Analyze, FormatsAndOutFile) {
  const auto path = std::filesystem::temp_directory_path() / "steerscope_test_report.json";
  AnalyzeArgs a;
  a.input = samples + "/noisy_bell.json";
  a.out_path = path.string();
  for (Format f : {Format::Table, Format::Csv}) {
    a.format = f;
    const CmdResult r = run(a, cmd_analyze);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_FALSE(r.out.empty());
  }
  const ActivationReport back = report_from_json(json::parse(slurp(path.string())));
  EXPECT_EQ(back.source, a.input);
  std::filesystem::remove(path);
}

TEST(Analyze, PrintedVariantIsRecorded) {
  AnalyzeArgs a;
  a.input = "iso:d=2,F=0.625";
  a.format = Format::Json;
  a.variant = KCopyForm::AsPrinted;
  a.povm_form = PovmForm::AsPrinted;
  const json j = json::parse(run(a, cmd_analyze).out);
  EXPECT_EQ(j.at("flags").at("variant"), "printed-eq10");
  EXPECT_EQ(j.at("flags").at("povm_form"), "printed-eq16");
  bool warning = false;
  for (const auto &n : j.at("notes"))
    warning |= n.get<std::string>().find("WARNING") != std::string::npos;
  EXPECT_TRUE(warning);
}

TEST(Thresholds, SmallTable) {
  ThresholdArgs a;
  a.d_max = 2;
  a.k_max = 1;
  const CmdResult r = run(a, cmd_thresholds);
  ASSERT_EQ(r.code, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], threshold_columns());
  EXPECT_EQ(std::stod(rows[1][2]), 0.625);
  EXPECT_EQ(std::stod(rows[1][4]), 0.5625);
  EXPECT_EQ(rows[1][12], "");
}

TEST(Thresholds, PrintedPovm) {
  ThresholdArgs a;
  a.d_max = 2;
  a.povm_form = PovmForm::AsPrinted;
  const auto rows = parse_csv(run(a, cmd_thresholds).out);
  EXPECT_EQ(rows[1][5], "49/16");
  EXPECT_FALSE(rows[1][12].empty());
}

TEST(Thresholds, CsvRoundTrip) {
  ThresholdArgs a;
  a.d_max = 6;
  a.k_max = 9;
  const auto table = threshold_rows(a);
  const auto rows = parse_csv(run(a, cmd_thresholds).out);
  ASSERT_EQ(rows.size(), table.size() + 1);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto &row = rows[i + 1];
    EXPECT_EQ(std::stod(row[2]), table[i].proj.approx());
    EXPECT_EQ(std::stod(row[4]), table[i].povm.approx());
    EXPECT_EQ(std::stod(row[7]), table[i].kcopy.approx());
    if (table[i].kcopy.is_exact())
      EXPECT_EQ(mpq_class(row[11]), table[i].kcopy.exact);
    else
      EXPECT_EQ(row[9], "certified-float");
  }
}

TEST(Thresholds, JsonAndErrors) {
  ThresholdArgs a;
  a.d_max = 3;
  a.k_max = 2;
  a.format = Format::Json;
  const json j = json::parse(run(a, cmd_thresholds).out);
  EXPECT_EQ(j.at("rows").size(), 4u);
  a.d_max = 1;
  EXPECT_EQ(run(a, cmd_thresholds).code, 2);
}

TEST(Scan, TwoCopyDimension) {
  ScanArgs a;
  a.d_range = {2, 8};
  a.k_range = {2, 2};
  const ScanResult r = run_scan(a);
  ASSERT_EQ(r.min_d.size(), 1u);
  EXPECT_EQ(r.min_d[0].second, 5u);
  bool discrepancy = false;
  for (const auto &n : r.notes)
    discrepancy |= n.rfind("DISCREPANCY", 0) == 0 && n.find("d >= 6") != std::string::npos;
  EXPECT_TRUE(discrepancy);
  for (const auto &c : r.cells)
    EXPECT_EQ(c.window.nonempty, c.d >= 5) << c.d;
}

TEST(Scan, CopyCounts) {
  ScanArgs a;
  a.d_range = {2, 2};
  a.k_range = {1, 30};
  const ScanResult proj = run_scan(a);
  EXPECT_EQ(proj.min_k[0].second, 7u);
  a.mclass = MeasurementClass::POVM;
  const ScanResult povm = run_scan(a);
  EXPECT_EQ(povm.min_k[0].second, 24u);
  bool agrees = false;
  for (const auto &n : povm.notes)
    agrees |= n.find("agrees") != std::string::npos;
  EXPECT_TRUE(agrees);
}

TEST(Scan, CsvRows) {
  ScanArgs a;
  a.d_range = {2, 8};
  const auto rows = parse_csv(run(a, cmd_scan).out);
  std::size_t notes = 0, windows = 0;
  for (const auto &row : rows) {
    notes += row[0] == "note";
    windows += row[0] == "window";
  }
  EXPECT_EQ(windows, 7u);
  EXPECT_GE(notes, 1u);
}

TEST(Parsers, Values) {
  EXPECT_EQ(parse_range("2..8"), std::make_pair(2u, 8u));
  EXPECT_EQ(parse_range("3"), std::make_pair(3u, 3u));
  EXPECT_THROW(parse_range("8..2"), FormatError);
  EXPECT_THROW(parse_range("x"), FormatError);
  EXPECT_EQ(parse_variant("printed-eq10"), KCopyForm::AsPrinted);
  EXPECT_THROW(parse_variant("eq10"), FormatError);
  EXPECT_EQ(parse_mclass("povm"), MeasurementClass::POVM);
  EXPECT_EQ(parse_format("csv"), Format::Csv);
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"x\""), "\"say \"\"x\"\"\"");
}

TEST(Binary, ExitCodesAndDeterminism) {
  EXPECT_EQ(run_binary("analyze iso:d=2,F=0.625 --format json").code, 0);
  EXPECT_EQ(run_binary("analyze " + samples + "/bad_trace.json").code, 2);
  EXPECT_EQ(run_binary("analyze --no-such-flag x").code, 2);
  EXPECT_EQ(run_binary("thresholds --dmax 2 --kmax 1").code, 0);
  EXPECT_EQ(run_binary("scan --d 2..8 --k 2 --class projective").code, 0);

  const auto dir = std::filesystem::temp_directory_path();
  const std::string a = (dir / "steerscope_det_a.json").string(), b = (dir / "steerscope_det_b.json").string();
  for (const std::string &p : {a, b})
    ASSERT_EQ(run_binary("analyze random:3,3,4,11 --seed 5 --format json --out " + p).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(ExitCodes, Mapping) {
  std::ostringstream err;
  EXPECT_EQ(guarded(err, []() -> int { throw PrecisionExhausted("undecided"); }), 3);
  EXPECT_EQ(guarded(err, []() -> int { throw FormatError("bad"); }), 2);
  EXPECT_EQ(guarded(err, []() -> int { detail::throw_violation("unit trace", 0.1, "test"); }), 2);
  EXPECT_NE(err.str().find("invariant: unit trace"), std::string::npos);
}
