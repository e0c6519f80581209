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

// steerscope: k-copy steerability and super-activation analysis.
//
//   steerscope analyze iso:d=2,F=0.625
//   steerscope thresholds --dmax 4 --kmax 8 --format table
//   steerscope scan --d 2..8 --k 2 --class projective

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <steerscope/cli.hpp>

namespace {

using namespace steerscope;

struct CommonFlags {
  std::string variant = "proof";
  bool printed_eq16 = false;
  std::string format;
};

void add_common(CLI::App *cmd, CommonFlags &f, const std::string &default_format) {
  f.format = default_format;
  cmd->add_option("--variant", f.variant, "k-copy threshold form")
      ->check(CLI::IsMember({"proof", "printed-eq10"}))
      ->capture_default_str();
  cmd->add_flag("--printed-eq16", f.printed_eq16, "use the as-printed POVM bound (exceeds 1 at d=2)");
  cmd->add_option("--format", f.format, "output format")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
}

PovmForm povm_form(const CommonFlags &f) { return f.printed_eq16 ? PovmForm::AsPrinted : PovmForm::Converted; }

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"steerscope: k-copy steerability and super-activation of steering"};
  app.set_version_flag("--version", std::string(STEERSCOPE_VERSION));
  app.require_subcommand(1);

  // analyze
  CommonFlags analyze_flags;
  cli::AnalyzeArgs analyze_args;
  auto *analyze = app.add_subcommand("analyze", "analyze one state (JSON state file or preset)");
  analyze->add_option("input", analyze_args.input,
                      "state file, or preset phi+:d=N | iso:d=N,F=X | schmidt:c1,c2,... | random:dA,dB,rank,seed")
      ->required();
  add_common(analyze, analyze_flags, "table");
  analyze->add_option("--kmax", analyze_args.k_max, "copy-count search cap")->capture_default_str();
  analyze->add_option("--out", analyze_args.out_path, "also write the JSON report here");
  analyze->add_option("--seed", analyze_args.seed, "optimizer seed")->capture_default_str();

  // thresholds
  CommonFlags threshold_flags;
  cli::ThresholdArgs threshold_args;
  auto *thresholds = app.add_subcommand("thresholds", "tabulate single-copy and k-copy thresholds");
  thresholds->add_option("--dmax", threshold_args.d_max, "largest local dimension")->required();
  thresholds->add_option("--kmax", threshold_args.k_max, "largest number of copies")->capture_default_str();
  add_common(thresholds, threshold_flags, "csv");

  // scan
  CommonFlags scan_flags;
  std::string d_range = "2..8", k_range = "2", mclass = "projective";
  auto *scan = app.add_subcommand("scan", "scan super-activation windows over a (d, k) grid");
  scan->add_option("--d", d_range, "dimension range a..b")->capture_default_str();
  scan->add_option("--k", k_range, "copy range a..b")->capture_default_str();
  scan->add_option("--class", mclass, "measurement class")
      ->check(CLI::IsMember({"projective", "povm"}))
      ->capture_default_str();
  add_common(scan, scan_flags, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::ValidationFailure;
  }

  if (*analyze) {
    analyze_args.variant = cli::parse_variant(analyze_flags.variant);
    analyze_args.povm_form = povm_form(analyze_flags);
    analyze_args.format = cli::parse_format(analyze_flags.format);
    return cli::cmd_analyze(analyze_args, std::cout, std::cerr);
  }
  if (*thresholds) {
    threshold_args.variant = cli::parse_variant(threshold_flags.variant);
    threshold_args.povm_form = povm_form(threshold_flags);
    threshold_args.format = cli::parse_format(threshold_flags.format);
    return cli::cmd_thresholds(threshold_args, std::cout, std::cerr);
  }
  cli::ScanArgs scan_args;
  return cli::guarded(std::cerr, [&] {
    scan_args.d_range = cli::parse_range(d_range);
    scan_args.k_range = cli::parse_range(k_range);
    scan_args.mclass = cli::parse_mclass(mclass);
    scan_args.povm_form = povm_form(scan_flags);
    scan_args.format = cli::parse_format(scan_flags.format);
    return cli::cmd_scan(scan_args, std::cout, std::cerr);
  });
}
