// Copyright 2026 The wconv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// wconv command-line front end. Links only the C interface.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "wconv/wconv.h"

namespace {

using nlohmann::json;

constexpr int kExitError = 1;

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Options {
  std::string config_path;
  bool json_out = false;
  std::string csv_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> trunc, tol;
  std::optional<int> kmax;
};

int run(const std::string& command, const Options& opt) {
  std::ifstream in(opt.config_path);
  if (!in) {
    std::cerr << "wconv: cannot read config '" << opt.config_path << "'\n";
    return kExitError;
  }
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    std::cerr << "wconv: malformed config: " << e.what() << "\n";
    return kExitError;
  }
  if (!cfg.is_object()) {
    std::cerr << "wconv: config must be a JSON object\n";
    return kExitError;
  }
  if (!cfg.contains("base_dir")) {
    cfg["base_dir"] = std::filesystem::absolute(opt.config_path).parent_path().string();
  }
  if (opt.seed) cfg["seed"] = *opt.seed;
  if (opt.trunc) cfg["precision"]["trunc"] = *opt.trunc;
  if (opt.tol) cfg["precision"]["tol"] = *opt.tol;
  if (opt.kmax) cfg["precision"]["k_max"] = *opt.kmax;

  wconv_run_output out{};
  const wconv_status st = wconv_run_command(command.c_str(), cfg.dump().c_str(), &out);
  if (st != WCONV_OK) {
    std::cerr << "wconv: " << wconv_status_string(st) << ": " << wconv_last_error() << "\n";
    return kExitError;
  }
  const int outcome = out.outcome;
  json report = json::parse(out.report_json);
  report["generated_at"] = utc_timestamp();
  const std::string csv = out.csv;
  const std::string table = out.table;
  wconv_run_output_free(&out);

  if (!opt.csv_path.empty()) {
    if (csv.empty()) {
      std::cerr << "wconv: '" << command << "' produces no CSV; --csv ignored\n";
    } else {
      std::ofstream f(opt.csv_path);
      f << csv;
      if (!f) {
        std::cerr << "wconv: cannot write '" << opt.csv_path << "'\n";
        return kExitError;
      }
    }
  }
  if (opt.json_out) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << table;
  }
  return outcome;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted convolution algebras: norm-controlled inversion and certificates"};
  app.set_version_flag("--version", std::string(wconv_version()));
  app.require_subcommand(1);

  Options opt;
  const std::pair<const char*, const char*> commands[] = {
      {"verify-weight", "check weight axioms, growth condition and summability"},
      {"estimate-theta", "build the (C, theta) certificate"},
      {"invert", "Neumann inversion with certified bounds"},
      {"bound-compare", "actual norm vs product and asymptotic bounds (CSV)"},
      {"growth", "ball growth of the group (CSV)"},
      {"pipeline", "run every stage end to end"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "run config (JSON)")->required();
    sub->add_flag("--json", opt.json_out, "print the JSON report");
    sub->add_option("--csv", opt.csv_path, "write CSV output to this path");
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--trunc", opt.trunc, "truncation threshold")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", opt.tol, "Neumann tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--kmax", opt.kmax, "dyadic depth")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }
  for (CLI::App* sub : app.get_subcommands()) return run(sub->get_name(), opt);
  return kExitError;
}
