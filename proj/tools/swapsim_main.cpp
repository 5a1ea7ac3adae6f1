/*
 * Copyright 2026 The swapsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swapsim/swapsim.hpp"

namespace fs = std::filesystem;
using namespace swapsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitInvariantViolation = 2;

RunReport run_one(ScenarioConfig cfg, const std::optional<std::string>& out_dir,
                  bool want_trace) {
  Simulation sim(cfg);
  std::ofstream trace, blkio_csv;
  if (out_dir) {
    fs::create_directories(*out_dir);
    if (want_trace) {
      trace.open(fs::path(*out_dir) / "trace.tsv");
      sim.set_trace_stream(&trace);
    }
    blkio_csv.open(fs::path(*out_dir) / "blkio.csv");
    sim.set_blkio_stream(&blkio_csv);
  }
  RunReport report = sim.run();
  if (out_dir) {
    std::ofstream summary(fs::path(*out_dir) / "summary.csv");
    write_summary_csv(summary, {report});
    std::ofstream switches(fs::path(*out_dir) / "switches.csv");
    switches << switches_csv_header();
    for (const auto& s : report.switches) write_switch_row(switches, s);
  }
  return report;
}

void print_brief(const RunReport& r) {
  std::cout << "config            " << r.config_name << " (backend "
            << r.backend << ", seed " << r.seed << ")\n";
  std::cout << "simulated time    " << to_sec(r.elapsed) << " s\n";
  std::cout << "tabs              " << r.tabs_opened << " opened, "
            << r.tabs_discarded << " discarded\n";
  if (!r.switches.empty()) {
    auto lat = r.switch_latencies();
    std::cout << "tab switches      " << r.switches.size() << "  p50 "
              << to_ms(percentile(lat, 50.0)) << " ms  p99 "
              << to_ms(percentile(lat, 99.0)) << " ms  >=250ms "
              << r.high_latency_overall() * 100.0 << "%\n";
  }
  std::cout << "faults            " << r.minor_faults << " minor, "
            << r.major_faults << " major\n";
  if (r.zswap_hits + r.zswap_misses > 0)
    std::cout << "zswap             hit rate " << r.zswap_hit_rate() * 100.0
              << "%  stores " << r.zswap_stores << "  evictions "
              << r.zswap_evictions << "\n";
  std::cout << "swap traffic      in " << r.device_read_bytes() / 1048576.0
            << " MiB, out " << r.device_write_bytes() / 1048576.0 << " MiB";
  if (r.zram_pages_in + r.zram_pages_out > 0)
    std::cout << "  (zram in " << r.zram_pages_in * kPageSize / 1048576.0
              << " MiB, out " << r.zram_pages_out * kPageSize / 1048576.0
              << " MiB)";
  std::cout << "\n";
  std::cout << "energy            " << r.total_energy_cpj() / 1e11 << " mJ\n";
  if (r.wear_bytes > 0 && std::isfinite(r.lifetime.optimistic_seconds)) {
    double year = 365.0 * 24 * 3600;
    std::cout << "device lifetime   " << r.lifetime.optimistic_seconds / year
              << " years optimistic, " << r.lifetime.realistic_seconds / year
              << " years realistic (at this run's write rate)\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swapsim: memory-hierarchy simulator for swap-space studies"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "run one scenario");
  std::string run_config;
  std::optional<std::uint64_t> run_seed;
  std::optional<std::string> run_out;
  bool run_trace = false;
  run_cmd->add_option("config", run_config,
                      "scenario file (JSON) or preset name")
      ->required();
  run_cmd->add_option("--seed", run_seed, "override the scenario seed");
  run_cmd->add_option("--out", run_out, "directory for CSV/trace artifacts");
  run_cmd->add_flag("--trace", run_trace, "emit the block-layer trace");

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "run several scenarios on one workload");
  std::vector<std::string> cmp_configs;
  std::optional<std::uint64_t> cmp_seed;
  std::optional<std::string> cmp_out;
  cmp_cmd->add_option("configs", cmp_configs, "scenario files or preset names")
      ->required()
      ->expected(-2);
  cmp_cmd->add_option("--seed", cmp_seed, "seed shared by every run");
  cmp_cmd->add_option("--out", cmp_out, "directory for the combined summary");

  // replay
  auto* rep_cmd = app.add_subcommand("replay", "re-derive aggregates from a trace");
  std::string rep_trace;
  std::string rep_summary;
  bool rep_check = false;
  rep_cmd->add_option("trace", rep_trace, "trace.tsv from a previous run")
      ->required();
  rep_cmd->add_option("--summary", rep_summary,
                      "summary.csv to check against (default: sibling file)");
  rep_cmd->add_flag("--check", rep_check, "assert replay equality");

  CLI11_PARSE(app, argc, argv);

  auto load = [](const std::string& name) {
    if (name.size() > 5 && name.substr(name.size() - 5) == ".json")
      return load_scenario(name);
    if (fs::exists(name)) return load_scenario(name);
    return preset_scenario(name);
  };

  try {
    if (*run_cmd) {
      ScenarioConfig cfg = load(run_config);
      if (run_seed) cfg.seed = *run_seed;
      RunReport r = run_one(cfg, run_out, run_trace);
      print_brief(r);
      return kExitOk;
    }
    if (*cmp_cmd) {
      std::vector<ScenarioConfig> cfgs;
      for (const std::string& c : cmp_configs) cfgs.push_back(load(c));
      if (cmp_seed)
        for (auto& c : cfgs) c.seed = *cmp_seed;
      for (const auto& c : cfgs)
        if (c.seed != cfgs.front().seed)
          throw ConfigError(
              "compare: seeds differ; pass --seed to share one workload");
      std::vector<RunReport> reports;
      for (auto& c : cfgs) reports.push_back(run_one(c, std::nullopt, false));
      write_compare_table(std::cout, reports);
      if (cmp_out) {
        fs::create_directories(*cmp_out);
        std::ofstream summary(fs::path(*cmp_out) / "summary.csv");
        write_summary_csv(summary, reports);
      }
      return kExitOk;
    }
    if (*rep_cmd) {
      std::ifstream trace(rep_trace);
      if (!trace) throw ConfigError("cannot open trace: " + rep_trace);
      std::string summary_path = rep_summary;
      if (summary_path.empty())
        summary_path = (fs::path(rep_trace).parent_path() / "summary.csv").string();
      std::ifstream summary(summary_path);
      if (!summary) throw ConfigError("cannot open summary: " + summary_path);
      auto rows = read_summary_csv(summary);
      if (rows.empty()) throw ConfigError("summary has no rows");
      ReplayResult res = replay_check(trace, rows.front());
      if (res.ok) {
        std::cout << "replay: all aggregates reproduced exactly\n";
        return kExitOk;
      }
      for (const auto& p : res.problems) std::cerr << "replay: " << p << "\n";
      if (rep_check) return kExitInvariantViolation;
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariantViolation;
  }
  return kExitOk;
}
