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

#ifndef SWAPSIM_CONFIG_HPP
#define SWAPSIM_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <string>

#include <json.hpp>

#include "swapsim/blkio.hpp"
#include "swapsim/completion.hpp"
#include "swapsim/core.hpp"
#include "swapsim/device.hpp"
#include "swapsim/workload.hpp"

namespace swapsim {

enum class BackendKind : std::uint8_t { kZram = 0, kOptane = 1, kNandFlash = 2 };

inline const char* backend_kind_name(BackendKind b) {
  switch (b) {
    case BackendKind::kZram: return "zram";
    case BackendKind::kOptane: return "optane";
    case BackendKind::kNandFlash: return "nandflash";
  }
  return "?";
}

struct LatencyTriple {
  double mean_us = 0.0;
  double min_us = 0.0;
  double max_us = 0.0;
};

struct RatioSpec {
  double mean = 1.14;
  double min = 0.001;
  double max = 3.0;
  double sigma = 0.0;  // 0 = derive from min/max spread
};

struct ScenarioConfig {
  std::string name = "custom";
  std::uint64_t seed = 1;

  std::int64_t dram_bytes = 4LL << 30;
  BackendKind backend = BackendKind::kOptane;
  std::int64_t swap_bytes = 16LL << 30;        // device capacity / zram logical
  std::int64_t zram_physical_bytes = 4LL << 30;

  bool zswap = false;
  double zswap_pool_fraction = 0.20;
  std::int64_t zswap_bypass_threshold_bytes = kPageSize;
  // Swap-cache pages compress well in practice; the zram capacity model
  // below uses its own ratio.
  RatioSpec zswap_ratio{2.2, 0.001, 3.0, 0.25};
  RatioSpec zram_ratio{3.0, 3.0, 3.0, 0.0};  // capacity-model ratio, 3:1

  LatencyTriple compress_latency_us{12.1, 1.5, 138.2};
  LatencyTriple decompress_latency_us{3.9, 1.5, 42.6};

  std::int64_t ram_vs_swap_weight = 4;

  SchedulerKind scheduler = SchedulerKind::kBfq;
  SchedulerParams scheduler_params;

  CompletionMode completion = CompletionMode::kIrq;
  SimTime hybrid_sleep = 0;  // 0 = adaptive

  int cpus = 2;
  SimTime context_switch_cost = microseconds(5);

  int device_queue_depth = 8;
  bool device_read_latency_set = false;
  bool device_write_latency_set = false;
  LatencyTriple device_read_latency_us;
  LatencyTriple device_write_latency_us;

  double watermark_low = 0.02;
  double watermark_high = 0.05;

  SimTime page_copy_cost = nanoseconds(500);
  SimTime io_issue_cost = nanoseconds(500);

  double cell_endurance_writes = 1e6;
  double realistic_wear_efficiency = 0.53;

  std::int32_t bucket_width = 20;

  WorkloadConfig workload;

  std::int64_t effective_memory_bytes() const { return dram_bytes + swap_bytes; }

  void validate() const {
    if (dram_bytes < (64LL << 20))
      throw ConfigError("dram_bytes: need at least 64 MiB");
    if (swap_bytes < 0) throw ConfigError("swap_bytes must be >= 0");
    if (backend == BackendKind::kZram && zram_physical_bytes <= 0)
      throw ConfigError("zram_physical_bytes must be > 0");
    if (backend == BackendKind::kZram && zswap)
      throw ConfigError("zswap: requires a physical swap device backend");
    if (zswap_pool_fraction < 0.0 || zswap_pool_fraction > 0.5)
      throw ConfigError("zswap_pool_fraction must be in [0, 0.5]");
    if (ram_vs_swap_weight < 1)
      throw ConfigError("ram_vs_swap_weight must be >= 1");
    if (cpus < 1) throw ConfigError("cpus must be >= 1");
    if (device_queue_depth < 1)
      throw ConfigError("device.queue_depth must be >= 1");
    if (hybrid_sleep < 0) throw ConfigError("hybrid_sleep_us must be >= 0");
    if (bucket_width <= 0) throw ConfigError("bucket_width must be > 0");
    workload.validate();
  }
};

// Table of evaluated system configurations:
//   baseline   8 GiB DRAM, in-DRAM compressed swap (12 GiB logical), weight 4
//   optane     4 GiB DRAM, 16 GiB low-latency NVM SSD swap, weight 1
//   nandflash  4 GiB DRAM, 16 GiB NAND-flash SSD swap, weight 4
inline ScenarioConfig preset_scenario(const std::string& preset) {
  ScenarioConfig c;
  c.name = preset;
  if (preset == "baseline") {
    c.dram_bytes = 8LL << 30;
    c.backend = BackendKind::kZram;
    c.swap_bytes = 12LL << 30;
    c.zram_physical_bytes = 4LL << 30;
    c.ram_vs_swap_weight = 4;
    c.zswap = false;
  } else if (preset == "optane" || preset == "optane+zswap") {
    c.dram_bytes = 4LL << 30;
    c.backend = BackendKind::kOptane;
    c.swap_bytes = 16LL << 30;
    c.ram_vs_swap_weight = 1;
    c.zswap = preset == "optane+zswap";
  } else if (preset == "nandflash" || preset == "nandflash+zswap") {
    c.dram_bytes = 4LL << 30;
    c.backend = BackendKind::kNandFlash;
    c.swap_bytes = 16LL << 30;
    c.ram_vs_swap_weight = 4;
    c.zswap = preset == "nandflash+zswap";
  } else {
    throw ConfigError("unknown preset: " + preset);
  }
  return c;
}

namespace detail {

using json = nlohmann::json;

inline LatencyTriple parse_latency_triple(const json& j, const std::string& where) {
  LatencyTriple t;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "mean_us") t.mean_us = it.value().get<double>();
    else if (it.key() == "min_us") t.min_us = it.value().get<double>();
    else if (it.key() == "max_us") t.max_us = it.value().get<double>();
    else throw ConfigError("unknown field: " + where + "." + it.key());
  }
  return t;
}

inline RatioSpec parse_ratio(const json& j, const std::string& where,
                             RatioSpec base) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "mean") base.mean = it.value().get<double>();
    else if (it.key() == "min") base.min = it.value().get<double>();
    else if (it.key() == "max") base.max = it.value().get<double>();
    else if (it.key() == "sigma") base.sigma = it.value().get<double>();
    else throw ConfigError("unknown field: " + where + "." + it.key());
  }
  return base;
}

inline SchedulerKind parse_scheduler(const std::string& s) {
  if (s == "none") return SchedulerKind::kNone;
  if (s == "kyber") return SchedulerKind::kKyber;
  if (s == "mq-deadline") return SchedulerKind::kMqDeadline;
  if (s == "bfq") return SchedulerKind::kBfq;
  throw ConfigError("scheduler: expected none|kyber|mq-deadline|bfq, got " + s);
}

inline CompletionMode parse_completion(const std::string& s) {
  if (s == "irq") return CompletionMode::kIrq;
  if (s == "polling") return CompletionMode::kPolling;
  if (s == "hybrid") return CompletionMode::kHybrid;
  throw ConfigError("completion: expected irq|polling|hybrid, got " + s);
}

inline BackendKind parse_backend(const std::string& s) {
  if (s == "zram") return BackendKind::kZram;
  if (s == "optane") return BackendKind::kOptane;
  if (s == "nandflash") return BackendKind::kNandFlash;
  throw ConfigError("backend: expected zram|optane|nandflash, got " + s);
}

inline void parse_workload(const json& j, WorkloadConfig& w) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "footprint_mean_pages") w.footprint_mean_pages = it.value().get<std::int64_t>();
    else if (k == "footprint_spread_pages") w.footprint_spread_pages = it.value().get<std::int64_t>();
    else if (k == "locality_fraction") w.locality_fraction = it.value().get<double>();
    else if (k == "touch_write_fraction") w.touch_write_fraction = it.value().get<double>();
    else if (k == "switch_render_cost_ms") w.switch_render_cost = milliseconds(it.value().get<std::int64_t>());
    else if (k == "tolerable_latency_ms") w.tolerable_latency = milliseconds(it.value().get<std::int64_t>());
    else if (k == "discard_threshold_pages") w.discard_threshold_pages = it.value().get<std::int64_t>();
    else if (k == "max_tabs") w.max_tabs = it.value().get<std::int64_t>();
    else if (k == "tab_open_interval_ms") w.tab_open_interval = milliseconds(it.value().get<std::int64_t>());
    else if (k == "switch_think_time_ms") w.switch_think_time = milliseconds(it.value().get<std::int64_t>());
    else if (k == "phase1_burst_switches") w.phase1_burst_switches = it.value().get<std::int32_t>();
    else if (k == "phase1_burst_window") w.phase1_burst_window = it.value().get<std::int32_t>();
    else if (k == "phase2_switches") w.phase2_switches = it.value().get<std::int32_t>();
    else if (k == "phase3_switches") w.phase3_switches = it.value().get<std::int32_t>();
    else if (k == "phase3_window_bytes") w.phase3_window_bytes = it.value().get<std::int64_t>();
    else throw ConfigError("unknown field: workload." + k);
  }
}

inline void parse_scheduler_params(const json& j, SchedulerParams& p) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "kyber_write_target_ms") p.kyber_write_target = milliseconds(it.value().get<std::int64_t>());
    else if (k == "deadline_read_ms") p.deadline_read = milliseconds(it.value().get<std::int64_t>());
    else if (k == "deadline_write_ms") p.deadline_write = milliseconds(it.value().get<std::int64_t>());
    else if (k == "bfq_base_budget_sectors") p.bfq_base_budget_sectors = it.value().get<std::int64_t>();
    else if (k == "bfq_min_budget_sectors") p.bfq_min_budget_sectors = it.value().get<std::int64_t>();
    else if (k == "bfq_max_budget_sectors") p.bfq_max_budget_sectors = it.value().get<std::int64_t>();
    else if (k == "bfq_selection_overhead_us") p.bfq_selection_overhead = microseconds(it.value().get<std::int64_t>());
    else throw ConfigError("unknown field: scheduler_params." + k);
  }
}

inline void parse_device(const json& j, ScenarioConfig& c) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "queue_depth") c.device_queue_depth = it.value().get<int>();
    else if (k == "read_latency_us") {
      c.device_read_latency_us = parse_latency_triple(it.value(), "device.read_latency_us");
      c.device_read_latency_set = true;
    } else if (k == "write_latency_us") {
      c.device_write_latency_us = parse_latency_triple(it.value(), "device.write_latency_us");
      c.device_write_latency_set = true;
    } else {
      throw ConfigError("unknown field: device." + k);
    }
  }
}

inline void parse_zswap_section(const json& j, ScenarioConfig& c) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "pool_fraction") c.zswap_pool_fraction = it.value().get<double>();
    else if (k == "bypass_threshold_bytes") c.zswap_bypass_threshold_bytes = it.value().get<std::int64_t>();
    else if (k == "ratio") c.zswap_ratio = parse_ratio(it.value(), "zswap_config.ratio", c.zswap_ratio);
    else throw ConfigError("unknown field: zswap_config." + k);
  }
}

inline void parse_zram_section(const json& j, ScenarioConfig& c) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "physical_bytes") c.zram_physical_bytes = it.value().get<std::int64_t>();
    else if (k == "ratio") c.zram_ratio = parse_ratio(it.value(), "zram.ratio", c.zram_ratio);
    else throw ConfigError("unknown field: zram." + k);
  }
}

inline void parse_compression(const json& j, ScenarioConfig& c) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "compress_latency_us")
      c.compress_latency_us = parse_latency_triple(it.value(), "compression.compress_latency_us");
    else if (k == "decompress_latency_us")
      c.decompress_latency_us = parse_latency_triple(it.value(), "compression.decompress_latency_us");
    else throw ConfigError("unknown field: compression." + k);
  }
}

}  // namespace detail

inline ScenarioConfig scenario_from_json(const nlohmann::json& j) {
  ScenarioConfig c;
  if (j.contains("preset")) c = preset_scenario(j.at("preset").get<std::string>());
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    try {
      if (k == "preset") continue;
      else if (k == "name") c.name = it.value().get<std::string>();
      else if (k == "seed") c.seed = it.value().get<std::uint64_t>();
      else if (k == "dram_bytes") c.dram_bytes = it.value().get<std::int64_t>();
      else if (k == "backend") c.backend = detail::parse_backend(it.value().get<std::string>());
      else if (k == "swap_bytes") c.swap_bytes = it.value().get<std::int64_t>();
      else if (k == "zswap") c.zswap = it.value().get<bool>();
      else if (k == "ram_vs_swap_weight") c.ram_vs_swap_weight = it.value().get<std::int64_t>();
      else if (k == "scheduler") c.scheduler = detail::parse_scheduler(it.value().get<std::string>());
      else if (k == "completion") c.completion = detail::parse_completion(it.value().get<std::string>());
      else if (k == "hybrid_sleep_us") c.hybrid_sleep = microseconds(it.value().get<std::int64_t>());
      else if (k == "cpus") c.cpus = it.value().get<int>();
      else if (k == "context_switch_us") c.context_switch_cost = microseconds(it.value().get<std::int64_t>());
      else if (k == "bucket_width") c.bucket_width = it.value().get<std::int32_t>();
      else if (k == "watermark_low") c.watermark_low = it.value().get<double>();
      else if (k == "watermark_high") c.watermark_high = it.value().get<double>();
      else if (k == "workload") detail::parse_workload(it.value(), c.workload);
      else if (k == "scheduler_params") detail::parse_scheduler_params(it.value(), c.scheduler_params);
      else if (k == "device") detail::parse_device(it.value(), c);
      else if (k == "zswap_config") detail::parse_zswap_section(it.value(), c);
      else if (k == "zram") detail::parse_zram_section(it.value(), c);
      else if (k == "compression") detail::parse_compression(it.value(), c);
      else throw ConfigError("unknown field: " + k);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("field " + k + ": " + e.what());
    }
  }
  c.validate();
  return c;
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scenario file " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace swapsim

#endif  // SWAPSIM_CONFIG_HPP
