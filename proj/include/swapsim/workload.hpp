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

#ifndef SWAPSIM_WORKLOAD_HPP
#define SWAPSIM_WORKLOAD_HPP

#include <cstdint>
#include <vector>

#include "swapsim/core.hpp"

namespace swapsim {

enum class PressureLevel : std::uint8_t { kNone = 0, kModerate = 1, kCritical = 2 };

inline const char* pressure_level_name(PressureLevel p) {
  switch (p) {
    case PressureLevel::kNone: return "none";
    case PressureLevel::kModerate: return "moderate";
    case PressureLevel::kCritical: return "critical";
  }
  return "?";
}

// fill = 1 - (mem_free + swap_free / weight) / (mem_total + swap_total / weight),
// clamped to [0, 1]. Free amounts may not exceed their totals.
inline double compute_fill(std::int64_t mem_free, std::int64_t mem_total,
                           std::int64_t swap_free, std::int64_t swap_total,
                           std::int64_t weight) {
  if (mem_total <= 0) throw ConfigError("compute_fill: mem_total must be > 0");
  if (swap_total < 0) throw ConfigError("compute_fill: swap_total must be >= 0");
  if (weight < 1) throw ConfigError("compute_fill: weight must be >= 1");
  if (mem_free < 0 || swap_free < 0 || mem_free > mem_total ||
      swap_free > swap_total)
    throw ConfigError("compute_fill: free amount exceeds total");
  double w = static_cast<double>(weight);
  double avail = static_cast<double>(mem_free) + static_cast<double>(swap_free) / w;
  double total = static_cast<double>(mem_total) + static_cast<double>(swap_total) / w;
  double fill = 1.0 - avail / total;
  if (fill < 0.0) return 0.0;
  if (fill > 1.0) return 1.0;
  return fill;
}

// Pressure thresholds: moderate at 60% fill (inclusive), critical at 95%.
inline PressureLevel classify_pressure(double fill) {
  if (fill < 0.0 || fill > 1.0)
    throw ConfigError("classify_pressure: fill outside [0, 1]");
  if (fill >= 0.95) return PressureLevel::kCritical;
  if (fill >= 0.60) return PressureLevel::kModerate;
  return PressureLevel::kNone;
}

// available_mem = available_RAM + floor(free_swap_slots / weight), in pages.
inline std::int64_t available_pages(std::int64_t available_ram_pages,
                                    std::int64_t free_swap_slots,
                                    std::int64_t weight) {
  if (weight < 1) throw ConfigError("available_pages: weight must be >= 1");
  if (available_ram_pages < 0 || free_swap_slots < 0)
    throw ConfigError("available_pages: negative input");
  return available_ram_pages + free_swap_slots / weight;
}

enum class TabState : std::uint8_t { kActive = 0, kInactive = 1, kDiscarded = 2 };

struct Tab {
  std::int32_t id = 0;
  std::uint32_t base_vpn = 0;
  std::int64_t footprint_pages = 0;
  std::int64_t touched_pages = 0;  // pages accessed per switch
  SimTime last_used = 0;
  TabState state = TabState::kInactive;
};

struct TabSwitchRecord {
  std::uint64_t switch_id = 0;
  std::int32_t tab = 0;
  std::int32_t tab_count = 0;  // open tabs at the time of the switch
  std::int32_t phase = 0;
  SimTime latency = 0;
  std::int64_t minor_faults = 0;
  std::int64_t major_faults = 0;
};

struct PhaseReport {
  std::int32_t phase = 0;
  std::uint64_t switches = 0;
  std::int64_t minor_faults = 0;
  std::int64_t major_faults = 0;
  SimTime latency_sum = 0;
  SimTime latency_max = 0;
  std::int32_t tabs_at_end = 0;

  double mean_latency_us() const {
    return switches == 0 ? 0.0 : to_us(latency_sum) / static_cast<double>(switches);
  }
};

struct WorkloadConfig {
  std::int64_t footprint_mean_pages = 38400;   // 150 MiB
  std::int64_t footprint_spread_pages = 12800; // 50 MiB
  double locality_fraction = 0.6;
  // Fraction of switch touches that mutate the page. Tab state is
  // rewritten as pages render, so the default dirties everything.
  double touch_write_fraction = 1.0;
  SimTime switch_render_cost = milliseconds(40);
  SimTime tolerable_latency = milliseconds(250);
  std::int64_t discard_threshold_pages = 38400;  // one mean footprint
  std::int64_t max_tabs = 4096;

  SimTime tab_open_interval = milliseconds(100);
  SimTime switch_think_time = milliseconds(50);

  // Phase 1 interleaves light switching among recent tabs while pressure
  // stays below critical, mirroring a user who keeps browsing while
  // opening pages.
  std::int32_t phase1_burst_switches = 1;
  std::int32_t phase1_burst_window = 30;

  std::int32_t phase2_switches = 10;

  // Phase 3 cycles a fixed random order over the most recent tabs whose
  // combined switch working set reaches this many bytes. The default
  // sits just above a 4 GiB DRAM budget so a half-DRAM configuration
  // churns its swap while a full-DRAM one keeps the set resident.
  std::int32_t phase3_switches = 800;
  std::int64_t phase3_window_bytes = 4430000000;  // ~4.13 GiB

  void validate() const {
    if (footprint_mean_pages <= 0)
      throw ConfigError("workload.footprint_mean_pages must be > 0");
    if (footprint_spread_pages < 0)
      throw ConfigError("workload.footprint_spread_pages must be >= 0");
    if (!(locality_fraction > 0.0) || locality_fraction > 1.0)
      throw ConfigError("workload.locality_fraction must be in (0, 1]");
    if (touch_write_fraction < 0.0 || touch_write_fraction > 1.0)
      throw ConfigError("workload.touch_write_fraction must be in [0, 1]");
    if (switch_render_cost < 0)
      throw ConfigError("workload.switch_render_cost must be >= 0");
    if (discard_threshold_pages < 0)
      throw ConfigError("workload.discard_threshold_pages must be >= 0");
    if (max_tabs <= 0) throw ConfigError("workload.max_tabs must be > 0");
    if (phase1_burst_switches < 0 || phase2_switches < 0 ||
        phase3_switches < 0)
      throw ConfigError("workload phase switch counts must be >= 0");
    if (phase3_window_bytes <= 0)
      throw ConfigError("workload.phase3_window_bytes must be > 0");
  }
};

}  // namespace swapsim

#endif  // SWAPSIM_WORKLOAD_HPP
