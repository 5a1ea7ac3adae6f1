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

#ifndef SWAPSIM_DEVICE_HPP
#define SWAPSIM_DEVICE_HPP

#include <cstdint>
#include <string>

#include "swapsim/core.hpp"
#include "swapsim/energy.hpp"

namespace swapsim {

enum class DeviceKind : std::uint8_t { kOptane = 0, kNandFlash = 1 };

inline const char* device_kind_name(DeviceKind k) {
  return k == DeviceKind::kOptane ? "optane" : "nandflash";
}

// Swap-backend block device: latency sampler per op, a fixed number of
// internal service slots (queue depth), and a wear counter. Latency
// distributions are log-normal fits of the published (mean, min, max)
// summaries, clamped to the published extremes.
//
// Defaults: Optane 4 KiB read (22.4 us, 9.0 us, 5380 us); Optane writes
// use the read sampler (the device services reads and writes alike).
// NAND read is the Optane read triple scaled 6x; NAND write defaults to
// 10x the Optane write triple.
class DeviceModel {
 public:
  DeviceModel() { configure(DeviceKind::kOptane, 16LL << 30, 8); }

  void configure(DeviceKind kind, std::int64_t capacity_bytes,
                 int queue_depth) {
    if (capacity_bytes <= 0) throw ConfigError("device: capacity must be > 0");
    if (queue_depth <= 0) throw ConfigError("device: queue_depth must be > 0");
    kind_ = kind;
    capacity_bytes_ = capacity_bytes;
    queue_depth_ = queue_depth;
    if (kind == DeviceKind::kOptane) {
      read_lat_us_.reset(22.4, 9.0, 5380.0);
      write_lat_us_.reset(22.4, 9.0, 5380.0);
    } else {
      read_lat_us_.reset(22.4 * 6, 9.0 * 6, 5380.0 * 6);
      write_lat_us_.reset(22.4 * 10, 9.0 * 10, 5380.0 * 10);
    }
  }

  void set_read_latency(double mean_us, double min_us, double max_us) {
    read_lat_us_.reset(mean_us, min_us, max_us);
  }
  void set_write_latency(double mean_us, double min_us, double max_us) {
    write_lat_us_.reset(mean_us, min_us, max_us);
  }

  DeviceKind kind() const { return kind_; }
  std::int64_t capacity_bytes() const { return capacity_bytes_; }
  std::int64_t capacity_slots() const { return capacity_bytes_ / kPageSize; }
  int queue_depth() const { return queue_depth_; }

  bool has_free_slot() const { return in_flight_ < queue_depth_; }
  void begin_service() {
    invariant(in_flight_ < queue_depth_, "device queue depth");
    ++in_flight_;
  }
  void end_service() {
    invariant(in_flight_ > 0, "device completion without service");
    --in_flight_;
  }
  int in_flight() const { return in_flight_; }

  // Sampled service latency for one request. Writes add to the wear
  // counter by transferred size.
  SimTime service_latency(bool is_write, std::int64_t size_bytes,
                          RandomSource& rng) {
    SimTime lat =
        is_write ? write_lat_us_.sample_ns(rng) : read_lat_us_.sample_ns(rng);
    if (is_write) wear_bytes_written_ += size_bytes;
    return lat;
  }

  std::int64_t wear_bytes_written() const { return wear_bytes_written_; }

  const ClampedLogNormal& read_sampler() const { return read_lat_us_; }
  const ClampedLogNormal& write_sampler() const { return write_lat_us_; }

 private:
  DeviceKind kind_ = DeviceKind::kOptane;
  std::int64_t capacity_bytes_ = 16LL << 30;
  int queue_depth_ = 8;
  int in_flight_ = 0;
  std::int64_t wear_bytes_written_ = 0;
  ClampedLogNormal read_lat_us_;
  ClampedLogNormal write_lat_us_;
};

// Wear-leveling lifetime model. Efficiency 1.0 is the optimistic
// perfectly-even distribution; 0.53 is the realistic mechanism.
struct LifetimeModel {
  double cell_endurance_writes = 1e6;
  double realistic_efficiency = 0.53;

  struct Report {
    double mean_write_rate_bytes_per_sec = 0.0;
    double optimistic_seconds = 0.0;
    double realistic_seconds = 0.0;
  };

  Report report(std::int64_t capacity_bytes, std::int64_t wear_bytes_written,
                SimTime elapsed) const {
    Report r;
    if (elapsed <= 0) {
      r.mean_write_rate_bytes_per_sec = 0.0;
    } else {
      r.mean_write_rate_bytes_per_sec =
          static_cast<double>(wear_bytes_written) / to_sec(elapsed);
    }
    r.optimistic_seconds = estimate_lifetime_seconds(
        static_cast<double>(capacity_bytes), cell_endurance_writes,
        r.mean_write_rate_bytes_per_sec, 1.0);
    r.realistic_seconds = estimate_lifetime_seconds(
        static_cast<double>(capacity_bytes), cell_endurance_writes,
        r.mean_write_rate_bytes_per_sec, realistic_efficiency);
    return r;
  }
};

}  // namespace swapsim

#endif  // SWAPSIM_DEVICE_HPP
