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

#ifndef SWAPSIM_METRICS_HPP
#define SWAPSIM_METRICS_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "swapsim/blkio.hpp"
#include "swapsim/completion.hpp"
#include "swapsim/config.hpp"
#include "swapsim/core.hpp"
#include "swapsim/device.hpp"
#include "swapsim/energy.hpp"
#include "swapsim/workload.hpp"

namespace swapsim {

// Nearest-rank percentile: the value at 1-based index ceil(p/100 * n) of
// the sorted sequence (index floored at 1 so p = 0 gives the minimum).
template <typename T>
T percentile(std::vector<T> samples, double p) {
  if (samples.empty()) throw ConfigError("percentile: empty sample set");
  if (p < 0.0 || p > 100.0) throw ConfigError("percentile: p outside [0, 100]");
  std::sort(samples.begin(), samples.end());
  double n = static_cast<double>(samples.size());
  std::size_t rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  if (rank < 1) rank = 1;
  if (rank > samples.size()) rank = samples.size();
  return samples[rank - 1];
}

struct LatencyBucket {
  std::int32_t lo = 0;  // tab counts [lo, hi]
  std::int32_t hi = 0;
  std::uint64_t switches = 0;
  std::uint64_t high = 0;

  double fraction() const {
    return switches == 0
               ? 0.0
               : static_cast<double>(high) / static_cast<double>(switches);
  }
};

// Per-tab-count-bucket fraction of switches at or above the threshold.
// Buckets are {1..w, w+1..2w, ...} up to the largest tab count seen.
inline std::vector<LatencyBucket> high_latency_fraction(
    const std::vector<TabSwitchRecord>& switches, SimTime threshold,
    std::int32_t bucket_width) {
  if (bucket_width <= 0) throw ConfigError("bucket_width must be > 0");
  std::vector<LatencyBucket> buckets;
  for (const TabSwitchRecord& s : switches) {
    if (s.tab_count < 1) throw ConfigError("switch with tab_count < 1");
    std::size_t idx = static_cast<std::size_t>((s.tab_count - 1) / bucket_width);
    if (idx >= buckets.size()) {
      std::size_t old = buckets.size();
      buckets.resize(idx + 1);
      for (std::size_t i = old; i < buckets.size(); ++i) {
        buckets[i].lo = static_cast<std::int32_t>(i) * bucket_width + 1;
        buckets[i].hi = static_cast<std::int32_t>(i + 1) * bucket_width;
      }
    }
    ++buckets[idx].switches;
    if (s.latency >= threshold) ++buckets[idx].high;
  }
  return buckets;
}

struct RunReport {
  std::string config_name;
  std::string backend;
  std::uint64_t seed = 0;
  SimTime elapsed = 0;

  // Workload.
  std::int32_t tabs_opened = 0;
  std::int32_t tabs_discarded = 0;
  std::vector<TabSwitchRecord> switches;
  PhaseReport phases[3];

  // Memory.
  std::int64_t minor_faults = 0;
  std::int64_t major_faults = 0;
  std::int64_t reclaimed_pages = 0;
  std::int64_t clean_drops = 0;
  // Fault service latencies in power-of-two microsecond bins: bin i
  // counts faults in [2^(i-1), 2^i) us, bin 0 everything under 1 us.
  std::array<std::uint64_t, 24> fault_latency_hist_us{};

  void record_fault_latency(SimTime latency) {
    std::uint64_t us = static_cast<std::uint64_t>(latency / 1000);
    std::size_t bin = 0;
    while (us > 0 && bin < fault_latency_hist_us.size() - 1) {
      us >>= 1;
      ++bin;
    }
    ++fault_latency_hist_us[bin];
  }

  // Share of faults serviced in under 10 us.
  double fast_fault_fraction() const {
    std::uint64_t total = 0, under = 0;
    for (std::size_t i = 0; i < fault_latency_hist_us.size(); ++i)
      total += fault_latency_hist_us[i];
    // Bins 0..3 cover [0, 8) us; bin 4 is [8, 16) and straddles 10 us,
    // so this is a conservative lower bound.
    for (std::size_t i = 0; i < 4; ++i) under += fault_latency_hist_us[i];
    return total == 0 ? 1.0
                      : static_cast<double>(under) / static_cast<double>(total);
  }

  // Compressed layers.
  std::int64_t zswap_hits = 0;
  std::int64_t zswap_misses = 0;
  std::int64_t zswap_stores = 0;
  std::int64_t zswap_bypassed = 0;
  std::int64_t zswap_evictions = 0;
  std::int64_t zram_pages_in = 0;   // swapped into DRAM (reads)
  std::int64_t zram_pages_out = 0;  // swapped out of DRAM (writes)
  std::int64_t zram_compressed_in_bytes = 0;
  std::int64_t zram_compressed_out_bytes = 0;

  // Block layer / device.
  BlkioStats blkio;
  std::int64_t wear_bytes = 0;
  LifetimeModel::Report lifetime;

  // Energy (hundredths of picojoules).
  std::int64_t dram_read_cpj = 0;
  std::int64_t dram_write_cpj = 0;
  std::int64_t nvm_read_cpj = 0;
  std::int64_t nvm_write_cpj = 0;

  CpuModel::Buckets cpu;

  SimTime tolerable_latency = milliseconds(250);
  std::int32_t bucket_width = 20;

  std::int64_t total_energy_cpj() const {
    return dram_read_cpj + dram_write_cpj + nvm_read_cpj + nvm_write_cpj;
  }

  std::int64_t device_read_bytes() const { return blkio.bytes[0]; }
  std::int64_t device_write_bytes() const { return blkio.bytes[1]; }

  double zswap_hit_rate() const {
    std::int64_t loads = zswap_hits + zswap_misses;
    return loads == 0 ? 0.0
                      : static_cast<double>(zswap_hits) /
                            static_cast<double>(loads);
  }

  std::vector<SimTime> switch_latencies() const {
    std::vector<SimTime> v;
    v.reserve(switches.size());
    for (const auto& s : switches) v.push_back(s.latency);
    return v;
  }

  std::vector<SimTime> phase_latencies(std::int32_t phase) const {
    std::vector<SimTime> v;
    for (const auto& s : switches)
      if (s.phase == phase) v.push_back(s.latency);
    return v;
  }

  double high_latency_overall() const {
    if (switches.empty()) return 0.0;
    std::uint64_t high = 0;
    for (const auto& s : switches)
      if (s.latency >= tolerable_latency) ++high;
    return static_cast<double>(high) / static_cast<double>(switches.size());
  }

  std::vector<LatencyBucket> latency_buckets() const {
    return high_latency_fraction(switches, tolerable_latency, bucket_width);
  }
};

// ---------------------------------------------------------------------------
// Output formats. The trace is tab-separated with timestamps in
// microseconds at nanosecond resolution; CSV schemas are fixed.

inline std::string format_us(SimTime ns) {
  char buf[40];
  std::int64_t whole = ns / 1000;
  std::int64_t frac = ns % 1000;
  std::snprintf(buf, sizeof(buf), "%lld.%03lld",
                static_cast<long long>(whole), static_cast<long long>(frac));
  return buf;
}

inline void write_trace_record(std::ostream& out, SimTime t, char event,
                               const BlockRequest& r) {
  out << format_us(t) << '\t' << event << '\t' << r.id << '\t'
      << (r.op == BlockOp::kRead ? 'R' : 'W') << '\t' << r.sector << '\t'
      << r.size_bytes << '\t' << r.issuer << '\n';
}

inline const char* switches_csv_header() {
  return "switch_id,tab_count,latency_us,faults\n";
}

inline void write_switch_row(std::ostream& out, const TabSwitchRecord& s) {
  out << s.switch_id << ',' << s.tab_count << ',' << format_us(s.latency)
      << ',' << (s.minor_faults + s.major_faults) << '\n';
}

inline const char* blkio_csv_header() {
  return "id,op,sector,size_bytes,issuer,t_queued_us,t_dispatched_us,"
         "t_completed_us,q2d_us,d2c_us,q2c_us\n";
}

inline void write_blkio_row(std::ostream& out, const BlockRequest& r) {
  out << r.id << ',' << (r.op == BlockOp::kRead ? 'R' : 'W') << ',' << r.sector
      << ',' << r.size_bytes << ',' << r.issuer << ','
      << format_us(r.t_queued) << ',' << format_us(r.t_dispatched) << ','
      << format_us(r.t_completed) << ','
      << format_us(r.t_dispatched - r.t_queued) << ','
      << format_us(r.t_completed - r.t_dispatched) << ','
      << format_us(r.t_completed - r.t_queued) << '\n';
}

namespace detail {

struct SummaryField {
  std::string name;
  std::string value;
};

inline void add(std::vector<SummaryField>& f, const std::string& name,
                const std::string& v) {
  f.push_back({name, v});
}
inline void add(std::vector<SummaryField>& f, const std::string& name,
                std::int64_t v) {
  f.push_back({name, std::to_string(v)});
}
inline void add(std::vector<SummaryField>& f, const std::string& name,
                std::uint64_t v) {
  f.push_back({name, std::to_string(v)});
}
inline void add_f(std::vector<SummaryField>& f, const std::string& name,
                  double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  f.push_back({name, buf});
}

inline void add_accum(std::vector<SummaryField>& f, const std::string& prefix,
                      const LatencyAccum& a) {
  add(f, prefix + "_count", static_cast<std::uint64_t>(a.count));
  add(f, prefix + "_sum_ns", a.sum);
  add(f, prefix + "_min_ns", a.count ? a.min : 0);
  add(f, prefix + "_max_ns", a.count ? a.max : 0);
}

inline std::vector<SummaryField> summary_fields(const RunReport& r) {
  std::vector<SummaryField> f;
  add(f, "config", r.config_name);
  add(f, "backend", r.backend);
  add(f, "seed", static_cast<std::uint64_t>(r.seed));
  add(f, "elapsed_ns", r.elapsed);
  add(f, "tabs_opened", static_cast<std::int64_t>(r.tabs_opened));
  add(f, "tabs_discarded", static_cast<std::int64_t>(r.tabs_discarded));
  add(f, "switch_count", static_cast<std::uint64_t>(r.switches.size()));
  if (!r.switches.empty()) {
    auto lat = r.switch_latencies();
    add(f, "switch_p50_ns", percentile(lat, 50.0));
    add(f, "switch_p95_ns", percentile(lat, 95.0));
    add(f, "switch_p99_ns", percentile(lat, 99.0));
  } else {
    add(f, "switch_p50_ns", std::int64_t{0});
    add(f, "switch_p95_ns", std::int64_t{0});
    add(f, "switch_p99_ns", std::int64_t{0});
  }
  add_f(f, "high_latency_fraction", r.high_latency_overall());
  {
    std::ostringstream b;
    bool first = true;
    for (const auto& bucket : r.latency_buckets()) {
      if (bucket.switches == 0) continue;
      if (!first) b << ';';
      first = false;
      char tmp[64];
      std::snprintf(tmp, sizeof(tmp), "%d-%d:%.6f", bucket.lo, bucket.hi,
                    bucket.fraction());
      b << tmp;
    }
    add(f, "high_latency_buckets", b.str());
  }
  for (int p = 0; p < 3; ++p) {
    std::string prefix = "phase" + std::to_string(p + 1);
    add(f, prefix + "_switches",
        static_cast<std::uint64_t>(r.phases[p].switches));
    add(f, prefix + "_mean_latency_us", static_cast<std::int64_t>(
        r.phases[p].switches == 0
            ? 0
            : r.phases[p].latency_sum /
                  static_cast<SimTime>(r.phases[p].switches) / 1000));
    add(f, prefix + "_major_faults", r.phases[p].major_faults);
    add(f, prefix + "_tabs_at_end",
        static_cast<std::int64_t>(r.phases[p].tabs_at_end));
  }
  add(f, "minor_faults", r.minor_faults);
  add(f, "major_faults", r.major_faults);
  add(f, "reclaimed_pages", r.reclaimed_pages);
  add(f, "clean_drops", r.clean_drops);
  {
    std::ostringstream h;
    bool first = true;
    std::int64_t lo = 0, hi = 1;
    for (std::size_t i = 0; i < r.fault_latency_hist_us.size(); ++i) {
      if (r.fault_latency_hist_us[i] != 0) {
        if (!first) h << ';';
        first = false;
        h << lo << "-" << hi << "us:" << r.fault_latency_hist_us[i];
      }
      lo = hi;
      hi *= 2;
    }
    add(f, "fault_latency_hist", h.str());
  }
  add(f, "zswap_hits", r.zswap_hits);
  add(f, "zswap_misses", r.zswap_misses);
  add_f(f, "zswap_hit_rate", r.zswap_hit_rate());
  add(f, "zswap_stores", r.zswap_stores);
  add(f, "zswap_bypassed", r.zswap_bypassed);
  add(f, "zswap_evictions", r.zswap_evictions);
  add(f, "zram_pages_in", r.zram_pages_in);
  add(f, "zram_pages_out", r.zram_pages_out);
  add(f, "zram_compressed_in_bytes", r.zram_compressed_in_bytes);
  add(f, "zram_compressed_out_bytes", r.zram_compressed_out_bytes);
  add(f, "dev_read_requests", static_cast<std::uint64_t>(r.blkio.completed[0]));
  add(f, "dev_write_requests", static_cast<std::uint64_t>(r.blkio.completed[1]));
  add(f, "dev_submitted", static_cast<std::uint64_t>(r.blkio.submitted));
  add(f, "dev_merged", static_cast<std::uint64_t>(r.blkio.merged));
  add(f, "swap_in_bytes", r.blkio.bytes[0]);
  add(f, "swap_out_bytes", r.blkio.bytes[1]);
  add_accum(f, "q2d_read", r.blkio.q2d[0]);
  add_accum(f, "q2d_write", r.blkio.q2d[1]);
  add_accum(f, "d2c_read", r.blkio.d2c[0]);
  add_accum(f, "d2c_write", r.blkio.d2c[1]);
  add_accum(f, "q2c_read", r.blkio.q2c[0]);
  add_accum(f, "q2c_write", r.blkio.q2c[1]);
  add(f, "wear_bytes", r.wear_bytes);
  add_f(f, "write_rate_bytes_per_sec", r.lifetime.mean_write_rate_bytes_per_sec);
  add_f(f, "lifetime_optimistic_sec", r.lifetime.optimistic_seconds);
  add_f(f, "lifetime_realistic_sec", r.lifetime.realistic_seconds);
  add(f, "dram_read_cpj", r.dram_read_cpj);
  add(f, "dram_write_cpj", r.dram_write_cpj);
  add(f, "nvm_read_cpj", r.nvm_read_cpj);
  add(f, "nvm_write_cpj", r.nvm_write_cpj);
  add(f, "total_energy_cpj", r.total_energy_cpj());
  add(f, "cpu_user_ns", r.cpu.user);
  add(f, "cpu_kernel_ns", r.cpu.kernel);
  add(f, "cpu_iowait_ns", r.cpu.iowait);
  add(f, "cpu_idle_ns", r.cpu.idle);
  add(f, "cpu_capacity_ns", r.cpu.capacity);
  return f;
}

}  // namespace detail

inline void write_summary_csv(std::ostream& out,
                              const std::vector<RunReport>& reports) {
  if (reports.empty()) return;
  auto first = detail::summary_fields(reports.front());
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (i) out << ',';
    out << first[i].name;
  }
  out << '\n';
  for (const RunReport& r : reports) {
    auto f = detail::summary_fields(r);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out << ',';
      out << f[i].value;
    }
    out << '\n';
  }
}

// Side-by-side table of headline metrics, each value followed by its
// ratio against the first configuration. All runs must share a seed so
// the comparison is over the same workload.
inline void write_compare_table(std::ostream& out,
                                const std::vector<RunReport>& reports) {
  if (reports.size() < 2)
    throw ConfigError("compare: need at least two runs");
  for (const RunReport& r : reports)
    if (r.seed != reports.front().seed)
      throw ConfigError("compare: runs must share a seed");

  struct Row {
    const char* name;
    std::function<double(const RunReport&)> get;
  };
  std::vector<Row> rows = {
      {"tabs_opened", [](const RunReport& r) { return double(r.tabs_opened); }},
      {"switch_p50_ms",
       [](const RunReport& r) {
         auto v = r.switch_latencies();
         return v.empty() ? 0.0 : to_ms(percentile(v, 50.0));
       }},
      {"switch_p95_ms",
       [](const RunReport& r) {
         auto v = r.switch_latencies();
         return v.empty() ? 0.0 : to_ms(percentile(v, 95.0));
       }},
      {"switch_p99_ms",
       [](const RunReport& r) {
         auto v = r.switch_latencies();
         return v.empty() ? 0.0 : to_ms(percentile(v, 99.0));
       }},
      {"high_latency_frac",
       [](const RunReport& r) { return r.high_latency_overall(); }},
      {"swap_in_mib",
       [](const RunReport& r) { return double(r.device_read_bytes()) / 1048576.0; }},
      {"swap_out_mib",
       [](const RunReport& r) { return double(r.device_write_bytes()) / 1048576.0; }},
      {"zswap_hit_rate",
       [](const RunReport& r) { return r.zswap_hit_rate(); }},
      {"energy_mj",
       [](const RunReport& r) { return double(r.total_energy_cpj()) / 1e11; }},
      {"mean_q2c_us",
       [](const RunReport& r) { return r.blkio.q2c_all().mean_ns() / 1000.0; }},
  };

  out << "metric";
  for (const RunReport& r : reports) out << '\t' << r.config_name;
  out << '\n';
  char buf[64];
  for (const Row& row : rows) {
    out << row.name;
    double base = row.get(reports.front());
    for (std::size_t i = 0; i < reports.size(); ++i) {
      double v = row.get(reports[i]);
      if (i == 0) {
        std::snprintf(buf, sizeof(buf), "%.4g", v);
      } else if (base != 0.0) {
        std::snprintf(buf, sizeof(buf), "%.4g (x%.3f)", v, v / base);
      } else {
        std::snprintf(buf, sizeof(buf), "%.4g (-)", v);
      }
      out << '\t' << buf;
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Trace replay: re-derives the block-layer aggregates from the trace
// stream and compares them against the recorded summary row. Exact
// integer equality is required; nothing is recomputed with tolerance.

struct ReplayResult {
  bool ok = true;
  std::vector<std::string> problems;

  void fail(const std::string& p) {
    ok = false;
    problems.push_back(p);
  }
};

namespace detail {

struct ReplayRequest {
  SimTime t_queued = -1;
  SimTime t_dispatched = -1;
  SimTime t_completed = -1;
  char op = '?';
  std::int64_t size_bytes = 0;
  bool completed = false;
};

inline SimTime parse_us_to_ns(const std::string& s) {
  std::size_t dot = s.find('.');
  std::int64_t whole = std::stoll(s.substr(0, dot));
  std::int64_t frac = 0;
  if (dot != std::string::npos) {
    std::string fs = s.substr(dot + 1);
    while (fs.size() < 3) fs += '0';
    frac = std::stoll(fs.substr(0, 3));
  }
  return whole * 1000 + frac;
}

}  // namespace detail

// Parses a trace stream and checks the recorded aggregates. `summary`
// maps summary.csv column names to values (one run's row).
inline ReplayResult replay_check(std::istream& trace,
                                 const std::map<std::string, std::string>& summary) {
  ReplayResult res;
  std::map<std::uint64_t, detail::ReplayRequest> reqs;
  BlkioStats stats;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(trace, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string ts, ev, id_s, op, sector_s, size_s, issuer_s;
    if (!(ls >> ts >> ev >> id_s >> op >> sector_s >> size_s >> issuer_s)) {
      res.fail("line " + std::to_string(line_no) + ": malformed record");
      continue;
    }
    SimTime t = detail::parse_us_to_ns(ts);
    std::uint64_t id = std::stoull(id_s);
    std::int64_t size = std::stoll(size_s);
    detail::ReplayRequest& r = reqs[id];
    switch (ev[0]) {
      case 'Q':
        if (r.t_queued >= 0)
          res.fail("request " + id_s + ": duplicate Q");
        r.t_queued = t;
        r.op = op[0];
        r.size_bytes = size;
        ++stats.submitted;
        break;
      case 'M':
        r.size_bytes += size;
        ++stats.merged;
        ++stats.submitted;
        break;
      case 'D':
        if (r.t_queued < 0) res.fail("request " + id_s + ": D before Q");
        r.t_dispatched = t;
        break;
      case 'C': {
        if (r.t_dispatched < 0) res.fail("request " + id_s + ": C before D");
        if (r.completed) res.fail("request " + id_s + ": double completion");
        r.t_completed = t;
        r.completed = true;
        if (r.size_bytes != size)
          res.fail("request " + id_s + ": merged size mismatch");
        int opi = r.op == 'R' ? 0 : 1;
        SimTime q2d = r.t_dispatched - r.t_queued;
        SimTime d2c = r.t_completed - r.t_dispatched;
        SimTime q2c = r.t_completed - r.t_queued;
        if (q2c != q2d + d2c)
          res.fail("request " + id_s + ": Q2C != Q2D + D2C");
        if (q2d < 0 || d2c < 0) res.fail("request " + id_s + ": negative stage");
        stats.q2d[opi].add(q2d);
        stats.d2c[opi].add(d2c);
        stats.q2c[opi].add(q2c);
        stats.bytes[opi] += size;
        ++stats.completed[opi];
        break;
      }
      default:
        res.fail("line " + std::to_string(line_no) + ": unknown event");
    }
  }
  for (const auto& [id, r] : reqs) {
    if (!r.completed)
      res.fail("request " + std::to_string(id) + ": never completed");
  }

  auto want_int = [&](const std::string& key, std::int64_t got) {
    auto it = summary.find(key);
    if (it == summary.end()) {
      res.fail("summary missing column " + key);
      return;
    }
    std::int64_t want = std::stoll(it->second);
    if (want != got)
      res.fail(key + ": summary=" + it->second + " replay=" +
               std::to_string(got));
  };

  want_int("dev_read_requests", static_cast<std::int64_t>(stats.completed[0]));
  want_int("dev_write_requests", static_cast<std::int64_t>(stats.completed[1]));
  want_int("dev_submitted", static_cast<std::int64_t>(stats.submitted));
  want_int("dev_merged", static_cast<std::int64_t>(stats.merged));
  want_int("swap_in_bytes", stats.bytes[0]);
  want_int("swap_out_bytes", stats.bytes[1]);
  const char* ops[2] = {"read", "write"};
  for (int i = 0; i < 2; ++i) {
    std::string op = ops[i];
    want_int("q2d_" + op + "_count", static_cast<std::int64_t>(stats.q2d[i].count));
    want_int("q2d_" + op + "_sum_ns", stats.q2d[i].sum);
    want_int("q2d_" + op + "_min_ns", stats.q2d[i].count ? stats.q2d[i].min : 0);
    want_int("q2d_" + op + "_max_ns", stats.q2d[i].count ? stats.q2d[i].max : 0);
    want_int("d2c_" + op + "_count", static_cast<std::int64_t>(stats.d2c[i].count));
    want_int("d2c_" + op + "_sum_ns", stats.d2c[i].sum);
    want_int("d2c_" + op + "_min_ns", stats.d2c[i].count ? stats.d2c[i].min : 0);
    want_int("d2c_" + op + "_max_ns", stats.d2c[i].count ? stats.d2c[i].max : 0);
    want_int("q2c_" + op + "_count", static_cast<std::int64_t>(stats.q2c[i].count));
    want_int("q2c_" + op + "_sum_ns", stats.q2c[i].sum);
    want_int("q2c_" + op + "_min_ns", stats.q2c[i].count ? stats.q2c[i].min : 0);
    want_int("q2c_" + op + "_max_ns", stats.q2c[i].count ? stats.q2c[i].max : 0);
  }
  want_int("wear_bytes", stats.bytes[1]);

  // Device-path energy is linear in bits moved, so the trace fixes it.
  auto backend_it = summary.find("backend");
  if (backend_it != summary.end() && backend_it->second != "zram") {
    EnergyMeter meter;
    std::int64_t nvm_read =
        stats.bytes[0] * 8 * EnergyMeter::kNvmReadCpj;
    std::int64_t nvm_write = stats.bytes[1] * 8 * meter.nvm_write_cpj;
    want_int("nvm_read_cpj", nvm_read);
    want_int("nvm_write_cpj", nvm_write);
  }
  return res;
}

// Reads a summary.csv emitted by write_summary_csv into per-row maps.
inline std::vector<std::map<std::string, std::string>> read_summary_csv(
    std::istream& in) {
  std::vector<std::map<std::string, std::string>> rows;
  std::string header;
  if (!std::getline(in, header)) return rows;
  std::vector<std::string> cols;
  {
    std::istringstream hs(header);
    std::string c;
    while (std::getline(hs, c, ',')) cols.push_back(c);
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> vals;
    std::istringstream ls(line);
    std::string v;
    while (std::getline(ls, v, ',')) vals.push_back(v);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < cols.size() && i < vals.size(); ++i)
      row[cols[i]] = vals[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace swapsim

#endif  // SWAPSIM_METRICS_HPP
