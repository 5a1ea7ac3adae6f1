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

#include <algorithm>
#include <sstream>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "swapsim/metrics.hpp"

using namespace swapsim;

TEST_CASE("nearest-rank percentile basics") {
  std::vector<std::int64_t> v(100);
  for (int i = 0; i < 100; ++i) v[static_cast<std::size_t>(i)] = i + 1;
  REQUIRE(percentile(v, 99.0) == 99);  // ceil(0.99 * 100) = 99
  REQUIRE(percentile(v, 100.0) == 100);
  REQUIRE(percentile(v, 50.0) == 50);
  REQUIRE(percentile(v, 0.0) == 1);
  REQUIRE(percentile(std::vector<std::int64_t>{42}, 37.0) == 42);
  REQUIRE_THROWS_AS(percentile(std::vector<std::int64_t>{}, 50.0), ConfigError);
  REQUIRE_THROWS_AS(percentile(v, 101.0), ConfigError);
}

TEST_CASE("percentile matches a brute-force oracle on random sets") {
  RandomSource rng(81);
  for (int round = 0; round < 50; ++round) {
    std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 100000));
    std::vector<std::int64_t> v(n);
    for (auto& x : v) x = rng.uniform_int(-1000000, 1000000);
    double p = static_cast<double>(rng.uniform_int(0, 100));
    std::vector<std::int64_t> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(p / 100.0 * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    REQUIRE(percentile(v, p) == sorted[rank - 1]);
  }
}

namespace {
TabSwitchRecord sw(std::int32_t tabs, SimTime lat) {
  TabSwitchRecord r;
  r.tab_count = tabs;
  r.latency = lat;
  return r;
}
}  // namespace

TEST_CASE("high latency fractions: all fast and all slow") {
  std::vector<TabSwitchRecord> fast, slow;
  for (int t = 1; t <= 75; t += 3) {
    fast.push_back(sw(t, milliseconds(10)));
    slow.push_back(sw(t, milliseconds(300)));
  }
  for (const auto& b : high_latency_fraction(fast, milliseconds(250), 20))
    REQUIRE(b.fraction() == 0.0);
  for (const auto& b : high_latency_fraction(slow, milliseconds(250), 20))
    if (b.switches > 0) REQUIRE(b.fraction() == 1.0);
}

TEST_CASE("bucket boundaries match {1-20, 21-40, ...}") {
  std::vector<TabSwitchRecord> s = {sw(1, 0), sw(20, 0), sw(21, 0), sw(40, 0),
                                    sw(41, 0), sw(60, 0), sw(61, 0)};
  auto buckets = high_latency_fraction(s, milliseconds(250), 20);
  REQUIRE(buckets.size() == 4);
  REQUIRE(buckets[0].lo == 1);
  REQUIRE(buckets[0].hi == 20);
  REQUIRE(buckets[0].switches == 2);
  REQUIRE(buckets[1].lo == 21);
  REQUIRE(buckets[1].hi == 40);
  REQUIRE(buckets[1].switches == 2);
  REQUIRE(buckets[3].lo == 61);
  REQUIRE(buckets[3].switches == 1);
}

TEST_CASE("mixed set equals a hand-counted oracle") {
  RandomSource rng(82);
  std::vector<TabSwitchRecord> s;
  for (int i = 0; i < 5000; ++i)
    s.push_back(sw(static_cast<std::int32_t>(rng.uniform_int(1, 160)),
                   microseconds(rng.uniform_int(0, 500000))));
  auto buckets = high_latency_fraction(s, milliseconds(250), 20);
  for (const auto& b : buckets) {
    std::uint64_t total = 0, high = 0;
    for (const auto& r : s) {
      if (r.tab_count >= b.lo && r.tab_count <= b.hi) {
        ++total;
        if (r.latency >= milliseconds(250)) ++high;
      }
    }
    REQUIRE(b.switches == total);
    REQUIRE(b.high == high);
  }
}

TEST_CASE("trace timestamps carry three fractional digits") {
  REQUIRE(format_us(0) == "0.000");
  REQUIRE(format_us(1) == "0.001");
  REQUIRE(format_us(22400) == "22.400");
  REQUIRE(format_us(milliseconds(250)) == "250000.000");
}

TEST_CASE("replay validates a hand-written trace") {
  std::stringstream trace;
  BlockRequest r;
  r.id = 1;
  r.op = BlockOp::kRead;
  r.sector = 8;
  r.size_bytes = 4096;
  r.issuer = 3;
  write_trace_record(trace, 0, 'Q', r);
  write_trace_record(trace, microseconds(30), 'D', r);
  write_trace_record(trace, microseconds(30) + nanoseconds(22400), 'C', r);

  std::map<std::string, std::string> summary;
  summary["backend"] = "optane";
  summary["dev_read_requests"] = "1";
  summary["dev_write_requests"] = "0";
  summary["dev_submitted"] = "1";
  summary["dev_merged"] = "0";
  summary["swap_in_bytes"] = "4096";
  summary["swap_out_bytes"] = "0";
  summary["q2d_read_count"] = "1";
  summary["q2d_read_sum_ns"] = "30000";
  summary["q2d_read_min_ns"] = "30000";
  summary["q2d_read_max_ns"] = "30000";
  summary["d2c_read_count"] = "1";
  summary["d2c_read_sum_ns"] = "22400";
  summary["d2c_read_min_ns"] = "22400";
  summary["d2c_read_max_ns"] = "22400";
  summary["q2c_read_count"] = "1";
  summary["q2c_read_sum_ns"] = "52400";
  summary["q2c_read_min_ns"] = "52400";
  summary["q2c_read_max_ns"] = "52400";
  for (const char* k :
       {"q2d_write_count", "q2d_write_sum_ns", "q2d_write_min_ns",
        "q2d_write_max_ns", "d2c_write_count", "d2c_write_sum_ns",
        "d2c_write_min_ns", "d2c_write_max_ns", "q2c_write_count",
        "q2c_write_sum_ns", "q2c_write_min_ns", "q2c_write_max_ns"})
    summary[k] = "0";
  summary["wear_bytes"] = "0";
  summary["nvm_read_cpj"] = std::to_string(4096LL * 8 * 247);
  summary["nvm_write_cpj"] = "0";

  auto res = replay_check(trace, summary);
  for (const auto& p : res.problems) UNSCOPED_INFO(p);
  REQUIRE(res.ok);
}

TEST_CASE("compare table shows unit ratios for identical runs") {
  RunReport a;
  a.config_name = "one";
  a.seed = 3;
  a.tabs_opened = 10;
  TabSwitchRecord s;
  s.tab_count = 5;
  s.latency = milliseconds(100);
  a.switches.push_back(s);
  RunReport b = a;
  b.config_name = "two";
  std::ostringstream out;
  write_compare_table(out, {a, b});
  REQUIRE(out.str().find("x1.000") != std::string::npos);
  REQUIRE(out.str().find("one") != std::string::npos);
  REQUIRE(out.str().find("two") != std::string::npos);
}

TEST_CASE("compare refuses mismatched seeds") {
  RunReport a, b;
  a.seed = 1;
  b.seed = 2;
  std::ostringstream out;
  REQUIRE_THROWS_AS(write_compare_table(out, {a, b}), ConfigError);
}

TEST_CASE("replay rejects a tampered summary") {
  std::stringstream trace;
  BlockRequest r;
  r.id = 1;
  r.op = BlockOp::kWrite;
  r.sector = 0;
  r.size_bytes = 4096;
  write_trace_record(trace, 0, 'Q', r);
  write_trace_record(trace, 1000, 'D', r);
  write_trace_record(trace, 2000, 'C', r);
  std::map<std::string, std::string> summary;
  summary["backend"] = "optane";
  summary["dev_write_requests"] = "2";  // wrong
  auto res = replay_check(trace, summary);
  REQUIRE_FALSE(res.ok);
}
