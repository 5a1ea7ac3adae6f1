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

#include <catch2/catch_amalgamated.hpp>

#include "swapsim/device.hpp"
#include "swapsim/energy.hpp"

using namespace swapsim;

TEST_CASE("per-bit energy constants") {
  EnergyMeter m;
  REQUIRE(m.account(EnergyTarget::kDram, MemOp::kRead, 1) ==
          Catch::Approx(4.4));
  REQUIRE(m.account(EnergyTarget::kDram, MemOp::kWrite, 1) ==
          Catch::Approx(5.5));
  REQUIRE(m.account(EnergyTarget::kNvm, MemOp::kRead, 1) ==
          Catch::Approx(2.47));
  // 50/50 set-reset mix: (14.03 + 19.73) / 2 = 16.88
  REQUIRE(m.account(EnergyTarget::kNvm, MemOp::kWrite, 1) ==
          Catch::Approx(16.88));
}

TEST_CASE("page write energy matches hand arithmetic") {
  EnergyMeter m;
  // 4 KiB page = 32768 bits; 32768 * 16.88 pJ = 553123.84 pJ
  double pj = m.account(EnergyTarget::kNvm, MemOp::kWrite, 32768);
  REQUIRE(pj == Catch::Approx(553123.84).epsilon(1e-12));
  REQUIRE(m.nvm_write_cpj_total == 32768 * 1688);
}

TEST_CASE("zero bits cost zero energy") {
  EnergyMeter m;
  REQUIRE(m.account(EnergyTarget::kDram, MemOp::kRead, 0) == 0.0);
  REQUIRE(m.total_cpj() == 0);
  REQUIRE_THROWS_AS(m.account(EnergyTarget::kDram, MemOp::kRead, -1),
                    ConfigError);
}

TEST_CASE("energy accumulation is exactly linear in bits") {
  EnergyMeter a, b;
  RandomSource rng(3);
  std::int64_t total_bits = 0;
  for (int i = 0; i < 1000; ++i) {
    std::int64_t bits = rng.uniform_int(0, 1 << 20);
    a.account(EnergyTarget::kNvm, MemOp::kWrite, bits);
    total_bits += bits;
  }
  b.account(EnergyTarget::kNvm, MemOp::kWrite, total_bits);
  REQUIRE(a.nvm_write_cpj_total == b.nvm_write_cpj_total);
}

TEST_CASE("lifetime formula: units cancel") {
  // 1 GiB at 10^6 writes and 1 GiB/s should last 10^6 seconds.
  double gib = 1024.0 * 1024.0 * 1024.0;
  REQUIRE(estimate_lifetime_seconds(gib, 1e6, gib, 1.0) ==
          Catch::Approx(1e6).epsilon(1e-12));
  REQUIRE(estimate_lifetime_seconds(gib, 1e6, gib, 0.53) ==
          Catch::Approx(5.3e5).epsilon(1e-12));
}

TEST_CASE("lifetime inversion anchors the published figure") {
  // Solving 16 GB * 1e6 / rate = 4.5 years gives rate ~112.7 MB/s.
  double years = 4.5 * 365.0 * 24.0 * 3600.0;
  double rate = 16e9 * 1e6 / years;
  REQUIRE(rate / 1e6 == Catch::Approx(112.7).margin(0.2));
  REQUIRE(estimate_lifetime_seconds(16e9, 1e6, rate, 1.0) ==
          Catch::Approx(years).epsilon(1e-9));
}

TEST_CASE("lifetime proportionality") {
  double base = estimate_lifetime_seconds(8e9, 1e6, 50e6, 1.0);
  REQUIRE(estimate_lifetime_seconds(8e9, 1e6, 25e6, 1.0) ==
          Catch::Approx(2.0 * base).epsilon(1e-12));
  REQUIRE(estimate_lifetime_seconds(16e9, 1e6, 50e6, 1.0) ==
          Catch::Approx(2.0 * base).epsilon(1e-12));
  REQUIRE(estimate_lifetime_seconds(8e9, 2e6, 50e6, 1.0) ==
          Catch::Approx(2.0 * base).epsilon(1e-12));
  REQUIRE(estimate_lifetime_seconds(8e9, 1e6, 50e6, 0.5) ==
          Catch::Approx(0.5 * base).epsilon(1e-12));
}

TEST_CASE("zero write rate reports unbounded lifetime") {
  REQUIRE(std::isinf(estimate_lifetime_seconds(16e9, 1e6, 0.0, 1.0)));
  LifetimeModel lm;
  auto r = lm.report(16LL << 30, 0, seconds(100));
  REQUIRE(std::isinf(r.optimistic_seconds));
  REQUIRE(std::isinf(r.realistic_seconds));
}

TEST_CASE("lifetime report halves with doubled write rate") {
  LifetimeModel lm;
  auto a = lm.report(16LL << 30, 1LL << 30, seconds(100));
  auto b = lm.report(16LL << 30, 2LL << 30, seconds(100));
  REQUIRE(a.optimistic_seconds == Catch::Approx(2.0 * b.optimistic_seconds));
  REQUIRE(a.realistic_seconds ==
          Catch::Approx(0.53 * a.optimistic_seconds).epsilon(1e-12));
}

TEST_CASE("device samplers: low-latency NVM read mean") {
  DeviceModel dev;
  dev.configure(DeviceKind::kOptane, 16LL << 30, 8);
  RandomSource rng(17);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    SimTime lat = dev.service_latency(false, kPageSize, rng);
    REQUIRE(lat >= microseconds(9));
    REQUIRE(lat <= microseconds(5380));
    sum += to_us(lat);
  }
  REQUIRE(sum / n == Catch::Approx(22.4).margin(22.4 * 0.05));
}

TEST_CASE("NAND read mean is six times the low-latency device") {
  DeviceModel dev;
  dev.configure(DeviceKind::kNandFlash, 16LL << 30, 8);
  RandomSource rng(18);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += to_us(dev.service_latency(false, kPageSize, rng));
  REQUIRE(sum / n == Catch::Approx(22.4 * 6).margin(22.4 * 6 * 0.05));
}

TEST_CASE("writes add wear, reads do not") {
  DeviceModel dev;
  dev.configure(DeviceKind::kOptane, 16LL << 30, 8);
  RandomSource rng(19);
  dev.service_latency(false, kPageSize, rng);
  REQUIRE(dev.wear_bytes_written() == 0);
  dev.service_latency(true, kPageSize, rng);
  dev.service_latency(true, 3 * kPageSize, rng);
  REQUIRE(dev.wear_bytes_written() == 4 * kPageSize);
}

TEST_CASE("queue depth bounds concurrent service") {
  DeviceModel dev;
  dev.configure(DeviceKind::kOptane, 16LL << 30, 2);
  REQUIRE(dev.has_free_slot());
  dev.begin_service();
  dev.begin_service();
  REQUIRE_FALSE(dev.has_free_slot());
  REQUIRE_THROWS_AS(dev.begin_service(), InvariantViolation);
  dev.end_service();
  REQUIRE(dev.has_free_slot());
}
