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
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "swapsim/sim.hpp"

using namespace swapsim;

namespace {

std::vector<std::uint64_t> delivered_payloads(EventQueue& q, SimTime until) {
  std::vector<std::uint64_t> out;
  q.set_sink([&](const SimEvent& ev) { out.push_back(ev.payload); });
  q.run_until(until);
  return out;
}

}  // namespace

TEST_CASE("event scheduled at the current time is delivered first") {
  EventQueue q;
  q.schedule(0, EventKind::kGeneric, 42);
  auto got = delivered_payloads(q, 10);
  REQUIRE(got == std::vector<std::uint64_t>{42});
}

TEST_CASE("equal timestamps deliver in scheduling order") {
  EventQueue q;
  q.schedule(5, EventKind::kGeneric, 1);  // A
  q.schedule(5, EventKind::kGeneric, 2);  // B
  auto got = delivered_payloads(q, 5);
  REQUIRE(got == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("events fire in timestamp order") {
  EventQueue q;
  q.schedule(3, EventKind::kGeneric, 3);
  q.schedule(1, EventKind::kGeneric, 1);
  q.schedule(2, EventKind::kGeneric, 2);
  auto got = delivered_payloads(q, 10);
  REQUIRE(got == std::vector<std::uint64_t>{1, 2, 3});
}

TEST_CASE("delivery order matches sort oracle over all permutations") {
  // Every permutation of up to five events must deliver in (time,
  // insertion) order: a stable sort of the scheduled sequence.
  std::vector<SimTime> times = {7, 3, 3, 9, 1};
  std::vector<int> idx = {0, 1, 2, 3, 4};
  std::sort(idx.begin(), idx.end());
  do {
    EventQueue q;
    std::vector<std::pair<SimTime, std::uint64_t>> scheduled;
    for (int i : idx) {
      q.schedule(times[i], EventKind::kGeneric, static_cast<std::uint64_t>(i));
      scheduled.push_back({times[i], static_cast<std::uint64_t>(i)});
    }
    std::stable_sort(scheduled.begin(), scheduled.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::uint64_t> expect;
    for (auto& [t, p] : scheduled) expect.push_back(p);
    auto got = delivered_payloads(q, 100);
    REQUIRE(got == expect);
  } while (std::next_permutation(idx.begin(), idx.end()));
}

TEST_CASE("run_until on an empty queue just advances the clock") {
  EventQueue q;
  REQUIRE(q.run_until(100) == 0);
  REQUIRE(q.now() == 100);
}

TEST_CASE("run_until delivers everything at or before t") {
  EventQueue q;
  q.schedule(1, EventKind::kGeneric);
  q.schedule(2, EventKind::kGeneric);
  q.schedule(3, EventKind::kGeneric);
  q.schedule(50, EventKind::kGeneric);
  REQUIRE(q.run_until(3) == 3);
  REQUIRE(q.now() == 3);
  REQUIRE(q.pending() == 1);
}

TEST_CASE("handler chains schedule successors") {
  EventQueue q;
  int fired = 0;
  q.set_sink([&](const SimEvent& ev) {
    ++fired;
    if (ev.payload < 9)
      q.schedule(ev.fire_at + 1, EventKind::kGeneric, ev.payload + 1);
  });
  q.schedule(0, EventKind::kGeneric, 0);
  q.run_until(100);
  REQUIRE(fired == 10);
}

TEST_CASE("scheduling in the past is a configuration error") {
  EventQueue q;
  q.schedule(5, EventKind::kGeneric);
  q.run_until(5);
  REQUIRE_THROWS_AS(q.schedule(4, EventKind::kGeneric), ConfigError);
}

TEST_CASE("no event loss: scheduled equals delivered plus pending") {
  EventQueue q;
  RandomSource rng(99);
  q.set_sink([&](const SimEvent& ev) {
    if (ev.payload % 3 == 0 && ev.fire_at < 500)
      q.schedule(ev.fire_at + 1 + ev.payload % 7, EventKind::kGeneric,
                 ev.payload + 1);
  });
  for (int i = 0; i < 200; ++i)
    q.schedule(rng.uniform_int(0, 400), EventKind::kGeneric,
               static_cast<std::uint64_t>(i));
  q.run_until(300);
  REQUIRE(q.scheduled_count() == q.delivered_count() + q.pending());
}

TEST_CASE("delivery times never decrease") {
  EventQueue q;
  RandomSource rng(7);
  SimTime last = 0;
  bool monotone = true;
  q.set_sink([&](const SimEvent& ev) {
    if (ev.fire_at < last) monotone = false;
    last = ev.fire_at;
  });
  for (int i = 0; i < 1000; ++i)
    q.schedule(rng.uniform_int(0, 10000), EventKind::kGeneric);
  q.run();
  REQUIRE(monotone);
  REQUIRE(q.delivered_count() == 1000);
}
