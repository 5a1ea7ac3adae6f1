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

#ifndef SWAPSIM_SIM_HPP
#define SWAPSIM_SIM_HPP

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "swapsim/core.hpp"

namespace swapsim {

enum class EventKind : std::uint8_t {
  kGeneric = 0,
  kKswapdBatch,
  kDispatchPull,
  kDeviceComplete,
  kWorkloadStep,
  kProcessWake,
};

struct SimEvent {
  SimTime fire_at = 0;
  std::uint64_t sequence = 0;  // tiebreaker: FIFO among equal timestamps
  EventKind kind = EventKind::kGeneric;
  std::uint64_t payload = 0;  // opaque; meaning depends on kind
};

// Deterministic single-threaded event engine. Events with equal fire_at
// are delivered in scheduling order. One sink receives every event;
// modules are multiplexed by the owner through SimEvent::kind.
class EventQueue {
 public:
  using Sink = std::function<void(const SimEvent&)>;

  void set_sink(Sink sink) { sink_ = std::move(sink); }

  SimTime now() const { return now_; }

  std::uint64_t schedule(SimTime fire_at, EventKind kind,
                         std::uint64_t payload = 0) {
    if (fire_at < now_)
      throw ConfigError("schedule: event in the past");
    SimEvent ev;
    ev.fire_at = fire_at;
    ev.sequence = next_sequence_++;
    ev.kind = kind;
    ev.payload = payload;
    heap_.push(ev);
    ++scheduled_;
    return ev.sequence;
  }

  bool empty() const { return heap_.empty(); }
  std::size_t pending() const { return heap_.size(); }
  std::uint64_t scheduled_count() const { return scheduled_; }
  std::uint64_t delivered_count() const { return delivered_; }

  // Delivers every event with fire_at <= t. The clock ends at t unless
  // the queue drained earlier, in which case it stops at the last
  // delivered event (or stays put if nothing fired).
  std::uint64_t run_until(SimTime t) {
    std::uint64_t n = 0;
    while (!heap_.empty() && heap_.top().fire_at <= t) {
      SimEvent ev = heap_.top();
      heap_.pop();
      invariant(ev.fire_at >= now_, "clock monotonicity");
      now_ = ev.fire_at;
      ++delivered_;
      ++n;
      if (sink_) sink_(ev);
    }
    if (heap_.empty() || heap_.top().fire_at > t) {
      if (t > now_) now_ = t;
    }
    return n;
  }

  // Drains the queue completely.
  std::uint64_t run() {
    std::uint64_t n = 0;
    while (!heap_.empty()) {
      SimEvent ev = heap_.top();
      heap_.pop();
      invariant(ev.fire_at >= now_, "clock monotonicity");
      now_ = ev.fire_at;
      ++delivered_;
      ++n;
      if (sink_) sink_(ev);
    }
    return n;
  }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
  Sink sink_;
  SimTime now_ = 0;
  std::uint64_t next_sequence_ = 0;
  std::uint64_t scheduled_ = 0;
  std::uint64_t delivered_ = 0;
};

}  // namespace swapsim

#endif  // SWAPSIM_SIM_HPP
