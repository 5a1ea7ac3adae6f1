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

#ifndef SWAPSIM_COMPLETION_HPP
#define SWAPSIM_COMPLETION_HPP

#include <cstdint>

#include "swapsim/blkio.hpp"
#include "swapsim/core.hpp"

namespace swapsim {

enum class CompletionMode : std::uint8_t { kIrq = 0, kPolling = 1, kHybrid = 2 };

inline const char* completion_mode_name(CompletionMode m) {
  switch (m) {
    case CompletionMode::kIrq: return "irq";
    case CompletionMode::kPolling: return "polling";
    case CompletionMode::kHybrid: return "hybrid";
  }
  return "?";
}

// Hybrid with t == 0 means adaptive: sleep for half the running mean of
// past completion times for the request's op type, then poll.
struct CompletionPolicy {
  CompletionMode mode = CompletionMode::kIrq;
  SimTime hybrid_sleep = 0;

  bool adaptive() const {
    return mode == CompletionMode::kHybrid && hybrid_sleep == 0;
  }
};

// Running mean of completion times per op type. Sum and count are kept
// exactly so the estimate is independent of sample order.
class CompletionEstimator {
 public:
  void observe(BlockOp op, SimTime completion_time) {
    int i = static_cast<int>(op);
    sum_[i] += completion_time;
    ++count_[i];
  }

  // Half the running mean; zero with no samples (pure poll).
  SimTime sleep_estimate(BlockOp op) const {
    int i = static_cast<int>(op);
    if (count_[i] == 0) return 0;
    return sum_[i] / (2 * static_cast<SimTime>(count_[i]));
  }

  std::uint64_t samples(BlockOp op) const {
    return count_[static_cast<int>(op)];
  }

 private:
  std::int64_t sum_[2] = {0, 0};
  std::uint64_t count_[2] = {0, 0};
};

// How a process experienced one I/O wait.
struct WaitOutcome {
  SimTime observed = 0;   // latency seen by the waiting process
  SimTime cpu_busy = 0;   // core occupancy charged to kernel time
  SimTime slept = 0;      // time the core was surrendered
  bool context_switched = false;
};

// device_wait is the time from submission until the device completion
// arrives. IRQ sleeps the whole way and pays a context switch; polling
// occupies the core the whole way; hybrid sleeps min(t, wait) and polls
// the remainder, paying the context switch only when the completion
// lands inside the sleep.
inline WaitOutcome resolve_wait(const CompletionPolicy& policy,
                                BlockOp op,
                                SimTime device_wait,
                                SimTime context_switch_cost,
                                const CompletionEstimator& estimator) {
  WaitOutcome out;
  switch (policy.mode) {
    case CompletionMode::kIrq:
      out.observed = device_wait + context_switch_cost;
      out.cpu_busy = context_switch_cost;
      out.slept = device_wait;
      out.context_switched = true;
      return out;
    case CompletionMode::kPolling:
      out.observed = device_wait;
      out.cpu_busy = device_wait;
      out.slept = 0;
      out.context_switched = false;
      return out;
    case CompletionMode::kHybrid: {
      SimTime t = policy.adaptive() ? estimator.sleep_estimate(op)
                                    : policy.hybrid_sleep;
      if (device_wait <= t) {
        out.observed = device_wait + context_switch_cost;
        out.cpu_busy = context_switch_cost;
        out.slept = device_wait;
        out.context_switched = true;
      } else {
        out.observed = device_wait;
        out.cpu_busy = device_wait - t;
        out.slept = t;
        out.context_switched = false;
      }
      return out;
    }
  }
  return out;
}

// Execution-time bookkeeping for the simulated cores. Every latency the
// model spends lands in exactly one bucket; idle is the remainder when
// the run closes. A wait with a runnable peer turns would-be iowait
// into that peer's user time.
class CpuModel {
 public:
  void configure(int cores, SimTime context_switch_cost) {
    if (cores <= 0) throw ConfigError("cpu: core count must be > 0");
    if (context_switch_cost < 0)
      throw ConfigError("cpu: context switch cost must be >= 0");
    cores_ = cores;
    ctx_cost_ = context_switch_cost;
  }

  int cores() const { return cores_; }
  SimTime context_switch_cost() const { return ctx_cost_; }

  void add_user(SimTime t) { user_ += t; }
  void add_kernel(SimTime t) { kernel_ += t; }

  void add_wait(SimTime t, bool peer_runnable) {
    if (peer_runnable)
      user_ += t;  // the peer computes while we sleep
    else
      iowait_ += t;
  }

  SimTime user() const { return user_; }
  SimTime kernel() const { return kernel_; }
  SimTime iowait() const { return iowait_; }

  struct Buckets {
    SimTime user = 0;
    SimTime kernel = 0;
    SimTime iowait = 0;
    SimTime idle = 0;
    SimTime capacity = 0;  // cores x elapsed
  };

  // Closes the books: idle is the unaccounted remainder and the busy
  // buckets may never exceed total core capacity.
  Buckets finalize(SimTime elapsed) const {
    Buckets b;
    b.user = user_;
    b.kernel = kernel_;
    b.iowait = iowait_;
    b.capacity = static_cast<SimTime>(cores_) * elapsed;
    invariant(b.user + b.kernel + b.iowait <= b.capacity,
              "time-bucket conservation");
    b.idle = b.capacity - b.user - b.kernel - b.iowait;
    return b;
  }

 private:
  int cores_ = 2;
  SimTime ctx_cost_ = microseconds(5);
  SimTime user_ = 0;
  SimTime kernel_ = 0;
  SimTime iowait_ = 0;
};

}  // namespace swapsim

#endif  // SWAPSIM_COMPLETION_HPP
