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

#ifndef SWAPSIM_SYSTEM_HPP
#define SWAPSIM_SYSTEM_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "swapsim/blkio.hpp"
#include "swapsim/completion.hpp"
#include "swapsim/compress.hpp"
#include "swapsim/config.hpp"
#include "swapsim/core.hpp"
#include "swapsim/device.hpp"
#include "swapsim/energy.hpp"
#include "swapsim/metrics.hpp"
#include "swapsim/sim.hpp"
#include "swapsim/swapcache.hpp"
#include "swapsim/vmm.hpp"
#include "swapsim/workload.hpp"

namespace swapsim {

// One simulation instance: the event engine, the memory hierarchy and
// the three-phase memory-capacity-pressure test driving it. Instances
// share nothing; a scenario sweep runs one instance per configuration.
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg)
      : cfg_(cfg),
        rng_workload_(RandomSource(cfg.seed).fork(1)),
        rng_zswap_(RandomSource(cfg.seed).fork(2)),
        rng_zram_(RandomSource(cfg.seed).fork(3)),
        rng_device_(RandomSource(cfg.seed).fork(4)) {
    cfg_.validate();
    setup();
  }

  void set_trace_stream(std::ostream* out) { trace_out_ = out; }
  void set_blkio_stream(std::ostream* out) {
    blkio_out_ = out;
    if (out) *out << blkio_csv_header();
  }

  RunReport run() {
    queue_.set_sink([this](const SimEvent& ev) { handle(ev); });
    queue_.schedule(0, EventKind::kWorkloadStep, kStepAdvance);
    queue_.run();
    invariant(done_, "workload did not finish");
    verify_page_conservation();
    return finalize();
  }

  // --- introspection for tests -------------------------------------------
  const PageTable& page_table() const { return pt_; }
  const MemoryLedger& ledger() const { return ledger_; }
  const ZswapPool& zswap() const { return zswap_; }
  const ZramDevice& zram() const { return zram_; }
  const BlockLayer& blkio() const { return blkio_; }
  const std::vector<Tab>& tabs() const { return tabs_; }
  SimTime now() const { return queue_.now(); }

  // Deep structural check: every tab's pages are in exactly one state
  // and per-state counts agree with the global ledgers.
  void verify_page_conservation() const {
    std::int64_t resident = 0, in_zswap = 0, in_zram = 0, in_dev = 0;
    for (const Tab& tab : tabs_) {
      std::int64_t r = 0, zs = 0, zr = 0, dev = 0, un = 0;
      for (std::uint32_t v = tab.base_vpn;
           v < tab.base_vpn + tab.footprint_pages; ++v) {
        switch (pt_.page(v).state) {
          case PageState::kResident: ++r; break;
          case PageState::kInZswap: ++zs; break;
          case PageState::kInZram: ++zr; break;
          case PageState::kInSwapDevice: ++dev; break;
          case PageState::kUnallocated: ++un; break;
        }
      }
      if (tab.state == TabState::kDiscarded) {
        invariant(r == 0 && zs == 0 && zr == 0 && dev == 0,
                  "discarded tab owns pages");
      } else {
        invariant(r + zs + zr + dev + un == tab.footprint_pages,
                  "page conservation per tab");
      }
      resident += r;
      in_zswap += zs;
      in_zram += zr;
      in_dev += dev;
    }
    invariant(resident == pt_.resident_pages(), "resident count drift");
    invariant(in_zswap == static_cast<std::int64_t>(zswap_.entry_count()),
              "zswap count drift");
    invariant(in_zram == zram_.stored_pages(), "zram count drift");
    ledger_.check(pt_.resident_pages());
    std::int64_t active = 0, inactive = 0, discarded = 0;
    for (const Tab& t : tabs_) {
      if (t.state == TabState::kActive) ++active;
      else if (t.state == TabState::kInactive) ++inactive;
      else ++discarded;
    }
    invariant(active <= 1, "more than one active tab");
    invariant(active + inactive + discarded ==
                  static_cast<std::int64_t>(tabs_.size()),
              "tab accounting");
  }

 private:
  // ---- construction ------------------------------------------------------
  void setup() {
    std::int64_t dram_pages = cfg_.dram_bytes / kPageSize;
    ledger_.configure(dram_pages, cfg_.watermark_low, cfg_.watermark_high);

    zswap_comp_.set_ratio(cfg_.zswap_ratio.mean, cfg_.zswap_ratio.min,
                          cfg_.zswap_ratio.max, cfg_.zswap_ratio.sigma);
    zswap_comp_.set_compress_latency(cfg_.compress_latency_us.mean_us,
                                     cfg_.compress_latency_us.min_us,
                                     cfg_.compress_latency_us.max_us);
    zswap_comp_.set_decompress_latency(cfg_.decompress_latency_us.mean_us,
                                       cfg_.decompress_latency_us.min_us,
                                       cfg_.decompress_latency_us.max_us);
    zram_comp_.set_ratio(cfg_.zram_ratio.mean, cfg_.zram_ratio.min,
                         cfg_.zram_ratio.max, cfg_.zram_ratio.sigma);
    zram_comp_.set_compress_latency(cfg_.compress_latency_us.mean_us,
                                    cfg_.compress_latency_us.min_us,
                                    cfg_.compress_latency_us.max_us);
    zram_comp_.set_decompress_latency(cfg_.decompress_latency_us.mean_us,
                                      cfg_.decompress_latency_us.min_us,
                                      cfg_.decompress_latency_us.max_us);

    if (cfg_.backend == BackendKind::kZram) {
      zram_.configure(cfg_.zram_physical_bytes, cfg_.swap_bytes);
    } else {
      DeviceKind kind = cfg_.backend == BackendKind::kOptane
                            ? DeviceKind::kOptane
                            : DeviceKind::kNandFlash;
      device_.configure(kind, cfg_.swap_bytes, cfg_.device_queue_depth);
      if (cfg_.device_read_latency_set)
        device_.set_read_latency(cfg_.device_read_latency_us.mean_us,
                                 cfg_.device_read_latency_us.min_us,
                                 cfg_.device_read_latency_us.max_us);
      if (cfg_.device_write_latency_set)
        device_.set_write_latency(cfg_.device_write_latency_us.mean_us,
                                  cfg_.device_write_latency_us.min_us,
                                  cfg_.device_write_latency_us.max_us);
      slots_.configure(cfg_.swap_bytes / kPageSize);
      if (cfg_.zswap) {
        zswap_.set_max_pool_bytes(static_cast<std::int64_t>(
            cfg_.zswap_pool_fraction * static_cast<double>(cfg_.dram_bytes)));
      }
    }

    blkio_.configure(cfg_.scheduler, cfg_.scheduler_params, cfg_.cpus);
    blkio_.set_trace_sink([this](SimTime t, char ev, const BlockRequest& r) {
      if (trace_out_) write_trace_record(*trace_out_, t, ev, r);
    });
    cpu_.configure(cfg_.cpus, cfg_.context_switch_cost);
    lifetime_.cell_endurance_writes = cfg_.cell_endurance_writes;
    lifetime_.realistic_efficiency = cfg_.realistic_wear_efficiency;
    footprint_sampler_ = TruncatedNormal(
        static_cast<double>(cfg_.workload.footprint_mean_pages),
        static_cast<double>(cfg_.workload.footprint_spread_pages), 256.0);
    policy_.mode = cfg_.completion;
    policy_.hybrid_sleep = cfg_.hybrid_sleep;
  }

  // ---- event dispatch ----------------------------------------------------
  static constexpr std::uint64_t kStepAdvance = 0;
  static constexpr std::uint64_t kStepOpenChunk = 1;
  static constexpr std::uint64_t kStepSwitchChunk = 2;
  static constexpr std::uint64_t kStepBurst = 3;

  void handle(const SimEvent& ev) {
    switch (ev.kind) {
      case EventKind::kWorkloadStep:
        if (ev.payload == kStepAdvance) advance();
        else if (ev.payload == kStepOpenChunk) open_chunk();
        else if (ev.payload == kStepSwitchChunk) switch_chunk();
        else if (ev.payload == kStepBurst) start_burst_switch(pending_bursts_);
        break;
      case EventKind::kKswapdBatch:
        kswapd_batch();
        break;
      case EventKind::kDispatchPull:
        pump_device();
        break;
      case EventKind::kDeviceComplete:
        device_complete(static_cast<std::uint32_t>(ev.payload));
        break;
      case EventKind::kProcessWake:
        waiter_wake();
        break;
      default:
        break;
    }
  }

  // ---- memory primitives --------------------------------------------------

  std::int64_t free_pages() const {
    return ledger_.free_pages(pt_.resident_pages());
  }

  void sync_cache_charge() {
    ledger_.set_cache_bytes(zswap_.used_bytes(), zram_.used_physical());
  }

  std::int64_t backend_free_slots() const {
    if (cfg_.backend == BackendKind::kZram) return zram_.free_slots();
    return slots_.free_count();
  }

  std::int64_t available_mem_pages() const {
    return available_pages(std::max<std::int64_t>(0, free_pages()),
                           backend_free_slots(), cfg_.ram_vs_swap_weight);
  }

  double current_fill() const {
    return compute_fill(std::max<std::int64_t>(0, free_pages()) * kPageSize,
                        cfg_.dram_bytes, backend_free_slots() * kPageSize,
                        cfg_.swap_bytes, cfg_.ram_vs_swap_weight);
  }

  bool should_discard() const {
    return available_mem_pages() < cfg_.workload.discard_threshold_pages;
  }

  // Ensures one free working page, reclaiming (and in the worst case
  // discarding) synchronously. Returns the CPU time burned on the
  // allocating core.
  SimTime ensure_free_page() {
    SimTime spent = 0;
    int guard = 0;
    while (free_pages() <= 0) {
      ReclaimOutcome out = reclaim_pages(kReclaimBatch);
      spent += out.cpu_time;
      if (out.reclaimed == 0) {
        if (!discard_lru_tab()) {
          throw ConfigError(
              "workload cannot fit: nothing reclaimable or discardable");
        }
      }
      invariant(++guard < 1 << 20, "allocation stall loop");
    }
    return spent;
  }

  // Frees one working page for an incoming page. The time is charged to
  // the faulting core by the caller.
  struct ReclaimOutcome {
    std::int64_t reclaimed = 0;
    SimTime cpu_time = 0;
    bool backend_full = false;
  };

  static constexpr std::int64_t kReclaimBatch = 32;

  bool tab_is_active(std::int32_t owner) const {
    return owner == active_tab_;
  }

  // Evicts up to `target` least-recently-used pages of inactive tabs.
  // Clean pages with a live swap copy are dropped without I/O; dirty
  // pages go through the compressed cache (when present) or straight to
  // the backend.
  ReclaimOutcome reclaim_pages(std::int64_t target) {
    ReclaimOutcome out;
    if (target <= 0) return out;
    auto victims = pt_.lru_select(
        target, [this](std::int32_t owner) { return tab_is_active(owner); });
    for (std::uint32_t vpn : victims) {
      PageTableEntry& e = pt_.page(vpn);
      if (!e.dirty && e.backed_by_slot) {
        pt_.remove_resident(vpn);
        e.state = PageState::kInSwapDevice;
        ++report_.clean_drops;
        ++out.reclaimed;
        ++report_.reclaimed_pages;
        continue;
      }
      bool ok = false;
      if (cfg_.backend == BackendKind::kZram) {
        ok = zram_swap_out(vpn, out);
      } else if (cfg_.zswap) {
        ok = zswap_store(vpn, out);
      } else {
        ok = device_swap_out(vpn, out);
      }
      if (!ok) {
        out.backend_full = true;
        break;
      }
      ++out.reclaimed;
      ++report_.reclaimed_pages;
    }
    sync_cache_charge();
    ledger_.check(pt_.resident_pages());
    return out;
  }

  bool zram_swap_out(std::uint32_t vpn, ReclaimOutcome& out) {
    auto comp = zram_comp_.compress(rng_zram_);
    out.cpu_time += comp.latency;
    if (!zram_.can_store(comp.size_bytes)) return false;
    pt_.remove_resident(vpn);
    PageTableEntry& e = pt_.page(vpn);
    zram_.store(vpn, comp.size_bytes);
    e.state = PageState::kInZram;
    e.dirty = false;
    e.backed_by_slot = false;
    ++report_.zram_pages_out;
    // Swap-space traffic energy: the compressed bits land in the pool.
    report_.zram_compressed_out_bytes += comp.size_bytes;
    energy_.account(EnergyTarget::kDram, MemOp::kWrite, comp.size_bytes * 8);
    return true;
  }

  bool device_swap_out(std::uint32_t vpn, ReclaimOutcome& out) {
    std::int32_t slot = slots_.allocate();
    if (slot < 0) return false;
    pt_.remove_resident(vpn);
    PageTableEntry& e = pt_.page(vpn);
    e.state = PageState::kInSwapDevice;
    e.swap_slot = slot;
    e.backed_by_slot = true;
    e.dirty = false;
    submit_write(slot);
    out.cpu_time += cfg_.io_issue_cost;
    return true;
  }

  // Store path of the swap cache: compress, bypass incompressible pages
  // to the device, evict oldest entries when the pool is full.
  bool zswap_store(std::uint32_t vpn, ReclaimOutcome& out) {
    auto comp = zswap_comp_.compress(rng_zswap_);
    out.cpu_time += comp.latency;
    if (comp.size_bytes > cfg_.zswap_bypass_threshold_bytes) {
      std::int32_t slot = slots_.allocate();
      if (slot < 0) return false;
      pt_.remove_resident(vpn);
      PageTableEntry& e = pt_.page(vpn);
      e.state = PageState::kInSwapDevice;
      e.swap_slot = slot;
      e.backed_by_slot = true;
      e.dirty = false;
      submit_write(slot);
      out.cpu_time += cfg_.io_issue_cost;
      ++report_.zswap_bypassed;
      return true;
    }
    std::int32_t slot = slots_.allocate();
    if (slot < 0) return false;
    while (!zswap_.fits(comp.size_bytes) && !zswap_.empty()) {
      std::uint32_t victim = zswap_.lru_victim();
      zswap_.remove(victim);
      out.cpu_time += zswap_comp_.decompress(rng_zswap_);
      auto sit = zswap_slot_.find(victim);
      invariant(sit != zswap_slot_.end(), "zswap victim without slot");
      std::int32_t vslot = sit->second;
      zswap_slot_.erase(sit);
      PageTableEntry& ve = pt_.page(victim);
      invariant(ve.state == PageState::kInZswap, "zswap victim state");
      ve.state = PageState::kInSwapDevice;
      ve.swap_slot = vslot;
      ve.backed_by_slot = true;
      submit_write(vslot);
      out.cpu_time += cfg_.io_issue_cost;
      ++report_.zswap_evictions;
    }
    if (!zswap_.fits(comp.size_bytes)) {
      // Degenerate pool smaller than one entry: straight to the device.
      pt_.remove_resident(vpn);
      PageTableEntry& e = pt_.page(vpn);
      e.state = PageState::kInSwapDevice;
      e.swap_slot = slot;
      e.backed_by_slot = true;
      e.dirty = false;
      submit_write(slot);
      out.cpu_time += cfg_.io_issue_cost;
      ++report_.zswap_bypassed;
      return true;
    }
    pt_.remove_resident(vpn);
    PageTableEntry& e = pt_.page(vpn);
    zswap_.insert(vpn, comp.size_bytes, queue_.now());
    zswap_slot_.emplace(vpn, slot);
    e.state = PageState::kInZswap;
    e.dirty = false;
    e.backed_by_slot = false;
    ++report_.zswap_stores;
    return true;
  }

  void submit_write(std::int32_t slot) {
    blkio_.submit(queue_.now(), BlockOp::kWrite,
                  static_cast<std::int64_t>(slot) * kSectorsPerPage, kPageSize,
                  kKswapdIssuer, 1, false);
    queue_.schedule(queue_.now(), EventKind::kDispatchPull);
  }

  // Wakes the reclaim daemon when free pages sink below the low
  // watermark; it then works in paced batches towards the high mark.
  void watermark_check() {
    if (kswapd_active_) return;
    if (free_pages() >= ledger_.low_watermark()) return;
    kswapd_active_ = true;
    SimTime at = std::max(queue_.now(), kswapd_busy_until_);
    queue_.schedule(at, EventKind::kKswapdBatch);
  }

  void kswapd_batch() {
    std::int64_t free = free_pages();
    std::int64_t high = ledger_.high_watermark();
    if (free >= high) {
      kswapd_active_ = false;
      return;
    }
    std::int64_t want = std::min<std::int64_t>(kReclaimBatch, high - free);
    ReclaimOutcome out = reclaim_pages(want);
    cpu_.add_kernel(out.cpu_time);
    kswapd_busy_until_ = queue_.now() + out.cpu_time;
    if (out.reclaimed == 0) {
      // Nothing evictable; give up until the next watermark trigger.
      kswapd_active_ = false;
      return;
    }
    queue_.schedule(kswapd_busy_until_, EventKind::kKswapdBatch);
  }

  // ---- device plumbing ----------------------------------------------------

  void pump_device() {
    while (device_.has_free_slot()) {
      auto h = blkio_.dispatch_next(queue_.now());
      if (!h) return;
      const BlockRequest& r = blkio_.request(*h);
      device_.begin_service();
      SimTime lat = device_.service_latency(r.op == BlockOp::kWrite,
                                            r.size_bytes, rng_device_);
      queue_.schedule(r.t_dispatched + lat, EventKind::kDeviceComplete, *h);
    }
  }

  void device_complete(std::uint32_t handle) {
    device_.end_service();
    BlockRequest done = blkio_.complete(queue_.now(), handle);
    if (blkio_out_) write_blkio_row(*blkio_out_, done);
    energy_.account(EnergyTarget::kNvm,
                    done.op == BlockOp::kRead ? MemOp::kRead : MemOp::kWrite,
                    done.size_bytes * 8);
    if (done.has_waiter) {
      invariant(waiter_.pending, "completion without waiter");
      SimTime device_wait = queue_.now() - waiter_.submitted_at;
      estimator_.observe(done.op, device_wait);
      WaitOutcome w = resolve_wait(policy_, done.op, device_wait,
                                   cpu_.context_switch_cost(), estimator_);
      cpu_.add_kernel(w.cpu_busy);
      cpu_.add_wait(w.slept, false);
      waiter_.pending = false;
      waiter_.observed = w.observed;
      queue_.schedule(waiter_.submitted_at + w.observed,
                      EventKind::kProcessWake);
    }
    queue_.schedule(queue_.now(), EventKind::kDispatchPull);
  }

  // ---- page access --------------------------------------------------------

  struct AccessOutcome {
    AccessKind kind = AccessKind::kHit;
    SimTime latency = 0;     // synchronous cost already resolved
    bool suspended = false;  // major fault in flight; chain must wait
  };

  // Touches one page. Minor faults resolve inline; a major fault
  // submits the read and suspends the calling chain (waiter_).
  AccessOutcome access_page(std::uint32_t vpn, bool is_write) {
    PageTableEntry& e = pt_.page(vpn);
    AccessOutcome out;
    switch (e.state) {
      case PageState::kResident: {
        pt_.touch(vpn, queue_.now());
        if (is_write) mark_dirty(vpn);
        out.kind = AccessKind::kHit;
        return out;
      }
      case PageState::kInZram: {
        SimTime lat = zram_comp_.decompress(rng_zram_);
        std::int64_t stored = zram_.load(vpn);
        ++report_.zram_pages_in;
        report_.zram_compressed_in_bytes += stored;
        energy_.account(EnergyTarget::kDram, MemOp::kRead, stored * 8);
        sync_cache_charge();
        out.latency = lat + install_page(vpn, is_write);
        out.kind = AccessKind::kMinorFault;
        ++report_.minor_faults;
        report_.record_fault_latency(out.latency);
        cpu_.add_kernel(out.latency);
        return out;
      }
      case PageState::kInZswap: {
        // Swap-cache hit: decompress, drop the entry, free its slot.
        SimTime lat = zswap_comp_.decompress(rng_zswap_);
        zswap_.remove(vpn);
        auto sit = zswap_slot_.find(vpn);
        invariant(sit != zswap_slot_.end(), "zswap entry without slot");
        slots_.release(sit->second);
        zswap_slot_.erase(sit);
        ++report_.zswap_hits;
        sync_cache_charge();
        out.latency = lat + install_page(vpn, is_write);
        out.kind = AccessKind::kMinorFault;
        ++report_.minor_faults;
        report_.record_fault_latency(out.latency);
        cpu_.add_kernel(out.latency);
        return out;
      }
      case PageState::kInSwapDevice: {
        if (cfg_.zswap) ++report_.zswap_misses;
        invariant(e.swap_slot >= 0, "device page without slot");
        invariant(!waiter_.pending, "second waiter");
        waiter_.pending = true;
        waiter_.vpn = vpn;
        waiter_.is_write = is_write;
        waiter_.submitted_at = queue_.now();
        blkio_.submit(queue_.now(), BlockOp::kRead,
                      static_cast<std::int64_t>(e.swap_slot) * kSectorsPerPage,
                      kPageSize, current_issuer_, 0, true);
        cpu_.add_kernel(cfg_.io_issue_cost);
        queue_.schedule(queue_.now(), EventKind::kDispatchPull);
        ++report_.major_faults;
        out.kind = AccessKind::kMajorFault;
        out.suspended = true;
        return out;
      }
      case PageState::kUnallocated:
        throw InvariantViolation("access to unallocated page");
    }
    return out;
  }

  void mark_dirty(std::uint32_t vpn) {
    PageTableEntry& e = pt_.page(vpn);
    if (!e.dirty) {
      e.dirty = true;
      if (e.backed_by_slot) {
        // The swap copy is stale now.
        slots_.release(e.swap_slot);
        e.swap_slot = -1;
        e.backed_by_slot = false;
      }
    }
  }

  // Installs a faulted page as resident. Returns the synchronous cost
  // (copy plus any direct-reclaim stall).
  SimTime install_page(std::uint32_t vpn, bool is_write) {
    SimTime cost = ensure_free_page();
    pt_.make_resident(vpn, queue_.now());
    PageTableEntry& e = pt_.page(vpn);
    if (is_write) {
      e.dirty = true;
      if (e.backed_by_slot) {
        slots_.release(e.swap_slot);
        e.swap_slot = -1;
        e.backed_by_slot = false;
      }
    } else {
      e.dirty = false;
    }
    cost += cfg_.page_copy_cost;
    watermark_check();
    return cost;
  }

  // Completes a major fault after the process wakes: the page moves in
  // from its device slot, which stays valid as the clean swap copy for
  // read faults and is released on writes.
  void waiter_wake() {
    invariant(waiter_.observed >= 0, "wake without observed latency");
    std::uint32_t vpn = waiter_.vpn;
    invariant(pt_.page(vpn).state == PageState::kInSwapDevice,
              "woken page moved");
    SimTime cost = ensure_free_page();
    pt_.make_resident(vpn, queue_.now());
    PageTableEntry& e = pt_.page(vpn);
    e.backed_by_slot = true;  // the slot still holds the page
    e.dirty = false;
    if (waiter_.is_write) mark_dirty(vpn);
    cost += cfg_.page_copy_cost;
    cpu_.add_kernel(cost);
    watermark_check();
    report_.record_fault_latency(waiter_.observed + cost);
    waiter_.observed = -1;
    // Resume the suspended switch chain after the copy completes.
    queue_.schedule(queue_.now() + cost, EventKind::kWorkloadStep,
                    kStepSwitchChunk);
  }

  // ---- workload: tabs -----------------------------------------------------

  static constexpr std::int32_t kKswapdIssuer = 0;

  std::int32_t open_tabs() const {
    std::int32_t n = 0;
    for (const Tab& t : tabs_)
      if (t.state != TabState::kDiscarded) ++n;
    return n;
  }

  void set_active(std::int32_t id) {
    if (active_tab_ == id) return;
    if (active_tab_ >= 0 &&
        tabs_[active_tab_].state == TabState::kActive)
      tabs_[active_tab_].state = TabState::kInactive;
    active_tab_ = id;
    if (id >= 0) {
      tabs_[id].state = TabState::kActive;
      tabs_[id].last_used = queue_.now();
    }
  }

  bool discard_lru_tab() {
    std::int32_t victim = -1;
    SimTime oldest = 0;
    for (const Tab& t : tabs_) {
      if (t.state != TabState::kInactive) continue;
      if (victim < 0 || t.last_used < oldest) {
        victim = t.id;
        oldest = t.last_used;
      }
    }
    if (victim < 0) return false;
    discard_tab(victim);
    return true;
  }

  void discard_tab(std::int32_t id) {
    Tab& tab = tabs_[id];
    invariant(tab.state == TabState::kInactive, "discard of active tab");
    for (std::uint32_t v = tab.base_vpn; v < tab.base_vpn + tab.footprint_pages;
         ++v) {
      PageTableEntry& e = pt_.page(v);
      switch (e.state) {
        case PageState::kResident:
          pt_.remove_resident(v);
          if (e.backed_by_slot) {
            slots_.release(e.swap_slot);
          }
          break;
        case PageState::kInZswap: {
          zswap_.remove(v);
          auto sit = zswap_slot_.find(v);
          invariant(sit != zswap_slot_.end(), "zswap entry without slot");
          slots_.release(sit->second);
          zswap_slot_.erase(sit);
          break;
        }
        case PageState::kInZram:
          zram_.load(v);  // frees the compressed slot, no cost on discard
          break;
        case PageState::kInSwapDevice:
          slots_.release(e.swap_slot);
          break;
        case PageState::kUnallocated:
          break;
      }
      e.state = PageState::kUnallocated;
      e.dirty = false;
      e.backed_by_slot = false;
      e.swap_slot = -1;
    }
    tab.state = TabState::kDiscarded;
    ++report_.tabs_discarded;
    sync_cache_charge();
    if (!first_discard_seen_) {
      first_discard_seen_ = true;
    }
  }

  // ---- workload: the three-phase pressure test ---------------------------

  enum class Phase : std::uint8_t {
    kOpenTabs = 0,
    kColdSwitches = 1,
    kHeavyLoad = 2,
    kDone = 3,
  };

  struct OpenJob {
    bool active = false;
    std::int32_t tab = -1;
    std::uint32_t next_vpn = 0;
    std::uint32_t end_vpn = 0;
  };

  struct SwitchJob {
    bool active = false;
    std::int32_t target = -1;
    std::uint32_t next_vpn = 0;
    std::uint32_t end_vpn = 0;
    SimTime started_at = 0;
    std::int64_t minor = 0;
    std::int64_t major = 0;
    std::int32_t bursts_left = 0;  // phase-1 bursts pending after this switch
    bool resume_pending = false;   // current touch already rolled its write
    bool resume_is_write = false;
  };

  void advance() {
    switch (phase_) {
      case Phase::kOpenTabs: start_next_tab(); break;
      case Phase::kColdSwitches: start_cold_switch(); break;
      case Phase::kHeavyLoad: start_heavy_switch(); break;
      case Phase::kDone: break;
    }
  }

  void enter_phase(Phase p) {
    if (phase_ != Phase::kDone) {
      PhaseReport& pr = report_.phases[static_cast<int>(phase_)];
      pr.tabs_at_end = open_tabs();
    }
    phase_ = p;
    if (p == Phase::kColdSwitches) {
      cold_targets_.clear();
      std::vector<std::int32_t> order;
      for (const Tab& t : tabs_)
        if (t.state == TabState::kInactive) order.push_back(t.id);
      std::sort(order.begin(), order.end(),
                [this](std::int32_t a, std::int32_t b) {
                  if (tabs_[a].last_used != tabs_[b].last_used)
                    return tabs_[a].last_used < tabs_[b].last_used;
                  return a < b;
                });
      std::int64_t want = std::min<std::int64_t>(
          cfg_.workload.phase2_switches, static_cast<std::int64_t>(order.size()));
      cold_targets_.assign(order.begin(), order.begin() + want);
      cold_index_ = 0;
      if (cold_targets_.empty()) {
        enter_phase(Phase::kHeavyLoad);
        return;
      }
    } else if (p == Phase::kHeavyLoad) {
      build_heavy_window();
      heavy_done_ = 0;
      if (heavy_window_.empty() || cfg_.workload.phase3_switches == 0) {
        enter_phase(Phase::kDone);
        return;
      }
    } else if (p == Phase::kDone) {
      done_ = true;
      return;
    }
    queue_.schedule(queue_.now(), EventKind::kWorkloadStep, kStepAdvance);
  }

  // Most recent tabs whose combined per-switch working sets reach the
  // configured window volume, visited in one fixed random order.
  void build_heavy_window() {
    std::vector<std::int32_t> recent;
    for (const Tab& t : tabs_)
      if (t.state != TabState::kDiscarded) recent.push_back(t.id);
    std::sort(recent.begin(), recent.end(),
              [this](std::int32_t a, std::int32_t b) {
                if (tabs_[a].last_used != tabs_[b].last_used)
                  return tabs_[a].last_used > tabs_[b].last_used;
                return a > b;
              });
    heavy_window_.clear();
    std::int64_t bytes = 0;
    for (std::int32_t id : recent) {
      if (bytes >= cfg_.workload.phase3_window_bytes) break;
      heavy_window_.push_back(id);
      bytes += tabs_[id].touched_pages * kPageSize;
    }
    // Fisher-Yates with the workload stream; the order is fixed for the
    // whole phase.
    for (std::size_t i = heavy_window_.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(
          rng_workload_.uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(heavy_window_[i - 1], heavy_window_[j]);
    }
  }

  void start_next_tab() {
    if (static_cast<std::int64_t>(tabs_.size()) >= cfg_.workload.max_tabs ||
        first_discard_seen_) {
      enter_phase(Phase::kColdSwitches);
      return;
    }
    std::int64_t footprint = static_cast<std::int64_t>(
        footprint_sampler_.sample(rng_workload_));
    if (footprint < 256) footprint = 256;
    Tab tab;
    tab.id = static_cast<std::int32_t>(tabs_.size());
    tab.footprint_pages = footprint;
    tab.touched_pages = static_cast<std::int64_t>(
        std::ceil(cfg_.workload.locality_fraction * static_cast<double>(footprint)));
    tab.base_vpn = pt_.add_pages(tab.id, footprint);
    tab.state = TabState::kInactive;
    tabs_.push_back(tab);
    ++report_.tabs_opened;
    set_active(tab.id);
    open_job_.active = true;
    open_job_.tab = tab.id;
    open_job_.next_vpn = tab.base_vpn;
    open_job_.end_vpn = tab.base_vpn + static_cast<std::uint32_t>(footprint);
    queue_.schedule(queue_.now(), EventKind::kWorkloadStep, kStepOpenChunk);
  }

  static constexpr std::int64_t kOpenChunkPages = 1024;
  static constexpr std::int64_t kSwitchChunkPages = 512;

  // First touch of a new tab's pages: allocate, dirty, possibly stall
  // on direct reclaim.
  void open_chunk() {
    invariant(open_job_.active, "open chunk without job");
    SimTime cursor = queue_.now();
    std::int64_t budget = kOpenChunkPages;
    while (open_job_.next_vpn < open_job_.end_vpn && budget > 0) {
      cursor += ensure_free_page();
      std::uint32_t vpn = open_job_.next_vpn++;
      pt_.make_resident(vpn, cursor);
      pt_.page(vpn).dirty = true;
      cursor += cfg_.page_copy_cost;
      --budget;
    }
    cpu_.add_kernel(cursor - queue_.now());
    watermark_check();
    if (open_job_.next_vpn < open_job_.end_vpn) {
      queue_.schedule(cursor, EventKind::kWorkloadStep, kStepOpenChunk);
      return;
    }
    open_job_.active = false;
    finish_tab_open(cursor);
  }

  void finish_tab_open(SimTime cursor) {
    // Discard check happens on every allocation epoch, as the browser
    // would evaluate it when memory gets tight.
    if (should_discard()) {
      if (discard_lru_tab()) {
        queue_.schedule(cursor, EventKind::kWorkloadStep, kStepAdvance);
        return;  // first discard ends phase 1 in start_next_tab
      }
    }
    std::int32_t bursts = cfg_.workload.phase1_burst_switches;
    if (bursts > 0 && current_fill() < 0.95 && open_tabs() > 1) {
      pending_bursts_ = bursts;
      queue_.schedule(cursor, EventKind::kWorkloadStep, kStepBurst);
      return;
    }
    queue_.schedule(cursor + cfg_.workload.tab_open_interval,
                    EventKind::kWorkloadStep, kStepAdvance);
  }

  // Phase-1 interleaved switching: hop to a recently opened tab, then
  // return to opening.
  void start_burst_switch(std::int32_t remaining) {
    std::int32_t window = std::min<std::int32_t>(
        cfg_.workload.phase1_burst_window,
        static_cast<std::int32_t>(tabs_.size()) - 1);
    std::int32_t target = -1;
    for (int tries = 0; tries < 8 && target < 0; ++tries) {
      std::int32_t age =
          static_cast<std::int32_t>(rng_workload_.uniform_int(1, window));
      std::int32_t cand = static_cast<std::int32_t>(tabs_.size()) - 1 - age;
      if (cand >= 0 && tabs_[cand].state != TabState::kDiscarded) target = cand;
    }
    if (target < 0) {
      queue_.schedule(queue_.now() + cfg_.workload.tab_open_interval,
                      EventKind::kWorkloadStep, kStepAdvance);
      return;
    }
    begin_switch(target, remaining - 1);
  }

  void start_cold_switch() {
    if (cold_index_ >= cold_targets_.size()) {
      enter_phase(Phase::kHeavyLoad);
      return;
    }
    std::int32_t target = cold_targets_[cold_index_++];
    if (tabs_[target].state == TabState::kDiscarded) {
      queue_.schedule(queue_.now(), EventKind::kWorkloadStep, kStepAdvance);
      return;
    }
    begin_switch(target, 0);
  }

  void start_heavy_switch() {
    if (heavy_done_ >= cfg_.workload.phase3_switches) {
      enter_phase(Phase::kDone);
      return;
    }
    std::int32_t target = -1;
    while (target < 0 && !heavy_window_.empty()) {
      std::int32_t cand =
          heavy_window_[heavy_done_ % heavy_window_.size()];
      if (tabs_[cand].state == TabState::kDiscarded ||
          cand == active_tab_) {
        ++heavy_done_;
        if (heavy_done_ >= cfg_.workload.phase3_switches) {
          enter_phase(Phase::kDone);
          return;
        }
        continue;
      }
      target = cand;
    }
    if (target < 0) {
      enter_phase(Phase::kDone);
      return;
    }
    ++heavy_done_;
    begin_switch(target, 0);
  }

  void begin_switch(std::int32_t target, std::int32_t bursts_left) {
    Tab& tab = tabs_[target];
    invariant(tab.state != TabState::kDiscarded, "switch to discarded tab");
    switch_job_.active = true;
    switch_job_.target = target;
    switch_job_.started_at = queue_.now();
    switch_job_.next_vpn = tab.base_vpn;
    switch_job_.end_vpn =
        tab.base_vpn + static_cast<std::uint32_t>(tab.touched_pages);
    switch_job_.minor = 0;
    switch_job_.major = 0;
    switch_job_.bursts_left = bursts_left;
    set_active(target);
    current_issuer_ = kFirstTabIssuer + target;
    queue_.schedule(queue_.now(), EventKind::kWorkloadStep, kStepSwitchChunk);
  }

  static constexpr std::int32_t kFirstTabIssuer = 1;

  bool touch_is_write() {
    double f = cfg_.workload.touch_write_fraction;
    if (f >= 1.0) return true;
    if (f <= 0.0) return false;
    return rng_workload_.uniform01() < f;
  }

  void switch_chunk() {
    invariant(switch_job_.active, "switch chunk without job");
    SimTime cursor = queue_.now();
    std::int64_t budget = kSwitchChunkPages;
    while (switch_job_.next_vpn < switch_job_.end_vpn && budget > 0) {
      std::uint32_t vpn = switch_job_.next_vpn;
      bool is_write = switch_job_.resume_pending ? switch_job_.resume_is_write
                                                 : touch_is_write();
      switch_job_.resume_pending = false;
      AccessOutcome out = access_page(vpn, is_write);
      if (out.suspended) {
        ++switch_job_.major;
        switch_job_.resume_pending = true;
        switch_job_.resume_is_write = is_write;
        // Chain resumes from waiter_wake at the observed completion.
        return;
      }
      ++switch_job_.next_vpn;
      --budget;
      if (out.kind == AccessKind::kMinorFault) {
        ++switch_job_.minor;
        cursor += out.latency;
      }
    }
    if (switch_job_.next_vpn < switch_job_.end_vpn) {
      queue_.schedule(cursor, EventKind::kWorkloadStep, kStepSwitchChunk);
      return;
    }
    // Rendering the restored tab closes the switch.
    cursor += cfg_.workload.switch_render_cost;
    cpu_.add_user(cfg_.workload.switch_render_cost);
    finish_switch(cursor);
  }

  void finish_switch(SimTime end) {
    SwitchJob job = switch_job_;
    switch_job_.active = false;
    Tab& tab = tabs_[job.target];
    tab.last_used = end;
    TabSwitchRecord rec;
    rec.switch_id = next_switch_id_++;
    rec.tab = job.target;
    rec.tab_count = open_tabs();
    rec.phase = static_cast<std::int32_t>(phase_);
    rec.latency = end - job.started_at;
    rec.minor_faults = job.minor;
    rec.major_faults = job.major;
    report_.switches.push_back(rec);
    PhaseReport& pr = report_.phases[static_cast<int>(phase_)];
    ++pr.switches;
    pr.minor_faults += job.minor;
    pr.major_faults += job.major;
    pr.latency_sum += rec.latency;
    if (rec.latency > pr.latency_max) pr.latency_max = rec.latency;

    if (phase_ == Phase::kOpenTabs) {
      if (should_discard() && discard_lru_tab()) {
        queue_.schedule(end, EventKind::kWorkloadStep, kStepAdvance);
        return;
      }
      if (job.bursts_left > 0 && current_fill() < 0.95) {
        pending_bursts_ = job.bursts_left;
        queue_.schedule(end, EventKind::kWorkloadStep, kStepBurst);
        return;
      }
      queue_.schedule(end + cfg_.workload.tab_open_interval,
                      EventKind::kWorkloadStep, kStepAdvance);
    } else {
      queue_.schedule(end + cfg_.workload.switch_think_time,
                      EventKind::kWorkloadStep, kStepAdvance);
    }
  }

  // The switch chain parks here while a major fault is in flight.
  struct Waiter {
    bool pending = false;
    std::uint32_t vpn = 0;
    bool is_write = false;
    SimTime submitted_at = 0;
    SimTime observed = -1;
  };

  RunReport finalize() {
    report_.config_name = cfg_.name;
    report_.backend = backend_kind_name(cfg_.backend);
    report_.seed = cfg_.seed;
    report_.elapsed = queue_.now();
    report_.blkio = blkio_.stats();
    report_.wear_bytes = device_.wear_bytes_written();
    report_.lifetime = lifetime_.report(
        cfg_.backend == BackendKind::kZram ? 0 : device_.capacity_bytes(),
        device_.wear_bytes_written(), queue_.now());
    report_.dram_read_cpj = energy_.dram_read_cpj_total;
    report_.dram_write_cpj = energy_.dram_write_cpj_total;
    report_.nvm_read_cpj = energy_.nvm_read_cpj_total;
    report_.nvm_write_cpj = energy_.nvm_write_cpj_total;
    report_.cpu = cpu_.finalize(queue_.now());
    report_.tolerable_latency = cfg_.workload.tolerable_latency;
    report_.bucket_width = cfg_.bucket_width;
    for (int i = 0; i < 3; ++i) report_.phases[i].phase = i;
    return report_;
  }

  // ---- members ------------------------------------------------------------
  ScenarioConfig cfg_;
  EventQueue queue_;
  RandomSource rng_workload_;
  RandomSource rng_zswap_;
  RandomSource rng_zram_;
  RandomSource rng_device_;

  CompressionModel zswap_comp_;
  CompressionModel zram_comp_;
  ZswapPool zswap_;
  ZramDevice zram_;
  DeviceModel device_;
  SlotAllocator slots_;
  BlockLayer blkio_;
  CompletionEstimator estimator_;
  CompletionPolicy policy_;
  CpuModel cpu_;
  PageTable pt_;
  MemoryLedger ledger_;
  EnergyMeter energy_;
  LifetimeModel lifetime_;
  TruncatedNormal footprint_sampler_;

  std::unordered_map<std::uint32_t, std::int32_t> zswap_slot_;

  std::vector<Tab> tabs_;
  std::int32_t active_tab_ = -1;
  std::int32_t current_issuer_ = kFirstTabIssuer;
  bool first_discard_seen_ = false;
  bool kswapd_active_ = false;
  SimTime kswapd_busy_until_ = 0;

  Phase phase_ = Phase::kOpenTabs;
  OpenJob open_job_;
  SwitchJob switch_job_;
  Waiter waiter_;
  std::vector<std::int32_t> cold_targets_;
  std::size_t cold_index_ = 0;
  std::vector<std::int32_t> heavy_window_;
  std::int32_t heavy_done_ = 0;
  std::int32_t pending_bursts_ = 0;
  std::uint64_t next_switch_id_ = 0;
  bool done_ = false;

  RunReport report_;
  std::ostream* trace_out_ = nullptr;
  std::ostream* blkio_out_ = nullptr;
};

}  // namespace swapsim

#endif  // SWAPSIM_SYSTEM_HPP
