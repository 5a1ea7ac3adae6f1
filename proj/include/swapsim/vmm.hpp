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

#ifndef SWAPSIM_VMM_HPP
#define SWAPSIM_VMM_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "swapsim/core.hpp"

namespace swapsim {

enum class PageState : std::uint8_t {
  kUnallocated = 0,
  kResident = 1,
  kInZswap = 2,
  kInZram = 3,
  kInSwapDevice = 4,
};

struct PageTableEntry {
  PageState state = PageState::kUnallocated;
  bool dirty = false;
  // The page's content also exists at swap_slot, so a clean copy can be
  // reclaimed without I/O (swap-cache semantics).
  bool backed_by_slot = false;
  std::int32_t owner = -1;
  std::int32_t swap_slot = -1;  // device slot; only while state == kInSwapDevice
  SimTime last_access = 0;
  std::uint64_t lru_seq = 0;
  std::uint32_t lru_prev = kNil;
  std::uint32_t lru_next = kNil;

  static constexpr std::uint32_t kNil = 0xffffffffu;
};

enum class AccessKind : std::uint8_t {
  kHit = 0,
  kMinorFault = 1,  // serviced from a compressed in-DRAM store
  kMajorFault = 2,  // serviced from the swap device
};

// Page residency tracking plus the global recency list used by reclaim.
// The list orders resident pages by last access, most recent at the
// head; reclaim scans from the tail.
class PageTable {
 public:
  static constexpr std::uint32_t kNil = PageTableEntry::kNil;

  void reserve(std::size_t pages) { pages_.reserve(pages); }

  std::uint32_t add_pages(std::int32_t owner, std::int64_t count) {
    std::uint32_t base = static_cast<std::uint32_t>(pages_.size());
    PageTableEntry e;
    e.owner = owner;
    pages_.resize(pages_.size() + static_cast<std::size_t>(count), e);
    return base;
  }

  PageTableEntry& page(std::uint32_t vpn) { return pages_[vpn]; }
  const PageTableEntry& page(std::uint32_t vpn) const { return pages_[vpn]; }
  std::size_t size() const { return pages_.size(); }

  std::int64_t resident_pages() const { return resident_; }

  void make_resident(std::uint32_t vpn, SimTime now) {
    PageTableEntry& e = pages_[vpn];
    invariant(e.state != PageState::kResident, "double residency");
    e.state = PageState::kResident;
    e.last_access = now;
    e.lru_seq = ++lru_counter_;
    link_head(vpn);
    ++resident_;
  }

  void touch(std::uint32_t vpn, SimTime now) {
    PageTableEntry& e = pages_[vpn];
    invariant(e.state == PageState::kResident, "touch of non-resident page");
    e.last_access = now;
    e.lru_seq = ++lru_counter_;
    unlink(vpn);
    link_head(vpn);
  }

  // Removes the page from the resident set; the caller assigns the
  // destination state right after.
  void remove_resident(std::uint32_t vpn) {
    PageTableEntry& e = pages_[vpn];
    invariant(e.state == PageState::kResident, "evict of non-resident page");
    unlink(vpn);
    e.state = PageState::kUnallocated;
    --resident_;
  }

  std::uint32_t lru_tail() const { return tail_; }
  std::uint32_t lru_prev_of(std::uint32_t vpn) const {
    return pages_[vpn].lru_prev;
  }

  // Up to n resident pages in ascending last-access order, skipping
  // pages whose owner the predicate marks active. Active-tab pages are
  // eligible only when nothing else is resident.
  template <class ActivePred>
  std::vector<std::uint32_t> lru_select(std::int64_t n,
                                        ActivePred is_active_owner) const {
    std::vector<std::uint32_t> out;
    if (n <= 0) return out;
    for (std::uint32_t v = tail_; v != kNil; v = pages_[v].lru_prev) {
      if (is_active_owner(pages_[v].owner)) continue;
      out.push_back(v);
      if (static_cast<std::int64_t>(out.size()) >= n) return out;
    }
    if (out.empty()) {
      for (std::uint32_t v = tail_; v != kNil; v = pages_[v].lru_prev) {
        out.push_back(v);
        if (static_cast<std::int64_t>(out.size()) >= n) break;
      }
    }
    return out;
  }

 private:
  void link_head(std::uint32_t vpn) {
    PageTableEntry& e = pages_[vpn];
    e.lru_prev = kNil;
    e.lru_next = head_;
    if (head_ != kNil) pages_[head_].lru_prev = vpn;
    head_ = vpn;
    if (tail_ == kNil) tail_ = vpn;
  }

  void unlink(std::uint32_t vpn) {
    PageTableEntry& e = pages_[vpn];
    if (e.lru_prev != kNil)
      pages_[e.lru_prev].lru_next = e.lru_next;
    else
      head_ = e.lru_next;
    if (e.lru_next != kNil)
      pages_[e.lru_next].lru_prev = e.lru_prev;
    else
      tail_ = e.lru_prev;
    e.lru_prev = kNil;
    e.lru_next = kNil;
  }

  std::vector<PageTableEntry> pages_;
  std::uint32_t head_ = kNil;
  std::uint32_t tail_ = kNil;
  std::int64_t resident_ = 0;
  std::uint64_t lru_counter_ = 0;
};

// DRAM occupancy: working pages plus the page-granular charge of the
// compressed stores. Watermarks are fractions of the working capacity.
class MemoryLedger {
 public:
  void configure(std::int64_t dram_total_pages, double low_frac,
                 double high_frac) {
    if (dram_total_pages <= 0) throw ConfigError("ledger: dram must be > 0");
    if (!(low_frac > 0.0) || !(high_frac > low_frac) || high_frac >= 1.0)
      throw ConfigError("ledger: need 0 < low < high < 1");
    dram_total_pages_ = dram_total_pages;
    low_frac_ = low_frac;
    high_frac_ = high_frac;
  }

  void set_cache_bytes(std::int64_t zswap_bytes, std::int64_t zram_bytes) {
    cache_pages_ = (zswap_bytes + kPageSize - 1) / kPageSize +
                   (zram_bytes + kPageSize - 1) / kPageSize;
  }

  std::int64_t dram_total_pages() const { return dram_total_pages_; }
  std::int64_t cache_pages() const { return cache_pages_; }

  std::int64_t working_capacity() const {
    return dram_total_pages_ - cache_pages_;
  }

  std::int64_t free_pages(std::int64_t resident) const {
    return working_capacity() - resident;
  }

  std::int64_t low_watermark() const {
    return static_cast<std::int64_t>(low_frac_ *
                                     static_cast<double>(working_capacity()));
  }
  std::int64_t high_watermark() const {
    return static_cast<std::int64_t>(high_frac_ *
                                     static_cast<double>(working_capacity()));
  }

  void check(std::int64_t resident) const {
    invariant(resident + cache_pages_ <= dram_total_pages_,
              "DRAM overcommit");
    invariant(resident >= 0, "negative residency");
  }

 private:
  std::int64_t dram_total_pages_ = 1;
  std::int64_t cache_pages_ = 0;
  double low_frac_ = 0.02;
  double high_frac_ = 0.05;
};

// Swap slot allocator for the block device address space. Slots are
// handed out at the lowest free index via a bump pointer plus an
// ordered free list, keeping freshly written slots mostly sequential so
// reclaim writebacks can merge.
class SlotAllocator {
 public:
  void configure(std::int64_t total_slots) {
    if (total_slots < 0) throw ConfigError("slots: negative capacity");
    total_ = total_slots;
    bump_ = 0;
    used_ = 0;
    free_.clear();
  }

  std::int64_t total() const { return total_; }
  std::int64_t used() const { return used_; }
  std::int64_t free_count() const { return total_ - used_; }

  // -1 when the swap space is full.
  std::int32_t allocate() {
    std::int32_t slot;
    if (!free_.empty()) {
      std::pop_heap(free_.begin(), free_.end(), std::greater<std::int32_t>{});
      slot = free_.back();
      free_.pop_back();
    } else if (bump_ < total_) {
      slot = static_cast<std::int32_t>(bump_++);
    } else {
      return -1;
    }
    ++used_;
    return slot;
  }

  void release(std::int32_t slot) {
    invariant(slot >= 0 && slot < total_, "slot out of range");
    invariant(used_ > 0, "slot double free");
    --used_;
    free_.push_back(slot);
    std::push_heap(free_.begin(), free_.end(), std::greater<std::int32_t>{});
  }

 private:
  std::int64_t total_ = 0;
  std::int64_t bump_ = 0;
  std::int64_t used_ = 0;
  std::vector<std::int32_t> free_;  // min-heap: lowest free slot first
};

}  // namespace swapsim

#endif  // SWAPSIM_VMM_HPP
