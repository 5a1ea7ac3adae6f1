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

#ifndef SWAPSIM_SWAPCACHE_HPP
#define SWAPSIM_SWAPCACHE_HPP

#include <cstdint>
#include <list>
#include <unordered_map>

#include "swapsim/compress.hpp"
#include "swapsim/core.hpp"

namespace swapsim {

// Compressed in-DRAM cache in front of the physical swap device.
// Entries are evicted oldest-stored-first when the pool is full. The
// pool tracks exact compressed bytes; the owner charges ceil(bytes /
// page) pages of DRAM against the working set.
class ZswapPool {
 public:
  struct Entry {
    std::int64_t size_bytes = 0;
    SimTime stored_at = 0;
  };

  void set_max_pool_bytes(std::int64_t bytes) {
    if (bytes < 0) throw ConfigError("zswap: max_pool_bytes must be >= 0");
    max_pool_bytes_ = bytes;
  }
  std::int64_t max_pool_bytes() const { return max_pool_bytes_; }
  std::int64_t used_bytes() const { return used_bytes_; }
  std::size_t entry_count() const { return entries_.size(); }

  bool contains(std::uint64_t vpn) const { return entries_.count(vpn) != 0; }

  bool fits(std::int64_t size_bytes) const {
    return used_bytes_ + size_bytes <= max_pool_bytes_;
  }

  void insert(std::uint64_t vpn, std::int64_t size_bytes, SimTime now) {
    invariant(entries_.count(vpn) == 0, "zswap pool: duplicate entry");
    lru_.push_back(vpn);
    auto it = std::prev(lru_.end());
    entries_.emplace(vpn, Node{Entry{size_bytes, now}, it});
    used_bytes_ += size_bytes;
    invariant(used_bytes_ <= max_pool_bytes_, "zswap pool: used <= max");
  }

  // Removes and returns the entry; caller picked it via contains().
  Entry remove(std::uint64_t vpn) {
    auto it = entries_.find(vpn);
    invariant(it != entries_.end(), "zswap pool: missing entry");
    Entry e = it->second.entry;
    lru_.erase(it->second.lru_it);
    entries_.erase(it);
    used_bytes_ -= e.size_bytes;
    return e;
  }

  bool empty() const { return entries_.empty(); }

  // Oldest stored entry (the eviction victim).
  std::uint64_t lru_victim() const {
    invariant(!lru_.empty(), "zswap pool: victim from empty pool");
    return lru_.front();
  }

 private:
  struct Node {
    Entry entry;
    std::list<std::uint64_t>::iterator lru_it;
  };

  std::int64_t max_pool_bytes_ = 0;
  std::int64_t used_bytes_ = 0;
  std::unordered_map<std::uint64_t, Node> entries_;
  std::list<std::uint64_t> lru_;  // front = oldest stored
};

// In-DRAM compressed swap device. Consumes CPU, never block I/O.
// Physical bytes grow with each stored page's sampled compressed size
// up to physical_cap; the slot count advertised to the discard logic is
// derived from the fixed logical capacity (physical_cap x assumed
// ratio), additionally bounded by remaining physical headroom.
class ZramDevice {
 public:
  void configure(std::int64_t physical_cap_bytes,
                 std::int64_t logical_cap_bytes) {
    if (physical_cap_bytes <= 0 || logical_cap_bytes <= 0)
      throw ConfigError("zram: capacities must be > 0");
    physical_cap_ = physical_cap_bytes;
    logical_cap_ = logical_cap_bytes;
  }

  std::int64_t physical_cap() const { return physical_cap_; }
  std::int64_t logical_cap() const { return logical_cap_; }
  std::int64_t used_physical() const { return used_physical_; }
  std::int64_t stored_pages() const {
    return static_cast<std::int64_t>(slots_.size());
  }
  std::int64_t logical_used() const { return stored_pages() * kPageSize; }

  double assumed_ratio() const {
    return static_cast<double>(logical_cap_) /
           static_cast<double>(physical_cap_);
  }

  // Free page slots as seen by the discard logic.
  std::int64_t free_slots() const {
    std::int64_t logical_free = (logical_cap_ - logical_used()) / kPageSize;
    std::int64_t physical_headroom = physical_cap_ - used_physical_;
    std::int64_t physical_free = static_cast<std::int64_t>(
        static_cast<double>(physical_headroom) * assumed_ratio() /
        static_cast<double>(kPageSize));
    std::int64_t f = logical_free < physical_free ? logical_free : physical_free;
    return f > 0 ? f : 0;
  }

  bool contains(std::uint64_t vpn) const { return slots_.count(vpn) != 0; }

  // True when a compressed page of this size can be accepted.
  bool can_store(std::int64_t compressed_bytes) const {
    return used_physical_ + compressed_bytes <= physical_cap_ &&
           logical_used() + kPageSize <= logical_cap_;
  }

  void store(std::uint64_t vpn, std::int64_t compressed_bytes) {
    invariant(slots_.count(vpn) == 0, "zram: duplicate slot");
    invariant(can_store(compressed_bytes), "zram: store past capacity");
    slots_.emplace(vpn, compressed_bytes);
    used_physical_ += compressed_bytes;
  }

  // Frees the slot and returns the compressed size that was held.
  std::int64_t load(std::uint64_t vpn) {
    auto it = slots_.find(vpn);
    invariant(it != slots_.end(), "zram: missing slot");
    std::int64_t size = it->second;
    used_physical_ -= size;
    slots_.erase(it);
    return size;
  }

 private:
  std::int64_t physical_cap_ = 4LL << 30;
  std::int64_t logical_cap_ = 12LL << 30;
  std::int64_t used_physical_ = 0;
  std::unordered_map<std::uint64_t, std::int64_t> slots_;
};

}  // namespace swapsim

#endif  // SWAPSIM_SWAPCACHE_HPP
