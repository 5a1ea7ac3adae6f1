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

#ifndef SWAPSIM_ENERGY_HPP
#define SWAPSIM_ENERGY_HPP

#include <cstdint>
#include <limits>

#include "swapsim/core.hpp"

namespace swapsim {

enum class EnergyTarget : std::uint8_t { kDram = 0, kNvm = 1 };
enum class MemOp : std::uint8_t { kRead = 0, kWrite = 1 };

// Per-bit energy accounting. All constants are expressed in hundredths
// of a picojoule (cpJ) so every accumulation is an exact integer:
//   DRAM read 4.4 pJ/bit, DRAM write 5.5 pJ/bit,
//   NVM read 2.47 pJ/bit, NVM write set 14.03 / reset 19.73 pJ/bit.
// NVM writes charge the set/reset mix (default 50/50 -> 16.88 pJ/bit).
struct EnergyMeter {
  static constexpr std::int64_t kDramReadCpj = 440;
  static constexpr std::int64_t kDramWriteCpj = 550;
  static constexpr std::int64_t kNvmReadCpj = 247;
  static constexpr std::int64_t kNvmWriteSetCpj = 1403;
  static constexpr std::int64_t kNvmWriteResetCpj = 1973;

  // set_fraction is fixed at construction; 0.5 gives the 1688 cpJ mix.
  std::int64_t nvm_write_cpj = (kNvmWriteSetCpj + kNvmWriteResetCpj) / 2;

  std::int64_t dram_read_cpj_total = 0;
  std::int64_t dram_write_cpj_total = 0;
  std::int64_t nvm_read_cpj_total = 0;
  std::int64_t nvm_write_cpj_total = 0;

  static std::int64_t rate_cpj(EnergyTarget target, MemOp op,
                               std::int64_t nvm_write_mix_cpj) {
    if (target == EnergyTarget::kDram)
      return op == MemOp::kRead ? kDramReadCpj : kDramWriteCpj;
    return op == MemOp::kRead ? kNvmReadCpj : nvm_write_mix_cpj;
  }

  // Returns picojoules added (exact rational scaled by 100 internally).
  double account(EnergyTarget target, MemOp op, std::int64_t bits) {
    if (bits < 0) throw ConfigError("account_energy: negative bit count");
    std::int64_t cpj = bits * rate_cpj(target, op, nvm_write_cpj);
    if (target == EnergyTarget::kDram) {
      (op == MemOp::kRead ? dram_read_cpj_total : dram_write_cpj_total) += cpj;
    } else {
      (op == MemOp::kRead ? nvm_read_cpj_total : nvm_write_cpj_total) += cpj;
    }
    return static_cast<double>(cpj) / 100.0;
  }

  std::int64_t total_cpj() const {
    return dram_read_cpj_total + dram_write_cpj_total + nvm_read_cpj_total +
           nvm_write_cpj_total;
  }

  double total_pj() const { return static_cast<double>(total_cpj()) / 100.0; }
};

// Endurance-limited lifetime, in seconds:
//   efficiency * capacity_bytes * cell_endurance / write_rate.
// A zero write rate is reported as unbounded (infinity).
inline double estimate_lifetime_seconds(double capacity_bytes,
                                        double cell_endurance_writes,
                                        double mean_write_rate_bytes_per_sec,
                                        double wear_leveling_efficiency) {
  if (capacity_bytes < 0 || cell_endurance_writes < 0)
    throw ConfigError("estimate_lifetime: negative capacity or endurance");
  if (wear_leveling_efficiency <= 0.0 || wear_leveling_efficiency > 1.0)
    throw ConfigError("estimate_lifetime: efficiency must be in (0, 1]");
  if (mean_write_rate_bytes_per_sec < 0)
    throw ConfigError("estimate_lifetime: negative write rate");
  if (mean_write_rate_bytes_per_sec == 0.0)
    return std::numeric_limits<double>::infinity();
  return wear_leveling_efficiency * capacity_bytes * cell_endurance_writes /
         mean_write_rate_bytes_per_sec;
}

}  // namespace swapsim

#endif  // SWAPSIM_ENERGY_HPP
