// Copyright 2026 The daesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "daesim/engine.hpp"
#include "daesim/kernels.hpp"

namespace daesim {

/// Per-region access counts of the sequential reference. A wide request
/// (one hashtable entry) counts as one load.
struct RegionCount {
  std::string region;
  std::uint64_t loads = 0;
  std::uint64_t stores = 0;
  /// Loads of the kernel's irregular or data-dependent array; these are the
  /// accesses the golden model charges one cycle each.
  std::uint64_t dependent_loads = 0;

  friend bool operator==(const RegionCount&, const RegionCount&) = default;
};

struct OracleResult {
  Kernel kernel = Kernel::Spmv;
  MemoryImage image;
  std::vector<RegionCount> regions;  // image region order
  Cycle golden = 0;

  const RegionCount& at(std::string_view region) const;
  std::uint64_t loads() const noexcept;
  std::uint64_t stores() const noexcept;
  std::uint64_t dependent_loads() const noexcept;
};

/// Timing-free sequential execution of `kernel` on `workload`. Throws
/// ConfigError for an invalid workload or a kernel/workload mismatch.
OracleResult oracle_execute(Kernel kernel, const Workload& workload);

/// Zero-latency cycle count: for each sequential phase, the largest number of
/// dependent loads any one region receives, summed over phases. Copy and
/// scale loops are not charged.
Cycle golden_cycles(Kernel kernel, const Workload& workload);

struct BalanceViolation {
  std::string channel;
  std::uint64_t enq = 0;
  std::uint64_t deq = 0;
  std::size_t in_flight = 0;
  bool pending_demand = false;

  std::string message() const;
};

/// First channel, in creation order, whose counts do not balance or whose
/// consumer ended waiting on it.
std::optional<BalanceViolation> check_balance(const SimStats& stats);

struct OverheadReport {
  std::string kernel;
  Cycle sim_cycles = 0;
  Cycle golden_cycles = 0;
  /// 100 * (sim - golden) / golden; empty when golden is zero.
  std::optional<double> overhead_pct;
  /// Set when sim < golden, which means the golden model is wrong.
  bool golden_violated = false;
};

OverheadReport overhead(std::string kernel, Cycle sim, Cycle golden);

/// kernel,region,loads,stores,dependent_loads,golden_cycles
std::string oracle_csv(const OracleResult& r);

}  // namespace daesim
