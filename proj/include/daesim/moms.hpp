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

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "daesim/memory.hpp"

namespace daesim {

/// Two-parameter bank/row DRAM stand-in. Addresses map row-bank-column:
/// the low bits select the byte within a row, then the bank, then the row.
struct DramConfig {
  std::uint32_t banks = 8;
  std::uint32_t rows_per_bank = 65536;
  std::uint32_t row_bytes = 2048;
  Cycle t_row_hit = 10;
  Cycle t_row_miss = 30;

  void validate() const;
  std::uint32_t bank_of(Addr addr) const noexcept {
    return static_cast<std::uint32_t>((addr / row_bytes) % banks);
  }
  std::uint64_t row_of(Addr addr) const noexcept {
    return (addr / row_bytes / banks) % rows_per_bank;
  }
};

/// Per-bank line-fetch scheduler. Each bank services one fetch at a time,
/// picking pending fetches to the open row first and FIFO otherwise.
class DramModel {
 public:
  explicit DramModel(DramConfig cfg);

  void enqueue(Addr line_addr, Cycle now);
  /// Advances to `now`: retires fetches finishing at `now`, then starts new
  /// ones on idle banks. Returns the line addresses completed at `now`.
  std::vector<Addr> tick(Cycle now);

  bool idle() const noexcept;
  std::size_t pending() const noexcept;
  /// Earliest cycle > now at which tick() can do anything.
  Cycle next_event(Cycle now) const noexcept;
  std::uint64_t row_hits() const noexcept { return row_hits_; }
  std::uint64_t row_misses() const noexcept { return row_misses_; }
  /// Line addresses in the order banks started servicing them.
  const std::vector<Addr>& service_order() const noexcept { return service_order_; }
  const DramConfig& config() const noexcept { return cfg_; }

 private:
  struct Fetch {
    Addr line = 0;
    Cycle enqueued = 0;
  };
  struct Bank {
    std::optional<std::uint64_t> open_row;
    std::optional<Fetch> active;
    Cycle busy_until = 0;
    std::deque<Fetch> queue;
  };

  void start_idle_banks(Cycle now);

  DramConfig cfg_;
  std::vector<Bank> banks_;
  std::uint64_t row_hits_ = 0;
  std::uint64_t row_misses_ = 0;
  std::vector<Addr> service_order_;
};

struct MomsConfig {
  std::uint32_t cache_bytes = 128 * 1024;
  std::uint32_t hash_tables = 3;
  std::uint32_t hash_entries = 512;
  std::uint32_t line_bytes = 64;
  std::uint32_t external_max_outstanding_reads = 64;
  Cycle hit_latency = 4;
  /// Accepted-but-unanswered requests allowed at the port.
  std::uint32_t max_outstanding = 4096;
  DramConfig dram;

  void validate() const;
};

/// Read-only miss-optimized memory subsystem: a direct-mapped line cache in
/// front of MSHR hash tables that coalesce every request to an in-flight line
/// into one external fetch.
class MomsModel final : public MemoryModel {
 public:
  explicit MomsModel(MomsConfig cfg);

  std::string_view kind() const noexcept override { return "moms"; }
  bool can_accept(const MemRequest& req) const override;
  void issue(const MemRequest& req) override;
  void service(Cycle now, ServicePhase phase, MemoryImage& mem, std::vector<MemResponse>& out) override;
  std::size_t outstanding() const noexcept override { return outstanding_; }
  Cycle next_event(Cycle now) const override;
  void counters(std::vector<std::pair<std::string, std::uint64_t>>& out) const override;
  void take_fetch_log(std::vector<FetchLogEntry>& out) override;

  std::uint64_t external_fetches() const noexcept { return external_fetches_; }
  std::uint64_t primary_misses() const noexcept { return primary_misses_; }
  std::uint64_t secondary_misses() const noexcept { return secondary_misses_; }
  std::uint64_t hits() const noexcept { return hits_; }
  std::uint64_t backpressure() const noexcept { return backpressure_; }
  std::uint32_t external_in_flight() const noexcept { return external_in_flight_; }
  std::uint32_t peak_external_in_flight() const noexcept { return peak_external_; }
  std::size_t mshr_occupancy() const noexcept;
  Addr line_of(Addr addr) const noexcept { return addr & ~static_cast<Addr>(cfg_.line_bytes - 1); }
  bool cached(Addr addr) const noexcept;
  const MomsConfig& config() const noexcept { return cfg_; }

 private:
  struct Target {
    MemRequest req;
  };
  struct MshrEntry {
    Addr line = 0;
    Cycle allocated = 0;
    std::vector<Target> targets;
  };
  struct Ready {
    Cycle ready = 0;
    std::uint64_t order = 0;
    MemRequest req;
  };

  std::size_t probe(std::uint32_t table, Addr line) const noexcept;
  MshrEntry* find_mshr(Addr line) noexcept;
  const MshrEntry* find_mshr(Addr line) const noexcept;
  std::optional<std::size_t> free_slot(Addr line) const noexcept;
  void enqueue_ready(const MemRequest& req, Cycle ready);

  MomsConfig cfg_;
  std::vector<std::optional<Addr>> cache_tags_;
  // hash_tables * hash_entries slots; table t occupies [t*entries, (t+1)*entries).
  std::vector<std::optional<MshrEntry>> mshr_;
  std::deque<Addr> fetch_queue_;
  DramModel dram_;
  std::map<std::uint16_t, std::deque<Ready>> ready_by_id_;
  std::uint64_t ready_order_ = 0;
  std::size_t outstanding_ = 0;
  std::uint32_t external_in_flight_ = 0;
  std::uint32_t peak_external_ = 0;
  std::uint64_t external_fetches_ = 0;
  std::uint64_t primary_misses_ = 0;
  std::uint64_t secondary_misses_ = 0;
  std::uint64_t hits_ = 0;
  mutable std::uint64_t backpressure_ = 0;
  Cycle last_now_ = 0;
  std::vector<FetchLogEntry> fetch_log_;
};

}  // namespace daesim
