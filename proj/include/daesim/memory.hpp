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
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "daesim/types.hpp"

namespace daesim {

/// One contiguous array bound to a pointer argument of a kernel.
struct Region {
  std::string name;
  Addr base = 0;
  std::vector<Word> words;

  Addr size_bytes() const noexcept { return static_cast<Addr>(words.size()) * kWordBytes; }
  bool contains(Addr addr, unsigned word_count = 1) const noexcept {
    return addr >= base && addr % kWordBytes == 0 &&
           addr + word_count * kWordBytes <= base + size_bytes();
  }
  Addr address_of(std::uint64_t word_index) const noexcept { return base + word_index * kWordBytes; }
};

/// Flat byte-addressed backing store made of named, page-aligned regions.
class MemoryImage {
 public:
  RegionId add_region(std::string name, std::vector<Word> words);
  RegionId add_region(std::string name, std::size_t word_count) {
    return add_region(std::move(name), std::vector<Word>(word_count, 0));
  }

  std::size_t region_count() const noexcept { return regions_.size(); }
  const Region& region(RegionId id) const { return regions_.at(to_index(id)); }
  Region& region(RegionId id) { return regions_.at(to_index(id)); }
  std::optional<RegionId> find(std::string_view name) const;
  const Region& region(std::string_view name) const;
  Region& region(std::string_view name);
  const std::vector<Region>& regions() const noexcept { return regions_; }

  /// Region containing `addr`, or nullptr.
  const Region* region_at(Addr addr) const noexcept;

  Word read(Addr addr) const;
  void write(Addr addr, Word value);
  Payload read_payload(Addr addr, unsigned word_count) const;

  /// Describes the first differing word, or nullopt when both images hold
  /// the same regions with identical contents.
  std::optional<std::string> first_difference(const MemoryImage& other) const;

  friend bool operator==(const MemoryImage& a, const MemoryImage& b) {
    return !a.first_difference(b).has_value();
  }

 private:
  Region& checked(Addr addr);
  const Region& checked(Addr addr) const;

  std::vector<Region> regions_;
  Addr next_base_ = 0x10000;
};

enum class MemKind : std::uint8_t { Read, Write };
enum class RespKind : std::uint8_t { ReadData, WriteAck };

/// A read or write transaction. `route`/`seq` let the engine deliver the
/// response to the issuing channel or store site.
struct MemRequest {
  AxiId id{};
  MemKind kind = MemKind::Read;
  Addr addr = 0;
  std::uint8_t words = 1;
  Word data = 0;
  Cycle issue_cycle = 0;
  std::uint32_t route = 0;
  std::uint64_t seq = 0;
};

struct MemResponse {
  AxiId id{};
  RespKind kind = RespKind::ReadData;
  Payload data;
  Addr addr = 0;
  Cycle issue_cycle = 0;
  Cycle ready_cycle = 0;
  std::uint32_t route = 0;
  std::uint64_t seq = 0;
};

/// Writes are serviced before reads within a cycle.
enum class ServicePhase : std::uint8_t { Writes, Reads };

struct FetchLogEntry {
  Cycle cycle = 0;
  Addr line_addr = 0;
  Cycle latency = 0;
};

/// Timing model behind one AXI-like port. The engine calls `can_accept`
/// against start-of-cycle state, `issue` during commit, and `service` once
/// per phase for every simulated cycle; responses appended by `service(now)`
/// become visible to consumers at cycle `now`.
class MemoryModel {
 public:
  virtual ~MemoryModel() = default;

  virtual std::string_view kind() const noexcept = 0;
  virtual bool can_accept(const MemRequest& req) const = 0;
  virtual void issue(const MemRequest& req) = 0;
  virtual void service(Cycle now, ServicePhase phase, MemoryImage& mem,
                       std::vector<MemResponse>& out) = 0;
  /// Accepted requests whose response has not been produced yet.
  virtual std::size_t outstanding() const noexcept = 0;
  /// Earliest cycle > now at which `service` may produce output or change
  /// internal state. Only consulted while `outstanding() > 0`.
  virtual Cycle next_event(Cycle now) const { return now + 1; }
  /// Model-specific counters, appended as (name, value).
  virtual void counters(std::vector<std::pair<std::string, std::uint64_t>>& /*out*/) const {}
  /// Drains internal fetch records (miss-optimized model only).
  virtual void take_fetch_log(std::vector<FetchLogEntry>& /*out*/) {}
};

struct FixedLatencyConfig {
  Cycle read_latency = 100;
  Cycle write_latency = 100;
  std::uint32_t max_outstanding = 256;

  void validate() const;
};

/// Every accepted request completes exactly `latency` cycles after issue.
/// Reads observe memory at service time; writes commit at service time.
class FixedLatencyModel final : public MemoryModel {
 public:
  explicit FixedLatencyModel(FixedLatencyConfig cfg);

  std::string_view kind() const noexcept override { return "fixed"; }
  bool can_accept(const MemRequest& req) const override;
  void issue(const MemRequest& req) override;
  void service(Cycle now, ServicePhase phase, MemoryImage& mem, std::vector<MemResponse>& out) override;
  std::size_t outstanding() const noexcept override { return reads_.size() + writes_.size(); }
  Cycle next_event(Cycle now) const override;

  const FixedLatencyConfig& config() const noexcept { return cfg_; }

 private:
  FixedLatencyConfig cfg_;
  std::deque<MemRequest> reads_;
  std::deque<MemRequest> writes_;
};

/// Random per-request latency in [min_latency, max_latency], seeded. Reads may
/// complete out of issue order; writes of one AXI ID keep issue order.
class JitterLatencyModel final : public MemoryModel {
 public:
  JitterLatencyModel(Cycle min_latency, Cycle max_latency, std::uint32_t max_outstanding,
                     std::uint64_t seed);

  std::string_view kind() const noexcept override { return "jitter"; }
  bool can_accept(const MemRequest& req) const override;
  void issue(const MemRequest& req) override;
  void service(Cycle now, ServicePhase phase, MemoryImage& mem, std::vector<MemResponse>& out) override;
  std::size_t outstanding() const noexcept override { return pending_.size(); }
  Cycle next_event(Cycle now) const override;

 private:
  struct Pending {
    Cycle service = 0;
    std::uint64_t order = 0;
    MemRequest req;
    bool operator>(const Pending& o) const noexcept {
      return service != o.service ? service > o.service : order > o.order;
    }
  };

  Cycle min_latency_;
  Cycle max_latency_;
  std::uint32_t max_outstanding_;
  std::mt19937_64 rng_;
  std::uint64_t order_ = 0;
  std::vector<std::pair<AxiId, Cycle>> last_write_;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> pending_;
};

}  // namespace daesim
