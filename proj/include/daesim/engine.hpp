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
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "daesim/channels.hpp"
#include "daesim/memory.hpp"

namespace daesim {

class World;
namespace detail {
struct WorldImpl;
}

/// What a stalled process was waiting for.
struct Resource {
  enum class Kind : std::uint8_t { None, Channel, Port, StoreSite };
  Kind kind = Kind::None;
  std::uint32_t index = 0;

  friend bool operator==(const Resource&, const Resource&) = default;
};

struct StagedOp {
  enum class Kind : std::uint8_t { StreamDeq, StreamEnq, Response, Request, Store };
  Kind kind = Kind::StreamDeq;
  std::uint32_t target = 0;  // channel or store-site index
  Payload value;
  Addr addr = 0;
};

/// One cycle's worth of intended transfers for a single process. Reads see
/// start-of-cycle state only; the ops either all commit or none do.
class Tick {
 public:
  Tick(detail::WorldImpl& world, ProcessId pid);

  ProcessId pid() const noexcept { return pid_; }
  Cycle now() const noexcept;

  /// Head of the stream, or nullopt (and the tick stalls) when empty.
  std::optional<Payload> stream_deq(ChannelId ch);
  void stream_enq(ChannelId ch, Payload v);
  /// Oldest response, or nullopt (and the tick stalls) when it has not arrived.
  std::optional<Payload> decouple_response(ChannelId ch);
  void decouple_request(ChannelId ch, Addr addr);
  void store(StoreSiteId site, Addr addr, Word value);

  /// True when every store issued at `site` has been acknowledged; otherwise
  /// the tick stalls on the site.
  bool stores_drained(StoreSiteId site);
  std::uint64_t stores_issued(StoreSiteId site) const;
  std::uint64_t stores_acked(StoreSiteId site) const;

  /// Gives up this cycle without firing.
  void stall(Resource why = {});

  bool viable() const noexcept { return viable_; }
  const Resource& blocked_on() const noexcept { return blocked_; }
  const std::vector<StagedOp>& ops() const noexcept { return ops_; }

 private:
  friend class World;
  friend struct detail::WorldImpl;
  void block(Resource r);
  void reset();
  bool has_op(StagedOp::Kind k, std::uint32_t target) const noexcept;
  void push_op(StagedOp op);

  detail::WorldImpl* world_;
  ProcessId pid_;
  bool viable_ = true;
  Resource blocked_;
  std::vector<StagedOp> ops_;
};

/// A hardware loop or region. `evaluate` must only stage transfers on the
/// Tick and compute the next state; `commit` installs that state.
class Process {
 public:
  explicit Process(std::string name) : name_(std::move(name)) {}
  virtual ~Process() = default;
  Process(const Process&) = delete;
  Process& operator=(const Process&) = delete;

  virtual void evaluate(Tick& t) = 0;
  virtual void commit() = 0;
  virtual bool done() const = 0;

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Loop with a register file: each iteration starts from a copy of the
/// committed registers and the result is installed on commit.
template <typename Regs>
class LoopProcess : public Process {
 public:
  LoopProcess(std::string name, Regs init) : Process(std::move(name)), regs_(std::move(init)), next_(regs_) {}

  void evaluate(Tick& t) final {
    next_ = regs_;
    iterate(t, next_);
  }
  void commit() final { regs_ = next_; }
  bool done() const override { return regs_.done; }
  const Regs& regs() const noexcept { return regs_; }

 protected:
  virtual void iterate(Tick& t, Regs& next) = 0;

  Regs regs_;

 private:
  Regs next_;
};

/// LoopProcess whose body is a callable.
template <typename Regs>
class FnLoop final : public LoopProcess<Regs> {
 public:
  using Body = std::function<void(Tick&, Regs&)>;
  FnLoop(std::string name, Regs init, Body body)
      : LoopProcess<Regs>(std::move(name), std::move(init)), body_(std::move(body)) {}

 protected:
  void iterate(Tick& t, Regs& next) override { body_(t, next); }

 private:
  Body body_;
};

enum class Outcome : std::uint8_t { Completed, Deadlocked, CycleLimit };
std::string_view to_string(Outcome o) noexcept;

struct ChannelStats {
  std::string name;
  bool decoupled = false;
  std::size_t capacity = 0;
  std::string port;             // decoupled only
  std::uint64_t enq = 0;        // stream enqueues or load requests
  std::uint64_t deq = 0;        // stream dequeues or responses consumed
  std::uint64_t delivered = 0;  // responses returned by memory (decoupled)
  std::size_t in_flight = 0;    // stream occupancy or outstanding loads
  std::size_t peak = 0;
  bool pending_demand = false;  // consumer ended blocked on this channel

  friend bool operator==(const ChannelStats&, const ChannelStats&) = default;
};

struct PortStats {
  std::string name;
  std::string model;
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::vector<std::pair<std::string, std::uint64_t>> counters;

  friend bool operator==(const PortStats&, const PortStats&) = default;
};

struct ProcessStats {
  std::string name;
  std::uint64_t fired = 0;
  std::uint64_t stalled = 0;
  bool done = false;
  std::string blocked_on;

  friend bool operator==(const ProcessStats&, const ProcessStats&) = default;
};

struct StoreSiteStats {
  std::string name;
  std::string port;
  std::uint64_t issued = 0;
  std::uint64_t acked = 0;

  friend bool operator==(const StoreSiteStats&, const StoreSiteStats&) = default;
};

struct SimStats {
  Cycle cycles = 0;
  std::vector<ChannelStats> channels;
  std::vector<PortStats> ports;
  std::vector<ProcessStats> processes;
  std::vector<StoreSiteStats> store_sites;

  friend bool operator==(const SimStats&, const SimStats&) = default;
};

struct SimResult {
  Outcome outcome = Outcome::Completed;
  SimStats stats;
};

/// Per-cycle trace: which processes had a viable proposal and which fired.
struct CycleRecord {
  Cycle cycle = 0;
  std::vector<ProcessId> proposed;
  std::vector<ProcessId> fired;
  std::vector<ProcessId> stalled;
};

struct MemLogEntry {
  Cycle cycle = 0;
  std::uint32_t port = 0;
  AxiId id{};
  RespKind kind = RespKind::ReadData;
  Addr addr = 0;
  Cycle latency = 0;
};

/// Round-robin pick: the first contender after `last_winner` in id order,
/// wrapping. `contenders` must be sorted and non-empty.
ProcessId arbitrate(std::span<const ProcessId> contenders, std::optional<ProcessId> last_winner);

/// Owns memory, ports, channels and processes, and advances them cycle by cycle.
class World {
 public:
  explicit World(MemoryImage image, std::uint64_t seed = 0);
  ~World();
  World(World&&) noexcept;
  World& operator=(World&&) noexcept;

  PortId add_port(std::string name, std::unique_ptr<MemoryModel> model, std::vector<RegionId> regions);
  ChannelId add_stream(std::string name, std::size_t capacity);
  ChannelId add_decouple(std::string name, std::size_t capacity, PortId port, unsigned words = 1);
  StoreSiteId add_store_site(std::string name, PortId port);
  ProcessId add_process(std::unique_ptr<Process> p);
  template <typename P, typename... Args>
  std::pair<ProcessId, P*> emplace(Args&&... args) {
    auto owned = std::make_unique<P>(std::forward<Args>(args)...);
    P* raw = owned.get();
    return {add_process(std::move(owned)), raw};
  }
  void connect(ChannelId ch, ProcessId producer, ProcessId consumer);
  void attach(StoreSiteId site, ProcessId owner);

  /// Advances exactly one cycle. Returns whether any process fired or any
  /// memory response arrived.
  bool step();
  SimResult run_until_quiescent(Cycle max_cycles);

  Cycle now() const noexcept;
  std::uint64_t seed() const noexcept { return seed_; }
  SimStats stats() const;

  MemoryImage& memory() noexcept;
  const MemoryImage& memory() const noexcept;
  MemoryModel& model(PortId port);
  const Channel& channel(ChannelId ch) const;
  const StreamChannel& stream(ChannelId ch) const;
  const DecoupleChannel& decouple(ChannelId ch) const;
  const StoreSite& store_site(StoreSiteId site) const;
  std::size_t channel_count() const noexcept;
  std::size_t process_count() const noexcept;
  Process& process(ProcessId pid);
  std::uint64_t store_observable(StoreSiteId site) const;
  std::uint64_t store_observable(PortId port, AxiId id) const;
  std::string describe(const Resource& r) const;

  void set_observer(std::function<void(const CycleRecord&)> fn);
  void enable_memory_log(bool on) noexcept;
  const std::vector<MemLogEntry>& memory_log() const noexcept;
  std::vector<FetchLogEntry> take_fetch_log(PortId port);

 private:
  std::unique_ptr<detail::WorldImpl> impl_;
  std::uint64_t seed_ = 0;
};

}  // namespace daesim
