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


#include <algorithm>
#include <sstream>

#include "daesim/engine.hpp"

namespace daesim {

namespace {

std::string hex(Addr a) {
  std::ostringstream os;
  os << "0x" << std::hex << a;
  return os.str();
}

}  // namespace

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::Completed: return "completed";
    case Outcome::Deadlocked: return "deadlock";
    case Outcome::CycleLimit: return "cycle-limit";
  }
  return "?";
}

ProcessId arbitrate(std::span<const ProcessId> contenders, std::optional<ProcessId> last_winner) {
  if (contenders.empty()) throw SimFault("arbitrate called with no contenders");
  if (!last_winner) return contenders.front();
  for (ProcessId p : contenders)
    if (to_index(p) > to_index(*last_winner)) return p;
  return contenders.front();
}

namespace detail {

struct WorldImpl {
  MemoryImage mem;
  Cycle now = 0;

  struct Port {
    std::string name;
    std::unique_ptr<MemoryModel> model;
    std::vector<RegionId> regions;
    std::optional<ProcessId> last_winner;
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
  };
  struct Slot {
    std::unique_ptr<Process> proc;
    std::uint64_t fired = 0;
    std::uint64_t stalled = 0;
    Resource blocked;
  };

  std::vector<Port> ports;
  std::vector<Channel> channels;
  std::vector<StoreSite> sites;
  std::vector<Slot> procs;
  std::uint16_t next_axi = 0;
  bool validated = false;

  std::function<void(const CycleRecord&)> observer;
  bool log_on = false;
  std::vector<MemLogEntry> log;

  std::vector<Tick> ticks;
  std::vector<char> alive;
  std::vector<MemResponse> responses;
  std::vector<ProcessId> contenders;

  Port& port(PortId p) {
    if (to_index(p) >= ports.size()) throw SimFault("unknown port");
    return ports[to_index(p)];
  }
  Channel& channel(std::uint32_t i) {
    if (i >= channels.size()) throw SimFault("unknown channel");
    return channels[i];
  }
  StreamChannel& stream(std::uint32_t i) {
    auto* s = std::get_if<StreamChannel>(&channel(i));
    if (!s) throw SimFault("channel '" + std::get<DecoupleChannel>(channels[i]).name + "' is not a stream");
    return *s;
  }
  DecoupleChannel& decouple(std::uint32_t i) {
    auto* d = std::get_if<DecoupleChannel>(&channel(i));
    if (!d) throw SimFault("channel '" + std::get<StreamChannel>(channels[i]).name + "' is not a load channel");
    return *d;
  }
  StoreSite& site(std::uint32_t i) {
    if (i >= sites.size()) throw SimFault("unknown store site");
    return sites[i];
  }
  AxiId fresh_axi() {
    if (next_axi == 0xFFFF) throw ConfigError("out of AXI ids");
    return AxiId{next_axi++};
  }

  std::optional<std::uint32_t> port_of(const StagedOp& op) {
    if (op.kind == StagedOp::Kind::Request) return static_cast<std::uint32_t>(to_index(decouple(op.target).port));
    if (op.kind == StagedOp::Kind::Store) return static_cast<std::uint32_t>(to_index(site(op.target).port));
    return std::nullopt;
  }

  void check_address(const MemoryImage& mem, const Port& p, Addr addr, unsigned words) const {
    const Region* r = mem.region_at(addr);
    bool ok = r && r->contains(addr, words);
    if (ok) {
      auto rid = mem.find(r->name);
      ok = rid && std::find(p.regions.begin(), p.regions.end(), *rid) != p.regions.end();
    }
    if (!ok) throw SimFault("address " + hex(addr) + " outside the regions of port '" + p.name + "'");
  }
};

}  // namespace detail

// ---------------------------------------------------------------- Tick

Tick::Tick(detail::WorldImpl& world, ProcessId pid) : world_(&world), pid_(pid) {}

Cycle Tick::now() const noexcept { return world_->now; }

void Tick::reset() {
  viable_ = true;
  blocked_ = {};
  ops_.clear();
}

void Tick::block(Resource r) {
  if (viable_) blocked_ = r;
  viable_ = false;
}

void Tick::stall(Resource why) { block(why); }

bool Tick::has_op(StagedOp::Kind k, std::uint32_t target) const noexcept {
  return std::any_of(ops_.begin(), ops_.end(), [&](const StagedOp& o) { return o.kind == k && o.target == target; });
}

void Tick::push_op(StagedOp op) {
  if (has_op(op.kind, op.target)) throw SimFault("process staged the same transfer twice in one cycle");
  ops_.push_back(op);
}

std::optional<Payload> Tick::stream_deq(ChannelId ch) {
  const auto i = static_cast<std::uint32_t>(to_index(ch));
  StreamChannel& s = world_->stream(i);
  if (s.consumer != pid_) throw SimFault("process is not the consumer of stream '" + s.name + "'");
  if (s.fifo.empty()) {
    block({Resource::Kind::Channel, i});
    return std::nullopt;
  }
  push_op({StagedOp::Kind::StreamDeq, i, {}, 0});
  return s.fifo.front();
}

void Tick::stream_enq(ChannelId ch, Payload v) {
  const auto i = static_cast<std::uint32_t>(to_index(ch));
  StreamChannel& s = world_->stream(i);
  if (s.producer != pid_) throw SimFault("process is not the producer of stream '" + s.name + "'");
  push_op({StagedOp::Kind::StreamEnq, i, v, 0});
}

std::optional<Payload> Tick::decouple_response(ChannelId ch) {
  const auto i = static_cast<std::uint32_t>(to_index(ch));
  DecoupleChannel& d = world_->decouple(i);
  if (d.consumer != pid_) throw SimFault("process is not the consumer of load channel '" + d.name + "'");
  if (!d.head_ready()) {
    block({Resource::Kind::Channel, i});
    return std::nullopt;
  }
  push_op({StagedOp::Kind::Response, i, {}, 0});
  return *d.reorder.front();
}

void Tick::decouple_request(ChannelId ch, Addr addr) {
  auto& impl = *world_;
  const auto i = static_cast<std::uint32_t>(to_index(ch));
  DecoupleChannel& d = impl.decouple(i);
  if (d.producer != pid_) throw SimFault("process is not the requester of load channel '" + d.name + "'");
  auto& port = impl.port(d.port);
  impl.check_address(world_->mem, port, addr, d.words);
  for (const StagedOp& o : ops_)
    if (impl.port_of(o) == to_index(d.port)) throw SimFault("two memory operations on port '" + port.name + "' in one iteration");
  push_op({StagedOp::Kind::Request, i, {}, addr});
  if (d.in_flight() >= d.capacity) {
    block({Resource::Kind::Channel, i});
    return;
  }
  MemRequest probe{d.axi, MemKind::Read, addr, d.words, 0, world_->now, i, d.next_seq};
  if (!port.model->can_accept(probe)) block({Resource::Kind::Port, static_cast<std::uint32_t>(to_index(d.port))});
}

void Tick::store(StoreSiteId site, Addr addr, Word value) {
  auto& impl = *world_;
  const auto i = static_cast<std::uint32_t>(to_index(site));
  StoreSite& s = impl.site(i);
  if (s.owner != pid_) throw SimFault("process does not own store site '" + s.name + "'");
  auto& port = impl.port(s.port);
  impl.check_address(world_->mem, port, addr, 1);
  for (const StagedOp& o : ops_)
    if (impl.port_of(o) == to_index(s.port)) throw SimFault("two memory operations on port '" + port.name + "' in one iteration");
  push_op({StagedOp::Kind::Store, i, value, addr});
  MemRequest probe{s.axi, MemKind::Write, addr, 1, value, world_->now, i, s.issued};
  if (!port.model->can_accept(probe)) block({Resource::Kind::Port, static_cast<std::uint32_t>(to_index(s.port))});
}

bool Tick::stores_drained(StoreSiteId site) {
  const StoreSite& s = world_->site(static_cast<std::uint32_t>(to_index(site)));
  if (s.acked == s.issued) return true;
  block({Resource::Kind::StoreSite, static_cast<std::uint32_t>(to_index(site))});
  return false;
}

std::uint64_t Tick::stores_issued(StoreSiteId site) const {
  return world_->site(static_cast<std::uint32_t>(to_index(site))).issued;
}

std::uint64_t Tick::stores_acked(StoreSiteId site) const {
  return world_->site(static_cast<std::uint32_t>(to_index(site))).acked;
}

// ---------------------------------------------------------------- World

World::World(MemoryImage image, std::uint64_t seed)
    : impl_(std::make_unique<detail::WorldImpl>()), seed_(seed) {
  impl_->mem = std::move(image);
}
World::~World() = default;
World::World(World&&) noexcept = default;
World& World::operator=(World&&) noexcept = default;

PortId World::add_port(std::string name, std::unique_ptr<MemoryModel> model, std::vector<RegionId> regions) {
  if (!model) throw ConfigError("port '" + name + "' has no memory model");
  for (RegionId r : regions) {
    if (to_index(r) >= impl_->mem.region_count()) throw ConfigError("port '" + name + "' names an unknown region");
    for (const auto& p : impl_->ports)
      if (std::find(p.regions.begin(), p.regions.end(), r) != p.regions.end())
        throw ConfigError("region '" + impl_->mem.region(r).name + "' is covered by ports '" + p.name + "' and '" + name + "'");
  }
  impl_->ports.push_back({std::move(name), std::move(model), std::move(regions), std::nullopt, 0, 0});
  return from_index<PortId>(impl_->ports.size() - 1);
}

ChannelId World::add_stream(std::string name, std::size_t capacity) {
  if (capacity < 1) throw ConfigError("stream '" + name + "' needs capacity >= 1");
  StreamChannel s;
  s.name = std::move(name);
  s.capacity = capacity;
  impl_->channels.emplace_back(std::move(s));
  return from_index<ChannelId>(impl_->channels.size() - 1);
}

ChannelId World::add_decouple(std::string name, std::size_t capacity, PortId port, unsigned words) {
  if (capacity < 1) throw ConfigError("load channel '" + name + "' needs capacity >= 1");
  if (words < 1 || words > kMaxPayloadWords) throw ConfigError("load channel '" + name + "' width must be 1..4 words");
  impl_->port(port);
  DecoupleChannel d;
  d.name = std::move(name);
  d.capacity = capacity;
  d.port = port;
  d.axi = impl_->fresh_axi();
  d.words = static_cast<std::uint8_t>(words);
  impl_->channels.emplace_back(std::move(d));
  return from_index<ChannelId>(impl_->channels.size() - 1);
}

StoreSiteId World::add_store_site(std::string name, PortId port) {
  impl_->port(port);
  StoreSite s;
  s.name = std::move(name);
  s.port = port;
  s.axi = impl_->fresh_axi();
  impl_->sites.push_back(std::move(s));
  return from_index<StoreSiteId>(impl_->sites.size() - 1);
}

ProcessId World::add_process(std::unique_ptr<Process> p) {
  if (!p) throw ConfigError("null process");
  impl_->procs.push_back({std::move(p), 0, 0, {}});
  auto pid = from_index<ProcessId>(impl_->procs.size() - 1);
  impl_->ticks.emplace_back(*impl_, pid);
  return pid;
}

void World::connect(ChannelId ch, ProcessId producer, ProcessId consumer) {
  if (to_index(producer) >= impl_->procs.size() || to_index(consumer) >= impl_->procs.size())
    throw SimFault("connect names an unknown process");
  std::visit(
      [&](auto& c) {
        if (c.producer != kNoProcess || c.consumer != kNoProcess)
          throw SimFault("channel '" + c.name + "' is already connected");
        c.producer = producer;
        c.consumer = consumer;
      },
      impl_->channel(static_cast<std::uint32_t>(to_index(ch))));
}

void World::attach(StoreSiteId site, ProcessId owner) {
  if (to_index(owner) >= impl_->procs.size()) throw SimFault("attach names an unknown process");
  StoreSite& s = impl_->site(static_cast<std::uint32_t>(to_index(site)));
  if (s.owner != kNoProcess) throw SimFault("store site '" + s.name + "' already has an owner");
  s.owner = owner;
}

bool World::step() {
  detail::WorldImpl& I = *impl_;
  if (!I.validated) {
    for (const auto& ch : I.channels)
      std::visit(
          [](const auto& c) {
            if (c.producer == kNoProcess) throw SimFault("channel '" + c.name + "' is not connected");
          },
          ch);
    for (const auto& s : I.sites)
      if (s.owner == kNoProcess) throw SimFault("store site '" + s.name + "' has no owner");
    I.validated = true;
  }

  const std::size_t n = I.procs.size();
  I.alive.assign(n, 0);
  CycleRecord rec;
  for (std::size_t p = 0; p < n; ++p) {
    if (I.procs[p].proc->done()) continue;
    Tick& t = I.ticks[p];
    t.reset();
    I.procs[p].proc->evaluate(t);
    I.alive[p] = t.viable() ? 1 : 0;
    if (!t.viable()) I.procs[p].blocked = t.blocked_on();
  }
  if (I.observer)
    for (std::size_t p = 0; p < n; ++p)
      if (I.alive[p]) rec.proposed.push_back(from_index<ProcessId>(p));

  // An enqueue to a full stream survives only if the consumer's surviving
  // proposal dequeues that stream this cycle.
  auto stream_fixpoint = [&] {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t p = 0; p < n; ++p) {
        if (!I.alive[p]) continue;
        for (const StagedOp& op : I.ticks[p].ops()) {
          if (op.kind != StagedOp::Kind::StreamEnq) continue;
          const StreamChannel& s = std::get<StreamChannel>(I.channels[op.target]);
          if (!s.full()) continue;
          const auto c = to_index(s.consumer);
          if (I.alive[c] && I.ticks[c].has_op(StagedOp::Kind::StreamDeq, op.target)) continue;
          I.alive[p] = 0;
          I.procs[p].blocked = {Resource::Kind::Channel, op.target};
          changed = true;
          break;
        }
      }
    }
  };
  stream_fixpoint();

  std::vector<std::optional<ProcessId>> winners(I.ports.size());
  for (std::size_t port = 0; port < I.ports.size(); ++port) {
    I.contenders.clear();
    for (std::size_t p = 0; p < n; ++p) {
      if (!I.alive[p]) continue;
      for (const StagedOp& op : I.ticks[p].ops())
        if (I.port_of(op) == port) {
          I.contenders.push_back(from_index<ProcessId>(p));
          break;
        }
    }
    if (I.contenders.empty()) continue;
    ProcessId w = arbitrate(I.contenders, I.ports[port].last_winner);
    winners[port] = w;
    for (ProcessId c : I.contenders)
      if (c != w) {
        I.alive[to_index(c)] = 0;
        I.procs[to_index(c)].blocked = {Resource::Kind::Port, static_cast<std::uint32_t>(port)};
      }
  }
  stream_fixpoint();

  for (std::size_t port = 0; port < I.ports.size(); ++port)
    if (winners[port] && I.alive[to_index(*winners[port])]) I.ports[port].last_winner = winners[port];

  // Commit: pops, then pushes, then memory issue, then process state.
  for (std::size_t p = 0; p < n; ++p) {
    if (!I.alive[p]) continue;
    for (const StagedOp& op : I.ticks[p].ops()) {
      if (op.kind == StagedOp::Kind::StreamDeq) {
        auto& s = std::get<StreamChannel>(I.channels[op.target]);
        s.fifo.pop_front();
        ++s.deq_count;
      } else if (op.kind == StagedOp::Kind::Response) {
        auto& d = std::get<DecoupleChannel>(I.channels[op.target]);
        d.reorder.pop_front();
        ++d.head_seq;
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (!I.alive[p]) continue;
    for (const StagedOp& op : I.ticks[p].ops()) {
      if (op.kind != StagedOp::Kind::StreamEnq) continue;
      auto& s = std::get<StreamChannel>(I.channels[op.target]);
      s.fifo.push_back(op.value);
      ++s.enq_count;
      if (s.fifo.size() > s.capacity) throw SimFault("stream '" + s.name + "' over capacity");
      s.peak_occupancy = std::max(s.peak_occupancy, s.fifo.size());
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (!I.alive[p]) continue;
    for (const StagedOp& op : I.ticks[p].ops()) {
      if (op.kind == StagedOp::Kind::Request) {
        auto& d = std::get<DecoupleChannel>(I.channels[op.target]);
        auto& port = I.ports[to_index(d.port)];
        MemRequest req{d.axi, MemKind::Read, op.addr, d.words, 0, I.now, op.target, d.next_seq++};
        d.reorder.emplace_back();
        if (d.in_flight() > d.capacity) throw SimFault("load channel '" + d.name + "' over capacity");
        d.peak_in_flight = std::max(d.peak_in_flight, d.in_flight());
        port.model->issue(req);
        ++port.reads;
      } else if (op.kind == StagedOp::Kind::Store) {
        auto& s = I.sites[op.target];
        auto& port = I.ports[to_index(s.port)];
        MemRequest req{s.axi, MemKind::Write, op.addr, 1, op.value.front(), I.now, op.target, s.issued++};
        port.model->issue(req);
        ++port.writes;
      }
    }
  }
  bool fired = false;
  for (std::size_t p = 0; p < n; ++p) {
    auto& slot = I.procs[p];
    if (I.alive[p]) {
      slot.proc->commit();
      ++slot.fired;
      slot.blocked = {};
      fired = true;
      if (I.observer) rec.fired.push_back(from_index<ProcessId>(p));
    } else if (!slot.proc->done()) {
      ++slot.stalled;
      if (I.observer) rec.stalled.push_back(from_index<ProcessId>(p));
    }
  }
  if (I.observer) {
    rec.cycle = I.now;
    I.observer(rec);
  }

  ++I.now;

  bool delivered = false;
  for (ServicePhase phase : {ServicePhase::Writes, ServicePhase::Reads}) {
    for (std::size_t port = 0; port < I.ports.size(); ++port) {
      auto& P = I.ports[port];
      if (P.model->outstanding() == 0) continue;
      I.responses.clear();
      P.model->service(I.now, phase, I.mem, I.responses);
      for (const MemResponse& r : I.responses) {
        delivered = true;
        if (r.kind == RespKind::ReadData) {
          auto& d = I.decouple(r.route);
          if (r.seq < d.head_seq || r.seq - d.head_seq >= d.reorder.size())
            throw SimFault("response for load channel '" + d.name + "' has no reorder slot");
          auto& slot = d.reorder[static_cast<std::size_t>(r.seq - d.head_seq)];
          if (slot) throw SimFault("duplicate response on load channel '" + d.name + "'");
          slot = r.data;
          ++d.delivered;
        } else {
          auto& s = I.site(r.route);
          if (r.seq != s.acked) throw SimFault("store acks out of order at site '" + s.name + "'");
          ++s.acked;
        }
        if (I.log_on)
          I.log.push_back({I.now, static_cast<std::uint32_t>(port), r.id, r.kind, r.addr, I.now - r.issue_cycle});
      }
    }
  }
  return fired || delivered;
}

SimResult World::run_until_quiescent(Cycle max_cycles) {
  if (max_cycles == 0) throw ConfigError("max_cycles must be > 0");
  detail::WorldImpl& I = *impl_;
  auto all_done = [&] {
    return std::all_of(I.procs.begin(), I.procs.end(), [](const auto& s) { return s.proc->done(); });
  };
  auto memory_idle = [&] {
    return std::all_of(I.ports.begin(), I.ports.end(), [](const auto& p) { return p.model->outstanding() == 0; });
  };
  auto balanced = [&] {
    for (const auto& ch : I.channels) {
      if (auto* s = std::get_if<StreamChannel>(&ch); s && s->enq_count != s->deq_count) return false;
      if (auto* d = std::get_if<DecoupleChannel>(&ch); d && d->in_flight() != 0) return false;
    }
    return std::all_of(I.sites.begin(), I.sites.end(), [](const StoreSite& s) { return s.acked == s.issued; });
  };

  SimResult res;
  for (;;) {
    if (all_done() && memory_idle()) {
      res.outcome = balanced() ? Outcome::Completed : Outcome::Deadlocked;
      break;
    }
    if (I.now >= max_cycles) {
      res.outcome = Outcome::CycleLimit;
      break;
    }
    if (step()) continue;
    if (memory_idle()) {
      if (!all_done()) {
        res.outcome = Outcome::Deadlocked;
        break;
      }
      continue;
    }
    // Nothing can change until some memory model has an event; skip the
    // intervening evaluations, which would all stall.
    Cycle next = ~Cycle{0};
    for (const auto& p : I.ports)
      if (p.model->outstanding() > 0) next = std::min(next, p.model->next_event(I.now));
    next = std::min(next, max_cycles);
    if (next > I.now + 1) {
      const Cycle skipped = next - 1 - I.now;
      for (auto& s : I.procs)
        if (!s.proc->done()) s.stalled += skipped;
      I.now = next - 1;
    }
  }
  res.stats = stats();
  return res;
}

SimStats World::stats() const {
  const detail::WorldImpl& I = *impl_;
  SimStats st;
  st.cycles = I.now;
  auto demand = [&](ProcessId consumer, std::size_t idx) {
    if (consumer == kNoProcess) return false;
    const auto& slot = I.procs[to_index(consumer)];
    return !slot.proc->done() && slot.blocked == Resource{Resource::Kind::Channel, static_cast<std::uint32_t>(idx)};
  };
  for (std::size_t i = 0; i < I.channels.size(); ++i) {
    ChannelStats cs;
    if (auto* s = std::get_if<StreamChannel>(&I.channels[i])) {
      cs.name = s->name;
      cs.capacity = s->capacity;
      cs.enq = s->enq_count;
      cs.deq = s->deq_count;
      cs.in_flight = s->fifo.size();
      cs.peak = s->peak_occupancy;
      cs.pending_demand = demand(s->consumer, i);
    } else {
      const auto& d = std::get<DecoupleChannel>(I.channels[i]);
      cs.name = d.name;
      cs.decoupled = true;
      cs.capacity = d.capacity;
      cs.port = I.ports[to_index(d.port)].name;
      cs.enq = d.next_seq;
      cs.deq = d.head_seq;
      cs.delivered = d.delivered;
      cs.in_flight = d.in_flight();
      cs.peak = d.peak_in_flight;
      cs.pending_demand = demand(d.consumer, i);
    }
    st.channels.push_back(std::move(cs));
  }
  for (const auto& p : I.ports) {
    PortStats ps{p.name, std::string(p.model->kind()), p.reads, p.writes, {}};
    p.model->counters(ps.counters);
    st.ports.push_back(std::move(ps));
  }
  for (const auto& s : I.procs) {
    ProcessStats ps{s.proc->name(), s.fired, s.stalled, s.proc->done(), {}};
    if (!ps.done && s.blocked.kind != Resource::Kind::None) ps.blocked_on = describe(s.blocked);
    st.processes.push_back(std::move(ps));
  }
  for (const auto& s : I.sites) st.store_sites.push_back({s.name, I.ports[to_index(s.port)].name, s.issued, s.acked});
  return st;
}

Cycle World::now() const noexcept { return impl_->now; }
MemoryImage& World::memory() noexcept { return impl_->mem; }
const MemoryImage& World::memory() const noexcept { return impl_->mem; }

MemoryModel& World::model(PortId port) { return *impl_->port(port).model; }

const Channel& World::channel(ChannelId ch) const { return impl_->channel(static_cast<std::uint32_t>(to_index(ch))); }
const StreamChannel& World::stream(ChannelId ch) const { return impl_->stream(static_cast<std::uint32_t>(to_index(ch))); }
const DecoupleChannel& World::decouple(ChannelId ch) const {
  return impl_->decouple(static_cast<std::uint32_t>(to_index(ch)));
}
const StoreSite& World::store_site(StoreSiteId site) const {
  return impl_->site(static_cast<std::uint32_t>(to_index(site)));
}
std::size_t World::channel_count() const noexcept { return impl_->channels.size(); }
std::size_t World::process_count() const noexcept { return impl_->procs.size(); }

Process& World::process(ProcessId pid) {
  if (to_index(pid) >= impl_->procs.size()) throw SimFault("unknown process");
  return *impl_->procs[to_index(pid)].proc;
}

std::uint64_t World::store_observable(StoreSiteId site) const { return store_site(site).acked; }

std::uint64_t World::store_observable(PortId port, AxiId id) const {
  for (const auto& s : impl_->sites)
    if (s.port == port && s.axi == id) return s.acked;
  return 0;
}

std::string World::describe(const Resource& r) const {
  switch (r.kind) {
    case Resource::Kind::None: return "";
    case Resource::Kind::Channel:
      return "channel '" + std::visit([](const auto& c) { return c.name; }, impl_->channels.at(r.index)) + "'";
    case Resource::Kind::Port: return "port '" + impl_->ports.at(r.index).name + "'";
    case Resource::Kind::StoreSite: return "store site '" + impl_->sites.at(r.index).name + "'";
  }
  return "";
}

void World::set_observer(std::function<void(const CycleRecord&)> fn) { impl_->observer = std::move(fn); }
void World::enable_memory_log(bool on) noexcept { impl_->log_on = on; }
const std::vector<MemLogEntry>& World::memory_log() const noexcept { return impl_->log; }

std::vector<FetchLogEntry> World::take_fetch_log(PortId port) {
  std::vector<FetchLogEntry> out;
  impl_->port(port).model->take_fetch_log(out);
  return out;
}

}  // namespace daesim
