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


#include "blocks.hpp"

namespace daesim {

namespace {

constexpr Word kFound = 0x80000000u;

}  // namespace

// State: [lo, hi | kFound, key, origin]. hi is exclusive until found, then lo == hi == index.
ChaseSpec binsearch_chase(Addr base, std::uint32_t n) {
  if (n == 0 || n >= kFound) throw ConfigError("binsearch: array size must be in [1, 2^31)");
  ChaseSpec s;
  s.name = "binsearch";
  s.region = "array";
  auto mid = [n](const ChaseState& st) { return std::min<Word>((st[0] + (st[1] & ~kFound)) / 2, n - 1); };
  s.init = [n](Word key, Word origin) { return ChaseState{0, n, key, origin}; };
  s.addr = [base, mid](const ChaseState& st) { return base + kWordBytes * mid(st); };
  s.end_reached = [](const ChaseState& st) { return (st[1] & kFound) != 0 || st[0] >= st[1]; };
  s.update = [mid, end = s.end_reached](const ChaseState& st, const Payload& v) {
    if (end(st)) return st;
    ChaseState next = st;
    const Word m = mid(st);
    if (v.front() == st[2]) {
      next[0] = m;
      next[1] = m | kFound;
    } else if (v.front() < st[2]) {
      next[0] = m + 1;
    } else {
      next[1] = m;
    }
    return next;
  };
  s.result = [](const ChaseState& st) { return (st[1] & kFound) ? st[0] : kNil; };
  return s;
}

// State: [entry index (value once found), key, status, origin]; status 0 walking, 1 found, 2 missing.
ChaseSpec hashtable_chase(Addr base, std::uint32_t bucket_count) {
  ChaseSpec s;
  s.name = "hashtable";
  s.region = "entries";
  s.load_words = 4;
  s.init = [bucket_count](Word key, Word origin) {
    return ChaseState{(key * 2654435761u) & (bucket_count - 1), key, 0, origin};
  };
  s.addr = [base](const ChaseState& st) { return base + kWordBytes * HashWorkload::kEntryWords * st[0]; };
  s.end_reached = [](const ChaseState& st) { return st[2] != 0; };
  s.update = [](const ChaseState& st, const Payload& e) {
    if (st[2] != 0) return st;
    ChaseState next = st;
    if (e[0] == st[1]) {
      next[0] = e[1];
      next[2] = 1;
    } else if (e[2] == kNil) {
      next[2] = 2;
    } else {
      next[0] = e[2];
    }
    return next;
  };
  s.result = [](const ChaseState& st) { return st[2] == 1 ? st[0] : kNil; };
  return s;
}

namespace detail {

namespace {

struct ChaseIo {
  ChannelId keys;
  ChannelId load;
  StoreSiteId site;
  Addr result_base;
  std::uint64_t key_count;
};

struct RifRegs {
  std::uint32_t rif = 0;
  std::uint64_t taken = 0;
  std::uint64_t completed = 0;
  bool done = false;
};

// Keeps up to `rif` chains in flight: starts a new chain while below the
// limit, otherwise advances the oldest outstanding one.
class RifChase final : public LoopProcess<RifRegs> {
 public:
  RifChase(const ChaseSpec& spec, ChaseIo io, ChannelId state, std::uint32_t rif, bool skip_continue)
      : LoopProcess<RifRegs>(spec.name + ".chase", RifRegs{0, 0, 0, io.key_count == 0}),
        spec_(spec), io_(io), state_(state), limit_(rif), skip_continue_(skip_continue) {}

 protected:
  void iterate(Tick& t, RifRegs& r) override {
    if (r.completed >= io_.key_count) {
      if (t.stores_drained(io_.site)) r.done = true;
      return;
    }
    ChaseState s;
    if (r.rif < limit_ && r.taken < io_.key_count) {
      auto key = t.decouple_response(io_.keys);
      if (!key) return;
      s = spec_.init(key->front(), static_cast<Word>(r.taken));
      ++r.taken;
      ++r.rif;
    } else {
      auto v = t.decouple_response(io_.load);
      if (!v) return;
      auto prev = t.stream_deq(state_);
      if (!prev) return;
      s = spec_.update(*prev, *v);
    }
    if (spec_.end_reached(s)) {
      t.store(io_.site, io_.result_base + kWordBytes * s[kOriginWord], spec_.result(s));
      --r.rif;
      ++r.completed;
      if (!skip_continue_) return;
      s = spec_.init(0, 0);
    }
    t.decouple_request(io_.load, spec_.addr(s));
    t.stream_enq(state_, s);
  }

 private:
  ChaseSpec spec_;
  ChaseIo io_;
  ChannelId state_;
  std::uint32_t limit_;
  bool skip_continue_;
};

struct ChunkRegs {
  std::uint64_t start = 0;
  std::uint64_t end = 0;
  std::uint64_t j = 0;
  std::uint32_t level = 0;
  bool done = false;
};

// Lock-step chase: every element of a chunk advances one level before any
// element advances the next; results are written in input order.
class ChunkedChase final : public LoopProcess<ChunkRegs> {
 public:
  ChunkedChase(const ChaseSpec& spec, ChaseIo io, ChannelId state, std::uint32_t chunk, std::uint32_t loads)
      : LoopProcess<ChunkRegs>(spec.name + ".chunked",
                               ChunkRegs{0, std::min<std::uint64_t>(chunk, io.key_count), 0, 0, io.key_count == 0}),
        spec_(spec), io_(io), state_(state), chunk_(chunk), loads_(loads) {}

 protected:
  void iterate(Tick& t, ChunkRegs& r) override {
    if (r.start >= io_.key_count) {
      if (t.stores_drained(io_.site)) r.done = true;
      return;
    }
    ChaseState s;
    if (r.level == 0) {
      auto key = t.decouple_response(io_.keys);
      if (!key) return;
      s = spec_.init(key->front(), static_cast<Word>(r.j));
    } else {
      auto v = t.decouple_response(io_.load);
      if (!v) return;
      auto prev = t.stream_deq(state_);
      if (!prev) return;
      s = spec_.update(*prev, *v);
    }
    if (r.level == loads_) {
      if (!spec_.end_reached(s))
        throw SimFault(spec_.name + ": chain longer than " + std::to_string(loads_) + " loads");
      t.store(io_.site, io_.result_base + kWordBytes * r.j, spec_.result(s));
    } else {
      t.decouple_request(io_.load, spec_.addr(s));
      t.stream_enq(state_, s);
    }
    if (++r.j < r.end) return;
    r.j = r.start;
    if (++r.level <= loads_) return;
    r.level = 0;
    r.start = r.end;
    r.end = std::min<std::uint64_t>(r.start + chunk_, io_.key_count);
    r.j = r.start;
  }

 private:
  ChaseSpec spec_;
  ChaseIo io_;
  ChannelId state_;
  std::uint32_t chunk_;
  std::uint32_t loads_;
};

struct CoupledRegs {
  std::uint64_t i = 0;
  std::uint8_t phase = 0;  // 0: request key, 1: await key, 2: await chase load
  std::uint32_t loads = 0;
  ChaseState s;
  bool done = false;
};

// One chain at a time; every load waits for its response.
class CoupledChase final : public LoopProcess<CoupledRegs> {
 public:
  // fixed_loads > 0: every chain takes exactly that many loads, like the chunked form.
  CoupledChase(const ChaseSpec& spec, ChaseIo io, Addr keys_base, std::uint32_t fixed_loads)
      : LoopProcess<CoupledRegs>(spec.name + ".coupled", CoupledRegs{0, 0, 0, {}, io.key_count == 0}),
        spec_(spec), io_(io), keys_base_(keys_base), fixed_loads_(fixed_loads) {}

 protected:
  void iterate(Tick& t, CoupledRegs& r) override {
    if (r.i >= io_.key_count) {
      if (t.stores_drained(io_.site)) r.done = true;
      return;
    }
    if (r.phase == 0) {
      t.decouple_request(io_.keys, keys_base_ + kWordBytes * r.i);
      r.phase = 1;
      return;
    }
    if (r.phase == 1) {
      auto key = t.decouple_response(io_.keys);
      if (!key) return;
      r.s = spec_.init(key->front(), static_cast<Word>(r.i));
      r.loads = 0;
    } else {
      auto v = t.decouple_response(io_.load);
      if (!v) return;
      r.s = spec_.update(r.s, *v);
    }
    bool ended = spec_.end_reached(r.s);
    if (fixed_loads_ > 0) {
      if (r.loads == fixed_loads_ && !ended)
        throw SimFault(spec_.name + ": chain longer than " + std::to_string(fixed_loads_) + " loads");
      ended = r.loads == fixed_loads_;
    }
    if (ended) {
      t.store(io_.site, io_.result_base + kWordBytes * r.s[kOriginWord], spec_.result(r.s));
      if (++r.i < io_.key_count) {
        t.decouple_request(io_.keys, keys_base_ + kWordBytes * r.i);
        r.phase = 1;
      }
      return;
    }
    t.decouple_request(io_.load, spec_.addr(r.s));
    ++r.loads;
    r.phase = 2;
  }

 private:
  ChaseSpec spec_;
  ChaseIo io_;
  Addr keys_base_;
  std::uint32_t fixed_loads_;
};

}  // namespace

void build_chase(KernelContext& cx, const ChaseSpec& spec, std::size_t key_count) {
  World& w = cx.world;
  const auto& p = cx.params;
  const Addr keys_base = cx.base("keys");
  ChaseIo io{};
  io.site = cx.store_site("result", "result");
  io.result_base = cx.base("result");
  io.key_count = key_count;

  if (p.coupling == Coupling::Coupled) {
    // Capacity 2 lets a response and the dependent request share an iteration;
    // the loop itself never has more than one load outstanding.
    io.keys = cx.load("keys", "keys", 2);
    io.load = cx.load(spec.region, spec.region, 2, spec.load_words);
    const std::uint32_t fixed =
        p.kernel == Kernel::BinsearchFor ? chase_iterations(cx.words(spec.region)) : 0;
    auto [pid, proc] = w.emplace<CoupledChase>(spec, io, keys_base, fixed);
    w.connect(io.keys, pid, pid);
    w.connect(io.load, pid, pid);
    w.attach(io.site, pid);
    return;
  }

  const bool chunked = p.coupling == Coupling::DecoupledChunked;
  const std::size_t width = chunked ? p.chunk : p.rif;
  io.keys = cx.load("keys", "keys", std::max<std::size_t>(p.channel_capacity, 2));
  io.load = cx.load(spec.region, spec.region, width + 1, spec.load_words);
  ChannelId state = w.add_stream("state", width + 1);
  auto [kid, kp] = w.emplace<RangeAccess>("keys.access", io.keys, keys_base,
                                           std::vector<Segment>{{0, key_count, std::nullopt}});
  ProcessId cid;
  if (chunked) {
    const auto n = static_cast<std::uint32_t>(cx.words(spec.region));
    cid = w.emplace<ChunkedChase>(spec, io, state, p.chunk, chase_iterations(n)).first;
  } else {
    cid = w.emplace<RifChase>(spec, io, state, p.rif, p.fault_skip_continue).first;
  }
  w.connect(io.keys, kid, cid);
  w.connect(io.load, cid, cid);
  w.connect(state, cid, cid);
  w.attach(io.site, cid);
}

}  // namespace detail

}  // namespace daesim
