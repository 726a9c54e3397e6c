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


#include "daesim/moms.hpp"

#include <algorithm>
#include <bit>
#include <utility>

namespace daesim {

void DramConfig::validate() const {
  if (banks < 1 || rows_per_bank < 1 || row_bytes < 1) throw ConfigError("dram geometry must be positive");
  if (t_row_hit < 1 || t_row_miss < 1) throw ConfigError("dram timings must be >= 1");
  if (t_row_miss <= t_row_hit) throw ConfigError("dram t_row_miss must exceed t_row_hit");
}

DramModel::DramModel(DramConfig cfg) : cfg_(cfg), banks_(cfg.banks) { cfg_.validate(); }

void DramModel::enqueue(Addr line_addr, Cycle now) {
  banks_[cfg_.bank_of(line_addr)].queue.push_back(Fetch{line_addr, now});
}

std::vector<Addr> DramModel::tick(Cycle now) {
  std::vector<Addr> completed;
  for (Bank& b : banks_) {
    if (b.active && b.busy_until <= now) {
      completed.push_back(b.active->line);
      b.active.reset();
    }
  }
  start_idle_banks(now);
  return completed;
}

void DramModel::start_idle_banks(Cycle now) {
  for (Bank& b : banks_) {
    if (b.active || b.queue.empty()) continue;
    auto pick = b.queue.begin();
    if (b.open_row) {
      auto hit = std::find_if(b.queue.begin(), b.queue.end(),
                              [&](const Fetch& f) { return cfg_.row_of(f.line) == *b.open_row; });
      if (hit != b.queue.end()) pick = hit;
    }
    const std::uint64_t row = cfg_.row_of(pick->line);
    const bool row_hit = b.open_row && *b.open_row == row;
    (row_hit ? row_hits_ : row_misses_)++;
    b.open_row = row;
    b.busy_until = now + (row_hit ? cfg_.t_row_hit : cfg_.t_row_miss);
    b.active = *pick;
    service_order_.push_back(pick->line);
    b.queue.erase(pick);
  }
}

bool DramModel::idle() const noexcept {
  return std::all_of(banks_.begin(), banks_.end(),
                     [](const Bank& b) { return !b.active && b.queue.empty(); });
}

std::size_t DramModel::pending() const noexcept {
  std::size_t n = 0;
  for (const Bank& b : banks_) n += b.queue.size() + (b.active ? 1 : 0);
  return n;
}

Cycle DramModel::next_event(Cycle now) const noexcept {
  Cycle next = ~Cycle{0};
  for (const Bank& b : banks_) {
    if (b.active) next = std::min(next, b.busy_until);
    else if (!b.queue.empty()) next = std::min(next, now + 1);
  }
  return std::max(next, now + 1);
}

void MomsConfig::validate() const {
  if (line_bytes < kWordBytes * kMaxPayloadWords || !std::has_single_bit(line_bytes))
    throw ConfigError("moms line_bytes must be a power of two >= 16");
  if (cache_bytes == 0 || cache_bytes % line_bytes != 0)
    throw ConfigError("moms cache_bytes must be a positive multiple of line_bytes");
  if (hash_tables < 1 || hash_entries < 1) throw ConfigError("moms needs at least one hash table entry");
  if (external_max_outstanding_reads < 1) throw ConfigError("moms external outstanding reads must be >= 1");
  if (hit_latency < 1) throw ConfigError("moms hit latency must be >= 1");
  if (max_outstanding < 1) throw ConfigError("moms max_outstanding must be >= 1");
  dram.validate();
}

MomsModel::MomsModel(MomsConfig cfg)
    : cfg_(cfg),
      cache_tags_(cfg.cache_bytes / std::max<std::uint32_t>(cfg.line_bytes, 1)),
      mshr_(static_cast<std::size_t>(cfg.hash_tables) * cfg.hash_entries),
      dram_(cfg.dram) {
  cfg_.validate();
}

std::size_t MomsModel::probe(std::uint32_t table, Addr line) const noexcept {
  std::uint64_t h = (line / cfg_.line_bytes) * (0x9E3779B97F4A7C15ull * (2 * table + 1));
  h ^= h >> 29;
  h *= 0xBF58476D1CE4E5B9ull;
  h ^= h >> 32;
  return static_cast<std::size_t>(table) * cfg_.hash_entries + h % cfg_.hash_entries;
}

const MomsModel::MshrEntry* MomsModel::find_mshr(Addr line) const noexcept {
  for (std::uint32_t t = 0; t < cfg_.hash_tables; ++t) {
    const auto& slot = mshr_[probe(t, line)];
    if (slot && slot->line == line) return &*slot;
  }
  return nullptr;
}

MomsModel::MshrEntry* MomsModel::find_mshr(Addr line) noexcept {
  return const_cast<MshrEntry*>(std::as_const(*this).find_mshr(line));
}

std::optional<std::size_t> MomsModel::free_slot(Addr line) const noexcept {
  for (std::uint32_t t = 0; t < cfg_.hash_tables; ++t) {
    std::size_t s = probe(t, line);
    if (!mshr_[s]) return s;
  }
  return std::nullopt;
}

bool MomsModel::cached(Addr addr) const noexcept {
  Addr line = line_of(addr);
  const auto& tag = cache_tags_[(line / cfg_.line_bytes) % cache_tags_.size()];
  return tag && *tag == line;
}

std::size_t MomsModel::mshr_occupancy() const noexcept {
  return static_cast<std::size_t>(std::count_if(mshr_.begin(), mshr_.end(), [](const auto& s) { return s.has_value(); }));
}

bool MomsModel::can_accept(const MemRequest& req) const {
  if (req.kind == MemKind::Write) throw SimFault("MOMS is read-only: write request rejected");
  if (outstanding_ >= cfg_.max_outstanding) return false;
  const Addr line = line_of(req.addr);
  if (line_of(req.addr + req.words * kWordBytes - 1) != line)
    throw SimFault("request crosses a MOMS line boundary");
  if (cached(line) || find_mshr(line) || free_slot(line)) return true;
  ++backpressure_;
  return false;
}

void MomsModel::enqueue_ready(const MemRequest& req, Cycle ready) {
  auto& q = ready_by_id_[static_cast<std::uint16_t>(req.id)];
  Ready r{ready, ready_order_++, req};
  auto pos = std::upper_bound(q.begin(), q.end(), r, [](const Ready& a, const Ready& b) {
    return a.ready != b.ready ? a.ready < b.ready : a.order < b.order;
  });
  q.insert(pos, r);
}

void MomsModel::issue(const MemRequest& req) {
  if (req.kind == MemKind::Write) throw SimFault("MOMS is read-only: write request rejected");
  ++outstanding_;
  const Addr line = line_of(req.addr);
  if (cached(line)) {
    ++hits_;
    enqueue_ready(req, req.issue_cycle + cfg_.hit_latency);
    return;
  }
  if (MshrEntry* e = find_mshr(line)) {
    ++secondary_misses_;
    e->targets.push_back(Target{req});
    return;
  }
  auto slot = free_slot(line);
  if (!slot) throw SimFault("MOMS issue without a free MSHR slot");
  ++primary_misses_;
  mshr_[*slot] = MshrEntry{line, req.issue_cycle, {Target{req}}};
  fetch_queue_.push_back(line);
}

void MomsModel::service(Cycle now, ServicePhase phase, MemoryImage& mem, std::vector<MemResponse>& out) {
  if (phase != ServicePhase::Reads) return;
  last_now_ = now;

  while (!fetch_queue_.empty() && external_in_flight_ < cfg_.external_max_outstanding_reads) {
    dram_.enqueue(fetch_queue_.front(), now);
    fetch_queue_.pop_front();
    ++external_in_flight_;
    ++external_fetches_;
    peak_external_ = std::max(peak_external_, external_in_flight_);
  }
  if (external_in_flight_ > cfg_.external_max_outstanding_reads)
    throw SimFault("MOMS external outstanding read bound exceeded");

  for (Addr line : dram_.tick(now)) {
    --external_in_flight_;
    MshrEntry* e = find_mshr(line);
    if (!e) throw SimFault("MOMS fetch completed without an MSHR entry");
    cache_tags_[(line / cfg_.line_bytes) % cache_tags_.size()] = line;
    fetch_log_.push_back(FetchLogEntry{now, line, now - e->allocated});
    for (const Target& t : e->targets) enqueue_ready(t.req, now);
    for (auto& slot : mshr_)
      if (slot && slot->line == line) {
        slot.reset();
        break;
      }
  }

  // One response per requester per cycle.
  for (auto& [id, q] : ready_by_id_) {
    if (q.empty() || q.front().ready > now) continue;
    const MemRequest& r = q.front().req;
    MemResponse resp;
    resp.id = r.id;
    resp.kind = RespKind::ReadData;
    resp.addr = r.addr;
    resp.issue_cycle = r.issue_cycle;
    resp.ready_cycle = now;
    resp.route = r.route;
    resp.seq = r.seq;
    resp.data = mem.read_payload(r.addr, r.words);
    out.push_back(resp);
    q.pop_front();
    --outstanding_;
  }
}

Cycle MomsModel::next_event(Cycle now) const {
  Cycle next = ~Cycle{0};
  if (!fetch_queue_.empty() && external_in_flight_ < cfg_.external_max_outstanding_reads) return now + 1;
  if (!dram_.idle()) next = std::min(next, dram_.next_event(now));
  for (const auto& [id, q] : ready_by_id_)
    if (!q.empty()) next = std::min(next, q.front().ready);
  return std::max(next, now + 1);
}

void MomsModel::counters(std::vector<std::pair<std::string, std::uint64_t>>& out) const {
  out.emplace_back("hits", hits_);
  out.emplace_back("primary_misses", primary_misses_);
  out.emplace_back("secondary_misses", secondary_misses_);
  out.emplace_back("external_fetches", external_fetches_);
  out.emplace_back("peak_external_in_flight", peak_external_);
  out.emplace_back("backpressure_cycles", backpressure_);
  out.emplace_back("dram_row_hits", dram_.row_hits());
  out.emplace_back("dram_row_misses", dram_.row_misses());
}

void MomsModel::take_fetch_log(std::vector<FetchLogEntry>& out) {
  out.insert(out.end(), fetch_log_.begin(), fetch_log_.end());
  fetch_log_.clear();
}

}  // namespace daesim
