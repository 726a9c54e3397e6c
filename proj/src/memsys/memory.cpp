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


#include "daesim/memory.hpp"

#include <sstream>

namespace daesim {

namespace {

constexpr Addr kRegionAlign = 0x10000;

std::string hex(Addr a) {
  std::ostringstream os;
  os << "0x" << std::hex << a;
  return os.str();
}

}  // namespace

RegionId MemoryImage::add_region(std::string name, std::vector<Word> words) {
  if (find(name)) throw ConfigError("duplicate region '" + name + "'");
  Region r;
  r.name = std::move(name);
  r.base = next_base_;
  r.words = std::move(words);
  Addr span = std::max<Addr>(r.size_bytes(), 1);
  next_base_ += (span + kRegionAlign - 1) / kRegionAlign * kRegionAlign + kRegionAlign;
  regions_.push_back(std::move(r));
  return from_index<RegionId>(regions_.size() - 1);
}

std::optional<RegionId> MemoryImage::find(std::string_view name) const {
  for (std::size_t i = 0; i < regions_.size(); ++i)
    if (regions_[i].name == name) return from_index<RegionId>(i);
  return std::nullopt;
}

const Region& MemoryImage::region(std::string_view name) const {
  auto id = find(name);
  if (!id) throw ConfigError("no region named '" + std::string(name) + "'");
  return region(*id);
}

Region& MemoryImage::region(std::string_view name) {
  auto id = find(name);
  if (!id) throw ConfigError("no region named '" + std::string(name) + "'");
  return region(*id);
}

const Region* MemoryImage::region_at(Addr addr) const noexcept {
  // Regions are laid out at increasing bases.
  auto it = std::upper_bound(regions_.begin(), regions_.end(), addr,
                             [](Addr a, const Region& r) { return a < r.base; });
  if (it == regions_.begin()) return nullptr;
  --it;
  return it->contains(addr) ? &*it : nullptr;
}

const Region& MemoryImage::checked(Addr addr) const {
  const Region* r = region_at(addr);
  if (!r) throw SimFault("access to unmapped address " + hex(addr));
  return *r;
}

Region& MemoryImage::checked(Addr addr) {
  return const_cast<Region&>(std::as_const(*this).checked(addr));
}

Word MemoryImage::read(Addr addr) const {
  const Region& r = checked(addr);
  return r.words[(addr - r.base) / kWordBytes];
}

void MemoryImage::write(Addr addr, Word value) {
  Region& r = checked(addr);
  r.words[(addr - r.base) / kWordBytes] = value;
}

Payload MemoryImage::read_payload(Addr addr, unsigned word_count) const {
  const Region& r = checked(addr);
  if (word_count == 0 || word_count > kMaxPayloadWords || !r.contains(addr, word_count))
    throw SimFault("wide read of " + std::to_string(word_count) + " words at " + hex(addr) +
                   " crosses region '" + r.name + "'");
  Payload p;
  p.size = static_cast<std::uint8_t>(word_count);
  auto first = (addr - r.base) / kWordBytes;
  for (unsigned i = 0; i < word_count; ++i) p.words[i] = r.words[first + i];
  return p;
}

std::optional<std::string> MemoryImage::first_difference(const MemoryImage& other) const {
  if (regions_.size() != other.regions_.size())
    return "region count " + std::to_string(regions_.size()) + " vs " +
           std::to_string(other.regions_.size());
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    const Region& a = regions_[i];
    const Region& b = other.regions_[i];
    if (a.name != b.name) return "region " + std::to_string(i) + " named '" + a.name + "' vs '" + b.name + "'";
    if (a.words.size() != b.words.size())
      return "region '" + a.name + "' has " + std::to_string(a.words.size()) + " vs " +
             std::to_string(b.words.size()) + " words";
    auto mm = std::mismatch(a.words.begin(), a.words.end(), b.words.begin());
    if (mm.first != a.words.end()) {
      std::ostringstream os;
      os << "region '" << a.name << "' word " << (mm.first - a.words.begin()) << ": 0x" << std::hex
         << *mm.first << " vs 0x" << *mm.second;
      return os.str();
    }
  }
  return std::nullopt;
}

void FixedLatencyConfig::validate() const {
  if (read_latency < 1 || write_latency < 1) throw ConfigError("memory latencies must be >= 1");
  if (max_outstanding < 1) throw ConfigError("max_outstanding must be >= 1");
}

FixedLatencyModel::FixedLatencyModel(FixedLatencyConfig cfg) : cfg_(cfg) { cfg_.validate(); }

bool FixedLatencyModel::can_accept(const MemRequest&) const {
  return outstanding() < cfg_.max_outstanding;
}

void FixedLatencyModel::issue(const MemRequest& req) {
  (req.kind == MemKind::Read ? reads_ : writes_).push_back(req);
}

void FixedLatencyModel::service(Cycle now, ServicePhase phase, MemoryImage& mem,
                                std::vector<MemResponse>& out) {
  auto& queue = phase == ServicePhase::Writes ? writes_ : reads_;
  const Cycle latency = phase == ServicePhase::Writes ? cfg_.write_latency : cfg_.read_latency;
  // Constant latency keeps each queue ordered by service cycle.
  while (!queue.empty() && queue.front().issue_cycle + latency <= now) {
    const MemRequest& r = queue.front();
    MemResponse resp;
    resp.id = r.id;
    resp.addr = r.addr;
    resp.issue_cycle = r.issue_cycle;
    resp.ready_cycle = r.issue_cycle + latency;
    resp.route = r.route;
    resp.seq = r.seq;
    if (r.kind == MemKind::Write) {
      mem.write(r.addr, r.data);
      resp.kind = RespKind::WriteAck;
    } else {
      resp.kind = RespKind::ReadData;
      resp.data = mem.read_payload(r.addr, r.words);
    }
    out.push_back(resp);
    queue.pop_front();
  }
}

Cycle FixedLatencyModel::next_event(Cycle now) const {
  Cycle next = ~Cycle{0};
  if (!reads_.empty()) next = std::min(next, reads_.front().issue_cycle + cfg_.read_latency);
  if (!writes_.empty()) next = std::min(next, writes_.front().issue_cycle + cfg_.write_latency);
  return std::max(next, now + 1);
}

JitterLatencyModel::JitterLatencyModel(Cycle min_latency, Cycle max_latency,
                                       std::uint32_t max_outstanding, std::uint64_t seed)
    : min_latency_(min_latency), max_latency_(max_latency), max_outstanding_(max_outstanding), rng_(seed) {
  if (min_latency < 1 || max_latency < min_latency) throw ConfigError("jitter latency range invalid");
  if (max_outstanding < 1) throw ConfigError("max_outstanding must be >= 1");
}

bool JitterLatencyModel::can_accept(const MemRequest&) const {
  return pending_.size() < max_outstanding_;
}

void JitterLatencyModel::issue(const MemRequest& req) {
  Cycle service = req.issue_cycle + min_latency_ + rng_() % (max_latency_ - min_latency_ + 1);
  if (req.kind == MemKind::Write) {
    auto it = std::find_if(last_write_.begin(), last_write_.end(),
                           [&](const auto& e) { return e.first == req.id; });
    if (it == last_write_.end()) {
      last_write_.emplace_back(req.id, service);
    } else {
      service = std::max(service, it->second);
      it->second = service;
    }
  }
  pending_.push(Pending{service, order_++, req});
}

void JitterLatencyModel::service(Cycle now, ServicePhase phase, MemoryImage& mem,
                                 std::vector<MemResponse>& out) {
  // Pull everything due this cycle; re-queue the kind served in the other phase.
  std::vector<Pending> keep;
  while (!pending_.empty() && pending_.top().service <= now) {
    Pending p = pending_.top();
    pending_.pop();
    const bool is_write = p.req.kind == MemKind::Write;
    if (is_write != (phase == ServicePhase::Writes)) {
      keep.push_back(p);
      continue;
    }
    MemResponse resp;
    resp.id = p.req.id;
    resp.addr = p.req.addr;
    resp.issue_cycle = p.req.issue_cycle;
    resp.ready_cycle = now;
    resp.route = p.req.route;
    resp.seq = p.req.seq;
    if (is_write) {
      mem.write(p.req.addr, p.req.data);
      resp.kind = RespKind::WriteAck;
    } else {
      resp.kind = RespKind::ReadData;
      resp.data = mem.read_payload(p.req.addr, p.req.words);
    }
    out.push_back(resp);
  }
  for (auto& p : keep) pending_.push(p);
}

Cycle JitterLatencyModel::next_event(Cycle now) const {
  if (pending_.empty()) return now + 1;
  return std::max(pending_.top().service, now + 1);
}

}  // namespace daesim
