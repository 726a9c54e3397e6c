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
#include <bit>

#include "blocks.hpp"

namespace daesim {

namespace detail {

RangeAccess::RangeAccess(std::string name, ChannelId ch, Addr base, std::vector<Segment> segs)
    : LoopProcess<RangeRegs>(std::move(name), RangeRegs{}), ch_(ch), base_(base), segs_(std::move(segs)) {
  if (!segs_.empty()) regs_.idx = segs_[0].begin;
  skip_empty(regs_);
}

void RangeAccess::skip_empty(RangeRegs& r) const {
  while (r.seg < segs_.size() && r.idx >= segs_[r.seg].end && (!segs_[r.seg].token || r.have_token)) {
    ++r.seg;
    r.have_token = false;
    if (r.seg < segs_.size()) r.idx = segs_[r.seg].begin;
  }
  r.done = r.seg >= segs_.size();
}

void RangeAccess::iterate(Tick& t, RangeRegs& r) {
  const Segment& s = segs_[r.seg];
  if (s.token && !r.have_token) {
    if (!t.stream_deq(*s.token)) return;
    r.have_token = true;
  }
  if (r.idx < s.end) {
    t.decouple_request(ch_, base_ + kWordBytes * r.idx);
    ++r.idx;
  }
  skip_empty(r);
}

namespace {

struct Imbalanced {
  bool done = false;
};

struct StoreRegs {
  std::uint64_t i = 0;
  bool done = false;
};

void build_imbalanced(KernelContext& cx, const std::string& region) {
  auto ch = cx.load("orphan", region, 1);
  const Addr a = cx.base(region);
  auto [pid, p] = cx.world.emplace<FnLoop<Imbalanced>>("request_only", Imbalanced{}, [ch, a](Tick& t, Imbalanced& r) {
    t.decouple_request(ch, a);
    r.done = true;
  });
  cx.world.connect(ch, pid, pid);
}

void build_store_loop(KernelContext& cx, const std::string& region) {
  const std::uint64_t n = cx.words(region);
  const Addr base = cx.base(region);
  auto site = cx.store_site("store", region);
  const bool overlap = cx.params.store_overlap;
  auto [pid, p] = cx.world.emplace<FnLoop<StoreRegs>>(
      "store_loop", StoreRegs{}, [=](Tick& t, StoreRegs& r) {
        if (r.i == n || !overlap) {
          if (!t.stores_drained(site)) return;
          if (r.i == n) {
            r.done = true;
            return;
          }
        }
        t.store(site, base + kWordBytes * r.i, static_cast<Word>(r.i * 3 + 1));
        ++r.i;
      });
  cx.world.attach(site, pid);
}

}  // namespace

}  // namespace detail

std::string_view to_string(Kernel k) noexcept {
  switch (k) {
    case Kernel::Binsearch: return "binsearch";
    case Kernel::BinsearchFor: return "binsearch_for";
    case Kernel::Hashtable: return "hashtable";
    case Kernel::Mergesort: return "mergesort";
    case Kernel::MergesortOpt: return "mergesort_opt";
    case Kernel::Spmv: return "spmv";
    case Kernel::MultiSpmv: return "multispmv";
    case Kernel::Imbalanced: return "imbalanced";
    case Kernel::StoreLoop: return "storeloop";
  }
  return "?";
}

std::string_view to_string(Coupling c) noexcept {
  switch (c) {
    case Coupling::Coupled: return "coupled";
    case Coupling::Decoupled: return "decoupled";
    case Coupling::DecoupledChunked: return "chunked";
  }
  return "?";
}

Kernel parse_kernel(std::string_view s) {
  for (Kernel k : {Kernel::Binsearch, Kernel::BinsearchFor, Kernel::Hashtable, Kernel::Mergesort, Kernel::MergesortOpt,
                   Kernel::Spmv, Kernel::MultiSpmv, Kernel::Imbalanced, Kernel::StoreLoop})
    if (s == to_string(k)) return k;
  throw ConfigError("unknown kernel '" + std::string(s) + "'");
}

Coupling parse_coupling(std::string_view s) {
  for (Coupling c : {Coupling::Coupled, Coupling::Decoupled, Coupling::DecoupledChunked})
    if (s == to_string(c)) return c;
  throw ConfigError("unknown variant '" + std::string(s) + "' (coupled, decoupled, chunked)");
}

WorkloadKind workload_kind(Kernel k) noexcept {
  switch (k) {
    case Kernel::Binsearch:
    case Kernel::BinsearchFor: return WorkloadKind::Search;
    case Kernel::Hashtable: return WorkloadKind::Hash;
    case Kernel::Mergesort:
    case Kernel::MergesortOpt:
    case Kernel::Imbalanced:
    case Kernel::StoreLoop: return WorkloadKind::Sort;
    case Kernel::Spmv: return WorkloadKind::Spmv;
    case Kernel::MultiSpmv: return WorkloadKind::MultiSpmv;
  }
  return WorkloadKind::Sort;
}

Coupling resolve_coupling(Kernel k, Coupling c) {
  if (c == Coupling::Coupled) return c;
  if (k == Kernel::BinsearchFor) return Coupling::DecoupledChunked;
  if (c == Coupling::DecoupledChunked)
    throw ConfigError("kernel " + std::string(to_string(k)) + " has no chunked variant");
  return c;
}

const std::vector<Kernel>& benchmark_kernels() {
  static const std::vector<Kernel> ks{Kernel::Binsearch,    Kernel::BinsearchFor, Kernel::Hashtable, Kernel::Mergesort,
                                      Kernel::MergesortOpt, Kernel::Spmv,         Kernel::MultiSpmv};
  return ks;
}

std::string_view to_string(MemoryPlan::Model m) noexcept {
  switch (m) {
    case MemoryPlan::Model::Fixed: return "fixed";
    case MemoryPlan::Model::Moms: return "moms";
    case MemoryPlan::Model::Jitter: return "jitter";
  }
  return "?";
}

MemoryPlan::Model parse_memory_model(std::string_view s) {
  for (auto m : {MemoryPlan::Model::Fixed, MemoryPlan::Model::Moms, MemoryPlan::Model::Jitter})
    if (s == to_string(m)) return m;
  throw ConfigError("unknown memory model '" + std::string(s) + "' (fixed, moms, jitter)");
}

std::vector<std::string> irregular_regions(Kernel k) {
  switch (k) {
    case Kernel::Binsearch:
    case Kernel::BinsearchFor: return {"array"};
    case Kernel::Hashtable: return {"entries"};
    case Kernel::Spmv: return {"vec"};
    default: return {};
  }
}

std::uint32_t chase_iterations(std::uint64_t n) noexcept { return static_cast<std::uint32_t>(std::bit_width(n)); }

BuiltKernel build_world(const KernelParams& params, const Workload& workload, const MemoryPlan& plan,
                        std::uint64_t seed) {
  if (params.rif < 1) throw ConfigError("rif must be >= 1");
  if (params.chunk < 1) throw ConfigError("chunk must be >= 1");
  if (params.channel_capacity < 1) throw ConfigError("channel capacity must be >= 1");
  if (kind_of(workload) != workload_kind(params.kernel))
    throw ConfigError("kernel " + std::string(to_string(params.kernel)) + " needs a " +
                      std::string(to_string(workload_kind(params.kernel))) + " workload, got " +
                      std::string(to_string(kind_of(workload))));
  const Coupling coupling = resolve_coupling(params.kernel, params.coupling);
  if (!params.skip_validation) validate(workload);

  const auto irregular = plan.moms_regions.empty() ? irregular_regions(params.kernel) : plan.moms_regions;
  if (plan.model == MemoryPlan::Model::Moms && irregular.empty())
    throw ConfigError("kernel " + std::string(to_string(params.kernel)) +
                      " writes the regions it reads; the read-only MOMS model cannot serve it");
  plan.fixed.validate();
  if (plan.model == MemoryPlan::Model::Moms) plan.moms.validate();

  BuiltKernel out;
  out.world = std::make_unique<World>(make_image(workload), seed);
  World& w = *out.world;
  detail::KernelContext cx{w, params, {}};
  const auto& regions = w.memory().regions();
  if (plan.model == MemoryPlan::Model::Moms)
    for (const auto& r : irregular)
      if (!w.memory().find(r)) throw ConfigError("moms region '" + r + "' is not part of the workload");
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const std::string& name = regions[i].name;
    std::unique_ptr<MemoryModel> model;
    if (plan.model == MemoryPlan::Model::Moms && std::find(irregular.begin(), irregular.end(), name) != irregular.end())
      model = std::make_unique<MomsModel>(plan.moms);
    else if (plan.model == MemoryPlan::Model::Jitter)
      model = std::make_unique<JitterLatencyModel>(plan.jitter_min, plan.jitter_max, plan.fixed.max_outstanding,
                                                   plan.jitter_seed * 1000003 + i);
    else
      model = std::make_unique<FixedLatencyModel>(plan.fixed);
    PortId p = w.add_port(name, std::move(model), {from_index<RegionId>(i)});
    cx.ports.emplace(name, p);
    out.ports.emplace_back(name, p);
  }

  KernelParams resolved = params;
  resolved.coupling = coupling;
  detail::KernelContext rcx{w, resolved, cx.ports};
  switch (params.kernel) {
    case Kernel::Binsearch:
    case Kernel::BinsearchFor: {
      const auto& s = std::get<SearchWorkload>(workload);
      detail::build_chase(rcx, binsearch_chase(rcx.base("array"), static_cast<std::uint32_t>(s.array.size())),
                          s.keys.size());
      break;
    }
    case Kernel::Hashtable: {
      const auto& h = std::get<HashWorkload>(workload);
      detail::build_chase(rcx, hashtable_chase(rcx.base("entries"), h.bucket_count), h.keys.size());
      break;
    }
    case Kernel::Mergesort:
    case Kernel::MergesortOpt:
      detail::build_mergesort(rcx, std::get<SortWorkload>(workload).table.size(), params.kernel == Kernel::MergesortOpt);
      break;
    case Kernel::Spmv: detail::build_spmv(rcx, std::get<SpmvWorkload>(workload).matrix); break;
    case Kernel::MultiSpmv: detail::build_multispmv(rcx, std::get<MultiSpmvWorkload>(workload)); break;
    case Kernel::Imbalanced: detail::build_imbalanced(rcx, "table"); break;
    case Kernel::StoreLoop: detail::build_store_loop(rcx, "result"); break;
  }
  return out;
}

}  // namespace daesim
