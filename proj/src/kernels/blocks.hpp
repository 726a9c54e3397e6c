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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "daesim/kernels.hpp"

namespace daesim::detail {

struct KernelContext {
  World& world;
  const KernelParams& params;
  std::map<std::string, PortId, std::less<>> ports;

  Addr base(std::string_view region) const { return world.memory().region(region).base; }
  std::size_t words(std::string_view region) const { return world.memory().region(region).words.size(); }
  PortId port(std::string_view region) const {
    auto it = ports.find(region);
    if (it == ports.end()) throw ConfigError("no port for region '" + std::string(region) + "'");
    return it->second;
  }
  ChannelId load(std::string name, std::string_view region, std::size_t capacity, unsigned width = 1) {
    return world.add_decouple(std::move(name), capacity, port(region), width);
  }
  StoreSiteId store_site(std::string name, std::string_view region) {
    return world.add_store_site(std::move(name), port(region));
  }
};

/// A run of consecutive word indices, optionally gated on one token.
struct Segment {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  std::optional<ChannelId> token;
};

struct RangeRegs {
  std::size_t seg = 0;
  std::uint64_t idx = 0;
  bool have_token = false;
  bool done = false;
};

/// Requests region[idx] for every idx of every segment, one per cycle.
class RangeAccess final : public LoopProcess<RangeRegs> {
 public:
  RangeAccess(std::string name, ChannelId ch, Addr base, std::vector<Segment> segs);

 protected:
  void iterate(Tick& t, RangeRegs& r) override;

 private:
  void skip_empty(RangeRegs& r) const;

  ChannelId ch_;
  Addr base_;
  std::vector<Segment> segs_;
};

void build_chase(KernelContext& cx, const ChaseSpec& spec, std::size_t key_count);
void build_spmv(KernelContext& cx, const CsrMatrix& m);
void build_multispmv(KernelContext& cx, const MultiSpmvWorkload& w);
void build_mergesort(KernelContext& cx, std::size_t n, bool opt);

}  // namespace daesim::detail
