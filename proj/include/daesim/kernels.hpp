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
#include <string>
#include <string_view>
#include <vector>

#include "daesim/engine.hpp"
#include "daesim/moms.hpp"
#include "daesim/workload.hpp"

namespace daesim {

enum class Kernel : std::uint8_t {
  Binsearch,
  BinsearchFor,
  Hashtable,
  Mergesort,
  MergesortOpt,
  Spmv,
  MultiSpmv,
  // Fault-injection and timing probes used by tests.
  Imbalanced,
  StoreLoop,
};

enum class Coupling : std::uint8_t { Coupled, Decoupled, DecoupledChunked };

std::string_view to_string(Kernel k) noexcept;
std::string_view to_string(Coupling c) noexcept;
Kernel parse_kernel(std::string_view s);
/// Accepts "coupled", "decoupled", "chunked".
Coupling parse_coupling(std::string_view s);
/// The dataset kind a kernel runs on.
WorkloadKind workload_kind(Kernel k) noexcept;
/// Resolves a requested variant to the one actually built (binsearch_for's
/// decoupled form is the chunked one); throws ConfigError when undefined.
Coupling resolve_coupling(Kernel k, Coupling c);
/// Benchmarks shipped with coupled and decoupled forms (excludes test kernels).
const std::vector<Kernel>& benchmark_kernels();

struct MemoryPlan {
  enum class Model : std::uint8_t { Fixed, Moms, Jitter };
  Model model = Model::Fixed;
  FixedLatencyConfig fixed;
  MomsConfig moms;
  Cycle jitter_min = 1;
  Cycle jitter_max = 200;
  std::uint64_t jitter_seed = 1;
  /// Regions served by MOMS in Moms mode; empty means the kernel's irregular regions.
  std::vector<std::string> moms_regions;
};
std::string_view to_string(MemoryPlan::Model m) noexcept;
MemoryPlan::Model parse_memory_model(std::string_view s);

/// Regions whose accesses are irregular. In MOMS runs only these ports sit
/// behind the miss-optimized model; the rest stay fixed-latency.
std::vector<std::string> irregular_regions(Kernel k);

/// Chase state: four words whose meaning belongs to the chase, except word 3
/// which always holds the key's position in the input (where the result goes).
using ChaseState = Payload;
inline constexpr std::size_t kOriginWord = 3;

/// The five functions that define a pointer-chasing search.
struct ChaseSpec {
  std::string name;
  std::string region;  // region the chase loads from
  unsigned load_words = 1;
  std::function<ChaseState(Word key, Word origin)> init;
  std::function<Addr(const ChaseState&)> addr;
  std::function<ChaseState(const ChaseState&, const Payload&)> update;
  std::function<bool(const ChaseState&)> end_reached;
  std::function<Word(const ChaseState&)> result;
};

/// Binary search over `n` sorted words at `base`; result is the index or kNil.
ChaseSpec binsearch_chase(Addr base, std::uint32_t n);
/// Separate-chaining lookup over 16-byte entries at `base`; result is the value or kNil.
ChaseSpec hashtable_chase(Addr base, std::uint32_t bucket_count);
/// Loads needed to settle any binary search over n elements.
std::uint32_t chase_iterations(std::uint64_t n) noexcept;

struct KernelParams {
  Kernel kernel = Kernel::Spmv;
  Coupling coupling = Coupling::Decoupled;
  std::uint32_t rif = 128;
  std::uint32_t chunk = 128;
  /// Capacity of the prefetching load channels between access and execute loops.
  std::uint32_t channel_capacity = 128;
  /// Mergesort: access loops run ahead across the merges of a pass instead of
  /// waiting for each merge to start.
  bool merge_overlap = true;
  /// Build even when the workload breaks its invariants (fault injection).
  bool skip_validation = false;
  /// Pointer chase keeps requesting after its end condition (fault injection).
  bool fault_skip_continue = false;
  /// StoreLoop: stores overlap and are awaited once at the end.
  bool store_overlap = true;
};

struct BuiltKernel {
  std::unique_ptr<World> world;
  /// Region name -> port, in region order.
  std::vector<std::pair<std::string, PortId>> ports;
};

/// Builds the process graph for `params` over `workload` with one memory port
/// per region.
BuiltKernel build_world(const KernelParams& params, const Workload& workload, const MemoryPlan& plan,
                        std::uint64_t seed = 0);

}  // namespace daesim
