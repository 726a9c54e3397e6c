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

#include "../../src/kernels/blocks.hpp"
#include "daesim/generate.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "kernel_helpers.hpp"

using namespace daesim;
using namespace daesim::testing;

namespace {

std::vector<Word> floats(std::initializer_list<float> v) {
  std::vector<Word> out;
  for (float f : v) out.push_back(word_from_float(f));
  return out;
}

std::vector<float> region_floats(const MemoryImage& img, const char* name) {
  std::vector<float> out;
  for (Word w : img.region(name).words) out.push_back(word_to_float(w));
  return out;
}

struct Variant {
  Kernel kernel;
  Coupling coupling;
};

std::vector<Variant> all_variants() {
  std::vector<Variant> v;
  for (Kernel k : benchmark_kernels()) {
    v.push_back({k, Coupling::Coupled});
    v.push_back({k, k == Kernel::BinsearchFor ? Coupling::DecoupledChunked : Coupling::Decoupled});
  }
  return v;
}

Workload small_workload(Kernel k, std::uint64_t seed) {
  switch (k) {
    case Kernel::Binsearch:
    case Kernel::BinsearchFor: return gen_search({997, 60, 0.7}, seed);
    case Kernel::Hashtable: return gen_hash({256, 32, 40}, seed);
    case Kernel::Mergesort:
    case Kernel::MergesortOpt: return gen_sort(37 + seed % 40, seed);
    case Kernel::Spmv: return gen_spmv({23, 301, 117}, seed);
    case Kernel::MultiSpmv: return gen_multispmv({19, 71, 3, 0.5f}, seed);
    default: break;
  }
  throw std::logic_error("no workload");
}

}  // namespace

TEST_CASE("spmv: identity matrix returns the vector") {
  SpmvWorkload w;
  w.matrix = {4, 4, {0, 1, 2, 3, 4}, {0, 1, 2, 3}, floats({1, 1, 1, 1})};
  w.vec = floats({1.5f, -2.0f, 3.25f, 8.0f});
  for (Coupling c : {Coupling::Coupled, Coupling::Decoupled}) {
    auto r = run_kernel(params_for(Kernel::Spmv, c), w, fixed_plan(10));
    REQUIRE(r.result.outcome == Outcome::Completed);
    CHECK(r.image.region("out").words == w.vec);
  }
}

TEST_CASE("spmv: hand-computed two-row product") {
  SpmvWorkload w;
  w.matrix = {2, 2, {0, 1, 3}, {0, 0, 1}, floats({2, 3, 4})};
  w.vec = floats({10, 100});
  for (Coupling c : {Coupling::Coupled, Coupling::Decoupled}) {
    auto r = run_kernel(params_for(Kernel::Spmv, c), w, fixed_plan(7));
    REQUIRE(r.result.outcome == Outcome::Completed);
    CHECK(region_floats(r.image, "out") == std::vector<float>{20, 430});
  }
}

TEST_CASE("spmv: the access loop issues one val and one vec request per non-zero") {
  auto w = gen_spmv({40, 500, 211}, 3);
  auto r = run_kernel(params_for(Kernel::Spmv, Coupling::Decoupled), w, fixed_plan(100));
  REQUIRE(r.result.outcome == Outcome::Completed);
  CHECK(r.channel("val").enq == 211);
  CHECK(r.channel("vec").enq == 211);
  CHECK(r.channel("rows").enq == 41);
}

TEST_CASE("spmv: empty rows and an empty matrix") {
  SpmvWorkload w;
  w.matrix = {3, 2, {0, 0, 0, 0}, {}, {}};
  w.vec = floats({1, 2});
  for (Coupling c : {Coupling::Coupled, Coupling::Decoupled}) {
    auto r = run_kernel(params_for(Kernel::Spmv, c), w, fixed_plan(5));
    REQUIRE(r.result.outcome == Outcome::Completed);
    CHECK(r.image.region("out").words == std::vector<Word>(3, 0));
  }
}

TEST_CASE("spmv: a non-monotone row array leaves the val channel short") {
  SpmvWorkload w;
  w.matrix = {3, 3, {0, 2, 1, 3}, {0, 1, 2}, floats({1, 2, 3})};
  w.vec = floats({1, 1, 1});
  CHECK_THROWS_AS(validate(Workload{w}), ConfigError);
  auto p = params_for(Kernel::Spmv, Coupling::Decoupled);
  p.skip_validation = true;
  auto r = run_kernel(p, w, fixed_plan(5));
  CHECK(r.result.outcome == Outcome::Deadlocked);
  auto v = check_balance(r.result.stats);
  REQUIRE(v);
  CHECK(v->channel == "val");
  CHECK(v->enq == 3);
  CHECK(v->pending_demand);
}

TEST_CASE("multispmv: identity, scale 0.5, two iterations") {
  MultiSpmvWorkload w;
  w.matrix = {2, 2, {0, 1, 2}, {0, 1}, floats({1, 1})};
  w.vec = floats({4, 8});
  w.iterations = 2;
  w.scale = 0.5f;
  for (Coupling c : {Coupling::Coupled, Coupling::Decoupled}) {
    auto r = run_kernel(params_for(Kernel::MultiSpmv, c), w, fixed_plan(9));
    REQUIRE(r.result.outcome == Outcome::Completed);
    CHECK(region_floats(r.image, "vec") == std::vector<float>{1, 2});
  }
}

TEST_CASE("multispmv: one iteration at scale 1 matches spmv") {
  auto m = gen_multispmv({31, 140, 1, 1.0f}, 5);
  SpmvWorkload s{m.matrix, m.vec};
  auto a = run_kernel(params_for(Kernel::MultiSpmv, Coupling::Decoupled), m, fixed_plan(20));
  auto b = run_kernel(params_for(Kernel::Spmv, Coupling::Decoupled), s, fixed_plan(20));
  REQUIRE(a.result.outcome == Outcome::Completed);
  REQUIRE(b.result.outcome == Outcome::Completed);
  CHECK(a.image.region("out").words == b.image.region("out").words);
  CHECK(a.image.region("vec").words == b.image.region("out").words);
}

TEST_CASE("mergesort: two sorted runs merge reading each element once") {
  SortWorkload w{{1, 3, 2, 4}};
  for (Kernel k : {Kernel::Mergesort, Kernel::MergesortOpt}) {
    auto r = run_kernel(params_for(k, Coupling::Decoupled), w, fixed_plan(10));
    REQUIRE(r.result.outcome == Outcome::Completed);
    // Two passes; the second holds the [1,3] + [2,4] merge.
    const char* out = k == Kernel::Mergesort ? "result" : "table";
    CHECK(r.image.region(out).words == std::vector<Word>{1, 2, 3, 4});
    const char* i_ch = k == Kernel::Mergesort ? "merge.i" : "even.i";
    const char* j_ch = k == Kernel::Mergesort ? "merge.j" : "even.j";
    CHECK(r.channel(i_ch).enq + r.channel(j_ch).enq == (k == Kernel::Mergesort ? 8 : 4));
  }
}

TEST_CASE("mergesort: a trailing run with no partner issues no j requests") {
  // Pass 0 merges [5] with [6] and copies [7] alone; pass 1 merges [5,6] with [7].
  SortWorkload w{{6, 5, 7}};
  auto r = run_kernel(params_for(Kernel::Mergesort, Coupling::Decoupled), w, fixed_plan(4));
  REQUIRE(r.result.outcome == Outcome::Completed);
  CHECK(r.image.region("result").words == std::vector<Word>{5, 6, 7});
  CHECK(r.channel("merge.i").enq == 2 + 2);
  CHECK(r.channel("merge.j").enq == 1 + 1);
}

TEST_CASE("mergesort: equal keys, and n = 1 runs nothing") {
  SortWorkload dup{{2, 2, 2}};
  auto r = run_kernel(params_for(Kernel::Mergesort, Coupling::Decoupled), dup, fixed_plan(3));
  CHECK(r.image.region("result").words == std::vector<Word>{2, 2, 2});

  SortWorkload one{{42}};
  for (Coupling c : {Coupling::Coupled, Coupling::Decoupled}) {
    auto s = run_kernel(params_for(Kernel::Mergesort, c), one, fixed_plan(3));
    CHECK(s.result.outcome == Outcome::Completed);
    CHECK(s.result.stats.processes.empty());
    CHECK(s.image.region("table").words == std::vector<Word>{42});
    CHECK(s.reads() + s.writes() == 0);
  }
}

TEST_CASE("mergesort: op counts follow the plain and ping-pong formulas") {
  for (std::size_t n : {8u, 64u, 1024u}) {
    const std::uint64_t lg = std::bit_width(n) - 1;
    for (Coupling c : {Coupling::Coupled, Coupling::Decoupled}) {
      auto w = gen_sort(n, n);
      auto plain = run_kernel(params_for(Kernel::Mergesort, c), w, fixed_plan(10));
      auto opt = run_kernel(params_for(Kernel::MergesortOpt, c), w, fixed_plan(10));
      CHECK(plain.reads() == 2 * n * lg - n);
      CHECK(plain.writes() == 2 * n * lg - n);
      CHECK(opt.reads() == n * lg);
      CHECK(opt.writes() == n * lg);
    }
  }
}

TEST_CASE("mergesort: disabling cross-merge prefetch keeps results and costs cycles") {
  auto w = gen_sort(200, 9);
  auto on = params_for(Kernel::Mergesort, Coupling::Decoupled);
  auto off = on;
  off.merge_overlap = false;
  auto a = run_kernel(on, w, fixed_plan(50));
  auto b = run_kernel(off, w, fixed_plan(50));
  REQUIRE(b.result.outcome == Outcome::Completed);
  CHECK(a.image == b.image);
  CHECK(b.result.stats.cycles > a.result.stats.cycles);
}

TEST_CASE("functional equivalence with the oracle across variants and memory models") {
  for (const auto& v : all_variants()) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const Workload w = small_workload(v.kernel, seed);
      const OracleResult want = oracle_execute(v.kernel, w);
      std::vector<MemoryPlan> plans{fixed_plan(1), fixed_plan(37)};
      MemoryPlan jitter = fixed_plan(10);
      jitter.model = MemoryPlan::Model::Jitter;
      jitter.jitter_seed = seed;
      plans.push_back(jitter);
      if (!irregular_regions(v.kernel).empty()) {
        MemoryPlan moms = fixed_plan(100);
        moms.model = MemoryPlan::Model::Moms;
        plans.push_back(moms);
      }
      for (const auto& plan : plans) {
        CAPTURE(to_string(v.kernel));
        CAPTURE(to_string(v.coupling));
        CAPTURE(to_string(plan.model));
        CAPTURE(seed);
        auto p = params_for(v.kernel, v.coupling);
        p.rif = 8;
        p.chunk = 5;
        p.channel_capacity = 6;
        auto r = run_kernel(p, w, plan);
        REQUIRE(r.result.outcome == Outcome::Completed);
        CHECK_FALSE(check_balance(r.result.stats));
        auto diff = r.image.first_difference(want.image);
        CHECK_MESSAGE(!diff, *diff);
        for (const auto& c : want.regions) {
          CAPTURE(c.region);
          CHECK(r.ports.at(c.region).reads == c.loads);
          CHECK(r.ports.at(c.region).writes == c.stores);
        }
        CHECK(r.result.stats.cycles >= want.golden);
      }
    }
  }
}

TEST_CASE("pointer chase: RIF = 1 is sequential and RIF = latency is faster") {
  auto w = gen_search({5000, 200, 0.5}, 4);
  auto p = params_for(Kernel::Binsearch, Coupling::Decoupled);
  p.rif = 1;
  auto seq = run_kernel(p, w, fixed_plan(100));
  p.rif = 100;
  auto par = run_kernel(p, w, fixed_plan(100));
  const auto dep = oracle_execute(Kernel::Binsearch, w).at("array").dependent_loads;
  CHECK(seq.result.stats.cycles >= dep * 100);
  CHECK(par.result.stats.cycles <= seq.result.stats.cycles);
  CHECK(par.image == seq.image);
}

TEST_CASE("pointer chase: the fixed-trip search reads more than the early-exit one") {
  auto w = gen_search({4096, 300, 0.9}, 8);
  auto rif = run_kernel(params_for(Kernel::Binsearch, Coupling::Decoupled), w, fixed_plan(100));
  auto chunked = run_kernel(params_for(Kernel::BinsearchFor, Coupling::DecoupledChunked), w, fixed_plan(100));
  CHECK(chunked.image == rif.image);
  CHECK(chunked.ports.at("array").reads == 300u * chase_iterations(4096));
  CHECK(chunked.ports.at("array").reads > rif.ports.at("array").reads);
}

TEST_CASE("pointer chase: chunk size 1 runs one element at a time") {
  auto w = gen_search({1000, 20, 1.0}, 2);
  auto p = params_for(Kernel::BinsearchFor, Coupling::DecoupledChunked);
  p.chunk = 1;
  auto r = run_kernel(p, w, fixed_plan(50));
  REQUIRE(r.result.outcome == Outcome::Completed);
  CHECK(r.result.stats.cycles >= 20u * chase_iterations(1000) * 50);
  CHECK(r.channel("array").peak == 1);
}

TEST_CASE("pointer chase: a chain longer than the fixed trip count faults") {
  // Bucket 0 holds a chain of eight entries; the chunked chase allows
  // bit_width(32 words) = 6 loads.
  HashWorkload h;
  h.bucket_count = 1;
  for (Word e = 0; e < 8; ++e) {
    const Word next = e + 1 < 8 ? e + 1 : kNil;
    h.entries.insert(h.entries.end(), {100 + e, 200 + e, next, 0});
  }
  h.keys = {107};
  World w(make_image(h), 0);
  KernelParams p = params_for(Kernel::Hashtable, Coupling::DecoupledChunked);
  detail::KernelContext cx{w, p, {}};
  const auto& regions = w.memory().regions();
  for (std::size_t i = 0; i < regions.size(); ++i)
    cx.ports.emplace(regions[i].name, w.add_port(regions[i].name, testing::fixed(5), {from_index<RegionId>(i)}));
  detail::build_chase(cx, hashtable_chase(cx.base("entries"), 1), 1);
  CHECK_THROWS_AS(w.run_until_quiescent(10'000), SimFault);
}

TEST_CASE("pointer chase: a one-entry chain takes one wide load") {
  HashWorkload h;
  h.bucket_count = 2;
  h.entries = {10, 77, kNil, 0, kNil, 0, kNil, 0};
  h.keys = {10};
  REQUIRE(h.bucket_of(10) == 0);
  for (Coupling c : {Coupling::Coupled, Coupling::Decoupled}) {
    auto r = run_kernel(params_for(Kernel::Hashtable, c), h, fixed_plan(10));
    CHECK(r.ports.at("entries").reads == 1);
    CHECK(r.image.region("result").words == std::vector<Word>{77});
  }
}

TEST_CASE("pointer chase: requesting past the end condition unbalances the loop") {
  auto w = gen_search({100, 10, 1.0}, 1);
  auto p = params_for(Kernel::Binsearch, Coupling::Decoupled);
  p.fault_skip_continue = true;
  auto r = run_kernel(p, w, fixed_plan(10));
  CHECK(r.result.outcome == Outcome::Deadlocked);
  auto v = check_balance(r.result.stats);
  REQUIRE(v);
  CHECK(v->channel == "array");
}

TEST_CASE("build_world: configuration errors") {
  auto s = gen_sort(10, 1);
  auto p = params_for(Kernel::Spmv, Coupling::Decoupled);
  CHECK_THROWS_AS(build_world(p, s, fixed_plan(1)), ConfigError);
  p = params_for(Kernel::Mergesort, Coupling::Decoupled);
  MemoryPlan moms = fixed_plan(1);
  moms.model = MemoryPlan::Model::Moms;
  CHECK_THROWS_AS(build_world(p, s, moms), ConfigError);
  p.rif = 0;
  CHECK_THROWS_AS(build_world(p, s, fixed_plan(1)), ConfigError);
  p = params_for(Kernel::Hashtable, Coupling::DecoupledChunked);
  CHECK_THROWS_AS(build_world(p, gen_hash({64, 8, 4}, 1), fixed_plan(1)), ConfigError);
}

TEST_CASE("the imbalanced probe deadlocks and the store loop overlaps") {
  auto s = gen_sort(50, 1);
  auto r = run_kernel(params_for(Kernel::Imbalanced, Coupling::Decoupled), s, fixed_plan(100), 10'000);
  CHECK(r.result.outcome == Outcome::Deadlocked);
  CHECK(r.result.stats.cycles < 10'000);

  auto ov = params_for(Kernel::StoreLoop, Coupling::Decoupled);
  auto seq = ov;
  seq.store_overlap = false;
  auto a = run_kernel(ov, s, fixed_plan(100));
  auto b = run_kernel(seq, s, fixed_plan(100));
  CHECK(a.result.stats.cycles <= 50 + 100 + 10);
  CHECK(b.result.stats.cycles >= 50 * 100);
  CHECK(a.image == oracle_execute(Kernel::StoreLoop, s).image);
}
