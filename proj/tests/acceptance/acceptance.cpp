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


// Acceptance checks. Each criterion prints one PASS or FAIL line and the
// process exits non-zero when any selected criterion fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "daesim/cli.hpp"
#include "daesim/generate.hpp"

using namespace daesim;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
  void note(const std::string& s) {
    if (pass) detail += (detail.empty() ? "" : "; ") + s;
  }
};

struct Criterion {
  int id;
  const char* title;
  std::function<Verdict()> check;
};

MemoryPlan fixed(Cycle latency) {
  MemoryPlan p;
  p.fixed = {latency, latency, 256};
  return p;
}
MemoryPlan moms() {
  MemoryPlan p = fixed(100);
  p.model = MemoryPlan::Model::Moms;
  return p;
}

struct Sim {
  SimResult res;
  MemoryImage image;
  std::uint64_t reads = 0, writes = 0;
};

Sim simulate(const KernelParams& p, const Workload& w, const MemoryPlan& plan, Cycle max_cycles = 500'000'000) {
  auto built = build_world(p, w, plan, 1);
  Sim s{built.world->run_until_quiescent(max_cycles), built.world->memory()};
  for (const auto& port : s.res.stats.ports) s.reads += port.reads, s.writes += port.writes;
  return s;
}

KernelParams params(Kernel k, Coupling c) {
  KernelParams p;
  p.kernel = k;
  p.coupling = c;
  return p;
}

std::vector<Coupling> couplings_of(Kernel k) {
  if (k == Kernel::BinsearchFor) return {Coupling::Coupled, Coupling::DecoupledChunked};
  return {Coupling::Coupled, Coupling::Decoupled};
}

bool moms_legal(Kernel k) { return !irregular_regions(k).empty(); }

std::string desk_of(Kernel k) { return "desk/" + std::string(to_string(k)); }
std::string tag(Kernel k, Coupling c, const MemoryPlan& m) {
  return fmt::format("{}/{}/{}", to_string(k), to_string(c), to_string(m.model));
}

bool is_pointer_chase(Kernel k) {
  return k == Kernel::Binsearch || k == Kernel::BinsearchFor || k == Kernel::Hashtable;
}

// 1
Verdict functional_equivalence() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  int runs = 0;
  for (Kernel k : benchmark_kernels()) {
    const Workload w = make_preset(desk_of(k), 1);
    const OracleResult want = oracle_execute(k, w);
    std::vector<MemoryPlan> plans{fixed(100)};
    if (moms_legal(k)) plans.push_back(moms());
    for (Coupling c : couplings_of(k))
      for (const auto& plan : plans) {
        ++runs;
        const Sim s = simulate(params(k, c), w, plan);
        if (s.res.outcome != Outcome::Completed) v.fail(tag(k, c, plan) + " ended " + std::string(to_string(s.res.outcome)));
        else if (auto d = s.image.first_difference(want.image)) v.fail(tag(k, c, plan) + ": " + *d);
      }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 120) v.fail(fmt::format("took {:.1f} s, limit 120 s", secs));
  v.note(fmt::format("{} runs bit-exact against the oracle in {:.1f} s", runs, secs));
  return v;
}

// 2
Verdict spmv_golden() {
  Verdict v;
  Rng rng(2024);
  for (int i = 0; i < 20; ++i) {
    const auto rows = static_cast<std::uint32_t>(1 + rng.below(2000));
    const auto cols = static_cast<std::uint32_t>(1 + rng.below(5000));
    const std::size_t nnz = rng.below(std::min<std::uint64_t>(30'000, std::uint64_t{rows} * cols) + 1);
    SpmvWorkload w{gen_csr(rows, cols, nnz, rng), std::vector<Word>(cols, std::bit_cast<Word>(1.0f))};
    const Cycle g = golden_cycles(Kernel::Spmv, w);
    if (g != nnz) v.fail(fmt::format("{}x{} nnz={} golden={}", rows, cols, nnz, g));
  }
  v.note("golden == nnz for 20 random matrices");
  return v;
}

// 3
Verdict mergesort_formula() {
  Verdict v;
  for (std::size_t n : {8u, 64u, 1024u}) {
    const std::uint64_t lg = std::bit_width(n) - 1;
    const std::uint64_t plain = 2 * n * lg - n, opt = n * lg;
    const Workload w = gen_sort(n, n);
    for (Coupling c : {Coupling::Coupled, Coupling::Decoupled}) {
      const Sim a = simulate(params(Kernel::Mergesort, c), w, fixed(100));
      const Sim b = simulate(params(Kernel::MergesortOpt, c), w, fixed(100));
      if (a.reads != plain || a.writes != plain)
        v.fail(fmt::format("plain n={} {}: loads={} stores={} want {}", n, to_string(c), a.reads, a.writes, plain));
      if (b.reads != opt || b.writes != opt)
        v.fail(fmt::format("opt n={} {}: loads={} stores={} want {}", n, to_string(c), b.reads, b.writes, opt));
    }
  }
  const Workload big = gen_sort(4096, 1);
  const Sim a = simulate(params(Kernel::Mergesort, Coupling::Decoupled), big, fixed(100));
  const Sim b = simulate(params(Kernel::MergesortOpt, Coupling::Decoupled), big, fixed(100));
  const double ratio = static_cast<double>(a.res.stats.cycles) / static_cast<double>(b.res.stats.cycles);
  if (ratio < 1.7 || ratio > 2.1) v.fail(fmt::format("opt/plain cycle ratio {:.3f} outside [1.7, 2.1]", ratio));
  v.note(fmt::format("loads and stores each match 2n*log2(n)-n and n*log2(n) for n in 8, 64, 1024; "
                     "n=4096 ratio {:.3f} ({} vs {} cycles)",
                     ratio, a.res.stats.cycles, b.res.stats.cycles));
  return v;
}

// 4
Verdict golden_bound() {
  Verdict v;
  int runs = 0;
  for (const char* scale : {"desk", "paper"})
    for (Kernel k : benchmark_kernels()) {
      const Workload w = make_preset(std::string(scale) + "/" + std::string(to_string(k)), 1);
      const Cycle g = golden_cycles(k, w);
      std::vector<MemoryPlan> plans{fixed(1), fixed(100)};
      if (moms_legal(k)) plans.push_back(moms());
      for (Coupling c : couplings_of(k))
        for (const auto& plan : plans) {
          ++runs;
          const Sim s = simulate(params(k, c), w, plan);
          if (s.res.stats.cycles < g)
            v.fail(fmt::format("{} {}: {} cycles < golden {}", scale, tag(k, c, plan), s.res.stats.cycles, g));
        }
    }
  v.note(fmt::format("sim >= golden in {} runs (desk and paper presets, latency 1 and 100, MOMS)", runs));
  return v;
}

// 5
Verdict latency_hiding() {
  Verdict v;
  auto check = [&](Kernel k, Coupling c, double limit) {
    const Workload w = make_preset(desk_of(k), 1);
    auto p = params(k, c);
    p.chunk = 128;
    p.rif = 128;
    const Sim s = simulate(p, w, fixed(100));
    const auto ov = overhead(std::string(to_string(k)), s.res.stats.cycles, golden_cycles(k, w));
    if (!ov.overhead_pct || *ov.overhead_pct > limit)
      v.fail(fmt::format("{} overhead {:.1f}% > {:.0f}%", to_string(k), ov.overhead_pct.value_or(-1), limit));
    v.note(fmt::format("{} {:.1f}% (limit {:.0f}%)", to_string(k), *ov.overhead_pct, limit));
  };
  check(Kernel::BinsearchFor, Coupling::DecoupledChunked, 25);
  check(Kernel::Hashtable, Coupling::Decoupled, 30);
  return v;
}

// 6
Verdict decoupled_speedup() {
  Verdict v;
  for (Kernel k : {Kernel::Binsearch, Kernel::BinsearchFor, Kernel::Hashtable}) {
    const Workload w = make_preset(desk_of(k), 1);
    const auto cs = couplings_of(k);
    const Sim base = simulate(params(k, cs[0]), w, fixed(100));
    const Sim dec = simulate(params(k, cs[1]), w, fixed(100));
    const double s = static_cast<double>(base.res.stats.cycles) / static_cast<double>(dec.res.stats.cycles);
    if (s < 20) v.fail(fmt::format("{} speedup {:.2f} < 20", to_string(k), s));
    v.note(fmt::format("{} {:.1f}x", to_string(k), s));
  }
  return v;
}

// 7
Verdict coupled_bound() {
  Verdict v;
  for (const char* scale : {"desk", "paper"})
    for (Kernel k : benchmark_kernels()) {
      if (!is_pointer_chase(k)) continue;
      const Workload w = make_preset(std::string(scale) + "/" + std::string(to_string(k)), 1);
      const std::uint64_t dep = oracle_execute(k, w).dependent_loads();
      for (Cycle lat : {1u, 10u, 100u}) {
        const Sim s = simulate(params(k, Coupling::Coupled), w, fixed(lat));
        if (s.res.stats.cycles < dep * lat)
          v.fail(fmt::format("{} {} L={}: {} < {}", scale, to_string(k), lat, s.res.stats.cycles, dep * lat));
        else if (lat == 100)
          v.note(fmt::format("{}/{} {} >= {}", scale, to_string(k), s.res.stats.cycles, dep * lat));
      }
    }
  return v;
}

// 8
Verdict moms_conservation() {
  Verdict v;
  MemoryImage mem;
  const std::size_t lines = 1000, k = 3;  // well inside the cache
  const Addr base = mem.region(mem.add_region("m", lines * 16)).base;
  MomsModel m{MomsConfig{}};
  std::vector<Addr> trace;
  for (std::size_t l = 0; l < lines; ++l)
    for (std::size_t t = 0; t < k; ++t) trace.push_back(base + 64 * l + 4 * ((l * 7 + t * 5) % 16));
  std::mt19937_64 rng(8);
  std::shuffle(trace.begin(), trace.end(), rng);

  std::size_t next = 0;
  std::uint64_t responses = 0;
  std::uint32_t worst = 0;
  std::vector<MemResponse> out;
  for (Cycle c = 0; c < 1'000'000 && responses < trace.size(); ++c) {
    if (next < trace.size()) {
      MemRequest req{AxiId{static_cast<std::uint16_t>(next % 8)}, MemKind::Read, trace[next], 1, 0, c, 0, next};
      if (m.can_accept(req)) m.issue(req), ++next;
    }
    out.clear();
    m.service(c, ServicePhase::Writes, mem, out);
    m.service(c, ServicePhase::Reads, mem, out);
    responses += out.size();
    worst = std::max(worst, m.external_in_flight());
    if (m.external_in_flight() > 64) v.fail(fmt::format("cycle {}: {} external reads in flight", c, m.external_in_flight()));
  }
  if (responses != trace.size()) v.fail(fmt::format("{} responses for {} requests", responses, trace.size()));
  if (m.external_fetches() != lines) v.fail(fmt::format("{} external fetches for {} distinct lines", m.external_fetches(), lines));

  // The same bound seen from whole-kernel runs.
  for (Kernel kk : {Kernel::Binsearch, Kernel::Hashtable, Kernel::Spmv}) {
    const Sim s = simulate(params(kk, Coupling::Decoupled), make_preset(desk_of(kk), 1), moms());
    for (const auto& p : s.res.stats.ports)
      for (const auto& [name, value] : p.counters)
        if (name == "peak_external_in_flight" && value > 64)
          v.fail(fmt::format("{} port {} peaked at {} external reads", to_string(kk), p.name, value));
  }
  v.note(fmt::format("{} requests over {} lines: {} fetches, peak {} external reads", trace.size(), lines,
                     m.external_fetches(), worst));
  return v;
}

// 9
Verdict store_observability() {
  Verdict v;
  const std::size_t n = 1000;
  const Cycle lat = 100;
  const Workload w = gen_sort(n, 1);
  auto p = params(Kernel::StoreLoop, Coupling::Decoupled);
  const Sim overlap = simulate(p, w, fixed(lat));
  p.store_overlap = false;
  const Sim serial = simulate(p, w, fixed(lat));
  if (overlap.res.stats.cycles > n + lat + 10)
    v.fail(fmt::format("overlapped loop took {} > {}", overlap.res.stats.cycles, n + lat + 10));
  if (serial.res.stats.cycles < n * lat)
    v.fail(fmt::format("serial loop took {} < {}", serial.res.stats.cycles, n * lat));
  v.note(fmt::format("n={} L={}: overlapped {} cycles, serial {} cycles", n, lat, overlap.res.stats.cycles,
                     serial.res.stats.cycles));
  return v;
}

// 10
Verdict table_arithmetic() {
  struct Cell {
    const char* row;
    const char* column;
    Cycle cycles;
    double path_ns;
    double time_us;
  };
  // Reference cycles, critical path (ns) and time (us) per kernel and implementation.
  static const Cell cells[] = {
      {"binsearch", "Vitis", 2298439, 7.62, 17507.21},
      {"binsearch", "Vitis Decoupled", 65091, 6.88, 447.7},
      {"binsearch", "R-HLS", 2039174, 9.44, 19243.69},
      {"binsearch", "R-HLS Stream", 21364, 12.51, 267.22},
      {"binsearch", "R-HLS Decoupled", 21354, 12.16, 259.71},
      {"binsearch_for", "Vitis", 2357243, 7.05, 16620.92},
      {"binsearch_for", "Vitis Decoupled", 83937, 8.77, 736.21},
      {"binsearch_for", "R-HLS", 2163106, 9.29, 20101.74},
      {"binsearch_for", "R-HLS Stream", 22230, 9.14, 203.25},
      {"binsearch_for", "R-HLS Decoupled", 22206, 9.53, 211.67},
      {"hashtable", "Vitis", 1953903, 6.57, 12829.33},
      {"hashtable", "Vitis Decoupled", 53887, 5.87, 316.26},
      {"hashtable", "R-HLS", 1687760, 9.08, 15331.61},
      {"hashtable", "R-HLS Stream", 19292, 10.8, 208.35},
      {"hashtable", "R-HLS Decoupled", 19086, 10.47, 199.85},
      {"mergesort", "Vitis", 259157, 7.95, 2060.04},
      {"mergesort", "Vitis Decoupled", 145423, 8.99, 1307.64},
      {"mergesort", "R-HLS", 199862, 9.83, 1964.24},
      {"mergesort", "R-HLS Decoupled", 7038, 9.44, 66.44},
      {"mergesort_opt", "R-HLS Decoupled", 3960, 9.6, 38},
      {"multispmv", "Vitis", 348343, 8.53, 2969.62},
      {"multispmv", "Vitis Decoupled", 60243, 8.54, 514.48},
      {"multispmv", "R-HLS", 71214, 13.84, 985.25},
      {"multispmv", "R-HLS Stream", 32218, 13.68, 440.84},
      {"multispmv", "R-HLS Decoupled", 21904, 13.46, 294.78},
      {"spmv", "Vitis", 286379, 8.62, 2467.73},
      {"spmv", "Vitis Decoupled", 55071, 8.58, 472.51},
      {"spmv", "R-HLS", 18644, 14, 261.03},
      {"spmv", "R-HLS Stream", 17532, 13.42, 235.31},
      {"spmv", "R-HLS Decoupled", 17530, 13.56, 237.69},
  };
  Verdict v;
  int misses = 0;
  double worst = 0;
  std::string worst_cell;
  for (const auto& c : cells) {
    // Through the comparison path, as the report renders it.
    const double t = *compare_cycles(c.cycles, c.path_ns, c.cycles, c.path_ns).baseline_time_us;
    const double err = std::abs(t - c.time_us);
    if (err > 0.1) ++misses;
    if (err > worst) worst = err, worst_cell = fmt::format("{} {}: {:.2f} vs {:.2f}", c.row, c.column, t, c.time_us);
  }
  if (misses > 0)
    v.fail(fmt::format("{} of {} time cells off by more than 0.1 us (worst {})", misses, std::size(cells), worst_cell));
  const Comparison cmp = compare_cycles(2298439, 7.62, 21354, 12.16);
  if (std::abs(*cmp.time_speedup - 67.41) > 0.01)
    v.fail(fmt::format("binsearch time speedup {:.4f}, reference 67.41", *cmp.time_speedup));
  v.note(fmt::format("all {} time cells within 0.1 us, speedup {:.2f}", std::size(cells), *cmp.time_speedup));
  return v;
}

// 11
Verdict deadlock_detection() {
  Verdict v;
  const Sim s = simulate(params(Kernel::Imbalanced, Coupling::Decoupled), gen_sort(64, 1), fixed(100), 10'000);
  if (s.res.outcome != Outcome::Deadlocked)
    v.fail("outcome " + std::string(to_string(s.res.outcome)));
  else if (s.res.stats.cycles >= 10'000)
    v.fail(fmt::format("took {} cycles", s.res.stats.cycles));
  const auto b = check_balance(s.res.stats);
  if (!b) v.fail("no balance violation reported");
  v.note(fmt::format("deadlock after {} cycles; {}", s.res.stats.cycles, b ? b->message() : ""));
  return v;
}

// 12
Verdict determinism() {
  Verdict v;
  std::vector<RunConfig> cfgs;
  for (Kernel k : benchmark_kernels()) {
    for (auto model : {MemoryPlan::Model::Fixed, MemoryPlan::Model::Jitter, MemoryPlan::Model::Moms}) {
      if (model == MemoryPlan::Model::Moms && !moms_legal(k)) continue;
      RunConfig c;
      c.params = params(k, couplings_of(k)[1]);
      c.workload.preset = desk_of(k);
      c.workload.seed = 7;
      c.seed = 7;
      c.memory.model = model;
      c.memory.jitter_seed = 7;
      c.mem_log = true;
      c.name = tag(k, c.params.coupling, c.memory);
      cfgs.push_back(c);
    }
  }
  const auto root = std::filesystem::temp_directory_path() / fmt::format("daesim_determinism_{}", ::getpid());
  write_run_outputs(root / "a", run_all(cfgs, 4));
  write_run_outputs(root / "b", run_all(cfgs, 1));
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(root / "a")) {
    auto slurp = [](const std::filesystem::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream os;
      os << in.rdbuf();
      return os.str();
    };
    ++files;
    if (slurp(e.path()) != slurp(root / "b" / e.path().filename())) v.fail(e.path().filename().string() + " differs");
  }
  std::filesystem::remove_all(root);
  v.note(fmt::format("{} runs, {} output files byte-identical across repeats", cfgs.size(), files));
  return v;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "functional equivalence with the oracle", functional_equivalence},
      {2, "spmv golden equals nnz", spmv_golden},
      {3, "mergesort op counts and opt speedup", mergesort_formula},
      {4, "golden lower bound", golden_bound},
      {5, "latency hiding for pointer chasing", latency_hiding},
      {6, "decoupled speedup over coupled", decoupled_speedup},
      {7, "coupled latency lower bound", coupled_bound},
      {8, "MOMS conservation and outstanding bound", moms_conservation},
      {9, "store observability with overlap", store_observability},
      {10, "time arithmetic of the reference table", table_arithmetic},
      {11, "deadlock detection", deadlock_detection},
      {12, "determinism of CSV output", determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criterion number (repeatable); default all");
  CLI11_PARSE(app, argc, argv);
  init_logging();

  bool ok = true;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << "): " << v.detail
              << std::endl;
    ok = ok && v.pass;
  }
  return ok ? 0 : 1;
}
