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


#include "daesim/oracle.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace daesim {

namespace {

// Counts accesses while a kernel runs straight-line over the image.
class Recorder {
 public:
  explicit Recorder(MemoryImage img) : img_(std::move(img)) {
    for (const auto& r : img_.regions()) counts_.push_back({r.name, 0, 0, 0});
    phase_.assign(counts_.size(), 0);
  }

  Word load(std::string_view region, std::uint64_t idx, bool dependent = false) {
    const std::size_t r = index(region);
    count_load(r, dependent);
    return img_.region(region).words.at(idx);
  }
  // One request returning `words` consecutive words.
  std::vector<Word> load_wide(std::string_view region, std::uint64_t idx, unsigned words, bool dependent) {
    const std::size_t r = index(region);
    count_load(r, dependent);
    const auto& v = img_.region(region).words;
    if (idx + words > v.size()) throw SimFault("oracle: wide load past region end");
    return {v.begin() + static_cast<std::ptrdiff_t>(idx), v.begin() + static_cast<std::ptrdiff_t>(idx + words)};
  }
  void store(std::string_view region, std::uint64_t idx, Word value) {
    ++counts_[index(region)].stores;
    img_.region(region).words.at(idx) = value;
  }
  void end_phase() {
    golden_ += *std::max_element(phase_.begin(), phase_.end());
    std::fill(phase_.begin(), phase_.end(), 0);
  }

  OracleResult finish(Kernel k) && {
    end_phase();
    return OracleResult{k, std::move(img_), std::move(counts_), golden_};
  }

 private:
  std::size_t index(std::string_view region) const {
    for (std::size_t i = 0; i < counts_.size(); ++i)
      if (counts_[i].region == region) return i;
    throw SimFault("oracle: no region '" + std::string(region) + "'");
  }
  void count_load(std::size_t r, bool dependent) {
    ++counts_[r].loads;
    if (!dependent) return;
    ++counts_[r].dependent_loads;
    ++phase_[r];
  }

  MemoryImage img_;
  std::vector<RegionCount> counts_;
  std::vector<std::uint64_t> phase_;
  Cycle golden_ = 0;
};

void run_search(Recorder& rec, const SearchWorkload& w, bool fixed_trip) {
  const std::uint64_t n = w.array.size();
  const unsigned trip = static_cast<unsigned>(std::bit_width(n));
  for (std::uint64_t q = 0; q < w.keys.size(); ++q) {
    const Word key = rec.load("keys", q);
    std::uint64_t lo = 0, hi = n;
    std::optional<std::uint64_t> found;
    unsigned probes = 0;
    while (!found && lo < hi) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      const Word v = rec.load("array", mid, true);
      ++probes;
      if (v == key) found = mid;
      else if (v < key) lo = mid + 1;
      else hi = mid;
    }
    if (fixed_trip) {
      if (probes > trip) throw SimFault("oracle: search exceeded its fixed trip count");
      // The fixed-trip loop keeps loading after the answer is known; the
      // repeated probe re-reads the final midpoint.
      const std::uint64_t last = found ? *found : std::min(lo, n - 1);
      for (; probes < trip; ++probes) rec.load("array", last, true);
    }
    rec.store("result", q, found ? static_cast<Word>(*found) : kNil);
  }
}

void run_hash(Recorder& rec, const HashWorkload& w) {
  for (std::uint64_t q = 0; q < w.keys.size(); ++q) {
    const Word key = rec.load("keys", q);
    std::uint64_t idx = w.bucket_of(key);
    Word out = kNil;
    for (std::uint64_t steps = 0;; ++steps) {
      if (steps > w.entry_count()) throw SimFault("oracle: hash chain has a cycle");
      auto e = rec.load_wide("entries", idx * HashWorkload::kEntryWords, HashWorkload::kEntryWords, true);
      if (e[0] == key) {
        out = e[1];
        break;
      }
      if (e[2] == kNil) break;
      idx = e[2];
    }
    rec.store("result", q, out);
  }
}

void run_sort(Recorder& rec, std::uint64_t n, bool pingpong) {
  std::string src = "table", dst = "result";
  for (std::uint64_t w = 1; w < n; w *= 2) {
    for (std::uint64_t l = 0; l < n; l += 2 * w) {
      const std::uint64_t mid = std::min(l + w, n), end = std::min(l + 2 * w, n);
      std::uint64_t i = l, j = mid;
      Word a = 0, b = 0;  // current head of each run, loaded once
      bool have_a = false, have_b = false;
      for (std::uint64_t k = l; k < end; ++k) {
        if (!have_a && i < mid) a = rec.load(src, i, true), have_a = true;
        if (!have_b && j < end) b = rec.load(src, j, true), have_b = true;
        if (have_a && (!have_b || a <= b)) {
          rec.store(dst, k, a);
          have_a = false;
          ++i;
        } else {
          rec.store(dst, k, b);
          have_b = false;
          ++j;
        }
      }
    }
    rec.end_phase();
    if (pingpong) {
      std::swap(src, dst);
    } else if (2 * w < n) {
      for (std::uint64_t k = 0; k < n; ++k) rec.store("table", k, rec.load("result", k));
    }
  }
}

void run_spmv(Recorder& rec, const CsrMatrix& m) {
  Word end = rec.load("rows", 0);
  for (std::uint32_t r = 0; r < m.n_rows; ++r) {
    const Word begin = end;
    end = rec.load("rows", r + 1);
    float acc = 0.0f;
    for (Word j = begin; j < end; ++j) {
      const float a = std::bit_cast<float>(rec.load("val", j));
      const Word c = rec.load("cols", j);
      const float x = std::bit_cast<float>(rec.load("vec", c, true));
      const float prod = a * x;
      acc = acc + prod;
    }
    rec.store("out", r, std::bit_cast<Word>(acc));
  }
}

}  // namespace

const RegionCount& OracleResult::at(std::string_view region) const {
  for (const auto& r : regions)
    if (r.region == region) return r;
  throw ConfigError("oracle has no region '" + std::string(region) + "'");
}

std::uint64_t OracleResult::loads() const noexcept {
  std::uint64_t s = 0;
  for (const auto& r : regions) s += r.loads;
  return s;
}
std::uint64_t OracleResult::stores() const noexcept {
  std::uint64_t s = 0;
  for (const auto& r : regions) s += r.stores;
  return s;
}
std::uint64_t OracleResult::dependent_loads() const noexcept {
  std::uint64_t s = 0;
  for (const auto& r : regions) s += r.dependent_loads;
  return s;
}

OracleResult oracle_execute(Kernel kernel, const Workload& workload) {
  if (kind_of(workload) != workload_kind(kernel))
    throw ConfigError("oracle: kernel " + std::string(to_string(kernel)) + " does not run on a " +
                      std::string(to_string(kind_of(workload))) + " workload");
  validate(workload);
  Recorder rec(make_image(workload));
  switch (kernel) {
    case Kernel::Binsearch:
    case Kernel::BinsearchFor:
      run_search(rec, std::get<SearchWorkload>(workload), kernel == Kernel::BinsearchFor);
      break;
    case Kernel::Hashtable: run_hash(rec, std::get<HashWorkload>(workload)); break;
    case Kernel::Mergesort:
    case Kernel::MergesortOpt:
      run_sort(rec, std::get<SortWorkload>(workload).table.size(), kernel == Kernel::MergesortOpt);
      break;
    case Kernel::Spmv: run_spmv(rec, std::get<SpmvWorkload>(workload).matrix); break;
    case Kernel::MultiSpmv: {
      const auto& w = std::get<MultiSpmvWorkload>(workload);
      for (std::uint32_t t = 0; t < w.iterations; ++t) {
        run_spmv(rec, w.matrix);
        rec.end_phase();
        for (std::uint32_t i = 0; i < w.matrix.n_rows; ++i) {
          const float v = std::bit_cast<float>(rec.load("out", i));
          rec.store("vec", i, std::bit_cast<Word>(v * w.scale));
        }
      }
      break;
    }
    case Kernel::Imbalanced: {
      const auto& t = std::get<SortWorkload>(workload).table;
      if (!t.empty()) rec.load("table", 0);
      break;
    }
    case Kernel::StoreLoop: {
      const std::uint64_t n = std::get<SortWorkload>(workload).table.size();
      for (std::uint64_t i = 0; i < n; ++i) rec.store("result", i, static_cast<Word>(i * 3 + 1));
      break;
    }
  }
  return std::move(rec).finish(kernel);
}

Cycle golden_cycles(Kernel kernel, const Workload& workload) { return oracle_execute(kernel, workload).golden; }

std::string BalanceViolation::message() const {
  std::ostringstream os;
  os << "channel '" << channel << "' unbalanced: enq=" << enq << " deq=" << deq << " in_flight=" << in_flight;
  if (pending_demand) os << ", consumer still waiting on it";
  return os.str();
}

std::optional<BalanceViolation> check_balance(const SimStats& stats) {
  for (const auto& c : stats.channels)
    if (c.enq != c.deq || c.in_flight != 0 || c.pending_demand)
      return BalanceViolation{c.name, c.enq, c.deq, c.in_flight, c.pending_demand};
  return std::nullopt;
}

OverheadReport overhead(std::string kernel, Cycle sim, Cycle golden) {
  OverheadReport r{std::move(kernel), sim, golden, std::nullopt, sim < golden};
  if (golden > 0) r.overhead_pct = 100.0 * (static_cast<double>(sim) - static_cast<double>(golden)) / static_cast<double>(golden);
  return r;
}

std::string oracle_csv(const OracleResult& r) {
  std::ostringstream os;
  os << "kernel,region,loads,stores,dependent_loads,golden_cycles\n";
  for (const auto& c : r.regions)
    os << to_string(r.kernel) << ',' << c.region << ',' << c.loads << ',' << c.stores << ',' << c.dependent_loads
       << ',' << r.golden << '\n';
  return os.str();
}

}  // namespace daesim
