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


#include "daesim/generate.hpp"

#include <algorithm>
#include <unordered_set>

namespace daesim {

namespace {

// Floyd's sampling of k distinct values from [0, n), returned sorted.
std::vector<std::uint64_t> distinct_sorted(std::uint64_t n, std::size_t k, Rng& rng) {
  std::unordered_set<std::uint64_t> picked;
  picked.reserve(k * 2);
  for (std::uint64_t j = n - k; j < n; ++j) {
    std::uint64_t t = rng.below(j + 1);
    if (!picked.insert(t).second) picked.insert(j);
  }
  std::vector<std::uint64_t> out(picked.begin(), picked.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SearchWorkload gen_search(const SearchSpec& spec, std::uint64_t seed) {
  if (spec.elements < 1) throw ConfigError("search: elements must be >= 1");
  if (spec.hit_fraction < 0.0 || spec.hit_fraction > 1.0) throw ConfigError("search: hit_fraction must be in [0, 1]");
  Rng rng(seed);
  SearchWorkload w;
  w.array.resize(spec.elements);
  Word v = static_cast<Word>(rng.below(16));
  for (auto& a : w.array) {
    a = v;
    v += 1 + static_cast<Word>(rng.below(8));
  }
  if (v < w.array.back()) throw ConfigError("search: array too large for 32-bit values");
  const auto hit_cut = static_cast<std::uint64_t>(spec.hit_fraction * 1e6);
  w.keys.resize(spec.keys);
  for (auto& k : w.keys) {
    const std::size_t i = rng.below(spec.elements);
    if (rng.below(1000000) < hit_cut) {
      k = w.array[i];
    } else {
      // Largest value is always followed by a gap; otherwise step past one.
      std::size_t j = i;
      while (j + 1 < spec.elements && w.array[j + 1] == w.array[j] + 1) ++j;
      k = w.array[j] + 1;
    }
  }
  return w;
}

HashWorkload gen_hash(const HashSpec& spec, std::uint64_t seed) {
  if (spec.buckets == 0 || (spec.buckets & (spec.buckets - 1)) != 0)
    throw ConfigError("hash: buckets must be a power of two");
  if (spec.entries < spec.buckets) throw ConfigError("hash: entries must be >= buckets");
  Rng rng(seed);
  HashWorkload w;
  w.bucket_count = spec.buckets;

  std::unordered_set<Word> used;
  std::vector<std::vector<Word>> chains(spec.buckets);
  for (std::size_t i = 0; i < spec.entries; ++i) {
    Word k;
    do k = static_cast<Word>(rng.below(kNil));
    while (!used.insert(k).second);
    chains[w.bucket_of(k)].push_back(k);
  }
  std::size_t nonempty = 0;
  for (const auto& c : chains) nonempty += c.empty() ? 0 : 1;
  const std::size_t overflow = spec.entries - nonempty;
  std::vector<Word> slots(overflow);
  for (std::size_t i = 0; i < overflow; ++i) slots[i] = static_cast<Word>(spec.buckets + i);
  rng.shuffle(slots);

  const std::size_t total = spec.buckets + overflow;
  w.entries.assign(total * HashWorkload::kEntryWords, 0);
  for (std::size_t e = 0; e < total; ++e) {
    w.entries[4 * e] = kNil;
    w.entries[4 * e + 2] = kNil;
  }
  std::size_t next_slot = 0;
  std::vector<std::uint32_t> filled;
  for (std::uint32_t b = 0; b < spec.buckets; ++b) {
    if (chains[b].empty()) continue;
    filled.push_back(b);
    std::size_t cur = b;
    for (std::size_t i = 0; i < chains[b].size(); ++i) {
      w.entries[4 * cur] = chains[b][i];
      w.entries[4 * cur + 1] = static_cast<Word>(rng.below(kNil));
      if (i + 1 < chains[b].size()) {
        const Word nxt = slots[next_slot++];
        w.entries[4 * cur + 2] = nxt;
        cur = nxt;
      }
    }
  }
  rng.shuffle(filled);
  for (std::size_t i = 0; i < spec.lookups; ++i) w.keys.push_back(chains[filled[i % filled.size()]].back());
  return w;
}

SortWorkload gen_sort(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("sort: n must be >= 1");
  Rng rng(seed);
  SortWorkload w;
  w.table.resize(n);
  for (auto& v : w.table) v = static_cast<Word>(rng.below(1u << 31));
  return w;
}

CsrMatrix gen_csr(std::uint32_t rows, std::uint32_t cols, std::size_t nnz, Rng& rng) {
  if (rows < 1 || cols < 1) throw ConfigError("csr: dimensions must be >= 1");
  const std::uint64_t cells = static_cast<std::uint64_t>(rows) * cols;
  if (nnz > cells) throw ConfigError("csr: nnz exceeds rows * cols");
  CsrMatrix m;
  m.n_rows = rows;
  m.n_cols = cols;
  m.rows.assign(rows + 1, 0);
  for (std::uint64_t cell : distinct_sorted(cells, nnz, rng)) {
    ++m.rows[cell / cols + 1];
    m.cols.push_back(static_cast<Word>(cell % cols));
    m.vals.push_back(word_from_float(rng.signed_unit()));
  }
  for (std::uint32_t r = 0; r < rows; ++r) m.rows[r + 1] += m.rows[r];
  return m;
}

SpmvWorkload gen_spmv(const SpmvSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  SpmvWorkload w;
  w.matrix = gen_csr(spec.rows, spec.cols, spec.nnz, rng);
  w.vec.resize(spec.cols);
  for (auto& v : w.vec) v = word_from_float(rng.signed_unit());
  return w;
}

MultiSpmvWorkload gen_multispmv(const MultiSpmvSpec& spec, std::uint64_t seed) {
  if (spec.iterations < 1) throw ConfigError("multispmv: iterations must be >= 1");
  Rng rng(seed);
  MultiSpmvWorkload w;
  w.matrix = gen_csr(spec.n, spec.n, spec.nnz, rng);
  w.vec.resize(spec.n);
  for (auto& v : w.vec) v = word_from_float(rng.signed_unit());
  w.iterations = spec.iterations;
  w.scale = spec.scale;
  return w;
}

namespace {

struct Preset {
  const char* name;
  Workload (*make)(std::uint64_t seed);
};

const Preset kPresets[] = {
    {"paper/binsearch", [](std::uint64_t s) -> Workload { return gen_search({1234567, 1000, 1.0}, s); }},
    {"desk/binsearch", [](std::uint64_t s) -> Workload { return gen_search({300000, 1000, 1.0}, s); }},
    {"paper/hashtable", [](std::uint64_t s) -> Workload { return gen_hash({65536, 4096, 1024}, s); }},
    {"desk/hashtable", [](std::uint64_t s) -> Workload { return gen_hash({16384, 1024, 1024}, s); }},
    {"paper/spmv", [](std::uint64_t s) -> Workload { return gen_spmv({1024, 16777216, 17221}, s); }},
    {"desk/spmv", [](std::uint64_t s) -> Workload { return gen_spmv({1024, 1048576, 17221}, s); }},
    {"paper/mergesort", [](std::uint64_t s) -> Workload { return gen_sort(234, s); }},
    {"desk/mergesort", [](std::uint64_t s) -> Workload { return gen_sort(1024, s); }},
    {"paper/multispmv", [](std::uint64_t s) -> Workload { return gen_multispmv({128, 1639, 10, 0.5f}, s); }},
    {"desk/multispmv", [](std::uint64_t s) -> Workload { return gen_multispmv({128, 1639, 10, 0.5f}, s); }},
};

}  // namespace

Workload make_preset(std::string_view name, std::uint64_t seed) {
  std::string key(name);
  for (const auto& [alias, base] : {std::pair{"binsearch_for", "binsearch"}, std::pair{"mergesort_opt", "mergesort"}}) {
    const std::string a = std::string("/") + alias;
    if (key.size() > a.size() && key.ends_with(a)) key = key.substr(0, key.size() - a.size()) + "/" + base;
  }
  for (const auto& p : kPresets)
    if (key == p.name) return p.make(seed);
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.emplace_back(p.name);
  return out;
}

}  // namespace daesim
