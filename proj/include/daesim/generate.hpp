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
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "daesim/workload.hpp"

namespace daesim {

/// Seeded generator whose integer and float mappings are fixed here rather
/// than left to the standard library's distributions, so output bytes do
/// not depend on the toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(eng_()) * bound) >> 64);
  }
  /// Uniform multiple of 2^-23 in [-1, 1).
  float signed_unit() { return static_cast<float>(static_cast<std::int64_t>(below(1u << 24)) - (1 << 23)) / 8388608.0f; }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 eng_;
};

struct SearchSpec {
  std::size_t elements = 0;
  std::size_t keys = 0;
  double hit_fraction = 1.0;
};
struct HashSpec {
  std::size_t entries = 0;
  std::uint32_t buckets = 0;
  std::size_t lookups = 0;
};
struct SpmvSpec {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::size_t nnz = 0;
};
struct MultiSpmvSpec {
  std::uint32_t n = 0;
  std::size_t nnz = 0;
  std::uint32_t iterations = 1;
  float scale = 0.5f;
};

SearchWorkload gen_search(const SearchSpec& spec, std::uint64_t seed);
/// Lookup keys are the last key of distinct chains, so each lookup walks a
/// whole chain.
HashWorkload gen_hash(const HashSpec& spec, std::uint64_t seed);
SortWorkload gen_sort(std::size_t n, std::uint64_t seed);
/// Distinct (row, col) positions, columns ascending within a row.
CsrMatrix gen_csr(std::uint32_t rows, std::uint32_t cols, std::size_t nnz, Rng& rng);
SpmvWorkload gen_spmv(const SpmvSpec& spec, std::uint64_t seed);
MultiSpmvWorkload gen_multispmv(const MultiSpmvSpec& spec, std::uint64_t seed);

/// Named datasets: "paper/<kernel>" at full size, "desk/<kernel>"
/// scaled down. Kernel variants share their base dataset (binsearch_for uses
/// binsearch, mergesort_opt uses mergesort).
Workload make_preset(std::string_view name, std::uint64_t seed);
std::vector<std::string> preset_names();

}  // namespace daesim
