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
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "daesim/memory.hpp"

namespace daesim {

enum class WorkloadKind : std::uint16_t { Search = 1, Hash = 2, Sort = 3, Spmv = 4, MultiSpmv = 5 };
std::string_view to_string(WorkloadKind k) noexcept;

/// Sorted array plus lookup keys.
struct SearchWorkload {
  std::vector<Word> array;
  std::vector<Word> keys;
};

/// Separate-chaining table of 16-byte entries {key, value, next, pad}. Entry
/// b (b < bucket_count) heads bucket b; an unused head has key == kNil.
struct HashWorkload {
  static constexpr std::size_t kEntryWords = 4;
  std::uint32_t bucket_count = 0;
  std::vector<Word> entries;
  std::vector<Word> keys;

  std::size_t entry_count() const noexcept { return entries.size() / kEntryWords; }
  std::uint32_t bucket_of(Word key) const noexcept { return (key * 2654435761u) & (bucket_count - 1); }
};

struct SortWorkload {
  std::vector<Word> table;
};

struct CsrMatrix {
  std::uint32_t n_rows = 0;
  std::uint32_t n_cols = 0;
  std::vector<Word> rows;  // n_rows + 1 offsets
  std::vector<Word> cols;
  std::vector<Word> vals;  // float bits

  std::size_t nnz() const noexcept { return cols.size(); }
  /// Throws ConfigError naming the first broken CSR invariant.
  void validate() const;
};

struct SpmvWorkload {
  CsrMatrix matrix;
  std::vector<Word> vec;  // float bits, n_cols entries
};

/// Repeated square spmv; after every iteration vec[i] = out[i] * scale.
struct MultiSpmvWorkload {
  CsrMatrix matrix;
  std::vector<Word> vec;
  std::uint32_t iterations = 1;
  float scale = 0.5f;
};

using Workload = std::variant<SearchWorkload, HashWorkload, SortWorkload, SpmvWorkload, MultiSpmvWorkload>;

WorkloadKind kind_of(const Workload& w) noexcept;
/// Checks the dataset invariants; throws ConfigError.
void validate(const Workload& w);
/// Backing memory for a run: the input arrays plus zeroed output regions.
MemoryImage make_image(const Workload& w);
/// Short identifier used to match report rows across runs, e.g. "spmv:1024x1048576:17221".
std::string describe(const Workload& w);

std::vector<std::uint8_t> serialize(const Workload& w);
Workload deserialize(std::span<const std::uint8_t> bytes);
void save_workload(const std::filesystem::path& path, const Workload& w);
Workload load_workload(const std::filesystem::path& path);

}  // namespace daesim
