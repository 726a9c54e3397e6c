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


#include <cstring>
#include <filesystem>
#include <numeric>

#include "daesim/generate.hpp"
#include "daesim/workload.hpp"
#include "doctest.h"

using namespace daesim;

namespace {

template <typename T>
T field(const std::vector<std::uint8_t>& b, std::size_t off) {
  T v{};
  std::memcpy(&v, b.data() + off, sizeof(T));
  return v;
}

std::vector<Workload> samples() {
  return {gen_search({500, 20, 0.5}, 1), gen_hash({128, 16, 30}, 2), gen_sort(77, 3), gen_spmv({12, 40, 60}, 4),
          gen_multispmv({16, 50, 3, 0.25f}, 5)};
}

}  // namespace

TEST_CASE("workload files round-trip every kind") {
  for (const auto& w : samples()) {
    const auto bytes = serialize(w);
    const Workload back = deserialize(bytes);
    CHECK(kind_of(back) == kind_of(w));
    CHECK(serialize(back) == bytes);
    CHECK(describe(back) == describe(w));
    CHECK(make_image(back) == make_image(w));
  }
}

TEST_CASE("workload header layout") {
  auto w = gen_multispmv({16, 50, 3, 0.25f}, 5);
  const auto b = serialize(w);
  CHECK(std::string(b.begin(), b.begin() + 4) == "DAEW");
  CHECK(field<std::uint16_t>(b, 4) == 1);
  CHECK(field<std::uint16_t>(b, 6) == 5);
  CHECK(field<std::uint32_t>(b, 8) == 4);  // rows, cols, val, vec
  CHECK(field<std::uint32_t>(b, 12) == 16);
  CHECK(field<std::uint64_t>(b, 16) == 50);
  CHECK(field<std::uint32_t>(b, 24) == 3);
  CHECK(field<std::uint32_t>(b, 28) == std::bit_cast<std::uint32_t>(0.25f));
  CHECK(std::string(reinterpret_cast<const char*>(b.data() + 32)) == "rows");
  CHECK(field<std::uint64_t>(b, 48) == 17);
}

TEST_CASE("corrupt workload files are rejected") {
  auto b = serialize(gen_sort(10, 1));
  auto bad = b;
  bad[0] = 'X';
  CHECK_THROWS_AS(deserialize(bad), ConfigError);
  bad = b;
  bad[4] = 9;
  CHECK_THROWS_AS(deserialize(bad), ConfigError);
  bad = b;
  bad[6] = 42;
  CHECK_THROWS_AS(deserialize(bad), ConfigError);
  bad.assign(b.begin(), b.end() - 5);
  CHECK_THROWS_AS(deserialize(bad), ConfigError);
  // Valid framing, broken content: an unsorted search array.
  SearchWorkload s{{3, 1, 2}, {1}};
  CHECK_THROWS_AS(validate(Workload{s}), ConfigError);
}

TEST_CASE("save and load through a file") {
  const auto path = std::filesystem::temp_directory_path() / "daesim_test_workload.bin";
  auto w = gen_hash({64, 8, 10}, 7);
  save_workload(path, w);
  CHECK(serialize(load_workload(path)) == serialize(w));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_workload(path), ConfigError);
}

TEST_CASE("generators are deterministic per seed") {
  for (const auto& name : preset_names()) {
    if (name == "paper/spmv") continue;  // 64 MiB vector; covered by its own case
    CAPTURE(name);
    CHECK(serialize(make_preset(name, 11)) == serialize(make_preset(name, 11)));
  }
  CHECK(serialize(gen_sort(100, 1)) != serialize(gen_sort(100, 2)));
}

TEST_CASE("full-size presets have their reference sizes") {
  auto s = std::get<SearchWorkload>(make_preset("paper/binsearch", 1));
  CHECK(s.array.size() == 1'234'567);
  CHECK(s.keys.size() == 1000);
  CHECK(std::is_sorted(s.array.begin(), s.array.end()));

  auto h = std::get<HashWorkload>(make_preset("paper/hashtable", 1));
  CHECK(h.entry_count() == 65'536);
  CHECK(h.entry_count() * HashWorkload::kEntryWords * kWordBytes == 65'536u * 16);
  // Chains average 16 entries.
  std::uint64_t total = 0;
  for (std::uint32_t b = 0; b < h.bucket_count; ++b)
    for (Word cur = b; cur != kNil; cur = h.entries[cur * 4 + 2]) ++total;
  CHECK(static_cast<double>(total) / h.bucket_count == doctest::Approx(16.0));

  auto p = std::get<SpmvWorkload>(make_preset("paper/spmv", 1));
  CHECK(p.matrix.n_rows == 1024);
  CHECK(p.matrix.n_cols == 16'777'216);
  CHECK(p.matrix.nnz() == 17'221);

  CHECK(std::get<SortWorkload>(make_preset("paper/mergesort", 1)).table.size() == 234);
  auto m = std::get<MultiSpmvWorkload>(make_preset("paper/multispmv", 1));
  CHECK(m.matrix.n_rows == 128);
  CHECK(m.matrix.nnz() == 1639);
  CHECK(m.iterations == 10);
  CHECK(m.scale == 0.5f);
  CHECK_NOTHROW(make_preset("desk/binsearch_for", 1));
  CHECK_THROWS_AS(make_preset("paper/nothing", 1), ConfigError);
}

TEST_CASE("desk presets keep irregular data larger than the 128 KiB cache") {
  const std::size_t cache_words = 128 * 1024 / kWordBytes;
  CHECK(std::get<SearchWorkload>(make_preset("desk/binsearch", 1)).array.size() > cache_words);
  CHECK(std::get<HashWorkload>(make_preset("desk/hashtable", 1)).entries.size() > cache_words);
  CHECK(std::get<SpmvWorkload>(make_preset("desk/spmv", 1)).vec.size() > cache_words);
}

TEST_CASE("infeasible generator specs are rejected") {
  Rng rng(1);
  CHECK_THROWS_AS(gen_csr(3, 3, 10, rng), ConfigError);
  CHECK_THROWS_AS(gen_search({0, 5, 1.0}, 1), ConfigError);
  CHECK_THROWS_AS(gen_hash({16, 3, 4}, 1), ConfigError);
  CHECK_THROWS_AS(gen_hash({2, 4, 1}, 1), ConfigError);
  CHECK_THROWS_AS(gen_sort(0, 1), ConfigError);
}

TEST_CASE("generated CSR matrices are valid and cells are distinct") {
  Rng rng(3);
  auto m = gen_csr(50, 50, 2500, rng);
  CHECK_NOTHROW(m.validate());
  std::vector<int> seen(2500, 0);
  for (std::uint32_t r = 0; r < m.n_rows; ++r)
    for (Word j = m.rows[r]; j < m.rows[r + 1]; ++j) ++seen[r * 50 + m.cols[j]];
  CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
}
