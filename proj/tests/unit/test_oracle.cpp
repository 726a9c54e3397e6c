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


#include <bit>

#include "daesim/generate.hpp"
#include "doctest.h"
#include "kernel_helpers.hpp"

using namespace daesim;
using namespace daesim::testing;

TEST_CASE("oracle: identity spmv copies the vector and counts one dependent load per non-zero") {
  SpmvWorkload w;
  w.matrix = {3, 3, {0, 1, 2, 3}, {0, 1, 2}, {}};
  for (int i = 0; i < 3; ++i) w.matrix.vals.push_back(word_from_float(1.0f));
  w.vec = {word_from_float(7.0f), word_from_float(-1.0f), word_from_float(0.5f)};
  auto r = oracle_execute(Kernel::Spmv, w);
  CHECK(r.image.region("out").words == w.vec);
  CHECK(r.at("vec").dependent_loads == 3);
  CHECK(r.dependent_loads() == 3);
  CHECK(r.golden == 3);
}

TEST_CASE("oracle: spmv golden equals nnz for random matrices") {
  Rng rng(99);
  for (int i = 0; i < 20; ++i) {
    const auto rows = static_cast<std::uint32_t>(1 + rng.below(300));
    const auto cols = static_cast<std::uint32_t>(1 + rng.below(300));
    const std::size_t nnz = rng.below(std::min<std::uint64_t>(2000, std::uint64_t{rows} * cols) + 1);
    SpmvWorkload w{gen_csr(rows, cols, nnz, rng), std::vector<Word>(cols, word_from_float(1.0f))};
    CHECK(golden_cycles(Kernel::Spmv, w) == nnz);
  }
}

TEST_CASE("oracle: fixed-trip search over 1,234,567 elements makes 21 probes per key") {
  auto w = make_preset("paper/binsearch", 1);
  auto r = oracle_execute(Kernel::BinsearchFor, w);
  CHECK(r.at("array").dependent_loads == 21'000);
  CHECK(r.golden == 21'000);
  auto early = oracle_execute(Kernel::Binsearch, w);
  CHECK(early.image == r.image);
  CHECK(early.golden < r.golden);
}

TEST_CASE("oracle: no lookups means a zero golden count") {
  SearchWorkload w{{1, 2, 3}, {}};
  CHECK(golden_cycles(Kernel::Binsearch, w) == 0);
  HashWorkload h;
  h.bucket_count = 1;
  h.entries = {kNil, 0, kNil, 0};
  CHECK(golden_cycles(Kernel::Hashtable, h) == 0);
}

TEST_CASE("oracle: mergesort counts and one golden value for both variants") {
  auto w = gen_sort(8, 4);
  auto plain = oracle_execute(Kernel::Mergesort, w);
  auto opt = oracle_execute(Kernel::MergesortOpt, w);
  CHECK(plain.loads() == 40);
  CHECK(plain.stores() == 40);
  CHECK(opt.loads() == 24);
  CHECK(opt.stores() == 24);
  for (std::size_t n = 1; n <= 130; ++n) {
    auto s = gen_sort(n, n);
    CHECK(golden_cycles(Kernel::Mergesort, s) == golden_cycles(Kernel::MergesortOpt, s));
  }
  std::vector<Word> sorted = w.table;
  std::sort(sorted.begin(), sorted.end());
  CHECK(plain.image.region("result").words == sorted);
  // Three passes: the last one writes back into table.
  CHECK(opt.image.region("result").words == sorted);
}

TEST_CASE("oracle: hash lookups walk the chain to the matching entry") {
  HashWorkload h;
  h.bucket_count = 2;
  Word k1 = 1, k2 = 2;
  while (h.bucket_of(k2) != h.bucket_of(k1)) ++k2;
  const std::uint32_t b = h.bucket_of(k1);
  h.entries.assign(4 * 3, 0);
  auto put = [&](std::size_t e, Word k, Word v, Word next) {
    h.entries[4 * e] = k, h.entries[4 * e + 1] = v, h.entries[4 * e + 2] = next;
  };
  put(b, k1, 10, 2);
  put(1 - b, kNil, 0, kNil);
  put(2, k2, 20, kNil);
  h.keys = {k2, k1};
  auto r = oracle_execute(Kernel::Hashtable, h);
  CHECK(r.image.region("result").words == std::vector<Word>{20, 10});
  CHECK(r.at("entries").loads == 3);
  CHECK(r.at("entries").dependent_loads == 3);
  CHECK(r.golden == 3);
}

TEST_CASE("oracle: rejects mismatched kernels and broken inputs") {
  CHECK_THROWS_AS(oracle_execute(Kernel::Spmv, gen_sort(4, 1)), ConfigError);
  SpmvWorkload bad;
  bad.matrix = {2, 2, {0, 2, 1}, {0, 1}, {0, 0}};
  bad.vec = {0, 0};
  CHECK_THROWS_AS(oracle_execute(Kernel::Spmv, bad), ConfigError);
}

TEST_CASE("oracle: deterministic") {
  auto w = make_preset("desk/multispmv", 5);
  auto a = oracle_execute(Kernel::MultiSpmv, w);
  auto b = oracle_execute(Kernel::MultiSpmv, w);
  CHECK(a.image == b.image);
  CHECK(a.regions == b.regions);
  CHECK(oracle_csv(a) == oracle_csv(b));
}

TEST_CASE("overhead arithmetic") {
  CHECK(*overhead("k", 110, 100).overhead_pct == doctest::Approx(10.0));
  CHECK(*overhead("k", 100, 100).overhead_pct == 0.0);
  CHECK_FALSE(overhead("k", 100, 0).overhead_pct);
  auto neg = overhead("k", 90, 100);
  CHECK(neg.golden_violated);
  CHECK(*neg.overhead_pct < 0);
}

TEST_CASE("check_balance reports the first offending channel") {
  SimStats s;
  s.channels.push_back({"a", false, 2, "", 3, 3, 0, 0, 1, false});
  CHECK_FALSE(check_balance(s));
  s.channels.push_back({"b", true, 4, "p", 5, 4, 5, 1, 2, false});
  s.channels.push_back({"c", false, 2, "", 1, 0, 0, 1, 1, false});
  auto v = check_balance(s);
  REQUIRE(v);
  CHECK(v->channel == "b");
  CHECK(v->enq == 5);
  CHECK(v->deq == 4);
  CHECK(v->message().find("'b'") != std::string::npos);
  s.channels = {{"d", false, 2, "", 0, 0, 0, 0, 0, true}};
  CHECK(check_balance(s)->pending_demand);
}

TEST_CASE("oracle csv layout") {
  auto r = oracle_execute(Kernel::Mergesort, gen_sort(4, 1));
  const std::string csv = oracle_csv(r);
  CHECK(csv.rfind("kernel,region,loads,stores,dependent_loads,golden_cycles\n", 0) == 0);
  CHECK(csv.find("mergesort,table,8,4,8,8\n") != std::string::npos);
  CHECK(csv.find("mergesort,result,4,8,0,8\n") != std::string::npos);
}
