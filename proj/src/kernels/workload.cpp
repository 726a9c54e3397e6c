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


#include <cstdio>
#include "daesim/workload.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <unordered_map>

namespace daesim {

namespace {

constexpr char kMagic[4] = {'D', 'A', 'E', 'W'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 32;
constexpr std::size_t kNameBytes = 16;
constexpr std::size_t kDirEntryBytes = kNameBytes + 8;

struct Header {
  WorkloadKind kind{};
  std::uint32_t param_a = 0;
  std::uint64_t elements = 0;
  std::uint32_t param_b = 0;
  std::uint32_t param_c = 0;
};

struct NamedRegion {
  std::string name;
  const std::vector<Word>* words;
};

template <typename T>
void put(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <typename T>
T get(std::span<const std::uint8_t> in, std::size_t off) {
  if (off + sizeof(T) > in.size()) throw ConfigError("workload file truncated");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(in[off + i]) << (8 * i));
  return v;
}

void check_csr_shape(const CsrMatrix& m, const std::vector<Word>& vec) {
  m.validate();
  if (vec.size() != m.n_cols) throw ConfigError("vec length must equal n_cols");
}

}  // namespace

std::string_view to_string(WorkloadKind k) noexcept {
  switch (k) {
    case WorkloadKind::Search: return "search";
    case WorkloadKind::Hash: return "hash";
    case WorkloadKind::Sort: return "sort";
    case WorkloadKind::Spmv: return "spmv";
    case WorkloadKind::MultiSpmv: return "multispmv";
  }
  return "?";
}

void CsrMatrix::validate() const {
  if (rows.size() != static_cast<std::size_t>(n_rows) + 1) throw ConfigError("csr: rows must have n_rows + 1 entries");
  if (vals.size() != cols.size()) throw ConfigError("csr: vals and cols differ in length");
  if (rows.front() != 0) throw ConfigError("csr: rows[0] must be 0");
  if (rows.back() != nnz()) throw ConfigError("csr: rows[n_rows] must equal nnz");
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    if (rows[i] > rows[i + 1]) throw ConfigError("csr: rows must be non-decreasing (row " + std::to_string(i) + ")");
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (cols[j] >= n_cols) throw ConfigError("csr: column index out of range at " + std::to_string(j));
}

WorkloadKind kind_of(const Workload& w) noexcept { return static_cast<WorkloadKind>(w.index() + 1); }

void validate(const Workload& w) {
  std::visit(
      [](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SearchWorkload>) {
          if (x.array.empty()) throw ConfigError("search: empty array");
          if (!std::is_sorted(x.array.begin(), x.array.end())) throw ConfigError("search: array is not sorted");
        } else if constexpr (std::is_same_v<T, HashWorkload>) {
          if (x.bucket_count == 0 || (x.bucket_count & (x.bucket_count - 1)) != 0)
            throw ConfigError("hash: bucket_count must be a power of two");
          if (x.entries.size() % HashWorkload::kEntryWords != 0) throw ConfigError("hash: entries not 16-byte records");
          const std::size_t n = x.entry_count();
          if (n < x.bucket_count) throw ConfigError("hash: fewer entries than buckets");
          std::unordered_map<Word, std::size_t> seen;
          for (std::size_t e = 0; e < n; ++e)
            if (x.entries[4 * e] != kNil) ++seen[x.entries[4 * e]];
          for (std::uint32_t b = 0; b < x.bucket_count; ++b) {
            std::size_t cur = b, steps = 0;
            if (x.entries[4 * cur] == kNil) continue;
            while (cur != kNil) {
              if (cur >= n) throw ConfigError("hash: next index out of range");
              if (++steps > n) throw ConfigError("hash: chain from bucket " + std::to_string(b) + " does not terminate");
              cur = x.entries[4 * cur + 2];
            }
          }
          for (Word k : x.keys) {
            if (seen[k] != 1) throw ConfigError("hash: lookup key " + std::to_string(k) + " not present exactly once");
            std::size_t cur = x.bucket_of(k);
            while (cur != kNil && x.entries[4 * cur] != k) cur = x.entries[4 * cur + 2];
            if (cur == kNil) throw ConfigError("hash: lookup key " + std::to_string(k) + " not reachable from its bucket");
          }
        } else if constexpr (std::is_same_v<T, SortWorkload>) {
          if (x.table.empty()) throw ConfigError("sort: empty table");
        } else if constexpr (std::is_same_v<T, SpmvWorkload>) {
          check_csr_shape(x.matrix, x.vec);
        } else {
          check_csr_shape(x.matrix, x.vec);
          if (x.matrix.n_rows != x.matrix.n_cols) throw ConfigError("multispmv: matrix must be square");
          if (x.iterations < 1) throw ConfigError("multispmv: iterations must be >= 1");
        }
      },
      w);
}

MemoryImage make_image(const Workload& w) {
  MemoryImage img;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SearchWorkload>) {
          img.add_region("array", x.array);
          img.add_region("keys", x.keys);
          img.add_region("result", x.keys.size());
        } else if constexpr (std::is_same_v<T, HashWorkload>) {
          img.add_region("entries", x.entries);
          img.add_region("keys", x.keys);
          img.add_region("result", x.keys.size());
        } else if constexpr (std::is_same_v<T, SortWorkload>) {
          img.add_region("table", x.table);
          img.add_region("result", x.table.size());
        } else {
          img.add_region("rows", x.matrix.rows);
          img.add_region("cols", x.matrix.cols);
          img.add_region("val", x.matrix.vals);
          img.add_region("vec", x.vec);
          img.add_region("out", x.matrix.n_rows);
        }
      },
      w);
  return img;
}

std::string describe(const Workload& w) {
  // FNV-1a over the file bytes tells same-sized workloads apart.
  std::uint32_t h = 2166136261u;
  for (std::uint8_t b : serialize(w)) h = (h ^ b) * 16777619u;
  char tag[10];
  std::snprintf(tag, sizeof tag, "#%08x", h);
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SearchWorkload>) {
          return "search:" + std::to_string(x.array.size()) + ":" + std::to_string(x.keys.size());
        } else if constexpr (std::is_same_v<T, HashWorkload>) {
          return "hash:" + std::to_string(x.entry_count()) + ":" + std::to_string(x.bucket_count) + ":" +
                 std::to_string(x.keys.size());
        } else if constexpr (std::is_same_v<T, SortWorkload>) {
          return "sort:" + std::to_string(x.table.size());
        } else if constexpr (std::is_same_v<T, SpmvWorkload>) {
          return "spmv:" + std::to_string(x.matrix.n_rows) + "x" + std::to_string(x.matrix.n_cols) + ":" +
                 std::to_string(x.matrix.nnz());
        } else {
          return "multispmv:" + std::to_string(x.matrix.n_rows) + ":" + std::to_string(x.matrix.nnz()) + ":" +
                 std::to_string(x.iterations);
        }
      },
      w) + tag;
}

std::vector<std::uint8_t> serialize(const Workload& w) {
  Header h;
  h.kind = kind_of(w);
  std::vector<NamedRegion> regions;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SearchWorkload>) {
          h.elements = x.array.size();
          regions = {{"array", &x.array}, {"keys", &x.keys}};
        } else if constexpr (std::is_same_v<T, HashWorkload>) {
          h.elements = x.entry_count();
          h.param_a = x.bucket_count;
          regions = {{"entries", &x.entries}, {"keys", &x.keys}};
        } else if constexpr (std::is_same_v<T, SortWorkload>) {
          h.elements = x.table.size();
          regions = {{"table", &x.table}};
        } else if constexpr (std::is_same_v<T, SpmvWorkload>) {
          h.elements = x.matrix.nnz();
          h.param_a = x.matrix.n_cols;
          h.param_b = x.matrix.n_rows;
          regions = {{"rows", &x.matrix.rows}, {"cols", &x.matrix.cols}, {"val", &x.matrix.vals}, {"vec", &x.vec}};
        } else {
          h.elements = x.matrix.nnz();
          h.param_a = x.matrix.n_rows;
          h.param_b = x.iterations;
          h.param_c = word_from_float(x.scale);
          regions = {{"rows", &x.matrix.rows}, {"cols", &x.matrix.cols}, {"val", &x.matrix.vals}, {"vec", &x.vec}};
        }
      },
      w);

  std::vector<std::uint8_t> out;
  std::size_t total = kHeaderBytes + regions.size() * kDirEntryBytes;
  for (const auto& r : regions) total += r.words->size() * kWordBytes;
  out.reserve(total);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put<std::uint16_t>(out, kVersion);
  put<std::uint16_t>(out, static_cast<std::uint16_t>(h.kind));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(regions.size()));
  put<std::uint32_t>(out, h.param_a);
  put<std::uint64_t>(out, h.elements);
  put<std::uint32_t>(out, h.param_b);
  put<std::uint32_t>(out, h.param_c);
  for (const auto& r : regions) {
    char name[kNameBytes] = {};
    std::memcpy(name, r.name.data(), std::min(r.name.size(), kNameBytes));
    out.insert(out.end(), name, name + kNameBytes);
    put<std::uint64_t>(out, r.words->size());
  }
  for (const auto& r : regions)
    for (Word v : *r.words) put<std::uint32_t>(out, v);
  return out;
}

Workload deserialize(std::span<const std::uint8_t> in) {
  if (in.size() < kHeaderBytes || !std::equal(std::begin(kMagic), std::end(kMagic), in.begin()))
    throw ConfigError("not a workload file (bad magic)");
  if (get<std::uint16_t>(in, 4) != kVersion) throw ConfigError("unsupported workload file version");
  Header h;
  const auto kind = get<std::uint16_t>(in, 6);
  if (kind < 1 || kind > 5) throw ConfigError("unknown workload kind " + std::to_string(kind));
  h.kind = static_cast<WorkloadKind>(kind);
  const auto count = get<std::uint32_t>(in, 8);
  h.param_a = get<std::uint32_t>(in, 12);
  h.elements = get<std::uint64_t>(in, 16);
  h.param_b = get<std::uint32_t>(in, 24);
  h.param_c = get<std::uint32_t>(in, 28);

  std::unordered_map<std::string, std::vector<Word>> regions;
  std::size_t data = kHeaderBytes + static_cast<std::size_t>(count) * kDirEntryBytes;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::size_t off = kHeaderBytes + i * kDirEntryBytes;
    if (off + kDirEntryBytes > in.size()) throw ConfigError("workload file truncated");
    std::string name(reinterpret_cast<const char*>(in.data() + off), kNameBytes);
    name.erase(name.find('\0') == std::string::npos ? name.size() : name.find('\0'));
    const auto words = get<std::uint64_t>(in, off + kNameBytes);
    if (data + words * kWordBytes > in.size()) throw ConfigError("workload file truncated in region '" + name + "'");
    std::vector<Word> v(words);
    for (std::uint64_t k = 0; k < words; ++k) v[k] = get<std::uint32_t>(in, data + k * kWordBytes);
    data += words * kWordBytes;
    regions[name] = std::move(v);
  }
  auto take = [&](const char* name) {
    auto it = regions.find(name);
    if (it == regions.end()) throw ConfigError(std::string("workload file lacks region '") + name + "'");
    return std::move(it->second);
  };

  Workload w;
  switch (h.kind) {
    case WorkloadKind::Search: w = SearchWorkload{take("array"), take("keys")}; break;
    case WorkloadKind::Hash: w = HashWorkload{h.param_a, take("entries"), take("keys")}; break;
    case WorkloadKind::Sort: w = SortWorkload{take("table")}; break;
    case WorkloadKind::Spmv:
      w = SpmvWorkload{CsrMatrix{h.param_b, h.param_a, take("rows"), take("cols"), take("val")}, take("vec")};
      break;
    case WorkloadKind::MultiSpmv:
      w = MultiSpmvWorkload{CsrMatrix{h.param_a, h.param_a, take("rows"), take("cols"), take("val")}, take("vec"),
                            h.param_b, word_to_float(h.param_c)};
      break;
  }
  validate(w);
  return w;
}

void save_workload(const std::filesystem::path& path, const Workload& w) {
  auto bytes = serialize(w);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw ConfigError("write failed for " + path.string());
}

Workload load_workload(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open workload file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace daesim
