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


#include <fstream>
#include <set>
#include <sstream>

#include "daesim/cli.hpp"
#include "daesim/generate.hpp"
#include "json.hpp"

namespace daesim {

namespace {

using nlohmann::json;

void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
T need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  T v{};
  read(j, key, v, where);
  return v;
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void read_memory(const json& j, MemoryPlan& m) {
  const std::string w = "memory";
  only_keys(j, {"model", "latency", "read_latency", "write_latency", "max_outstanding", "moms", "moms_regions", "jitter"}, w);
  if (j.contains("model")) m.model = parse_memory_model(need<std::string>(j, "model", w));
  if (j.contains("latency")) m.fixed.read_latency = m.fixed.write_latency = need<Cycle>(j, "latency", w);
  read(j, "read_latency", m.fixed.read_latency, w);
  read(j, "write_latency", m.fixed.write_latency, w);
  read(j, "max_outstanding", m.fixed.max_outstanding, w);
  read(j, "moms_regions", m.moms_regions, w);
  if (j.contains("moms")) {
    const json& c = j["moms"];
    const std::string wm = "memory.moms";
    only_keys(c, {"cache_bytes", "hash_tables", "hash_entries", "line_bytes", "external_max_outstanding_reads",
                  "hit_latency", "max_outstanding", "dram"}, wm);
    read(c, "cache_bytes", m.moms.cache_bytes, wm);
    read(c, "hash_tables", m.moms.hash_tables, wm);
    read(c, "hash_entries", m.moms.hash_entries, wm);
    read(c, "line_bytes", m.moms.line_bytes, wm);
    read(c, "external_max_outstanding_reads", m.moms.external_max_outstanding_reads, wm);
    read(c, "hit_latency", m.moms.hit_latency, wm);
    read(c, "max_outstanding", m.moms.max_outstanding, wm);
    if (c.contains("dram")) {
      const json& d = c["dram"];
      const std::string wd = "memory.moms.dram";
      only_keys(d, {"banks", "rows_per_bank", "row_bytes", "t_row_hit", "t_row_miss"}, wd);
      read(d, "banks", m.moms.dram.banks, wd);
      read(d, "rows_per_bank", m.moms.dram.rows_per_bank, wd);
      read(d, "row_bytes", m.moms.dram.row_bytes, wd);
      read(d, "t_row_hit", m.moms.dram.t_row_hit, wd);
      read(d, "t_row_miss", m.moms.dram.t_row_miss, wd);
    }
  }
  if (j.contains("jitter")) {
    const json& c = j["jitter"];
    const std::string wj = "memory.jitter";
    only_keys(c, {"min", "max", "seed"}, wj);
    read(c, "min", m.jitter_min, wj);
    read(c, "max", m.jitter_max, wj);
    read(c, "seed", m.jitter_seed, wj);
  }
}

void read_workload(const json& j, WorkloadSource& s) {
  const std::string w = "workload";
  only_keys(j, {"file", "preset", "generate", "seed"}, w);
  const int sources = j.contains("file") + j.contains("preset") + j.contains("generate");
  if (sources != 1) throw ConfigError("workload: give exactly one of file, preset, generate");
  if (j.contains("file")) s.file = need<std::string>(j, "file", w);
  read(j, "preset", s.preset, w);
  if (j.contains("generate")) s.generate = j["generate"].dump();
  read(j, "seed", s.seed, w);
}

RunConfig from_json(const json& j) {
  const std::string w = "config";
  only_keys(j, {"name", "kernel", "variant", "workload", "memory", "rif", "chunk", "channel_capacity", "merge_overlap",
                "max_cycles", "seed", "clock_period_ns", "mem_log"}, w);
  RunConfig c;
  read(j, "name", c.name, w);
  if (j.contains("kernel")) c.params.kernel = parse_kernel(need<std::string>(j, "kernel", w));
  if (j.contains("variant")) c.params.coupling = parse_coupling(need<std::string>(j, "variant", w));
  if (j.contains("workload")) read_workload(j["workload"], c.workload);
  if (j.contains("memory")) read_memory(j["memory"], c.memory);
  read(j, "rif", c.params.rif, w);
  read(j, "chunk", c.params.chunk, w);
  read(j, "channel_capacity", c.params.channel_capacity, w);
  read(j, "merge_overlap", c.params.merge_overlap, w);
  read(j, "max_cycles", c.max_cycles, w);
  read(j, "seed", c.seed, w);
  if (j.contains("clock_period_ns")) c.clock_period_ns = need<double>(j, "clock_period_ns", w);
  read(j, "mem_log", c.mem_log, w);
  return c;
}

}  // namespace

std::string RunConfig::label() const {
  if (!name.empty()) return name;
  return std::string(to_string(params.kernel)) + "/" + std::string(to_string(params.coupling));
}

RunConfig parse_run_config(std::string_view json_text) { return from_json(parse_json(json_text, "config")); }

RunConfig load_run_config(const std::filesystem::path& path) {
  RunConfig c = parse_run_config(slurp(path));
  if (c.workload.file && c.workload.file->is_relative()) c.workload.file = path.parent_path() / *c.workload.file;
  return c;
}

void apply(RunConfig& c, const Overrides& o) {
  if (o.kernel) c.params.kernel = parse_kernel(*o.kernel);
  if (o.variant) c.params.coupling = parse_coupling(*o.variant);
  if (o.preset) c.workload = WorkloadSource{std::nullopt, *o.preset, {}, c.workload.seed};
  if (o.workload_file) c.workload = WorkloadSource{*o.workload_file, {}, {}, c.workload.seed};
  if (o.seed) c.seed = c.workload.seed = *o.seed;
  if (o.memory) c.memory.model = parse_memory_model(*o.memory);
  if (o.latency) c.memory.fixed.read_latency = c.memory.fixed.write_latency = *o.latency;
  if (o.max_cycles) c.max_cycles = *o.max_cycles;
  if (o.rif) c.params.rif = *o.rif;
  if (o.chunk) c.params.chunk = *o.chunk;
}

Workload generate_workload(std::string_view json_text, std::uint64_t seed) {
  const json j = parse_json(json_text, "generate");
  const std::string w = "generate";
  const std::string kind = need<std::string>(j, "kind", w);
  if (kind == "search") {
    only_keys(j, {"kind", "elements", "keys", "hit_fraction"}, w);
    SearchSpec s{need<std::size_t>(j, "elements", w), need<std::size_t>(j, "keys", w), 1.0};
    read(j, "hit_fraction", s.hit_fraction, w);
    return gen_search(s, seed);
  }
  if (kind == "hash") {
    only_keys(j, {"kind", "entries", "buckets", "lookups"}, w);
    return gen_hash({need<std::size_t>(j, "entries", w), need<std::uint32_t>(j, "buckets", w),
                     need<std::size_t>(j, "lookups", w)},
                    seed);
  }
  if (kind == "sort") {
    only_keys(j, {"kind", "n"}, w);
    return gen_sort(need<std::size_t>(j, "n", w), seed);
  }
  if (kind == "spmv") {
    only_keys(j, {"kind", "rows", "cols", "nnz"}, w);
    return gen_spmv({need<std::uint32_t>(j, "rows", w), need<std::uint32_t>(j, "cols", w),
                     need<std::size_t>(j, "nnz", w)},
                    seed);
  }
  if (kind == "multispmv") {
    only_keys(j, {"kind", "n", "nnz", "iterations", "scale"}, w);
    MultiSpmvSpec s{need<std::uint32_t>(j, "n", w), need<std::size_t>(j, "nnz", w), 1, 0.5f};
    read(j, "iterations", s.iterations, w);
    read(j, "scale", s.scale, w);
    return gen_multispmv(s, seed);
  }
  throw ConfigError("generate: unknown kind '" + kind + "' (search, hash, sort, spmv, multispmv)");
}

Workload resolve_workload(const WorkloadSource& s) {
  if (s.file) return load_workload(*s.file);
  if (!s.preset.empty()) return make_preset(s.preset, s.seed);
  if (!s.generate.empty()) return generate_workload(s.generate, s.seed);
  throw ConfigError("no workload given (file, preset or generator)");
}

std::vector<RunConfig> expand_sweep(std::string_view json_text) {
  const json j = parse_json(json_text, "sweep");
  only_keys(j, {"base", "vary"}, "sweep");
  const json base = j.value("base", json::object());
  const json vary = j.value("vary", json::object());
  if (!vary.is_object()) throw ConfigError("sweep.vary: expected an object of lists");
  static const std::set<std::string> top{"kernel", "variant", "rif", "chunk", "channel_capacity", "merge_overlap",
                                         "seed", "max_cycles"};
  static const std::set<std::string> mem{"model", "latency"};
  // Each combination carries the "key=value" tags that name it.
  std::vector<std::pair<json, std::string>> docs{{base, ""}};
  for (const auto& [key, values] : vary.items()) {
    const bool in_memory = key == "memory" || mem.count(key) != 0;
    if (!top.count(key) && !in_memory && key != "preset")
      throw ConfigError("sweep.vary: cannot vary '" + key + "'");
    if (!values.is_array() || values.empty()) throw ConfigError("sweep.vary." + key + ": expected a non-empty list");
    std::vector<std::pair<json, std::string>> next;
    for (const auto& [d, tag] : docs) {
      for (const json& v : values) {
        json e = d;
        if (key == "preset") {
          const auto seed = d.value("workload", json::object()).value("seed", std::uint64_t{1});
          e["workload"] = json{{"preset", v}, {"seed", seed}};
        } else if (key == "memory") {
          e["memory"]["model"] = v;
        } else if (in_memory) {
          e["memory"][key] = v;
        } else {
          e[key] = v;
        }
        const std::string shown = v.is_string() ? v.get<std::string>() : v.dump();
        next.emplace_back(std::move(e), tag + (tag.empty() ? "" : ",") + key + "=" + shown);
      }
    }
    docs = std::move(next);
  }
  std::vector<RunConfig> out;
  for (const auto& [d, tag] : docs) {
    RunConfig c = from_json(d);
    if (!tag.empty()) c.name = (d.contains("name") ? c.name : std::string("run")) + "[" + tag + "]";
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace daesim
