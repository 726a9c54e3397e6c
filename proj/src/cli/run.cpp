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


#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "daesim/cli.hpp"

namespace daesim {

namespace {

std::string num(double v) { return fmt::format("{:.2f}", v); }

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string("N/A"); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') cell += '"', ++i;
      else if (c == '"') quoted = false;
      else cell += c;
    } else if (c == '"') {
      quoted = any = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      cell += c;
      any = true;
    }
  }
  if (any) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string blocked_summary(const SimStats& s) {
  std::string out;
  for (const auto& p : s.processes)
    if (!p.done) out += (out.empty() ? "" : "; ") + p.name + " waits on " + (p.blocked_on.empty() ? "?" : p.blocked_on);
  return out;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

std::string family(std::string_view kernel) {
  for (std::string_view suffix : {"_opt", "_for"})
    if (kernel.size() > suffix.size() && kernel.substr(kernel.size() - suffix.size()) == suffix)
      return std::string(kernel.substr(0, kernel.size() - suffix.size()));
  return std::string(kernel);
}

constexpr const char* kReportHeader =
    "name,kernel,variant,memory,workload,outcome,cycles,loads,stores,golden,overhead_pct,oracle_match,"
    "clock_period_ns,time_us,exit_code,message";

}  // namespace

RunReport run(const RunConfig& cfg) {
  RunReport r;
  r.name = cfg.label();
  r.kernel = to_string(cfg.params.kernel);
  r.variant = to_string(cfg.params.coupling);
  r.memory = to_string(cfg.memory.model);
  r.clock_period_ns = cfg.clock_period_ns;
  try {
    r.variant = to_string(resolve_coupling(cfg.params.kernel, cfg.params.coupling));
    const Workload w = resolve_workload(cfg.workload);
    r.workload = describe(w);
    spdlog::debug("{}: building {} on {}", r.name, r.kernel, r.workload);
    BuiltKernel built = build_world(cfg.params, w, cfg.memory, cfg.seed);
    World& world = *built.world;
    world.enable_memory_log(cfg.mem_log);
    const SimResult res = world.run_until_quiescent(cfg.max_cycles);
    r.outcome = res.outcome;
    r.stats = res.stats;
    r.cycles = res.stats.cycles;
    for (const auto& p : res.stats.ports) r.loads += p.reads, r.stores += p.writes;
    if (cfg.mem_log) {
      r.mem_log = world.memory_log();
      for (const auto& [name, port] : built.ports) {
        auto log = world.take_fetch_log(port);
        if (!log.empty()) r.fetch_log.emplace_back(name, std::move(log));
      }
    }
    spdlog::debug("{}: {} after {} cycles", r.name, to_string(r.outcome), r.cycles);

    r.oracle = oracle_execute(cfg.params.kernel, w);
    r.golden = r.oracle->golden;
    const OverheadReport ov = overhead(r.kernel, r.cycles, r.golden);
    r.overhead_pct = ov.overhead_pct;
    const auto diff = world.memory().first_difference(r.oracle->image);
    r.oracle_match = !diff;

    if (r.outcome == Outcome::Deadlocked) {
      r.exit_code = kExitDeadlock;
      const auto v = check_balance(r.stats);
      r.message = "deadlock: " + (v ? v->message() : blocked_summary(r.stats));
    } else if (r.outcome == Outcome::CycleLimit) {
      r.exit_code = kExitCycleLimit;
      r.message = "cycle limit of " + std::to_string(cfg.max_cycles) + " reached";
    } else if (diff) {
      r.exit_code = kExitOracleMismatch;
      r.message = "oracle mismatch: " + *diff;
    } else if (auto v = check_balance(r.stats)) {
      r.exit_code = kExitDeadlock;
      r.message = "balance violation: " + v->message();
    } else if (ov.golden_violated) {
      r.message = "warning: fewer cycles than the golden model";
      spdlog::warn("{}: {}", r.name, r.message);
    }
  } catch (const ConfigError& e) {
    r.exit_code = kExitConfig;
    r.message = std::string("config error: ") + e.what();
  } catch (const SimFault& e) {
    r.exit_code = kExitSimFault;
    r.message = std::string("simulation fault: ") + e.what();
  }
  if (r.exit_code != kExitOk) spdlog::info("{}: {}", r.name, r.message);
  return r;
}

std::vector<RunReport> run_all(const std::vector<RunConfig>& cfgs, unsigned jobs) {
  std::vector<RunReport> out(cfgs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < cfgs.size();) out[i] = run(cfgs[i]);
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cfgs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

int batch_exit_code(const std::vector<RunReport>& reports) {
  for (const auto& r : reports)
    if (r.exit_code != kExitOk) return r.exit_code;
  return kExitOk;
}

std::string report_csv(const std::vector<RunReport>& reports) {
  std::string out = std::string(kReportHeader) + "\n";
  for (const auto& r : reports) {
    const std::optional<double> t =
        r.clock_period_ns ? std::optional<double>(time_us(r.cycles, *r.clock_period_ns)) : std::nullopt;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", csv_field(r.name), r.kernel, r.variant,
                       r.memory, csv_field(r.workload), to_string(r.outcome), r.cycles, r.loads, r.stores, r.golden,
                       opt_num(r.overhead_pct), r.oracle_match ? "yes" : "no", opt_num(r.clock_period_ns),
                       opt_num(t), r.exit_code, csv_field(r.message));
  }
  return out;
}

std::string report_markdown(const std::vector<RunReport>& reports) {
  std::vector<std::vector<std::string>> rows{
      {"run", "kernel", "variant", "memory", "outcome", "cycles", "loads", "stores", "golden", "overhead %", "oracle"}};
  for (const auto& r : reports)
    rows.push_back({r.name, r.kernel, r.variant, r.memory, std::string(to_string(r.outcome)), std::to_string(r.cycles),
                    std::to_string(r.loads), std::to_string(r.stores), std::to_string(r.golden),
                    opt_num(r.overhead_pct), r.oracle_match ? "match" : "MISMATCH"});
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::string out;
  auto line = [&](const std::vector<std::string>& row) {
    out += "|";
    for (std::size_t c = 0; c < row.size(); ++c) {
      const bool right = c >= 5;
      out += " " + (right ? fmt::format("{:>{}}", row[c], width[c]) : fmt::format("{:<{}}", row[c], width[c])) + " |";
    }
    out += "\n";
  };
  line(rows[0]);
  out += "|";
  for (std::size_t c = 0; c < width.size(); ++c) out += (c >= 5 ? std::string(width[c] + 1, '-') + ":" : std::string(width[c] + 2, '-')) + "|";
  out += "\n";
  for (std::size_t i = 1; i < rows.size(); ++i) line(rows[i]);
  for (const auto& r : reports)
    if (!r.message.empty()) out += "\n- " + r.name + ": " + r.message;
  if (out.back() != '\n') out += "\n";
  return out;
}

std::string stats_csv(const RunReport& r) {
  std::string out = "section,name,field,value\n";
  auto row = [&](const char* section, const std::string& name, const char* field, const auto& value) {
    out += fmt::format("{},{},{},{}\n", section, csv_field(name), field, value);
  };
  row("run", r.name, "outcome", to_string(r.outcome));
  row("run", r.name, "cycles", r.cycles);
  for (const auto& c : r.stats.channels) {
    row("channel", c.name, "kind", c.decoupled ? "load" : "stream");
    row("channel", c.name, "capacity", c.capacity);
    if (c.decoupled) row("channel", c.name, "port", c.port);
    row("channel", c.name, c.decoupled ? "requests" : "enq", c.enq);
    row("channel", c.name, c.decoupled ? "responses" : "deq", c.deq);
    if (c.decoupled) row("channel", c.name, "delivered", c.delivered);
    row("channel", c.name, "in_flight", c.in_flight);
    row("channel", c.name, "peak", c.peak);
    row("channel", c.name, "pending_demand", c.pending_demand ? 1 : 0);
  }
  for (const auto& p : r.stats.ports) {
    row("port", p.name, "model", p.model);
    row("port", p.name, "reads", p.reads);
    row("port", p.name, "writes", p.writes);
    for (const auto& [k, v] : p.counters) row("port", p.name, k.c_str(), v);
  }
  for (const auto& p : r.stats.processes) {
    row("process", p.name, "fired", p.fired);
    row("process", p.name, "stalled", p.stalled);
    row("process", p.name, "done", p.done ? 1 : 0);
    if (!p.blocked_on.empty()) row("process", p.name, "blocked_on", csv_field(p.blocked_on));
  }
  for (const auto& s : r.stats.store_sites) {
    row("store_site", s.name, "port", s.port);
    row("store_site", s.name, "issued", s.issued);
    row("store_site", s.name, "acked", s.acked);
  }
  return out;
}

std::string mem_log_csv(const RunReport& r) {
  std::string out = "cycle,port,id,kind,addr,latency\n";
  for (const auto& e : r.mem_log) {
    const std::string port = e.port < r.stats.ports.size() ? r.stats.ports[e.port].name : std::to_string(e.port);
    out += fmt::format("{},{},{},{},{:#x},{}\n", e.cycle, port, static_cast<std::uint32_t>(e.id),
                       e.kind == RespKind::ReadData ? "read" : "write", e.addr, e.latency);
  }
  for (const auto& [port, log] : r.fetch_log)
    for (const auto& f : log) out += fmt::format("{},{},-,fetch,{:#x},{}\n", f.cycle, port, f.line_addr, f.latency);
  return out;
}

std::vector<RunReport> parse_report_csv(std::string_view text) {
  auto rows = parse_csv(text);
  if (rows.empty() || fmt::format("{}", fmt::join(rows[0], ",")) != kReportHeader)
    throw ConfigError("not a report.csv file (unexpected header)");
  std::vector<RunReport> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& c = rows[i];
    if (c.size() != 16) throw ConfigError("report.csv line " + std::to_string(i + 1) + ": expected 16 fields");
    RunReport r;
    try {
      r.name = c[0], r.kernel = c[1], r.variant = c[2], r.memory = c[3], r.workload = c[4];
      r.outcome = c[5] == "completed" ? Outcome::Completed
                  : c[5] == "deadlock" ? Outcome::Deadlocked
                                       : Outcome::CycleLimit;
      r.cycles = std::stoull(c[6]);
      r.loads = std::stoull(c[7]);
      r.stores = std::stoull(c[8]);
      r.golden = std::stoull(c[9]);
      if (c[10] != "N/A") r.overhead_pct = std::stod(c[10]);
      r.oracle_match = c[11] == "yes";
      if (c[12] != "N/A") r.clock_period_ns = std::stod(c[12]);
      r.exit_code = std::stoi(c[14]);
      r.message = c[15];
    } catch (const std::logic_error&) {
      throw ConfigError("report.csv line " + std::to_string(i + 1) + ": malformed number");
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_run_outputs(const std::filesystem::path& dir, const std::vector<RunReport>& reports) {
  std::filesystem::create_directories(dir);
  write_file(dir / "report.csv", report_csv(reports));
  write_file(dir / "report.md", report_markdown(reports));
  std::string stats, oracle, memlog;
  for (const auto& r : reports) {
    std::string s = stats_csv(r);
    std::string o = r.oracle ? oracle_csv(*r.oracle) : std::string();
    if (reports.size() > 1) {
      // Prefix entity names with the run so one file holds the whole batch.
      std::string tagged;
      for (const auto& row : parse_csv(s)) {
        if (row[0] == "section") continue;
        std::vector<std::string> cells;
        for (const auto& cell : row) cells.push_back(csv_field(cell));
        cells[1] = csv_field(r.name + "/" + row[1]);
        tagged += fmt::format("{}\n", fmt::join(cells, ","));
      }
      s = tagged;
    } else {
      s = s.substr(s.find('\n') + 1);
    }
    stats += s;
    if (!o.empty()) oracle += o.substr(o.find('\n') + 1);
    if (!r.mem_log.empty() || !r.fetch_log.empty()) {
      std::string m = mem_log_csv(r);
      memlog += m.substr(m.find('\n') + 1);
    }
  }
  write_file(dir / "stats.csv", "section,name,field,value\n" + stats);
  write_file(dir / "oracle.csv", "kernel,region,loads,stores,dependent_loads,golden_cycles\n" + oracle);
  if (!memlog.empty()) write_file(dir / "memlog.csv", "cycle,port,id,kind,addr,latency\n" + memlog);
}

double time_us(Cycle cycles, double period_ns) { return static_cast<double>(cycles) * period_ns / 1000.0; }

Comparison compare_cycles(Cycle baseline, std::optional<double> pb, Cycle subject, std::optional<double> ps) {
  if (baseline == 0 || subject == 0) throw ConfigError("compare: cycle counts must be positive");
  Comparison c;
  c.baseline_cycles = baseline;
  c.subject_cycles = subject;
  c.cycle_speedup = static_cast<double>(baseline) / static_cast<double>(subject);
  if (pb && ps) {
    if (*pb <= 0 || *ps <= 0) throw ConfigError("compare: clock periods must be positive");
    c.baseline_time_us = time_us(baseline, *pb);
    c.subject_time_us = time_us(subject, *ps);
    c.time_speedup = *c.baseline_time_us / *c.subject_time_us;
  }
  return c;
}

Comparison compare(const RunReport& b, const RunReport& s, std::optional<double> pb, std::optional<double> ps) {
  if (family(b.kernel) != family(s.kernel))
    throw ConfigError("compare: kernels differ (" + b.kernel + " vs " + s.kernel + ")");
  if (b.workload != s.workload)
    throw ConfigError("compare: workloads differ (" + b.workload + " vs " + s.workload + ")");
  if (b.outcome != Outcome::Completed || s.outcome != Outcome::Completed)
    throw ConfigError("compare: both runs must have completed");
  Comparison c = compare_cycles(b.cycles, pb ? pb : b.clock_period_ns, s.cycles, ps ? ps : s.clock_period_ns);
  c.baseline = b.name;
  c.subject = s.name;
  return c;
}

std::string comparison_csv(const std::vector<Comparison>& rows) {
  std::string out = "baseline,subject,baseline_cycles,subject_cycles,cycle_speedup,baseline_time_us,subject_time_us,"
                    "time_speedup\n";
  for (const auto& c : rows)
    out += fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(c.baseline), csv_field(c.subject), c.baseline_cycles,
                       c.subject_cycles, num(c.cycle_speedup), opt_num(c.baseline_time_us),
                       opt_num(c.subject_time_us), opt_num(c.time_speedup));
  return out;
}

std::string comparison_markdown(const std::vector<Comparison>& rows) {
  std::string out = "| baseline | subject | baseline cycles | subject cycles | cycle speedup | baseline us | subject us "
                    "| time speedup |\n|---|---|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& c : rows)
    out += fmt::format("| {} | {} | {} | {} | {} | {} | {} | {} |\n", c.baseline, c.subject, c.baseline_cycles,
                       c.subject_cycles, num(c.cycle_speedup), opt_num(c.baseline_time_us),
                       opt_num(c.subject_time_us), opt_num(c.time_speedup));
  return out;
}

void init_logging() {
  const char* env = std::getenv("DAESIM_LOG");
  spdlog::set_pattern("[%l] %v");
  if (!env || !*env) {
    spdlog::set_level(spdlog::level::warn);
    return;
  }
  const auto level = spdlog::level::from_str(env);
  // from_str maps unknown names to "off"; only accept that for "off" itself.
  if (level == spdlog::level::off && std::string_view(env) != "off")
    throw ConfigError("DAESIM_LOG: unknown level '" + std::string(env) + "'");
  spdlog::set_level(level);
}

}  // namespace daesim
