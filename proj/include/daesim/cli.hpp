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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "daesim/kernels.hpp"
#include "daesim/oracle.hpp"

namespace daesim {

/// Process exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitDeadlock = 2,
  kExitCycleLimit = 3,
  kExitOracleMismatch = 4,
  kExitConfig = 5,
  kExitSimFault = 6,
};

/// Where a run's input comes from: a workload file, a named preset, or a
/// generator description. Exactly one is set.
struct WorkloadSource {
  std::optional<std::filesystem::path> file;
  std::string preset;
  /// JSON text of a generator description ({"kind": "spmv", "rows": ...}).
  std::string generate;
  std::uint64_t seed = 1;
};

Workload resolve_workload(const WorkloadSource& src);
/// Builds a workload from generator JSON text.
Workload generate_workload(std::string_view json_text, std::uint64_t seed);

struct RunConfig {
  std::string name;  // report label; defaults to kernel/variant
  KernelParams params;
  WorkloadSource workload;
  MemoryPlan memory;
  Cycle max_cycles = 200'000'000;
  std::uint64_t seed = 1;
  std::optional<double> clock_period_ns;
  bool mem_log = false;

  std::string label() const;
};

/// Parses a run configuration document. Unknown keys are rejected.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Command-line overrides applied on top of a file configuration.
struct Overrides {
  std::optional<std::string> kernel, variant, preset, memory;
  std::optional<std::filesystem::path> workload_file;
  std::optional<std::uint64_t> seed;
  std::optional<Cycle> max_cycles, latency;
  std::optional<std::uint32_t> rif, chunk;
};
void apply(RunConfig& cfg, const Overrides& o);

struct RunReport {
  std::string name;
  std::string kernel;
  std::string variant;
  std::string memory;
  std::string workload;
  Outcome outcome = Outcome::Completed;
  Cycle cycles = 0;
  std::uint64_t loads = 0;
  std::uint64_t stores = 0;
  Cycle golden = 0;
  std::optional<double> overhead_pct;
  bool oracle_match = false;
  std::optional<double> clock_period_ns;
  int exit_code = kExitOk;
  std::string message;

  SimStats stats;
  std::optional<OracleResult> oracle;
  std::vector<MemLogEntry> mem_log;
  std::vector<std::pair<std::string, std::vector<FetchLogEntry>>> fetch_log;
};

/// Builds, simulates, and checks one configuration. Configuration errors
/// and simulation faults are reported in the result, not thrown.
RunReport run(const RunConfig& cfg);

/// Expands a sweep document ({"base": {...}, "vary": {"latency": [...], ...}})
/// into one configuration per combination, in row-major order.
std::vector<RunConfig> expand_sweep(std::string_view json_text);
/// Runs every configuration on up to `jobs` threads; results keep input order.
std::vector<RunReport> run_all(const std::vector<RunConfig>& cfgs, unsigned jobs);
/// Worst exit status of a batch (non-zero beats zero, first failure wins).
int batch_exit_code(const std::vector<RunReport>& reports);

std::string report_csv(const std::vector<RunReport>& reports);
std::string report_markdown(const std::vector<RunReport>& reports);
/// Long format: section,name,field,value.
std::string stats_csv(const RunReport& r);
std::string mem_log_csv(const RunReport& r);
/// Reads the rows written by report_csv.
std::vector<RunReport> parse_report_csv(std::string_view text);

/// Writes report.csv, report.md, stats.csv, oracle.csv and, when logged,
/// memlog.csv into `dir`.
void write_run_outputs(const std::filesystem::path& dir, const std::vector<RunReport>& reports);

double time_us(Cycle cycles, double period_ns);

struct Comparison {
  std::string baseline;
  std::string subject;
  Cycle baseline_cycles = 0;
  Cycle subject_cycles = 0;
  double cycle_speedup = 0;
  std::optional<double> baseline_time_us;
  std::optional<double> subject_time_us;
  std::optional<double> time_speedup;
};

/// Speedup of `subject` over `baseline`; the time columns need both periods.
Comparison compare_cycles(Cycle baseline, std::optional<double> baseline_period_ns, Cycle subject,
                          std::optional<double> subject_period_ns);
/// Rejects runs of different kernels or workloads. Periods default to the
/// ones recorded in the reports.
Comparison compare(const RunReport& baseline, const RunReport& subject,
                   std::optional<double> baseline_period_ns = std::nullopt,
                   std::optional<double> subject_period_ns = std::nullopt);
std::string comparison_csv(const std::vector<Comparison>& rows);
std::string comparison_markdown(const std::vector<Comparison>& rows);

/// Log verbosity from DAESIM_LOG (trace, debug, info, warn, error, off).
void init_logging();

}  // namespace daesim
