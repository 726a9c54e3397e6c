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
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "daesim/cli.hpp"
#include "daesim/generate.hpp"

using namespace daesim;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct RunFlags {
  std::string config;
  std::string out = "out";
  Overrides o;
  bool mem_log = false;
  std::optional<double> period;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "run configuration (JSON)");
  cmd->add_option("--kernel", f.o.kernel, "kernel name");
  cmd->add_option("--variant", f.o.variant, "coupled, decoupled or chunked");
  cmd->add_option("--preset", f.o.preset, "workload preset, e.g. desk/spmv");
  cmd->add_option("--workload", f.o.workload_file, "workload file written by 'gen'");
  cmd->add_option("--seed", f.o.seed, "seed for the workload generator and memory models");
  cmd->add_option("--max-cycles", f.o.max_cycles, "abort after this many cycles");
  cmd->add_option("--memory", f.o.memory, "fixed, moms or jitter");
  cmd->add_option("--latency", f.o.latency, "fixed read and write latency in cycles");
  cmd->add_option("--rif", f.o.rif, "requests in flight for pointer chasing");
  cmd->add_option("--chunk", f.o.chunk, "chunk size for the fixed-length chase");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_flag("--mem-log", f.mem_log, "write memlog.csv with every memory response");
  cmd->add_option("--period", f.period, "clock period in ns for the time column");
}

RunConfig base_config(const RunFlags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  if (f.config.empty() && !f.o.preset && !f.o.workload_file) {
    // Without a file, default to the desk preset of the chosen kernel.
    const Kernel k = f.o.kernel ? parse_kernel(*f.o.kernel) : c.params.kernel;
    c.workload.preset = "desk/" + std::string(to_string(k));
  }
  apply(c, f.o);
  if (f.mem_log) c.mem_log = true;
  if (f.period) c.clock_period_ns = f.period;
  return c;
}

int finish(const std::vector<RunReport>& reports, const std::string& out) {
  write_run_outputs(out, reports);
  std::cout << report_markdown(reports);
  return batch_exit_code(reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-level simulator for decoupled access/execute accelerator kernels"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "write a workload file");
  std::string gen_preset, gen_config, gen_out;
  std::uint64_t gen_seed = 1;
  gen->add_option("--preset", gen_preset, "preset name (see --list)");
  gen->add_option("--config", gen_config, "generator description (JSON)");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output file");
  bool gen_list = false;
  gen->add_flag("--list", gen_list, "print the preset names");

  auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
  RunFlags run_flags;
  add_run_flags(run_cmd, run_flags);

  auto* sweep = app.add_subcommand("sweep", "simulate every combination of a sweep file");
  RunFlags sweep_flags;
  add_run_flags(sweep, sweep_flags);
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  sweep->add_option("--jobs", jobs, "parallel runs");

  auto* cmp = app.add_subcommand("compare", "speedup of a subject run over a baseline run");
  std::string cmp_base, cmp_subject, cmp_out;
  std::optional<Cycle> cycles_base, cycles_subject;
  std::optional<double> period_base, period_subject;
  cmp->add_option("baseline", cmp_base, "baseline report.csv");
  cmp->add_option("subject", cmp_subject, "subject report.csv");
  cmp->add_option("--cycles-base", cycles_base, "baseline cycles instead of a report");
  cmp->add_option("--cycles-subject", cycles_subject, "subject cycles instead of a report");
  cmp->add_option("--period-base", period_base, "baseline clock period in ns");
  cmp->add_option("--period-subject", period_subject, "subject clock period in ns");
  cmp->add_option("--out", cmp_out, "directory for comparison.csv and comparison.md");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    init_logging();
    if (*gen) {
      if (gen_list) {
        for (const auto& n : preset_names()) std::cout << n << "\n";
        return kExitOk;
      }
      if (gen_out.empty()) throw ConfigError("gen: --out is required");
      if (gen_preset.empty() == gen_config.empty()) throw ConfigError("gen: give exactly one of --preset, --config");
      const Workload w =
          gen_preset.empty() ? generate_workload(slurp(gen_config), gen_seed) : make_preset(gen_preset, gen_seed);
      save_workload(gen_out, w);
      std::cout << describe(w) << " -> " << gen_out << "\n";
      return kExitOk;
    }
    if (*run_cmd) {
      const RunConfig c = base_config(run_flags);
      return finish({run(c)}, run_flags.out);
    }
    if (*sweep) {
      if (sweep_flags.config.empty()) throw ConfigError("sweep: --config is required");
      auto cfgs = expand_sweep(slurp(sweep_flags.config));
      for (auto& c : cfgs) {
        apply(c, sweep_flags.o);
        if (sweep_flags.mem_log) c.mem_log = true;
        if (sweep_flags.period) c.clock_period_ns = sweep_flags.period;
      }
      return finish(run_all(cfgs, jobs), sweep_flags.out);
    }
    if (*cmp) {
      std::vector<Comparison> rows;
      if (cycles_base || cycles_subject) {
        if (!cycles_base || !cycles_subject) throw ConfigError("compare: give both --cycles-base and --cycles-subject");
        Comparison c = compare_cycles(*cycles_base, period_base, *cycles_subject, period_subject);
        c.baseline = "baseline";
        c.subject = "subject";
        rows.push_back(c);
      } else {
        if (cmp_base.empty() || cmp_subject.empty()) throw ConfigError("compare: two report.csv files are required");
        const auto b = parse_report_csv(slurp(cmp_base));
        const auto s = parse_report_csv(slurp(cmp_subject));
        if (b.empty() || b.size() != s.size())
          throw ConfigError("compare: reports must have the same, non-zero number of rows");
        for (std::size_t i = 0; i < b.size(); ++i) rows.push_back(compare(b[i], s[i], period_base, period_subject));
      }
      if (!cmp_out.empty()) {
        std::filesystem::create_directories(cmp_out);
        std::ofstream(std::filesystem::path(cmp_out) / "comparison.csv") << comparison_csv(rows);
        std::ofstream(std::filesystem::path(cmp_out) / "comparison.md") << comparison_markdown(rows);
      }
      std::cout << comparison_markdown(rows);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SimFault& e) {
    std::cerr << "simulation fault: " << e.what() << "\n";
    return kExitSimFault;
  }
  return kExitOk;
}
