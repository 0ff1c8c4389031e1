// hanoi: assemble, simulate and compare warp control-flow traces.
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "hanoi/commands.hpp"

namespace {

using namespace hanoi;

// Accepts both --some-flag and --some_flag.
std::string names(const std::string& flag) {
  std::string underscored = flag;
  for (auto& c : underscored)
    if (c == '-') c = '_';
  return underscored == flag ? "--" + flag : "--" + flag + ",--" + underscored;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Functional simulator for GPU warp control flow"};
  app.require_subcommand(1);

  AsmOptions asm_opts;
  auto* asm_cmd = app.add_subcommand("asm", "Assemble a program into JSON");
  asm_cmd->add_option("input", asm_opts.input, "Assembly source (or JSON with --disasm)")->required();
  asm_cmd->add_option("-o," + names("output"), asm_opts.output, "Output file (default stdout)");
  asm_cmd->add_flag("--disasm", asm_opts.disassemble, "Convert a JSON program back to assembly");

  RunOptions run_opts;
  std::string engine = "hanoi", atomic_order = "asc", branch_tie = "taken", priority = "taken_first";
  unsigned warp_size = 0, num_warps = 0;
  auto* run_cmd = app.add_subcommand("run", "Simulate a program");
  run_cmd->add_option("program", run_opts.program, "Assembly source or JSON program");
  run_cmd->add_option(names("glob"), run_opts.glob, "Run every file matching a pattern such as programs/*.asm");
  run_cmd->add_option(names("engine"), engine, "Control-flow unit")
      ->check(CLI::IsMember({"hanoi", "simtstack"}))
      ->envname("HANOI_ENGINE");
  run_cmd->add_option(names("warp-size"), warp_size, "Override .warpsize")
      ->check(CLI::Range(2u, 32u))
      ->envname("HANOI_WARP_SIZE");
  run_cmd->add_option(names("num-warps"), num_warps, "Override .warps")
      ->check(CLI::Range(1u, 1024u))
      ->envname("HANOI_NUM_WARPS");
  run_cmd->add_option(names("step-budget"), run_opts.config.step_budget, "Issued instructions per warp")
      ->check(CLI::PositiveNumber)
      ->envname("HANOI_STEP_BUDGET");
  run_cmd->add_option(names("atomic-order"), atomic_order, "Lane order for atomics")
      ->check(CLI::IsMember({"asc", "desc"}))
      ->envname("HANOI_ATOMIC_ORDER");
  run_cmd->add_option(names("branch-tie"), branch_tie, "Path run first on an even split")
      ->check(CLI::IsMember({"taken", "not_taken"}))
      ->envname("HANOI_BRANCH_TIE");
  run_cmd->add_option(names("simt-priority"), priority, "Path the SIMT stack runs first")
      ->check(CLI::IsMember({"taken_first", "not_taken_first", "majority"}))
      ->envname("HANOI_SIMT_PRIORITY");
  run_cmd->add_option(names("num-bregs"), run_opts.config.num_bregs, "B registers per warp")
      ->check(CLI::Range(1u, 16u))
      ->envname("HANOI_NUM_BREGS");
  run_cmd->add_option(names("trace-out"), run_opts.trace_out, "Write the JSONL trace here (a directory with --glob)");
  run_cmd->add_flag(names("dump-state"), run_opts.dump_state, "Print final control-flow state of each warp");
  run_cmd->add_flag(names("summary-json"), run_opts.summary_json, "Print the summary as JSON lines");

  DiffOptions diff_opts;
  std::string denom = "ref";
  auto* diff_cmd = app.add_subcommand("diff", "Compare two traces by edit distance");
  diff_cmd->add_option("reference", diff_opts.reference, "Reference trace")->required();
  diff_cmd->add_option("candidate", diff_opts.candidate, "Candidate trace")->required();
  diff_cmd->add_option(names("denom"), denom, "Normalise by the reference length or the longer trace")
      ->check(CLI::IsMember({"ref", "max"}));
  diff_cmd->add_option(names("threshold"), diff_opts.threshold, "Largest acceptable aggregate percentage")
      ->check(CLI::NonNegativeNumber);
  diff_cmd->add_flag("--json", diff_opts.json, "Print JSON lines");

  StatsOptions stats_opts;
  auto* stats_cmd = app.add_subcommand("stats", "Storage cost of Hanoi and the SIMT stack");
  stats_cmd->add_option(names("warp-size"), stats_opts.warp_size)->check(CLI::Range(2u, 32u));
  stats_cmd->add_option(names("num-bregs"), stats_opts.num_bregs);
  stats_cmd->add_option(names("pc-bits"), stats_opts.pc_bits)->check(CLI::Range(1u, 64u));
  stats_cmd->add_flag("--json", stats_opts.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (asm_cmd->parsed()) return cmd_assemble(asm_opts, std::cout, std::cerr);
  if (stats_cmd->parsed()) return cmd_stats(stats_opts, std::cout, std::cerr);
  if (diff_cmd->parsed()) {
    diff_opts.denom = denom == "max" ? Denominator::longer : Denominator::reference;
    return cmd_diff(diff_opts, std::cout, std::cerr);
  }

  if (run_opts.program.empty() == run_opts.glob.empty()) {
    std::cerr << "run: give either a program or --glob\n";
    return kExitUsage;
  }
  auto& cfg = run_opts.config;
  cfg.engine = engine == "simtstack" ? EngineKind::simt_stack : EngineKind::hanoi;
  if (warp_size) cfg.warp_size = warp_size;
  if (num_warps) cfg.num_warps = num_warps;
  cfg.atomic_order = atomic_order == "desc" ? AtomicOrder::descending : AtomicOrder::ascending;
  cfg.branch_tie = branch_tie == "not_taken" ? BranchTie::not_taken_first : BranchTie::taken_first;
  static const std::map<std::string, PathPriority> priorities{{"taken_first", PathPriority::taken_first},
                                                              {"not_taken_first", PathPriority::not_taken_first},
                                                              {"majority", PathPriority::majority}};
  cfg.simt_priority = priorities.at(priority);
  return cmd_run(run_opts, std::cout, std::cerr);
}
