#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hanoi/assembler.hpp"
#include "hanoi/cfg.hpp"
#include "hanoi/simulator.hpp"

namespace hanoi::testing {

struct GenOptions {
  unsigned warp_size = 4;
  unsigned max_blocks = 12;
  unsigned max_depth = 3;  // capped at warp_size - 1
  bool yields = false;     // sprinkle YIELD into region bodies
  bool warpsync = false;   // full-warp WARPSYNC at top level
  bool memory = false;     // per-lane stores and atomics
};

struct GeneratedProgram {
  std::string source;
  Program program;
  std::size_t blocks = 0;
};

// Structured programs (if-then, if-else, do-while with per-lane trip counts)
// whose BSSY targets sit at the immediate post-dominator of each branch.
GeneratedProgram generate_structured(std::mt19937_64& rng, const GenOptions& opts);

// Post-dominators by reachability: d post-dominates b when every path from b
// to the exit meets d. Returns the nearest strict one per node.
std::vector<std::optional<std::size_t>> brute_force_ipdom(const Cfg& cfg);

// Trace with BSYNC issues removed. Hanoi issues BSYNC once per arriving split,
// the SIMT stack once after reconvergence.
std::vector<TraceEvent> without_bsync(const std::vector<TraceEvent>& trace);

// Runs a program while checking the Hanoi invariants after every issue.
// Returns the violations found (empty when all held) and the run result.
struct CheckedRun {
  RunResult result;
  std::vector<std::string> violations;
};
CheckedRun run_checked(const Program& program, RunConfig config);

// Whole-trace JSONL text, for byte comparisons.
std::string trace_text(const std::vector<TraceEvent>& trace);

std::string read_text_file(const std::string& path);

}  // namespace hanoi::testing
