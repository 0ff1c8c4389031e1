#pragma once

#include <iosfwd>
#include <string>

#include "hanoi/assembler.hpp"
#include "hanoi/simulator.hpp"
#include "hanoi/trace.hpp"

namespace hanoi {

inline constexpr int kExitUsage = 2;  // bad input files, assembly errors

// Versioned JSON container for an assembled program.
std::string program_to_json(const Program& program);
Program program_from_json(const std::string& text);

// Loads .asm source or a JSON program produced by `asm`.
Program load_program(const std::string& path);

struct AsmOptions {
  std::string input;
  std::string output;  // "-" or empty: stdout
  bool disassemble = false;  // input is a JSON program, output is assembly
};
int cmd_assemble(const AsmOptions& opts, std::ostream& out, std::ostream& err);

struct RunOptions {
  std::string program;
  std::string glob;  // run every matching file instead of `program`
  RunConfig config;
  std::string trace_out;
  bool dump_state = false;
  bool summary_json = false;
};
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);

struct DiffOptions {
  std::string reference;
  std::string candidate;
  Denominator denom = Denominator::reference;
  double threshold = 0.0;  // percent
  bool json = false;
};
int cmd_diff(const DiffOptions& opts, std::ostream& out, std::ostream& err);

struct StatsOptions {
  unsigned warp_size = 32;
  unsigned num_bregs = 8;
  unsigned pc_bits = 32;
  bool json = false;
};
int cmd_stats(const StatsOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace hanoi
