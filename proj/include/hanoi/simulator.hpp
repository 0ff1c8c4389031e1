#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hanoi/assembler.hpp"
#include "hanoi/hanoi_cfu.hpp"
#include "hanoi/machine.hpp"
#include "hanoi/simt_stack.hpp"
#include "hanoi/trace.hpp"

namespace hanoi {

enum class EngineKind { hanoi, simt_stack };

struct RunConfig {
  EngineKind engine = EngineKind::hanoi;
  std::optional<unsigned> warp_size;  // overrides .warpsize
  std::optional<unsigned> num_warps;  // overrides .warps
  std::uint64_t step_budget = 1'000'000;  // issued instructions per warp
  AtomicOrder atomic_order = AtomicOrder::ascending;
  BranchTie branch_tie = BranchTie::taken_first;
  PathPriority simt_priority = PathPriority::taken_first;
  unsigned num_bregs = 8;
};

enum class WarpOutcome { running, finished, blocked, budget_exceeded, fault };

std::string_view outcome_name(WarpOutcome o);

struct WarpResult {
  WarpOutcome outcome = WarpOutcome::running;
  std::uint64_t instructions = 0;
  std::string fault;
};

// Process exit codes for `run`.
inline constexpr int kExitFinished = 0;
inline constexpr int kExitDeadlock = 3;
inline constexpr int kExitBudget = 4;
inline constexpr int kExitFault = 5;

struct RunResult {
  std::vector<WarpResult> warps;
  std::vector<TraceEvent> trace;  // all warps, in issue order
  std::vector<std::uint32_t> memory;
  // fault > deadlock > budget > finished
  int exit_code() const;
};

class Simulator;

struct StepInfo {
  unsigned warp;
  const TraceEvent& event;
  const Instruction& inst;
  const Simulator& sim;
};

// Runs every warp of a program round-robin, one issued instruction per warp per turn.
class Simulator {
 public:
  using Observer = std::function<void(const StepInfo&)>;

  Simulator(const Program& program, RunConfig config);

  RunResult run(const Observer& observer = {});

  // Issues one instruction on `warp`; returns false once the warp stopped.
  bool step(unsigned warp, const Observer& observer = {});

  unsigned num_warps() const { return static_cast<unsigned>(warps_.size()); }
  unsigned warp_size() const { return warp_size_; }
  const Program& program() const { return program_; }
  const RunConfig& config() const { return config_; }
  const WarpState& warp_state(unsigned w) const { return warps_.at(w).state; }
  const WarpResult& warp_result(unsigned w) const { return warps_.at(w).result; }
  const HanoiCfu* hanoi(unsigned w) const { return std::get_if<HanoiCfu>(&warps_.at(w).cfu); }
  const SimtStack* simt(unsigned w) const { return std::get_if<SimtStack>(&warps_.at(w).cfu); }
  const SharedMemory& memory() const { return *memory_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  std::string dump_state(unsigned w) const;

 private:
  struct Warp {
    WarpState state;
    std::variant<HanoiCfu, SimtStack> cfu;
    WarpResult result;
    std::uint64_t seq = 0;
  };

  void issue_hanoi(Warp& w, HanoiCfu& cfu, const Instruction& inst, const ThreadMask& active);
  void issue_simt(Warp& w, SimtStack& stack, const Instruction& inst, const ThreadMask& active);

  Program program_;
  RunConfig config_;
  unsigned warp_size_;
  std::shared_ptr<SharedMemory> memory_;
  std::vector<Warp> warps_;
  std::vector<TraceEvent> trace_;
};

}  // namespace hanoi
