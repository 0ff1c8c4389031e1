#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hanoi/hanoi_cfu.hpp"
#include "hanoi/ipdom.hpp"
#include "hanoi/machine.hpp"

namespace hanoi {

enum class PathPriority { taken_first, not_taken_first, majority };

struct SimtEntry {
  Pc pc = 0;
  ThreadMask active;
  Pc reconv_pc = kEndOfProgram;  // kEndOfProgram for the base entry
  bool operator==(const SimtEntry&) const = default;
};

// Pre-Volta baseline: one stack of (pc, mask, reconvergence pc) entries,
// reconverging at immediate post-dominators. BSSY, BSYNC, BMOV, BREAK,
// WARPSYNC and YIELD are no-ops here.
class SimtStack {
 public:
  SimtStack(unsigned warp_size, IpdomTable ipdom, PathPriority priority = PathPriority::taken_first,
            BranchTie tie = BranchTie::taken_first, Pc entry = 0);

  // Pops entries that reached their reconvergence pc; nullopt once every thread exited.
  std::optional<IssueSlot> next_issue();

  // Updates the stack after the top entry issued `inst`. `guard_result` is the
  // guard evaluated over the top entry's active mask.
  void simt_step(const Instruction& inst, const ThreadMask& guard_result, const WarpState& state,
                 std::size_t program_size);

  const std::vector<SimtEntry>& entries() const { return stack_; }
  std::size_t max_depth() const { return 2 * static_cast<std::size_t>(warp_size_) - 1; }
  unsigned warp_size() const { return warp_size_; }
  std::string dump() const;

 private:
  void diverge(const Instruction& inst, const ThreadMask& taken, const ThreadMask& not_taken);

  unsigned warp_size_;
  IpdomTable ipdom_;
  PathPriority priority_;
  BranchTie tie_;
  std::vector<SimtEntry> stack_;
};

}  // namespace hanoi
