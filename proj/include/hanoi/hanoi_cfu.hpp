#pragma once

#include <string>
#include <variant>
#include <vector>

#include "hanoi/isa.hpp"
#include "hanoi/machine.hpp"

namespace hanoi {

enum class BranchTie { taken_first, not_taken_first };

struct WsEntry {
  Pc pc = 0;
  ThreadMask active;
  bool operator==(const WsEntry&) const = default;
};

struct RecEntry {
  Pc pc = 0;  // where the reconverged split resumes
  unsigned breg = 0;
  bool operator==(const RecEntry&) const = default;
};

struct BReg {
  ThreadMask mask;
  bool valid = false;
  bool operator==(const BReg&) const = default;
};

// Everything the unit holds. Stacks are stored bottom first; back() is the top.
struct HanoiState {
  std::vector<WsEntry> ws;
  std::vector<RecEntry> rec;
  std::vector<BReg> bregs;
  ThreadMask waiting;
  ThreadMask finished;
  bool operator==(const HanoiState&) const = default;
};

struct IssueSlot {
  Pc pc = 0;
  ThreadMask active;
};
struct Finished {};
struct Blocked {};
using IssueResult = std::variant<IssueSlot, Finished, Blocked>;

enum class BmovDirection { b_to_r, r_to_b };

struct HanoiConfig {
  unsigned num_bregs = 8;
  BranchTie tie = BranchTie::taken_first;
  unsigned rec_capacity = 0;  // 0: warp_size - 1
};

// Per-warp control-flow unit: a warp-split (WS) stack of paths, a
// reconvergence (REC) stack of pending join points, Bx registers holding
// reconvergence masks, and the waiting / finished masks.
class HanoiCfu {
 public:
  explicit HanoiCfu(unsigned warp_size, HanoiConfig config = {}, Pc entry = 0);
  HanoiCfu(HanoiState state, HanoiConfig config);

  // Fires every reconvergence whose mask is valid and fully waiting, then
  // reports the top split, Finished, or Blocked (nobody runnable, not all done).
  IssueResult next_issue();

  void on_bra(const Instruction& inst, const ThreadMask& taken);
  void on_bssy(unsigned breg, Pc target_pc);
  void on_bsync(unsigned breg);
  void on_warpsync(ThreadMask reconv_mask);
  void on_break(unsigned breg, const ThreadMask& remove);
  void on_bmov(WarpState& state, BmovDirection dir, unsigned breg, unsigned rreg, const ThreadMask& exec);
  void on_exit(const ThreadMask& exiting);
  void on_yield();
  void on_call_ret(const Instruction& inst, const WarpState& state, std::size_t program_size);
  // Non-control instructions: top.pc += 1.
  void advance();

  const HanoiState& state() const { return s_; }
  const std::vector<WsEntry>& ws() const { return s_.ws; }
  const std::vector<RecEntry>& rec() const { return s_.rec; }
  const BReg& breg(unsigned i) const { return s_.bregs.at(i); }
  const ThreadMask& waiting() const { return s_.waiting; }
  const ThreadMask& finished() const { return s_.finished; }
  unsigned warp_size() const { return warp_size_; }
  unsigned num_bregs() const { return static_cast<unsigned>(s_.bregs.size()); }
  unsigned rec_capacity() const { return rec_capacity_; }
  const HanoiConfig& config() const { return config_; }

  std::string dump() const;

 private:
  WsEntry& top();
  Pc fault_pc() const;
  BReg& checked_breg(unsigned i);
  void push_rec(RecEntry e);

  HanoiConfig config_;
  unsigned warp_size_;
  unsigned rec_capacity_;
  HanoiState s_;
};

// Empty when every structural invariant holds; otherwise one message per violation.
std::vector<std::string> check_invariants(const HanoiCfu& cfu);

}  // namespace hanoi
