#include "hanoi/simt_stack.hpp"

#include <algorithm>
#include <sstream>

namespace hanoi {

SimtStack::SimtStack(unsigned warp_size, IpdomTable ipdom, PathPriority priority, BranchTie tie, Pc entry)
    : warp_size_(warp_size), ipdom_(std::move(ipdom)), priority_(priority), tie_(tie) {
  stack_.push_back({entry, ThreadMask::full(warp_size), kEndOfProgram});
}

std::optional<IssueSlot> SimtStack::next_issue() {
  while (!stack_.empty() && stack_.back().pc == stack_.back().reconv_pc) stack_.pop_back();
  if (stack_.empty()) return std::nullopt;
  return IssueSlot{stack_.back().pc, stack_.back().active};
}

void SimtStack::diverge(const Instruction& inst, const ThreadMask& taken, const ThreadMask& not_taken) {
  const Pc rpc = ipdom_.at(inst.pc);
  const Pc target = label_operand(inst, 0).pc;
  SimtEntry& t = stack_.back();
  if (rpc == t.reconv_pc) {
    stack_.pop_back();  // children reconverge where this entry would have
  } else {
    t.pc = rpc;
  }

  bool taken_first = true;
  switch (priority_) {
    case PathPriority::taken_first: taken_first = true; break;
    case PathPriority::not_taken_first: taken_first = false; break;
    case PathPriority::majority:
      taken_first = taken.count() == not_taken.count() ? tie_ == BranchTie::taken_first
                                                       : taken.count() > not_taken.count();
      break;
  }
  SimtEntry taken_entry{target, taken, rpc};
  SimtEntry fall_entry{inst.pc + 1, not_taken, rpc};
  if (taken_first) {
    stack_.push_back(fall_entry);
    stack_.push_back(taken_entry);
  } else {
    stack_.push_back(taken_entry);
    stack_.push_back(fall_entry);
  }
  if (stack_.size() > max_depth())
    throw std::logic_error("SIMT stack depth " + std::to_string(stack_.size()) + " exceeds " +
                           std::to_string(max_depth()));
}

void SimtStack::simt_step(const Instruction& inst, const ThreadMask& guard_result, const WarpState& state,
                          std::size_t program_size) {
  if (stack_.empty()) throw std::logic_error("SIMT stack is empty");
  SimtEntry& t = stack_.back();
  switch (inst.op) {
    case Opcode::BRA: {
      const ThreadMask taken = guard_result & t.active;
      const ThreadMask not_taken = t.active.without(taken);
      if (taken.empty()) t.pc = inst.pc + 1;
      else if (not_taken.empty()) t.pc = label_operand(inst, 0).pc;
      else diverge(inst, taken, not_taken);
      return;
    }
    case Opcode::EXIT: {
      const ThreadMask leaving = guard_result & t.active;
      const bool whole = leaving == t.active;
      if (!whole) t.pc += 1;
      if (leaving.empty()) return;
      for (auto& e : stack_) e.active = e.active.without(leaving);
      std::erase_if(stack_, [](const SimtEntry& e) { return e.active.empty(); });
      return;
    }
    case Opcode::CALL:
      t.pc = label_operand(inst, 0).pc;
      return;
    case Opcode::RET: {
      const std::uint32_t target = uniform_rreg(state, rreg_operand(inst, 0), t.active, inst.pc, "RET");
      if (target >= program_size) throw simulation_fault(inst.pc, "RET to out-of-range pc " + std::to_string(target));
      t.pc = target;
      return;
    }
    default:
      t.pc += 1;
      return;
  }
}

std::string SimtStack::dump() const {
  std::ostringstream out;
  out << "SIMT stack:\n";
  for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
    out << "  pc=" << it->pc << " active=" << it->active.to_string() << " rpc=";
    if (it->reconv_pc == kEndOfProgram) out << "-";
    else out << it->reconv_pc;
    out << "\n";
  }
  return out.str();
}

}  // namespace hanoi
