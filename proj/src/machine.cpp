#include "hanoi/machine.hpp"

#include <cassert>

namespace hanoi {
namespace {

std::uint32_t source_value(const Operand& op, const LaneRegs& regs) {
  if (const auto* r = std::get_if<RegR>(&op)) return regs[r->index];
  if (const auto* i = std::get_if<Imm>(&op)) return static_cast<std::uint32_t>(i->value);
  if (const auto* l = std::get_if<Label>(&op)) return l->pc;
  throw std::logic_error("operand is not a value source");
}

bool compare(CmpOp cmp, std::int32_t a, std::int32_t b) {
  switch (cmp) {
    case CmpOp::EQ: return a == b;
    case CmpOp::NE: return a != b;
    case CmpOp::LT: return a < b;
    case CmpOp::LE: return a <= b;
    case CmpOp::GT: return a > b;
    case CmpOp::GE: return a >= b;
  }
  return false;
}

void exec_lane(const Instruction& inst, unsigned lane, WarpState& state) {
  auto& regs = state.rregs[lane];
  const auto& ops = inst.operands;
  auto& mem = *state.memory;
  switch (inst.op) {
    case Opcode::MOV:
      regs[rreg_operand(inst, 0)] = source_value(ops[1], regs);
      break;
    case Opcode::IADD:
      regs[rreg_operand(inst, 0)] = source_value(ops[1], regs) + source_value(ops[2], regs);
      break;
    case Opcode::ISETP: {
      const auto a = static_cast<std::int32_t>(source_value(ops[1], regs));
      const auto b = static_cast<std::int32_t>(source_value(ops[2], regs));
      auto& dst = state.pregs[std::get<RegP>(ops[0]).index];
      if (compare(inst.cmp, a, b)) dst |= 1u << lane;
      else dst &= ~(1u << lane);
      break;
    }
    case Opcode::S2R: {
      std::uint32_t v = 0;
      switch (std::get<Special>(ops[1]).reg) {
        case SpecialReg::TID: v = lane; break;
        case SpecialReg::WARPID: v = state.warp_id; break;
        case SpecialReg::NWARPS: v = state.num_warps; break;
      }
      regs[rreg_operand(inst, 0)] = v;
      break;
    }
    case Opcode::LD:
      regs[rreg_operand(inst, 0)] = mem.load(regs[rreg_operand(inst, 1)], inst.pc, lane);
      break;
    case Opcode::ST:
      mem.store(regs[rreg_operand(inst, 0)], regs[rreg_operand(inst, 1)], inst.pc, lane);
      break;
    case Opcode::ATOMCAS: {
      const std::uint32_t addr = regs[rreg_operand(inst, 1)];
      const std::uint32_t old = mem.load(addr, inst.pc, lane);
      if (old == regs[rreg_operand(inst, 2)]) mem.store(addr, regs[rreg_operand(inst, 3)], inst.pc, lane);
      regs[rreg_operand(inst, 0)] = old;
      break;
    }
    case Opcode::ATOMEXCH: {
      const std::uint32_t addr = regs[rreg_operand(inst, 1)];
      const std::uint32_t old = mem.load(addr, inst.pc, lane);
      mem.store(addr, regs[rreg_operand(inst, 2)], inst.pc, lane);
      regs[rreg_operand(inst, 0)] = old;
      break;
    }
    case Opcode::NOP:
      break;
    default:
      throw std::logic_error("exec_data called with control opcode " + mnemonic(inst));
  }
}

}  // namespace

void exec_data(const Instruction& inst, const ThreadMask& exec, WarpState& state, AtomicOrder order) {
  assert(exec.warp_size() == state.warp_size);
  if (order == AtomicOrder::ascending) {
    for (unsigned lane = 0; lane < state.warp_size; ++lane)
      if (exec.test(lane)) exec_lane(inst, lane, state);
  } else {
    for (unsigned lane = state.warp_size; lane-- > 0;)
      if (exec.test(lane)) exec_lane(inst, lane, state);
  }
}

std::uint32_t uniform_rreg(const WarpState& state, unsigned reg, const ThreadMask& lanes, Pc pc, const char* what) {
  std::optional<std::uint32_t> value;
  for (unsigned lane = 0; lane < state.warp_size; ++lane) {
    if (!lanes.test(lane)) continue;
    const std::uint32_t v = state.rregs[lane][reg];
    if (value && *value != v)
      throw simulation_fault(pc, std::string(what) + ": lanes disagree on R" + std::to_string(reg), lane);
    value = v;
  }
  if (!value) throw simulation_fault(pc, std::string(what) + ": no executing lanes");
  return *value;
}

}  // namespace hanoi
