#include "hanoi/isa.hpp"

#include <stdexcept>

namespace hanoi {

bool is_control(Opcode op) {
  switch (op) {
    case Opcode::BRA:
    case Opcode::EXIT:
    case Opcode::BSSY:
    case Opcode::BSYNC:
    case Opcode::BMOV_RB:
    case Opcode::BMOV_BR:
    case Opcode::BREAK:
    case Opcode::WARPSYNC:
    case Opcode::YIELD:
    case Opcode::CALL:
    case Opcode::RET:
      return true;
    default:
      return false;
  }
}

std::string_view opcode_name(Opcode op) {
  switch (op) {
    case Opcode::MOV: return "MOV";
    case Opcode::IADD: return "IADD";
    case Opcode::ISETP: return "ISETP";
    case Opcode::S2R: return "S2R";
    case Opcode::LD: return "LD";
    case Opcode::ST: return "ST";
    case Opcode::ATOMCAS: return "ATOMCAS";
    case Opcode::ATOMEXCH: return "ATOMEXCH";
    case Opcode::NOP: return "NOP";
    case Opcode::BRA: return "BRA";
    case Opcode::EXIT: return "EXIT";
    case Opcode::BSSY: return "BSSY";
    case Opcode::BSYNC: return "BSYNC";
    case Opcode::BMOV_RB:
    case Opcode::BMOV_BR: return "BMOV";
    case Opcode::BREAK: return "BREAK";
    case Opcode::WARPSYNC: return "WARPSYNC";
    case Opcode::YIELD: return "YIELD";
    case Opcode::CALL: return "CALL";
    case Opcode::RET: return "RET";
  }
  return "?";
}

std::string_view cmp_name(CmpOp cmp) {
  switch (cmp) {
    case CmpOp::EQ: return "EQ";
    case CmpOp::NE: return "NE";
    case CmpOp::LT: return "LT";
    case CmpOp::LE: return "LE";
    case CmpOp::GT: return "GT";
    case CmpOp::GE: return "GE";
  }
  return "?";
}

std::optional<CmpOp> parse_cmp(std::string_view name) {
  for (CmpOp c : {CmpOp::EQ, CmpOp::NE, CmpOp::LT, CmpOp::LE, CmpOp::GT, CmpOp::GE})
    if (cmp_name(c) == name) return c;
  return std::nullopt;
}

std::string_view special_name(SpecialReg reg) {
  switch (reg) {
    case SpecialReg::TID: return "SR_TID";
    case SpecialReg::WARPID: return "SR_WARPID";
    case SpecialReg::NWARPS: return "SR_NWARPS";
  }
  return "?";
}

std::optional<SpecialReg> parse_special(std::string_view name) {
  if (name == "SR_TID" || name == "SR_LANEID") return SpecialReg::TID;
  if (name == "SR_WARPID") return SpecialReg::WARPID;
  if (name == "SR_NWARPS") return SpecialReg::NWARPS;
  return std::nullopt;
}

std::string mnemonic(const Instruction& inst) {
  std::string m(opcode_name(inst.op));
  if (inst.op == Opcode::ISETP) {
    m += '.';
    m += cmp_name(inst.cmp);
  }
  return m;
}

ThreadMask eval_guard(const Guard& guard, const ThreadMask& active, const PredFile& preds) {
  std::uint32_t sel = active.bits();
  for (const auto& p : {guard.lead, guard.extra}) {
    if (!p) continue;
    const std::uint32_t reg = preds.at(p->index);
    sel &= p->negated ? ~reg : reg;
  }
  return ThreadMask(active.warp_size(), sel & active.bits());
}

const Label& label_operand(const Instruction& inst, std::size_t i) {
  if (const auto* l = std::get_if<Label>(&inst.operands.at(i))) return *l;
  throw std::logic_error("operand " + std::to_string(i) + " of " + mnemonic(inst) + " is not a label");
}

unsigned rreg_operand(const Instruction& inst, std::size_t i) {
  if (const auto* r = std::get_if<RegR>(&inst.operands.at(i))) return r->index;
  throw std::logic_error("operand " + std::to_string(i) + " of " + mnemonic(inst) + " is not an R register");
}

unsigned breg_operand(const Instruction& inst, std::size_t i) {
  if (const auto* b = std::get_if<RegB>(&inst.operands.at(i))) return b->index;
  throw std::logic_error("operand " + std::to_string(i) + " of " + mnemonic(inst) + " is not a B register");
}

}  // namespace hanoi
