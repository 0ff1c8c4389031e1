#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hanoi/mask.hpp"

namespace hanoi {

inline constexpr unsigned kNumPredRegs = 7;
inline constexpr unsigned kNumRRegs = 64;
inline constexpr unsigned kMaxBRegs = 16;

using Pc = std::uint32_t;

enum class Opcode {
  MOV,
  IADD,
  ISETP,
  S2R,
  LD,
  ST,
  ATOMCAS,
  ATOMEXCH,
  NOP,
  BRA,
  EXIT,
  BSSY,
  BSYNC,
  BMOV_RB,  // BMOV Rd, Bx  (B -> R)
  BMOV_BR,  // BMOV Bx, Rs  (R -> B)
  BREAK,
  WARPSYNC,
  YIELD,
  CALL,
  RET,
};

enum class CmpOp { EQ, NE, LT, LE, GT, GE };

enum class SpecialReg { TID, WARPID, NWARPS };

struct PredRef {
  unsigned index = 0;
  bool negated = false;
  bool operator==(const PredRef&) const = default;
};

// Up to two predicates; both present means AND.
struct Guard {
  std::optional<PredRef> lead;   // written before the mnemonic: @P0
  std::optional<PredRef> extra;  // written as the first operand: BRA !P1, L
  bool unconditional() const { return !lead && !extra; }
  bool operator==(const Guard&) const = default;
};

struct RegR {
  unsigned index = 0;
  bool operator==(const RegR&) const = default;
};
struct RegP {
  unsigned index = 0;
  bool negated = false;
  bool operator==(const RegP&) const = default;
};
struct RegB {
  unsigned index = 0;
  bool operator==(const RegB&) const = default;
};
struct Imm {
  std::int32_t value = 0;
  bool operator==(const Imm&) const = default;
};
struct Label {
  Pc pc = 0;
  std::string name;
  bool operator==(const Label& o) const { return pc == o.pc; }
};
struct Special {
  SpecialReg reg = SpecialReg::TID;
  bool operator==(const Special&) const = default;
};

using Operand = std::variant<RegR, RegP, RegB, Imm, Label, Special>;

struct Instruction {
  Opcode op = Opcode::NOP;
  CmpOp cmp = CmpOp::EQ;  // ISETP only
  Guard guard;
  std::vector<Operand> operands;
  Pc pc = 0;
  unsigned line = 0;  // source line, 0 when synthesized

  bool operator==(const Instruction& o) const {
    return op == o.op && cmp == o.cmp && guard == o.guard && operands == o.operands && pc == o.pc;
  }
};

// Per-warp predicate file: bit i of each register belongs to thread i.
using PredFile = std::array<std::uint32_t, kNumPredRegs>;

bool is_control(Opcode op);
std::string_view opcode_name(Opcode op);  // BMOV_RB and BMOV_BR both render as "BMOV"
std::string mnemonic(const Instruction& inst);  // includes .CMP suffix for ISETP
std::string_view cmp_name(CmpOp cmp);
std::string_view special_name(SpecialReg reg);
std::optional<SpecialReg> parse_special(std::string_view name);
std::optional<CmpOp> parse_cmp(std::string_view name);

// Threads of `active` for which every predicate in the guard holds.
ThreadMask eval_guard(const Guard& guard, const ThreadMask& active, const PredFile& preds);

inline std::string mask_to_string(const ThreadMask& m) { return m.to_string(); }
inline ThreadMask string_to_mask(std::string_view text, unsigned warp_size) {
  return ThreadMask::from_string(text, warp_size);
}

// Operand accessors. They assume the assembler validated the signature.
const Label& label_operand(const Instruction& inst, std::size_t i);
unsigned rreg_operand(const Instruction& inst, std::size_t i);
unsigned breg_operand(const Instruction& inst, std::size_t i);

}  // namespace hanoi
