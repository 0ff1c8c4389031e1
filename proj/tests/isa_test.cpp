#include <random>

#include <gtest/gtest.h>

#include "hanoi/isa.hpp"

namespace hanoi {
namespace {

PredFile preds(std::initializer_list<std::pair<unsigned, const char*>> values) {
  PredFile p{};
  for (auto [reg, mask] : values) p[reg] = string_to_mask(mask, 4).bits();
  return p;
}

TEST(EvalGuard, LeadAndNegatedExtra) {
  Guard g;
  g.lead = PredRef{0, false};
  g.extra = PredRef{1, true};
  EXPECT_EQ(eval_guard(g, ThreadMask::full(4), preds({{0, "1111"}, {1, "0001"}})).to_string(), "1110");
}

TEST(EvalGuard, UnconditionalIsIdentity) {
  const ThreadMask active = string_to_mask("1010", 4);
  EXPECT_EQ(eval_guard(Guard{}, active, preds({{0, "1111"}})), active);
}

TEST(EvalGuard, NegatedLeadClearsSetLanes) {
  Guard g;
  g.lead = PredRef{0, true};
  EXPECT_EQ(eval_guard(g, string_to_mask("0110", 4), preds({{0, "0110"}})).to_string(), "0000");
}

TEST(EvalGuard, ResultStaysInsideActive) {
  std::mt19937 rng(7);
  for (int i = 0; i < 5000; ++i) {
    const unsigned ws = 2 + rng() % 31;
    const ThreadMask active(ws, static_cast<std::uint32_t>(rng()) & ThreadMask::lane_bits(ws));
    PredFile p{};
    for (auto& r : p) r = static_cast<std::uint32_t>(rng()) & ThreadMask::lane_bits(ws);
    Guard g;
    if (rng() % 2) g.lead = PredRef{static_cast<unsigned>(rng() % kNumPredRegs), rng() % 2 == 0};
    if (rng() % 2) g.extra = PredRef{static_cast<unsigned>(rng() % kNumPredRegs), rng() % 2 == 0};
    const ThreadMask r = eval_guard(g, active, p);
    ASSERT_TRUE(r.subset_of(active));
    // Per-lane oracle.
    for (unsigned lane = 0; lane < ws; ++lane) {
      bool on = active.test(lane);
      for (const auto& ref : {g.lead, g.extra})
        if (ref) on = on && (((p[ref->index] >> lane) & 1u) != 0) != ref->negated;
      ASSERT_EQ(r.test(lane), on);
    }
    if (g.unconditional()) ASSERT_EQ(r, active);
  }
}

TEST(Isa, ControlOpcodes) {
  for (Opcode op : {Opcode::BRA, Opcode::EXIT, Opcode::BSSY, Opcode::BSYNC, Opcode::BMOV_RB, Opcode::BMOV_BR,
                    Opcode::BREAK, Opcode::WARPSYNC, Opcode::YIELD, Opcode::CALL, Opcode::RET})
    EXPECT_TRUE(is_control(op)) << opcode_name(op);
  for (Opcode op : {Opcode::MOV, Opcode::IADD, Opcode::ISETP, Opcode::S2R, Opcode::LD, Opcode::ST, Opcode::ATOMCAS,
                    Opcode::ATOMEXCH, Opcode::NOP})
    EXPECT_FALSE(is_control(op)) << opcode_name(op);
}

TEST(Isa, Names) {
  EXPECT_EQ(opcode_name(Opcode::BMOV_RB), "BMOV");
  EXPECT_EQ(opcode_name(Opcode::BMOV_BR), "BMOV");
  Instruction setp;
  setp.op = Opcode::ISETP;
  setp.cmp = CmpOp::GE;
  EXPECT_EQ(mnemonic(setp), "ISETP.GE");
  EXPECT_EQ(parse_cmp("LT"), CmpOp::LT);
  EXPECT_FALSE(parse_cmp("XX"));
  EXPECT_EQ(parse_special("SR_TID"), SpecialReg::TID);
  EXPECT_EQ(parse_special("SR_LANEID"), SpecialReg::TID);
  EXPECT_FALSE(parse_special("SR_CLOCK"));
}

}  // namespace
}  // namespace hanoi
