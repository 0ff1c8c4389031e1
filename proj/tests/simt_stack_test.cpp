#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "hanoi/ipdom.hpp"
#include "hanoi/simt_stack.hpp"
#include "hanoi/simulator.hpp"
#include "random_programs.hpp"

namespace hanoi {
namespace {

ThreadMask M(const char* s) { return ThreadMask::from_string(s); }

using Stack = std::vector<SimtEntry>;

// Drives a SIMT stack over a program and records the stack at every issue.
struct Driver {
  Program program;
  SimtStack stack;
  WarpState state;
  std::vector<std::pair<Pc, Stack>> at_issue;

  explicit Driver(const Program& p, PathPriority prio = PathPriority::taken_first)
      : program(p),
        stack(p.warp_size, compute_ipdom(build_cfg(p), p), prio),
        state(0, p.warp_size, std::make_shared<SharedMemory>(p.mem_words)) {}

  void run(std::size_t budget = 1000) {
    for (std::size_t n = 0; n < budget; ++n) {
      const auto slot = stack.next_issue();
      if (!slot) return;
      at_issue.push_back({slot->pc, stack.entries()});
      const Instruction& inst = program.at(slot->pc);
      const ThreadMask g = eval_guard(inst.guard, slot->active, state.pregs);
      if (!is_control(inst.op) && g.any()) exec_data(inst, g, state);
      stack.simt_step(inst, g, state, program.size());
    }
  }
};

Program corpus(const std::string& name) {
  return assemble(testing::read_text_file(std::string(HANOI_PROGRAMS_DIR) + "/" + name));
}

TEST(SimtStack, DiamondSnapshots) {
  Driver d(corpus("fig1_diamond.asm"));
  d.run();
  std::vector<Pc> pcs;
  for (auto& [pc, _] : d.at_issue) pcs.push_back(pc);
  EXPECT_EQ(pcs, (std::vector<Pc>{0, 1, 2, 3, 6, 4, 5, 7, 8, 9}));
  // Before the branch: one entry for the whole warp.
  EXPECT_EQ(d.at_issue[0].second, (Stack{{0, M("1111"), kEndOfProgram}}));
  // After divergence: reconvergence entry, not-taken, taken on top.
  EXPECT_EQ(d.at_issue[4].second,
            (Stack{{7, M("1111"), kEndOfProgram}, {4, M("1100"), 7}, {6, M("0011"), 7}}));
  // Taken path done.
  EXPECT_EQ(d.at_issue[5].second, (Stack{{7, M("1111"), kEndOfProgram}, {4, M("1100"), 7}}));
  // Both paths done: the full warp resumes at the post-dominator.
  EXPECT_EQ(d.at_issue[7].second, (Stack{{7, M("1111"), kEndOfProgram}}));
}

TEST(SimtStack, UniformBranchKeepsDepth) {
  Driver d(assemble("    ISETP.EQ P0, R0, #0\n    @P0 BRA L\n    NOP\nL:  EXIT\n"));
  d.run();
  for (auto& [pc, s] : d.at_issue) EXPECT_EQ(s.size(), 1u) << pc;
}

TEST(SimtStack, PriorityPolicies) {
  const Program p = assemble(
      "    S2R R1, SR_TID\n"
      "    ISETP.EQ P0, R1, #0\n"
      "    @P0 BRA T\n"
      "    NOP\n"
      "    BRA J\n"
      "T:  NOP\n"
      "J:  EXIT\n");
  auto first_after_branch = [&](PathPriority prio) {
    Driver d(p, prio);
    d.run();
    return d.at_issue[3].first;
  };
  EXPECT_EQ(first_after_branch(PathPriority::taken_first), 5u);
  EXPECT_EQ(first_after_branch(PathPriority::not_taken_first), 3u);
  EXPECT_EQ(first_after_branch(PathPriority::majority), 3u);
}

TEST(SimtStack, TuringInstructionsAreNops) {
  Driver d(assemble(
      "    BSSY B0, L\n"
      "    BMOV R3, B0\n"
      "    BMOV B0, R3\n"
      "    BREAK B0\n"
      "    WARPSYNC #0b1111\n"
      "    YIELD\n"
      "L:  BSYNC B0\n"
      "    EXIT\n"));
  d.run();
  ASSERT_EQ(d.at_issue.size(), 8u);
  for (Pc pc = 0; pc < 8; ++pc) EXPECT_EQ(d.at_issue[pc].first, pc);
  EXPECT_FALSE(d.stack.next_issue());
}

TEST(SimtStack, ExitScrubsEveryEntry) {
  const Program p = assemble(
      "    S2R R1, SR_TID\n"
      "    ISETP.LT P0, R1, #2\n"
      "    ISETP.EQ P1, R1, #0\n"
      "    @P0 BRA T\n"
      "    NOP\n"
      "    BRA J\n"
      "T:  @P1 EXIT\n"
      "    NOP\n"
      "J:  EXIT\n");
  Driver d(p);
  d.run();
  // The guarded EXIT moves the branch's post-dominator to the program end, so
  // the base entry is replaced. Issue 5 is pc 7 after thread 0 left.
  ASSERT_GE(d.at_issue.size(), 6u);
  EXPECT_EQ(d.at_issue[4].second, (Stack{{4, M("1100"), kEndOfProgram}, {6, M("0011"), kEndOfProgram}}));
  EXPECT_EQ(d.at_issue[5].first, 7u);
  EXPECT_EQ(d.at_issue[5].second, (Stack{{4, M("1100"), kEndOfProgram}, {7, M("0010"), kEndOfProgram}}));
  EXPECT_FALSE(d.stack.next_issue());
}

TEST(SimtStack, LoopExitsWaitAtPostDominator) {
  // Per-lane trip counts 1..4 on one back edge.
  const Program p = assemble(
      "    S2R R1, SR_TID\n"
      "    MOV R2, #0\n"
      "L:  IADD R2, R2, #1\n"
      "    ISETP.LE P0, R2, R1\n"
      "    @P0 BRA L\n"
      "    EXIT\n");
  Driver d(p);
  d.run();
  std::size_t deepest = 0;
  for (auto& [pc, s] : d.at_issue) deepest = std::max(deepest, s.size());
  // Each re-divergence replaces the loop entry and parks the leaving lane below it.
  EXPECT_EQ(deepest, 5u);
  EXPECT_EQ(d.at_issue.back().second, (Stack{{5, M("1111"), kEndOfProgram}}));
  const Stack third_trip{{5, M("1111"), kEndOfProgram}, {5, M("0001"), 5}, {5, M("0010"), 5}, {2, M("1100"), 5}};
  EXPECT_NE(std::find_if(d.at_issue.begin(), d.at_issue.end(), [&](auto& s) { return s.second == third_trip; }),
            d.at_issue.end());
  EXPECT_FALSE(d.stack.next_issue());
}

TEST(SimtStack, SpinlockNeverFinishes) {
  RunConfig cfg;
  cfg.engine = EngineKind::simt_stack;
  cfg.step_budget = 5000;
  const RunResult r = Simulator(corpus("fig7_spinlock.asm"), cfg).run();
  EXPECT_EQ(r.warps[0].outcome, WarpOutcome::budget_exceeded);
  EXPECT_EQ(r.exit_code(), kExitBudget);
}

TEST(SimtStack, DepthStaysWithinBound) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 500; ++i) {
    testing::GenOptions o;
    o.warp_size = 2 + i % 7;
    const auto g = testing::generate_structured(rng, o);
    Driver d(g.program);
    d.run(100000);
    for (auto& [pc, s] : d.at_issue) {
      ASSERT_LE(s.size(), d.stack.max_depth());
      for (std::size_t k = 1; k < s.size(); ++k) ASSERT_FALSE(s[k].active.empty());
    }
  }
}

TEST(SimtStack, DumpFormat) {
  Driver d(corpus("fig1_diamond.asm"));
  for (int i = 0; i < 4; ++i) {
    const auto slot = d.stack.next_issue();
    const Instruction& inst = d.program.at(slot->pc);
    if (!is_control(inst.op)) exec_data(inst, slot->active, d.state);
    d.stack.simt_step(inst, eval_guard(inst.guard, slot->active, d.state.pregs), d.state, d.program.size());
  }
  EXPECT_EQ(d.stack.dump(),
            "SIMT stack:\n"
            "  pc=6 active=0011 rpc=7\n"
            "  pc=4 active=1100 rpc=7\n"
            "  pc=7 active=1111 rpc=-\n");
}

}  // namespace
}  // namespace hanoi
