#include <random>

#include <gtest/gtest.h>

#include "hanoi/cfg.hpp"
#include "random_programs.hpp"

namespace hanoi {
namespace {

using Succs = std::vector<std::size_t>;

TEST(Cfg, Diamond) {
  const Program p = assemble(
      "A:  @P0 BRA C\n"
      "B:  NOP\n"
      "    BRA D\n"
      "C:  NOP\n"
      "D:  EXIT\n");
  const Cfg cfg = build_cfg(p);
  ASSERT_EQ(cfg.blocks.size(), 4u);
  EXPECT_EQ(cfg.succs[0], (Succs{2, 1}));
  EXPECT_EQ(cfg.succs[1], (Succs{3}));
  EXPECT_EQ(cfg.succs[2], (Succs{3}));
  EXPECT_EQ(cfg.succs[3], (Succs{cfg.exit_node()}));
}

TEST(Cfg, StraightLine) {
  const Cfg cfg = build_cfg(assemble("    NOP\n    NOP\n    EXIT\n"));
  ASSERT_EQ(cfg.blocks.size(), 1u);
  EXPECT_EQ(cfg.blocks[0].start, 0u);
  EXPECT_EQ(cfg.blocks[0].end, 2u);
  EXPECT_EQ(cfg.succs[0], (Succs{cfg.exit_node()}));
}

TEST(Cfg, EarlyBreakShape) {
  const Program p = assemble(testing::read_text_file(std::string(HANOI_PROGRAMS_DIR) + "/fig6_early_break.asm"));
  const Cfg cfg = build_cfg(p);
  ASSERT_EQ(cfg.blocks.size(), 5u);
  const auto A = cfg.block_of(p.labels.at("A")), B = cfg.block_of(p.labels.at("B")),
             C = cfg.block_of(p.labels.at("C")), D = cfg.block_of(p.labels.at("D")),
             E = cfg.block_of(p.labels.at("E"));
  auto sorted = [](Succs s) {
    std::sort(s.begin(), s.end());
    return s;
  };
  EXPECT_EQ(sorted(cfg.succs[A]), sorted({B, C}));
  EXPECT_EQ(cfg.succs[B], (Succs{D}));
  EXPECT_EQ(sorted(cfg.succs[C]), sorted({B, D}));
  EXPECT_EQ(cfg.succs[D], (Succs{E}));
  EXPECT_EQ(cfg.succs[E], (Succs{cfg.exit_node()}));
}

TEST(Cfg, GuardedExitFallsThrough) {
  const Cfg cfg = build_cfg(assemble("    @P0 EXIT\n    NOP\n    EXIT\n"));
  ASSERT_EQ(cfg.blocks.size(), 2u);
  EXPECT_EQ(cfg.succs[0], (Succs{cfg.exit_node(), 1}));
}

TEST(Cfg, CallsFallThroughWithCallEdge) {
  const Program p = assemble("    CALL F\n    EXIT\nF:  RET R20\n");
  const Cfg cfg = build_cfg(p);
  ASSERT_EQ(cfg.blocks.size(), 3u);
  EXPECT_EQ(cfg.succs[0], (Succs{1}));
  EXPECT_EQ(cfg.call_succs[0], (Succs{2}));
  EXPECT_EQ(cfg.succs[2], (Succs{cfg.exit_node()}));
  EXPECT_TRUE(cfg.warnings.empty());
}

TEST(Cfg, WarnsAboutUnreachableCode) {
  const Cfg cfg = build_cfg(assemble("    EXIT\n    NOP\n"));
  ASSERT_EQ(cfg.warnings.size(), 1u);
}

TEST(Cfg, EmptyProgramRejected) { EXPECT_THROW(build_cfg(Program{}), std::invalid_argument); }

TEST(Cfg, BlocksPartitionProgram) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    testing::GenOptions o;
    o.warp_size = 2 + i % 7;
    const auto g = testing::generate_structured(rng, o);
    const Cfg cfg = build_cfg(g.program);
    Pc next = 0;
    for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
      ASSERT_EQ(cfg.blocks[b].start, next);
      ASSERT_LE(cfg.blocks[b].start, cfg.blocks[b].end);
      for (Pc pc = cfg.blocks[b].start; pc <= cfg.blocks[b].end; ++pc) ASSERT_EQ(cfg.block_of(pc), b);
      ASSERT_FALSE(cfg.succs[b].empty());
      ASSERT_LE(cfg.succs[b].size(), 2u);
      next = cfg.blocks[b].end + 1;
    }
    ASSERT_EQ(next, g.program.size());
  }
}

}  // namespace
}  // namespace hanoi
