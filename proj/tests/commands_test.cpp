#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"

#include "hanoi/commands.hpp"
#include "random_programs.hpp"

namespace hanoi {
namespace {

namespace fs = std::filesystem;

const std::string kPrograms = HANOI_PROGRAMS_DIR;

class Commands : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("hanoi_commands_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    const std::string p = (dir_ / name).string();
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream out, err;
};

TEST_F(Commands, JsonRoundTripPreservesPrograms) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    testing::GenOptions o;
    o.memory = i % 2;
    const Program p = testing::generate_structured(rng, o).program;
    const Program q = program_from_json(program_to_json(p));
    ASSERT_EQ(program_to_json(q), program_to_json(p));
    ASSERT_EQ(q.labels, p.labels);
  }
  for (const auto& entry : fs::directory_iterator(kPrograms)) {
    if (entry.path().extension() != ".asm") continue;
    const Program p = load_program(entry.path().string());
    EXPECT_EQ(program_to_json(program_from_json(program_to_json(p))), program_to_json(p)) << entry.path();
  }
}

TEST_F(Commands, JsonContainer) {
  const auto j = nlohmann::json::parse(program_to_json(load_program(kPrograms + "/fig1_diamond.asm")));
  EXPECT_EQ(j["format"], "hanoi-program");
  EXPECT_EQ(j["version"], 1);
  EXPECT_EQ(j["warp_size"], 4);
  EXPECT_EQ(j["labels"]["JOIN"], 7);
  EXPECT_EQ(j["instructions"][3]["text"], "@P0 BRA TAKEN");
  EXPECT_THROW(program_from_json("{\"format\":\"other\"}"), assembly_error);
  EXPECT_THROW(program_from_json("{\"format\":\"hanoi-program\",\"version\":9}"), assembly_error);
  EXPECT_THROW(program_from_json("not json"), assembly_error);
}

TEST_F(Commands, AssembleAndDisassemble) {
  const std::string json_path = path("p.json");
  ASSERT_EQ(cmd_assemble({kPrograms + "/fig5_nested.asm", json_path, false}, out, err), 0);
  EXPECT_TRUE(err.str().empty()) << err.str();
  ASSERT_EQ(cmd_assemble({json_path, "-", true}, out, err), 0);
  const Program back = assemble(out.str());
  EXPECT_EQ(program_to_json(back), program_to_json(load_program(kPrograms + "/fig5_nested.asm")));
}

TEST_F(Commands, AssembleErrorNamesLine) {
  const std::string src = file("bad.asm", "    NOP\n    BRA NOWHERE\n");
  EXPECT_EQ(cmd_assemble({src, "-", false}, out, err), kExitUsage);
  EXPECT_NE(err.str().find("line 2"), std::string::npos) << err.str();
  EXPECT_NE(err.str().find("NOWHERE"), std::string::npos);
  EXPECT_EQ(cmd_assemble({path("missing.asm"), "-", false}, out, err), kExitUsage);
}

TEST_F(Commands, RunExitCodesAndTrace) {
  RunOptions o;
  o.program = kPrograms + "/fig1_diamond.asm";
  o.trace_out = path("t.trace");
  EXPECT_EQ(cmd_run(o, out, err), 0);
  EXPECT_NE(out.str().find("total 11 instructions"), std::string::npos) << out.str();
  EXPECT_EQ(read_trace_file(o.trace_out), read_trace_file(kPrograms + "/fig1_diamond.trace"));

  o.program = file("dl.asm", "    NOP\n    BSYNC B0\n    EXIT\n");
  o.trace_out.clear();
  EXPECT_EQ(cmd_run(o, out, err), kExitDeadlock);
  o.program = file("spin.asm", "L:  BRA L\n");
  o.config.step_budget = 10;
  EXPECT_EQ(cmd_run(o, out, err), kExitBudget);
  o.program = file("fault.asm", "    MOV R1, #50\n    LD R2, [R1]\n    EXIT\n");
  EXPECT_EQ(cmd_run(o, out, err), kExitFault);
  o.program = path("missing.asm");
  EXPECT_EQ(cmd_run(o, out, err), kExitUsage);
}

TEST_F(Commands, RunSummaryJson) {
  RunOptions o;
  o.program = kPrograms + "/fig1_diamond.asm";
  o.summary_json = true;
  o.config.num_warps = 2;
  ASSERT_EQ(cmd_run(o, out, err), 0);
  std::istringstream lines(out.str());
  std::vector<nlohmann::json> js;
  for (std::string l; std::getline(lines, l);) js.push_back(nlohmann::json::parse(l));
  ASSERT_EQ(js.size(), 3u);
  EXPECT_EQ(js[0]["outcome"], "finished");
  EXPECT_EQ(js[1]["warp"], 1);
  EXPECT_EQ(js[2]["instructions"], 22);
  EXPECT_EQ(js[2]["exit_code"], 0);
}

TEST_F(Commands, GlobRunsEveryMatchAndReturnsWorst) {
  file("a.asm", "    EXIT\n");
  file("b.asm", "L:  BRA L\n");
  file("c.txt", "junk");
  RunOptions o;
  o.glob = path("*.asm");
  o.trace_out = path("traces");
  o.config.step_budget = 20;
  EXPECT_EQ(cmd_run(o, out, err), kExitBudget);
  EXPECT_TRUE(fs::exists(path("traces/a.trace")));
  EXPECT_EQ(read_trace_file(path("traces/b.trace")).size(), 20u);
  o.glob = path("*.nothing");
  EXPECT_EQ(cmd_run(o, out, err), kExitUsage);
}

TEST_F(Commands, DiffThreshold) {
  const std::string ref = kPrograms + "/fig1_diamond.trace";
  const std::string cand = file("c.trace", testing::read_text_file(ref) + R"({"warp":0,"seq":11,"pc":9,"op":"EXIT","mask":"1111"})" "\n");
  DiffOptions d{ref, ref};
  EXPECT_EQ(cmd_diff(d, out, err), 0);
  EXPECT_NE(out.str().find("aggregate discrepancy 0.000%"), std::string::npos);
  d.candidate = cand;
  EXPECT_EQ(cmd_diff(d, out, err), 1);
  d.threshold = 100.0 / 11;
  EXPECT_EQ(cmd_diff(d, out, err), 0);
  d.json = true;
  out.str("");
  EXPECT_EQ(cmd_diff(d, out, err), 0);
  std::istringstream lines(out.str());
  std::string first, last;
  std::getline(lines, first);
  std::getline(lines, last);
  EXPECT_EQ(nlohmann::json::parse(first)["distance"], 1);
  EXPECT_NEAR(nlohmann::json::parse(last)["aggregate_pct"].get<double>(), 100.0 / 11, 1e-9);
  d.candidate = file("broken.trace", "{oops\n");
  EXPECT_EQ(cmd_diff(d, out, err), kExitUsage);
  EXPECT_NE(err.str().find("line 1"), std::string::npos);
}

TEST_F(Commands, Stats) {
  ASSERT_EQ(cmd_stats({}, out, err), 0);
  const std::string s = out.str();
  EXPECT_NE(s.find("3453 bits = 432 bytes"), std::string::npos) << s;
  EXPECT_NE(s.find("6048 bits = 756 bytes"), std::string::npos);
  EXPECT_NE(s.find("42.9% less"), std::string::npos);
  EXPECT_NE(s.find("75.0% more"), std::string::npos);
  out.str("");
  ASSERT_EQ(cmd_stats({4, 8, 32, true}, out, err), 0);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["hanoi_bytes"], 37);
  EXPECT_EQ(cmd_stats({64, 8, 32, false}, out, err), kExitUsage);
}

}  // namespace
}  // namespace hanoi
