#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hanoi/isa.hpp"

namespace hanoi {

// Raised for program errors at run time: bad address, lane disagreement, resource exhaustion.
class simulation_fault : public std::runtime_error {
 public:
  simulation_fault(Pc pc, const std::string& what, std::optional<unsigned> thread = std::nullopt)
      : std::runtime_error(describe(pc, what, thread)), pc_(pc), thread_(thread) {}
  Pc pc() const { return pc_; }
  std::optional<unsigned> thread() const { return thread_; }

 private:
  static std::string describe(Pc pc, const std::string& what, std::optional<unsigned> thread) {
    std::string s = "pc " + std::to_string(pc);
    if (thread) s += ", thread " + std::to_string(*thread);
    return s + ": " + what;
  }
  Pc pc_;
  std::optional<unsigned> thread_;
};

enum class AtomicOrder { ascending, descending };

class SharedMemory {
 public:
  explicit SharedMemory(std::size_t words = 0) : words_(words, 0) {}

  std::size_t size() const { return words_.size(); }
  std::uint32_t load(std::uint32_t addr, Pc pc, unsigned lane) const { return words_[check(addr, pc, lane)]; }
  void store(std::uint32_t addr, std::uint32_t value, Pc pc, unsigned lane) { words_[check(addr, pc, lane)] = value; }
  const std::vector<std::uint32_t>& words() const { return words_; }
  bool operator==(const SharedMemory&) const = default;

 private:
  std::size_t check(std::uint32_t addr, Pc pc, unsigned lane) const {
    if (addr >= words_.size())
      throw simulation_fault(pc, "memory address " + std::to_string(addr) + " outside .mem " +
                                     std::to_string(words_.size()), lane);
    return addr;
  }
  std::vector<std::uint32_t> words_;
};

using LaneRegs = std::array<std::uint32_t, kNumRRegs>;

struct WarpState {
  WarpState(unsigned warp_id, unsigned warp_size, std::shared_ptr<SharedMemory> memory, unsigned num_warps = 1)
      : warp_id(warp_id), warp_size(warp_size), num_warps(num_warps), rregs(warp_size), memory(std::move(memory)) {
    for (auto& lane : rregs) lane.fill(0);
    pregs.fill(0);
  }

  unsigned warp_id;
  unsigned warp_size;
  unsigned num_warps;
  std::vector<LaneRegs> rregs;  // rregs[lane][reg]
  PredFile pregs{};
  std::shared_ptr<SharedMemory> memory;
};

// Executes a non-control instruction for the lanes in `exec` (already guard-filtered).
// Lanes run in arbitration order; memory effects of earlier lanes are visible to later ones.
void exec_data(const Instruction& inst, const ThreadMask& exec, WarpState& state,
               AtomicOrder order = AtomicOrder::ascending);

// The value of R[reg] shared by every lane in `lanes`; faults if lanes disagree.
std::uint32_t uniform_rreg(const WarpState& state, unsigned reg, const ThreadMask& lanes, Pc pc, const char* what);

}  // namespace hanoi
