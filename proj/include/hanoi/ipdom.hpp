#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "hanoi/cfg.hpp"

namespace hanoi {

// Reconvergence target for branches whose only post-dominator is the virtual exit.
inline constexpr Pc kEndOfProgram = std::numeric_limits<Pc>::max();

struct IpdomTable {
  std::map<Pc, Pc> by_branch;  // conditional BRA pc -> first pc of its ipdom block

  Pc at(Pc branch_pc) const {
    auto it = by_branch.find(branch_pc);
    return it == by_branch.end() ? kEndOfProgram : it->second;
  }
};

// Immediate post-dominator per CFG node (exit node maps to itself). Nodes that
// cannot reach the exit have no post-dominator.
std::vector<std::optional<std::size_t>> immediate_postdominators(const Cfg& cfg);

IpdomTable compute_ipdom(const Cfg& cfg, const Program& program);

}  // namespace hanoi
