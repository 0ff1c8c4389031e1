#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hanoi/assembler.hpp"

namespace hanoi {

struct BasicBlock {
  Pc start = 0;
  Pc end = 0;  // inclusive
};

// Basic blocks plus a virtual exit node with index blocks.size().
// `succs` is the intra-procedural graph: CALL falls through, RET and EXIT
// reach the virtual exit. Call edges are kept apart in `call_succs`.
struct Cfg {
  std::vector<BasicBlock> blocks;
  std::vector<std::vector<std::size_t>> succs;
  std::vector<std::vector<std::size_t>> call_succs;
  std::vector<std::string> warnings;

  std::size_t exit_node() const { return blocks.size(); }
  std::size_t num_nodes() const { return blocks.size() + 1; }
  std::size_t block_of(Pc pc) const;
  std::vector<std::vector<std::size_t>> predecessors() const;
};

Cfg build_cfg(const Program& program);

}  // namespace hanoi
