#include "hanoi/ipdom.hpp"

namespace hanoi {

// Cooper, Harvey and Kennedy's iterative dominator algorithm run on the
// reversed graph rooted at the virtual exit.
std::vector<std::optional<std::size_t>> immediate_postdominators(const Cfg& cfg) {
  const std::size_t n = cfg.num_nodes();
  const std::size_t root = cfg.exit_node();
  const auto preds = cfg.predecessors();  // successors in the reversed graph

  std::vector<std::size_t> order;  // postorder of the reversed graph
  std::vector<bool> seen(n, false);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
  seen[root] = true;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < preds[node].size()) {
      std::size_t p = preds[node][next++];
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back({p, 0});
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  constexpr std::size_t kUndef = static_cast<std::size_t>(-1);
  std::vector<std::size_t> rank(n, kUndef);
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

  std::vector<std::size_t> idom(n, kUndef);
  idom[root] = root;
  auto intersect = [&](std::size_t a, std::size_t b) {
    while (a != b) {
      while (rank[a] < rank[b]) a = idom[a];
      while (rank[b] < rank[a]) b = idom[b];
    }
    return a;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t b = *it;
      if (b == root) continue;
      std::size_t picked = kUndef;
      for (std::size_t s : cfg.succs[b]) {  // predecessors in the reversed graph
        if (idom[s] == kUndef) continue;
        picked = picked == kUndef ? s : intersect(s, picked);
      }
      if (picked != kUndef && idom[b] != picked) {
        idom[b] = picked;
        changed = true;
      }
    }
  }

  std::vector<std::optional<std::size_t>> out(n);
  for (std::size_t v = 0; v < n; ++v)
    if (idom[v] != kUndef) out[v] = idom[v];
  return out;
}

IpdomTable compute_ipdom(const Cfg& cfg, const Program& program) {
  const auto ipdom = immediate_postdominators(cfg);
  IpdomTable table;
  for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
    const Instruction& last = program.at(cfg.blocks[b].end);
    if (last.op != Opcode::BRA || last.guard.unconditional()) continue;
    const auto& d = ipdom[b];
    table.by_branch[last.pc] = (!d || *d == cfg.exit_node()) ? kEndOfProgram : cfg.blocks[*d].start;
  }
  return table;
}

}  // namespace hanoi
