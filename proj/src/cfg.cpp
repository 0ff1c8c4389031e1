#include "hanoi/cfg.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hanoi {

std::size_t Cfg::block_of(Pc pc) const {
  auto it = std::upper_bound(blocks.begin(), blocks.end(), pc,
                             [](Pc p, const BasicBlock& b) { return p < b.start; });
  if (it == blocks.begin() || pc > std::prev(it)->end)
    throw std::out_of_range("pc " + std::to_string(pc) + " not in any block");
  return static_cast<std::size_t>(std::prev(it) - blocks.begin());
}

std::vector<std::vector<std::size_t>> Cfg::predecessors() const {
  std::vector<std::vector<std::size_t>> preds(num_nodes());
  for (std::size_t b = 0; b < succs.size(); ++b)
    for (std::size_t s : succs[b]) preds[s].push_back(b);
  return preds;
}

Cfg build_cfg(const Program& program) {
  if (program.empty()) throw std::invalid_argument("cannot build a CFG for an empty program");
  const auto n = static_cast<Pc>(program.size());

  std::set<Pc> leaders{0};
  for (const auto& inst : program.instructions) {
    switch (inst.op) {
      case Opcode::BRA:
      case Opcode::CALL:
        leaders.insert(label_operand(inst, 0).pc);
        [[fallthrough]];
      case Opcode::EXIT:
      case Opcode::RET:
        if (inst.pc + 1 < n) leaders.insert(inst.pc + 1);
        break;
      default:
        break;
    }
  }

  Cfg cfg;
  for (auto it = leaders.begin(); it != leaders.end(); ++it) {
    auto next = std::next(it);
    cfg.blocks.push_back({*it, (next == leaders.end() ? n : *next) - 1});
  }
  cfg.succs.resize(cfg.blocks.size());
  cfg.call_succs.resize(cfg.blocks.size());

  const std::size_t exit = cfg.exit_node();
  auto block_at = [&](Pc pc) { return pc >= n ? exit : cfg.block_of(pc); };

  for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
    const Instruction& last = program.at(cfg.blocks[b].end);
    std::vector<std::size_t> out;
    const std::size_t fall = block_at(last.pc + 1);
    switch (last.op) {
      case Opcode::BRA:
        out.push_back(block_at(label_operand(last, 0).pc));
        if (!last.guard.unconditional()) out.push_back(fall);
        break;
      case Opcode::EXIT:
        out.push_back(exit);
        if (!last.guard.unconditional()) out.push_back(fall);
        break;
      case Opcode::RET:
        out.push_back(exit);
        break;
      case Opcode::CALL:
        cfg.call_succs[b].push_back(block_at(label_operand(last, 0).pc));
        out.push_back(fall);
        break;
      default:
        out.push_back(fall);
        break;
    }
    std::vector<std::size_t> uniq;
    for (std::size_t s : out)
      if (std::find(uniq.begin(), uniq.end(), s) == uniq.end()) uniq.push_back(s);
    cfg.succs[b] = std::move(uniq);
  }

  std::vector<bool> seen(cfg.num_nodes(), false);
  std::vector<std::size_t> work{0};
  seen[0] = true;
  while (!work.empty()) {
    std::size_t b = work.back();
    work.pop_back();
    if (b == exit) continue;
    for (const auto* edges : {&cfg.succs[b], &cfg.call_succs[b]})
      for (std::size_t s : *edges)
        if (!seen[s]) {
          seen[s] = true;
          work.push_back(s);
        }
  }
  for (std::size_t b = 0; b < cfg.blocks.size(); ++b)
    if (!seen[b])
      cfg.warnings.push_back("unreachable code at pc " + std::to_string(cfg.blocks[b].start) + ".." +
                             std::to_string(cfg.blocks[b].end));
  return cfg;
}

}  // namespace hanoi
