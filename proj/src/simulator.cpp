#include "hanoi/simulator.hpp"

#include <sstream>

#include "hanoi/cfg.hpp"
#include "hanoi/ipdom.hpp"

namespace hanoi {

std::string_view outcome_name(WarpOutcome o) {
  switch (o) {
    case WarpOutcome::running: return "running";
    case WarpOutcome::finished: return "finished";
    case WarpOutcome::blocked: return "deadlock";
    case WarpOutcome::budget_exceeded: return "budget-exceeded";
    case WarpOutcome::fault: return "fault";
  }
  return "?";
}

int RunResult::exit_code() const {
  bool blocked = false, budget = false;
  for (const auto& w : warps) {
    if (w.outcome == WarpOutcome::fault) return kExitFault;
    blocked |= w.outcome == WarpOutcome::blocked;
    budget |= w.outcome == WarpOutcome::budget_exceeded;
  }
  if (blocked) return kExitDeadlock;
  if (budget) return kExitBudget;
  return kExitFinished;
}

Simulator::Simulator(const Program& program, RunConfig config)
    : program_(program),
      config_(config),
      warp_size_(config.warp_size.value_or(program.warp_size)),
      memory_(std::make_shared<SharedMemory>(program.mem_words)) {
  if (warp_size_ < kMinWarpSize || warp_size_ > kMaxWarpSize)
    throw std::invalid_argument("warp size must be in 2..32, got " + std::to_string(warp_size_));
  if (config_.step_budget == 0) throw std::invalid_argument("step budget must be positive");
  const unsigned n = config.num_warps.value_or(program.num_warps);
  if (n == 0) throw std::invalid_argument("need at least one warp");

  std::optional<IpdomTable> ipdom;
  if (config_.engine == EngineKind::simt_stack)
    ipdom = program_.empty() ? IpdomTable{} : compute_ipdom(build_cfg(program_), program_);

  warps_.reserve(n);
  for (unsigned w = 0; w < n; ++w) {
    WarpState state(w, warp_size_, memory_, n);
    if (config_.engine == EngineKind::hanoi) {
      HanoiConfig hc{config_.num_bregs, config_.branch_tie, 0};
      warps_.push_back(Warp{std::move(state), HanoiCfu(warp_size_, hc), {}, 0});
    } else {
      warps_.push_back(
          Warp{std::move(state), SimtStack(warp_size_, *ipdom, config_.simt_priority, config_.branch_tie), {}, 0});
    }
  }
}

bool Simulator::step(unsigned index, const Observer& observer) {
  Warp& w = warps_.at(index);
  if (w.result.outcome != WarpOutcome::running) return false;
  try {
    std::optional<IssueSlot> slot;
    if (auto* cfu = std::get_if<HanoiCfu>(&w.cfu)) {
      auto r = cfu->next_issue();
      if (std::holds_alternative<Finished>(r)) w.result.outcome = WarpOutcome::finished;
      else if (std::holds_alternative<Blocked>(r)) w.result.outcome = WarpOutcome::blocked;
      else slot = std::get<IssueSlot>(r);
    } else {
      slot = std::get<SimtStack>(w.cfu).next_issue();
      if (!slot) w.result.outcome = WarpOutcome::finished;
    }
    if (!slot) return false;
    if (w.result.instructions >= config_.step_budget) {
      w.result.outcome = WarpOutcome::budget_exceeded;
      return false;
    }
    if (slot->pc >= program_.size()) throw simulation_fault(slot->pc, "pc outside the program");

    const Instruction& inst = program_.at(slot->pc);
    trace_.push_back(TraceEvent{index, w.seq++, inst.pc, mnemonic(inst), slot->active});
    ++w.result.instructions;
    if (auto* cfu = std::get_if<HanoiCfu>(&w.cfu)) issue_hanoi(w, *cfu, inst, slot->active);
    else issue_simt(w, std::get<SimtStack>(w.cfu), inst, slot->active);
    if (observer) observer(StepInfo{index, trace_.back(), inst, *this});
  } catch (const simulation_fault& f) {
    w.result.outcome = WarpOutcome::fault;
    w.result.fault = f.what();
    return false;
  }
  return true;
}

RunResult Simulator::run(const Observer& observer) {
  bool any = true;
  while (any) {
    any = false;
    for (unsigned w = 0; w < warps_.size(); ++w) any |= step(w, observer);
  }
  RunResult r;
  for (const auto& w : warps_) r.warps.push_back(w.result);
  r.trace = trace_;
  r.memory = memory_->words();
  return r;
}

void Simulator::issue_hanoi(Warp& w, HanoiCfu& cfu, const Instruction& inst, const ThreadMask& active) {
  WarpState& st = w.state;
  auto guarded = [&] { return eval_guard(inst.guard, active, st.pregs); };
  switch (inst.op) {
    case Opcode::BRA: cfu.on_bra(inst, guarded()); break;
    case Opcode::EXIT: cfu.on_exit(guarded()); break;
    case Opcode::BSSY: cfu.on_bssy(breg_operand(inst, 0), label_operand(inst, 1).pc); break;
    case Opcode::BSYNC: cfu.on_bsync(breg_operand(inst, 0)); break;
    case Opcode::BMOV_RB:
      cfu.on_bmov(st, BmovDirection::b_to_r, breg_operand(inst, 1), rreg_operand(inst, 0), active);
      break;
    case Opcode::BMOV_BR:
      cfu.on_bmov(st, BmovDirection::r_to_b, breg_operand(inst, 0), rreg_operand(inst, 1), active);
      break;
    case Opcode::BREAK: cfu.on_break(breg_operand(inst, 0), guarded()); break;
    case Opcode::WARPSYNC: {
      std::uint32_t bits;
      if (const auto* imm = std::get_if<Imm>(&inst.operands[0])) bits = static_cast<std::uint32_t>(imm->value);
      else bits = uniform_rreg(st, rreg_operand(inst, 0), active, inst.pc, "WARPSYNC");
      if ((bits & ~ThreadMask::lane_bits(warp_size_)) != 0)
        throw simulation_fault(inst.pc, "WARPSYNC mask " + std::to_string(bits) + " exceeds the warp");
      cfu.on_warpsync(ThreadMask(warp_size_, bits));
      break;
    }
    case Opcode::YIELD: cfu.on_yield(); break;
    case Opcode::CALL:
    case Opcode::RET: cfu.on_call_ret(inst, st, program_.size()); break;
    default: {
      const ThreadMask exec = guarded();
      if (exec.any()) exec_data(inst, exec, st, config_.atomic_order);
      cfu.advance();
      break;
    }
  }
}

void Simulator::issue_simt(Warp& w, SimtStack& stack, const Instruction& inst, const ThreadMask& active) {
  WarpState& st = w.state;
  const ThreadMask guard = eval_guard(inst.guard, active, st.pregs);
  if (!is_control(inst.op) && guard.any()) exec_data(inst, guard, st, config_.atomic_order);
  stack.simt_step(inst, guard, st, program_.size());
}

std::string Simulator::dump_state(unsigned index) const {
  const Warp& w = warps_.at(index);
  std::ostringstream out;
  out << "warp " << index << " (" << outcome_name(w.result.outcome) << ", " << w.result.instructions
      << " instructions)\n";
  if (const auto* cfu = std::get_if<HanoiCfu>(&w.cfu)) out << cfu->dump();
  else out << std::get<SimtStack>(w.cfu).dump();
  if (!w.result.fault.empty()) out << "fault: " << w.result.fault << "\n";
  return out.str();
}

}  // namespace hanoi
