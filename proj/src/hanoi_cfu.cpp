#include "hanoi/hanoi_cfu.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace hanoi {

HanoiCfu::HanoiCfu(unsigned warp_size, HanoiConfig config, Pc entry)
    : config_(config),
      warp_size_(warp_size),
      rec_capacity_(config.rec_capacity ? config.rec_capacity : warp_size - 1) {
  if (config.num_bregs == 0 || config.num_bregs > kMaxBRegs)
    throw std::invalid_argument("number of B registers must be in 1.." + std::to_string(kMaxBRegs));
  s_.ws.push_back({entry, ThreadMask::full(warp_size)});
  s_.bregs.assign(config.num_bregs, BReg{ThreadMask::none(warp_size), false});
  s_.waiting = ThreadMask::none(warp_size);
  s_.finished = ThreadMask::none(warp_size);
}

HanoiCfu::HanoiCfu(HanoiState state, HanoiConfig config)
    : config_(config),
      warp_size_(state.waiting.warp_size()),
      rec_capacity_(config.rec_capacity ? config.rec_capacity : state.waiting.warp_size() - 1),
      s_(std::move(state)) {
  config_.num_bregs = static_cast<unsigned>(s_.bregs.size());
}

WsEntry& HanoiCfu::top() {
  if (s_.ws.empty()) throw std::logic_error("WS stack is empty");
  return s_.ws.back();
}

Pc HanoiCfu::fault_pc() const { return s_.ws.empty() ? 0 : s_.ws.back().pc; }

BReg& HanoiCfu::checked_breg(unsigned i) {
  if (i >= s_.bregs.size())
    throw simulation_fault(fault_pc(), "B" + std::to_string(i) + " exceeds the " +
                                           std::to_string(s_.bregs.size()) + " available B registers");
  return s_.bregs[i];
}

void HanoiCfu::push_rec(RecEntry e) {
  if (s_.rec.size() >= rec_capacity_)
    throw simulation_fault(fault_pc(), "REC stack overflow (capacity " + std::to_string(rec_capacity_) + ")");
  s_.rec.push_back(e);
}

IssueResult HanoiCfu::next_issue() {
  while (!s_.rec.empty()) {
    const RecEntry entry = s_.rec.back();
    BReg& b = s_.bregs.at(entry.breg);
    if (!b.valid || !b.mask.subset_of(s_.waiting)) break;
    s_.rec.pop_back();
    b.valid = false;
    s_.waiting = s_.waiting.without(b.mask);
    if (b.mask.any()) s_.ws.push_back({entry.pc, b.mask});
  }
  if (!s_.ws.empty()) return IssueSlot{s_.ws.back().pc, s_.ws.back().active};
  if (s_.finished.is_full()) return Finished{};
  return Blocked{};
}

void HanoiCfu::advance() { top().pc += 1; }

void HanoiCfu::on_bra(const Instruction& inst, const ThreadMask& taken) {
  WsEntry& t = top();
  const Pc target = label_operand(inst, 0).pc;
  const ThreadMask taken_here = taken & t.active;
  const ThreadMask not_taken = t.active.without(taken_here);
  if (taken_here.empty()) {
    t.pc = inst.pc + 1;
    return;
  }
  if (not_taken.empty()) {
    t.pc = target;
    return;
  }
  bool taken_first = taken_here.count() > not_taken.count();
  if (taken_here.count() == not_taken.count()) taken_first = config_.tie == BranchTie::taken_first;
  s_.ws.pop_back();
  WsEntry taken_split{target, taken_here};
  WsEntry fall_split{inst.pc + 1, not_taken};
  if (taken_first) {
    s_.ws.push_back(fall_split);
    s_.ws.push_back(taken_split);
  } else {
    s_.ws.push_back(taken_split);
    s_.ws.push_back(fall_split);
  }
}

void HanoiCfu::on_bssy(unsigned breg, Pc target_pc) {
  BReg& b = checked_breg(breg);
  WsEntry& t = top();
  push_rec({target_pc + 1, breg});
  b = {t.active, true};
  t.pc += 1;
}

void HanoiCfu::on_bsync(unsigned breg) {
  checked_breg(breg);
  const WsEntry t = top();
  s_.waiting |= t.active;
  s_.ws.pop_back();
}

void HanoiCfu::on_warpsync(ThreadMask reconv_mask) {
  const WsEntry t = top();
  if (!t.active.subset_of(reconv_mask))
    throw simulation_fault(t.pc, "WARPSYNC " + reconv_mask.to_string() + " executed by threads " +
                                     t.active.to_string() + " outside its mask");
  reconv_mask = reconv_mask.without(s_.finished);
  const Pc resume = t.pc + 1;
  const bool pending = std::any_of(s_.rec.begin(), s_.rec.end(), [&](const RecEntry& e) {
    const BReg& b = s_.bregs[e.breg];
    return e.pc == resume && b.valid && b.mask == reconv_mask;
  });
  if (!pending) {
    std::optional<unsigned> free;
    for (unsigned i = 0; i < s_.bregs.size() && !free; ++i) {
      const bool referenced =
          std::any_of(s_.rec.begin(), s_.rec.end(), [&](const RecEntry& e) { return e.breg == i; });
      if (!s_.bregs[i].valid && !referenced) free = i;
    }
    if (!free) throw simulation_fault(t.pc, "WARPSYNC found no free B register");
    push_rec({resume, *free});
    s_.bregs[*free] = {reconv_mask, true};
  }
  s_.waiting |= t.active;
  s_.ws.pop_back();
}

void HanoiCfu::on_break(unsigned breg, const ThreadMask& remove) {
  BReg& b = checked_breg(breg);
  if (!b.valid) throw simulation_fault(fault_pc(), "BREAK on invalid B" + std::to_string(breg));
  b.mask = b.mask.without(remove);
  top().pc += 1;
}

void HanoiCfu::on_bmov(WarpState& state, BmovDirection dir, unsigned breg, unsigned rreg, const ThreadMask& exec) {
  BReg& b = checked_breg(breg);
  const Pc pc = fault_pc();
  if (exec.empty()) throw simulation_fault(pc, "BMOV with no executing lanes");
  if (dir == BmovDirection::b_to_r) {
    exec.for_each_lane([&](unsigned lane) { state.rregs[lane][rreg] = b.mask.bits(); });
    b.valid = false;
  } else {
    const std::uint32_t value = uniform_rreg(state, rreg, exec, pc, "BMOV");
    if ((value & ~ThreadMask::lane_bits(warp_size_)) != 0)
      throw simulation_fault(pc, "BMOV value " + std::to_string(value) + " is not a mask for warp size " +
                                     std::to_string(warp_size_));
    b = {ThreadMask(warp_size_, value).without(s_.finished), true};
  }
  top().pc += 1;
}

void HanoiCfu::on_exit(const ThreadMask& exiting) {
  WsEntry& t = top();
  const ThreadMask leaving = exiting & t.active;
  s_.finished |= leaving;
  for (auto& b : s_.bregs)
    if (b.valid) b.mask = b.mask.without(leaving);
  if (leaving == t.active) {
    s_.ws.pop_back();
  } else {
    t.active = t.active.without(leaving);
    t.pc += 1;
  }
}

void HanoiCfu::on_yield() {
  WsEntry& t = top();
  t.pc += 1;
  const std::size_t n = s_.ws.size();
  if (n < 2 || s_.rec.empty()) return;
  const BReg& b = s_.bregs.at(s_.rec.back().breg);
  if (!b.valid) return;
  const ThreadMask both = s_.ws[n - 1].active | s_.ws[n - 2].active;
  if (both.subset_of(b.mask)) std::swap(s_.ws[n - 1], s_.ws[n - 2]);
}

void HanoiCfu::on_call_ret(const Instruction& inst, const WarpState& state, std::size_t program_size) {
  WsEntry& t = top();
  if (inst.op == Opcode::CALL) {
    t.pc = label_operand(inst, 0).pc;
    return;
  }
  const std::uint32_t target = uniform_rreg(state, rreg_operand(inst, 0), t.active, inst.pc, "RET");
  if (target >= program_size)
    throw simulation_fault(inst.pc, "RET to out-of-range pc " + std::to_string(target));
  t.pc = target;
}

std::string HanoiCfu::dump() const {
  std::ostringstream out;
  out << "WS:\n";
  for (auto it = s_.ws.rbegin(); it != s_.ws.rend(); ++it)
    out << "  pc=" << it->pc << " active=" << it->active.to_string() << "\n";
  out << "REC:\n";
  for (auto it = s_.rec.rbegin(); it != s_.rec.rend(); ++it) out << "  pc=" << it->pc << " B" << it->breg << "\n";
  for (std::size_t i = 0; i < s_.bregs.size(); ++i)
    out << "B" << i << ": V=" << (s_.bregs[i].valid ? 1 : 0) << " " << s_.bregs[i].mask.to_string() << "\n";
  out << "waiting: " << s_.waiting.to_string() << "\n";
  out << "finished: " << s_.finished.to_string() << "\n";
  return out.str();
}

std::vector<std::string> check_invariants(const HanoiCfu& cfu) {
  std::vector<std::string> errors;
  const auto& s = cfu.state();
  const unsigned ws = cfu.warp_size();
  ThreadMask seen = ThreadMask::none(ws);
  auto claim = [&](const ThreadMask& m, const std::string& what) {
    if (!seen.disjoint(m)) errors.push_back(what + " " + m.to_string() + " overlaps other groups");
    seen |= m;
  };
  for (std::size_t i = 0; i < s.ws.size(); ++i) {
    if (s.ws[i].active.empty()) errors.push_back("WS entry " + std::to_string(i) + " has an empty mask");
    claim(s.ws[i].active, "WS entry " + std::to_string(i));
  }
  claim(s.waiting, "waiting mask");
  claim(s.finished, "finished mask");
  if (!seen.is_full()) errors.push_back("threads " + (~seen).to_string() + " are in no group");
  for (std::size_t i = 0; i < s.bregs.size(); ++i)
    if (s.bregs[i].valid && !s.bregs[i].mask.disjoint(s.finished))
      errors.push_back("valid B" + std::to_string(i) + " holds finished threads");
  if (s.ws.size() > ws) errors.push_back("WS depth " + std::to_string(s.ws.size()) + " exceeds warp size");
  if (s.rec.size() > cfu.rec_capacity())
    errors.push_back("REC depth " + std::to_string(s.rec.size()) + " exceeds " + std::to_string(cfu.rec_capacity()));
  for (const auto& e : s.rec)
    if (e.breg >= s.bregs.size()) errors.push_back("REC entry names missing B" + std::to_string(e.breg));
  return errors;
}

}  // namespace hanoi
