#include "hanoi/assembler.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>

namespace hanoi {
namespace {

struct Token {
  std::string text;
  unsigned column = 0;  // 1-based
};

// Operand kinds accepted at one position of a signature.
enum KindBits : unsigned {
  kR = 1u << 0,
  kP = 1u << 1,
  kB = 1u << 2,
  kI = 1u << 3,
  kL = 1u << 4,
  kS = 1u << 5,
  kMem = 1u << 6,  // R register written as [Rn] (brackets optional)
};

struct Signature {
  Opcode op;
  std::vector<unsigned> kinds;
  bool takes_extra_pred;  // second predicate as first operand
  bool guardable;
};

std::optional<Signature> signature_for(std::string_view base) {
  using O = Opcode;
  if (base == "MOV") return Signature{O::MOV, {kR, kR | kI | kL}, false, true};
  if (base == "IADD") return Signature{O::IADD, {kR, kR, kR | kI}, false, true};
  if (base == "ISETP") return Signature{O::ISETP, {kP, kR, kR | kI}, false, true};
  if (base == "S2R") return Signature{O::S2R, {kR, kS}, false, true};
  if (base == "LD") return Signature{O::LD, {kR, kMem}, false, true};
  if (base == "ST") return Signature{O::ST, {kMem, kR}, false, true};
  if (base == "ATOMCAS") return Signature{O::ATOMCAS, {kR, kMem, kR, kR}, false, true};
  if (base == "ATOMEXCH") return Signature{O::ATOMEXCH, {kR, kMem, kR}, false, true};
  if (base == "NOP") return Signature{O::NOP, {}, false, true};
  if (base == "BRA") return Signature{O::BRA, {kL}, true, true};
  if (base == "EXIT") return Signature{O::EXIT, {}, true, true};
  if (base == "BSSY") return Signature{O::BSSY, {kB, kL}, false, false};
  if (base == "BSYNC") return Signature{O::BSYNC, {kB}, false, false};
  if (base == "BREAK") return Signature{O::BREAK, {kB}, true, true};
  if (base == "WARPSYNC") return Signature{O::WARPSYNC, {kR | kI}, false, false};
  if (base == "YIELD") return Signature{O::YIELD, {}, false, false};
  if (base == "CALL") return Signature{O::CALL, {kL}, false, false};
  if (base == "RET") return Signature{O::RET, {kR}, false, false};
  return std::nullopt;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// "R12" / "P3" / "B0" style names. Used to keep labels from shadowing registers.
bool looks_like_register(std::string_view s) {
  return s.size() >= 2 && (s[0] == 'R' || s[0] == 'P' || s[0] == 'B') && all_digits(s.substr(1));
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::optional<long long> parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
  } else if (s.size() > 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
    base = 2;
    s.remove_prefix(2);
  }
  if (s.empty()) return std::nullopt;
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return neg ? -v : v;
}

struct PendingLabel {
  std::string name;
  unsigned line;
  unsigned column;
  std::size_t inst;
  std::size_t operand;
};

class Parser {
 public:
  explicit Parser(std::string_view source) : source_(source) {}

  Program run() {
    std::size_t pos = 0;
    unsigned line_no = 0;
    while (pos <= source_.size()) {
      std::size_t nl = source_.find('\n', pos);
      if (nl == std::string_view::npos) nl = source_.size();
      std::string_view line = source_.substr(pos, nl - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      parse_line(line, line_no);
      pos = nl + 1;
    }
    resolve();
    lint();
    return std::move(program_);
  }

 private:
  [[noreturn]] void fail(unsigned line, unsigned col, const std::string& msg) const {
    throw assembly_error(line, col, msg);
  }

  void parse_line(std::string_view line, unsigned line_no) {
    if (auto sc = line.find(';'); sc != std::string_view::npos) line = line.substr(0, sc);
    std::size_t i = 0;
    auto skip_ws = [&] {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    };
    skip_ws();
    if (i >= line.size()) return;

    if (line[i] == '.') {
      parse_directive(line.substr(i), line_no, static_cast<unsigned>(i + 1));
      return;
    }

    // Labels: identifier ':' (any number of them).
    for (;;) {
      skip_ws();
      std::size_t j = i;
      if (j < line.size() && is_ident_start(line[j])) {
        while (j < line.size() && is_ident_char(line[j])) ++j;
        std::size_t k = j;
        while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
        if (k < line.size() && line[k] == ':') {
          define_label(std::string(line.substr(i, j - i)), line_no, static_cast<unsigned>(i + 1));
          i = k + 1;
          continue;
        }
      }
      break;
    }
    skip_ws();
    if (i >= line.size()) return;

    Instruction inst;
    inst.line = line_no;
    inst.pc = static_cast<Pc>(program_.instructions.size());

    const unsigned guard_col = static_cast<unsigned>(i + 1);
    if (line[i] == '@') {
      ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      auto pred = parse_pred(line.substr(i, j - i), line_no, guard_col);
      if (!pred) fail(line_no, guard_col, "malformed guard '@" + std::string(line.substr(i, j - i)) + "'");
      inst.guard.lead = *pred;
      i = j;
      skip_ws();
      if (i >= line.size()) fail(line_no, guard_col, "guard without instruction");
    }

    const unsigned mn_col = static_cast<unsigned>(i + 1);
    std::size_t j = i;
    while (j < line.size() && (is_ident_char(line[j]) || line[j] == '.')) ++j;
    if (j == i) fail(line_no, mn_col, "expected mnemonic, found '" + std::string(1, line[i]) + "'");
    std::string mn(line.substr(i, j - i));
    std::string base = mn, suffix;
    if (auto dot = mn.find('.'); dot != std::string::npos) {
      base = mn.substr(0, dot);
      suffix = mn.substr(dot + 1);
    }
    i = j;

    std::vector<Token> operands = split_operands(line.substr(i), line_no, static_cast<unsigned>(i));
    build(inst, base, suffix, operands, line_no, mn_col, guard_col);
    program_.instructions.push_back(std::move(inst));
  }

  void parse_directive(std::string_view text, unsigned line_no, unsigned col) {
    std::istringstream in{std::string(text)};
    std::string name, value, rest;
    in >> name >> value;
    if (in >> rest) fail(line_no, col, "trailing text after directive " + name);
    auto v = parse_integer(value);
    if (!v) fail(line_no, col, "directive " + name + " needs an integer argument");
    if (name == ".warpsize") {
      if (*v < kMinWarpSize || *v > kMaxWarpSize)
        fail(line_no, col, ".warpsize must be in 2..32, got " + value);
      program_.warp_size = static_cast<unsigned>(*v);
    } else if (name == ".warps") {
      if (*v < 1 || *v > 1024) fail(line_no, col, ".warps must be in 1..1024, got " + value);
      program_.num_warps = static_cast<unsigned>(*v);
    } else if (name == ".mem") {
      if (*v < 0 || *v > (1 << 24)) fail(line_no, col, ".mem out of range: " + value);
      program_.mem_words = static_cast<unsigned>(*v);
    } else {
      fail(line_no, col, "unknown directive " + name);
    }
  }

  void define_label(std::string name, unsigned line_no, unsigned col) {
    if (looks_like_register(name) || name.rfind("SR_", 0) == 0)
      fail(line_no, col, "label '" + name + "' collides with register syntax");
    auto pc = static_cast<Pc>(program_.instructions.size());
    if (!program_.labels.emplace(name, pc).second) fail(line_no, col, "duplicate label '" + name + "'");
  }

  std::vector<Token> split_operands(std::string_view text, unsigned line_no, unsigned offset) {
    std::vector<Token> out;
    if (trim(text).empty()) return out;
    std::size_t start = 0;
    for (;;) {
      std::size_t comma = text.find(',', start);
      std::string_view piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      std::size_t lead = 0;
      while (lead < piece.size() && std::isspace(static_cast<unsigned char>(piece[lead]))) ++lead;
      Token t{trim(piece), static_cast<unsigned>(offset + start + lead + 1)};
      if (t.text.empty()) fail(line_no, t.column, "empty operand");
      out.push_back(std::move(t));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  }

  std::optional<PredRef> parse_pred(std::string_view s, unsigned line_no, unsigned col) {
    PredRef p;
    if (!s.empty() && s[0] == '!') {
      p.negated = true;
      s.remove_prefix(1);
    }
    if (s.size() < 2 || s[0] != 'P' || !all_digits(s.substr(1))) return std::nullopt;
    auto idx = parse_integer(s.substr(1));
    if (!idx || *idx >= static_cast<long long>(kNumPredRegs))
      fail(line_no, col, "predicate index out of range: " + std::string(s));
    p.index = static_cast<unsigned>(*idx);
    return p;
  }

  Operand parse_operand(const Token& t, unsigned kinds, unsigned line_no, std::size_t inst_index,
                        std::size_t operand_index) {
    std::string_view s = t.text;
    const unsigned col = t.column;
    const bool bracketed = s.size() >= 2 && s.front() == '[' && s.back() == ']';
    if (bracketed) {
      if (!(kinds & kMem)) fail(line_no, col, "memory operand not allowed here: " + t.text);
      s = s.substr(1, s.size() - 2);
      std::string inner = trim(s);
      if (inner.size() < 2 || inner[0] != 'R' || !all_digits(std::string_view(inner).substr(1)))
        fail(line_no, col, "memory operand must be [Rn]: " + t.text);
      return parse_operand(Token{inner, col + 1}, kR, line_no, inst_index, operand_index);
    }
    if (kinds & kMem) kinds |= kR;

    auto expect = [&](unsigned k, const char* what) {
      if (!(kinds & k)) fail(line_no, col, std::string("unexpected ") + what + " operand '" + t.text + "'");
    };

    if (!s.empty() && (s[0] == '!' || (s[0] == 'P' && all_digits(s.substr(1))))) {
      auto p = parse_pred(s, line_no, col);
      if (!p) fail(line_no, col, "malformed operand '" + t.text + "'");
      expect(kP, "predicate");
      return RegP{p->index, p->negated};
    }
    if (s.size() >= 2 && s[0] == 'R' && all_digits(s.substr(1))) {
      auto idx = parse_integer(s.substr(1));
      if (!idx || *idx >= static_cast<long long>(kNumRRegs))
        fail(line_no, col, "R register index out of range: " + t.text);
      expect(kR, "R register");
      return RegR{static_cast<unsigned>(*idx)};
    }
    if (s.size() >= 2 && s[0] == 'B' && all_digits(s.substr(1))) {
      auto idx = parse_integer(s.substr(1));
      if (!idx || *idx >= static_cast<long long>(kMaxBRegs))
        fail(line_no, col, "B register index out of range: " + t.text);
      expect(kB, "B register");
      return RegB{static_cast<unsigned>(*idx)};
    }
    if (!s.empty() && s[0] == '#') {
      auto v = parse_integer(s.substr(1));
      if (!v || *v < -2147483648LL || *v > 4294967295LL) fail(line_no, col, "bad immediate '" + t.text + "'");
      expect(kI, "immediate");
      return Imm{static_cast<std::int32_t>(static_cast<std::uint32_t>(*v))};
    }
    if (!s.empty() && is_ident_start(s[0])) {
      for (char c : s)
        if (!is_ident_char(c)) fail(line_no, col, "malformed operand '" + t.text + "'");
      if (auto sr = parse_special(s)) {
        expect(kS, "special register");
        return Special{*sr};
      }
      if (s.rfind("SR_", 0) == 0) fail(line_no, col, "unknown special register '" + t.text + "'");
      expect(kL, "label");
      pending_.push_back({std::string(s), line_no, col, inst_index, operand_index});
      return Label{0, std::string(s)};
    }
    fail(line_no, col, "malformed operand '" + t.text + "'");
  }

  void build(Instruction& inst, const std::string& base, const std::string& suffix, std::vector<Token>& ops,
             unsigned line_no, unsigned mn_col, unsigned guard_col) {
    std::optional<Signature> sig;
    if (base == "BMOV") {
      if (!suffix.empty()) fail(line_no, mn_col, "BMOV takes no modifier");
      if (ops.size() != 2) fail(line_no, mn_col, "BMOV expects 2 operands, got " + std::to_string(ops.size()));
      const bool dst_is_b = !ops[0].text.empty() && ops[0].text[0] == 'B';
      sig = dst_is_b ? Signature{Opcode::BMOV_BR, {kB, kR}, false, false}
                     : Signature{Opcode::BMOV_RB, {kR, kB}, false, false};
    } else {
      sig = signature_for(base);
      if (!sig) fail(line_no, mn_col, "unknown opcode '" + base + (suffix.empty() ? "" : "." + suffix) + "'");
      if (sig->op == Opcode::ISETP) {
        auto cmp = parse_cmp(suffix);
        if (!cmp) fail(line_no, mn_col, "ISETP needs a comparison suffix (EQ, NE, LT, LE, GT, GE)");
        inst.cmp = *cmp;
      } else if (!suffix.empty()) {
        fail(line_no, mn_col, base + " takes no modifier");
      }
    }
    inst.op = sig->op;
    if (!sig->guardable && inst.guard.lead)
      fail(line_no, guard_col, std::string(opcode_name(inst.op)) + " cannot be guarded");

    std::size_t first = 0;
    if (sig->takes_extra_pred && !ops.empty()) {
      std::string_view t = ops[0].text;
      if (!t.empty() && (t[0] == '!' || (t[0] == 'P' && all_digits(t.substr(1))))) {
        auto p = parse_pred(t, line_no, ops[0].column);
        if (!p) fail(line_no, ops[0].column, "malformed predicate '" + ops[0].text + "'");
        inst.guard.extra = *p;
        first = 1;
      }
    }
    const std::size_t given = ops.size() - first;
    if (given != sig->kinds.size())
      fail(line_no, mn_col,
           std::string(opcode_name(inst.op)) + " expects " + std::to_string(sig->kinds.size()) + " operand(s), got " +
               std::to_string(given));
    const std::size_t inst_index = program_.instructions.size();
    for (std::size_t k = 0; k < sig->kinds.size(); ++k) {
      const Token& t = ops[first + k];
      auto op = parse_operand(t, sig->kinds[k], line_no, inst_index, k);
      if (const auto* p = std::get_if<RegP>(&op); p && p->negated)
        fail(line_no, t.column, "destination predicate cannot be negated");
      inst.operands.push_back(std::move(op));
    }
  }

  void resolve() {
    for (const auto& p : pending_) {
      auto it = program_.labels.find(p.name);
      if (it == program_.labels.end()) fail(p.line, p.column, "undefined label '" + p.name + "'");
      if (it->second >= program_.instructions.size())
        fail(p.line, p.column, "label '" + p.name + "' does not name an instruction");
      auto& lab = std::get<Label>(program_.instructions[p.inst].operands[p.operand]);
      lab.pc = it->second;
    }
  }

  void lint() {
    for (const auto& inst : program_.instructions) {
      if (inst.op != Opcode::BSSY) continue;
      const auto& lab = label_operand(inst, 1);
      if (program_.instructions[lab.pc].op != Opcode::BSYNC)
        program_.warnings.push_back("line " + std::to_string(inst.line) + ": BSSY target '" + lab.name +
                                    "' is not a BSYNC instruction");
    }
  }

  std::string_view source_;
  Program program_;
  std::vector<PendingLabel> pending_;
};

}  // namespace

std::string Program::label_at(Pc pc) const {
  for (const auto& [name, at] : labels)
    if (at == pc) return name;
  return {};
}

Program assemble(std::string_view source) { return Parser(source).run(); }

namespace {

std::string pred_text(const PredRef& p) { return (p.negated ? "!P" : "P") + std::to_string(p.index); }

bool is_memory_slot(Opcode op, std::size_t i) {
  switch (op) {
    case Opcode::LD:
    case Opcode::ATOMCAS:
    case Opcode::ATOMEXCH: return i == 1;
    case Opcode::ST: return i == 0;
    default: return false;
  }
}

}  // namespace

std::string format_instruction(const Instruction& inst, const Program& program) {
  std::string out;
  if (inst.guard.lead) out += "@" + pred_text(*inst.guard.lead) + " ";
  out += mnemonic(inst);
  std::vector<std::string> ops;
  if (inst.guard.extra) ops.push_back(pred_text(*inst.guard.extra));
  for (std::size_t i = 0; i < inst.operands.size(); ++i) {
    std::string s = std::visit(
        [&](const auto& o) -> std::string {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, RegR>) return "R" + std::to_string(o.index);
          else if constexpr (std::is_same_v<T, RegP>) return pred_text(PredRef{o.index, o.negated});
          else if constexpr (std::is_same_v<T, RegB>) return "B" + std::to_string(o.index);
          else if constexpr (std::is_same_v<T, Imm>) return "#" + std::to_string(o.value);
          else if constexpr (std::is_same_v<T, Special>) return std::string(special_name(o.reg));
          else {
            std::string name = program.label_at(o.pc);
            return name.empty() ? o.name : name;
          }
        },
        inst.operands[i]);
    if (is_memory_slot(inst.op, i)) s = "[" + s + "]";
    ops.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < ops.size(); ++i) out += (i == 0 ? " " : ", ") + ops[i];
  return out;
}

std::string pretty_print(const Program& program) {
  std::ostringstream out;
  out << ".warpsize " << program.warp_size << "\n";
  out << ".warps " << program.num_warps << "\n";
  out << ".mem " << program.mem_words << "\n";
  std::multimap<Pc, std::string> by_pc;
  for (const auto& [name, pc] : program.labels) by_pc.emplace(pc, name);
  for (const auto& inst : program.instructions) {
    auto [b, e] = by_pc.equal_range(inst.pc);
    for (auto it = b; it != e; ++it) out << it->second << ":\n";
    out << "    " << format_instruction(inst, program) << "\n";
  }
  auto [b, e] = by_pc.equal_range(static_cast<Pc>(program.instructions.size()));
  for (auto it = b; it != e; ++it) out << it->second << ":\n";
  return out.str();
}

}  // namespace hanoi
