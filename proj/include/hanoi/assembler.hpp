#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hanoi/isa.hpp"

namespace hanoi {

struct Program {
  std::vector<Instruction> instructions;
  std::map<std::string, Pc> labels;
  unsigned warp_size = 4;
  unsigned num_warps = 1;
  unsigned mem_words = 0;
  std::vector<std::string> warnings;

  std::size_t size() const { return instructions.size(); }
  bool empty() const { return instructions.empty(); }
  const Instruction& at(Pc pc) const { return instructions.at(pc); }
  // First label naming `pc`, or an empty string.
  std::string label_at(Pc pc) const;
};

class assembly_error : public std::runtime_error {
 public:
  assembly_error(unsigned line, unsigned column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  unsigned line() const { return line_; }
  unsigned column() const { return column_; }

 private:
  unsigned line_;
  unsigned column_;
};

Program assemble(std::string_view source);

// Inverse of assemble(): directives, then one instruction per line with its labels.
std::string pretty_print(const Program& program);
std::string format_instruction(const Instruction& inst, const Program& program);

}  // namespace hanoi
