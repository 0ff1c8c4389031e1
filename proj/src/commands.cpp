#include "hanoi/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "hanoi/storage.hpp"

namespace hanoi {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kProgramFormat = "hanoi-program";
constexpr int kProgramVersion = 1;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
}

bool wildcard_match(std::string_view pattern, std::string_view name) {
  std::size_t p = 0, n = 0, star = std::string_view::npos, mark = 0;
  while (n < name.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
      ++p;
      ++n;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = n;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      n = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  fs::path pat(pattern);
  fs::path dir = pat.has_parent_path() ? pat.parent_path() : fs::path(".");
  const std::string leaf = pat.filename().string();
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && wildcard_match(leaf, entry.path().filename().string()))
      out.push_back(entry.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

int worse(int a, int b) {
  auto rank = [](int code) {
    switch (code) {
      case kExitFault: return 3;
      case kExitDeadlock: return 2;
      case kExitBudget: return 1;
      default: return 0;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

int run_one(const std::string& path, const RunOptions& opts, const std::string& trace_path, std::ostream& out,
            std::ostream& err) {
  Program program;
  try {
    program = load_program(path);
  } catch (const assembly_error& e) {
    err << path << ": " << e.what() << "\n";
    return kExitUsage;
  }
  for (const auto& w : program.warnings) err << path << ": warning: " << w << "\n";

  Simulator sim(program, opts.config);
  const RunResult result = sim.run();
  if (!trace_path.empty()) write_trace_file(trace_path, result.trace);

  const TraceSummary summary = summarize(result.trace);
  const auto per_warp = split_by_warp(result.trace);
  const int code = result.exit_code();
  if (opts.summary_json) {
    for (unsigned w = 0; w < result.warps.size(); ++w) {
      const auto it = per_warp.find(w);
      const auto s = it == per_warp.end() ? TraceSummary{} : summarize(it->second);
      json j = json::object();
      j["program"] = path;
      j["warp"] = w;
      j["outcome"] = std::string(outcome_name(result.warps[w].outcome));
      j["instructions"] = result.warps[w].instructions;
      j["simd_utilization"] = s.simd_utilization;
      if (!result.warps[w].fault.empty()) j["fault"] = result.warps[w].fault;
      out << j.dump() << "\n";
    }
    json total = json::object();
    total["program"] = path;
    total["instructions"] = summary.instructions;
    total["simd_utilization"] = summary.simd_utilization;
    total["exit_code"] = code;
    out << total.dump() << "\n";
  } else {
    out << "program " << path << ": engine "
        << (opts.config.engine == EngineKind::hanoi ? "hanoi" : "simtstack") << ", " << result.warps.size()
        << " warp(s) of " << sim.warp_size() << " threads\n";
    out << "warp  outcome          instructions  simd_util\n";
    for (unsigned w = 0; w < result.warps.size(); ++w) {
      const auto it = per_warp.find(w);
      const auto s = it == per_warp.end() ? TraceSummary{} : summarize(it->second);
      std::string name(outcome_name(result.warps[w].outcome));
      out << std::left << std::setw(6) << w << std::setw(17) << name << std::setw(14)
          << result.warps[w].instructions << fixed(s.simd_utilization, 3) << "\n";
      if (!result.warps[w].fault.empty()) out << "      " << result.warps[w].fault << "\n";
    }
    out << "total " << summary.instructions << " instructions, simd utilization "
        << fixed(summary.simd_utilization, 3) << ", exit " << code << "\n";
  }
  if (opts.dump_state)
    for (unsigned w = 0; w < sim.num_warps(); ++w) out << sim.dump_state(w);
  return code;
}

}  // namespace

std::string program_to_json(const Program& program) {
  json j = json::object();
  j["format"] = kProgramFormat;
  j["version"] = kProgramVersion;
  j["warp_size"] = program.warp_size;
  j["num_warps"] = program.num_warps;
  j["mem_words"] = program.mem_words;
  j["labels"] = program.labels;
  json insts = json::array();
  for (const auto& inst : program.instructions) {
    json i = json::object();
    i["pc"] = inst.pc;
    i["op"] = mnemonic(inst);
    i["text"] = format_instruction(inst, program);
    insts.push_back(std::move(i));
  }
  j["instructions"] = std::move(insts);
  return j.dump(2) + "\n";
}

Program program_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw assembly_error(0, 0, std::string("malformed program JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kProgramFormat)
    throw assembly_error(0, 0, "not a hanoi program file");
  if (j.value("version", 0) != kProgramVersion)
    throw assembly_error(0, 0, "unsupported program version " + std::to_string(j.value("version", 0)));
  std::ostringstream src;
  src << ".warpsize " << j.at("warp_size").get<unsigned>() << "\n";
  src << ".warps " << j.at("num_warps").get<unsigned>() << "\n";
  src << ".mem " << j.at("mem_words").get<unsigned>() << "\n";
  std::multimap<Pc, std::string> by_pc;
  for (const auto& [name, pc] : j.at("labels").items()) by_pc.emplace(pc.get<Pc>(), name);
  const auto& insts = j.at("instructions");
  for (std::size_t k = 0; k < insts.size(); ++k) {
    const auto& i = insts[k];
    if (i.at("pc").get<std::size_t>() != k) throw assembly_error(0, 0, "instructions out of order at pc " + std::to_string(k));
    auto [b, e] = by_pc.equal_range(static_cast<Pc>(k));
    for (auto it = b; it != e; ++it) src << it->second << ":\n";
    src << i.at("text").get<std::string>() << "\n";
  }
  auto [b, e] = by_pc.equal_range(static_cast<Pc>(insts.size()));
  for (auto it = b; it != e; ++it) src << it->second << ":\n";
  return assemble(src.str());
}

Program load_program(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return program_from_json(text);
  return assemble(text);
}

int cmd_assemble(const AsmOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (opts.disassemble) {
      write_output(opts.output, pretty_print(load_program(opts.input)), out);
      return 0;
    }
    const Program p = assemble(read_file(opts.input));
    for (const auto& w : p.warnings) err << opts.input << ": warning: " << w << "\n";
    if (!p.empty())
      for (const auto& w : build_cfg(p).warnings) err << opts.input << ": warning: " << w << "\n";
    write_output(opts.output, program_to_json(p), out);
    return 0;
  } catch (const assembly_error& e) {
    err << opts.input << ":" << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (opts.glob.empty()) return run_one(opts.program, opts, opts.trace_out, out, err);
    const auto files = expand_glob(opts.glob);
    if (files.empty()) {
      err << "no files match " << opts.glob << "\n";
      return kExitUsage;
    }
    int code = 0;
    for (const auto& f : files) {
      std::string trace;
      if (!opts.trace_out.empty()) {
        fs::create_directories(opts.trace_out);
        trace = (fs::path(opts.trace_out) / (fs::path(f).stem().string() + ".trace")).string();
      }
      code = worse(code, run_one(f, opts, trace, out, err));
    }
    return code;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_diff(const DiffOptions& opts, std::ostream& out, std::ostream& err) {
  DiffReport report;
  try {
    const auto ref = read_trace_file(opts.reference);
    const auto cand = read_trace_file(opts.candidate);
    report = diff_traces(ref, cand, opts.denom);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  if (opts.json) {
    for (const auto& w : report.warps) {
      json j = json::object();
      j["warp"] = w.warp;
      j["ref_events"] = w.ref_events;
      j["cand_events"] = w.cand_events;
      j["distance"] = w.distance;
      j["discrepancy_pct"] = w.pct;
      out << j.dump() << "\n";
    }
    json total = json::object();
    total["aggregate_pct"] = report.aggregate_pct;
    total["threshold_pct"] = opts.threshold;
    out << total.dump() << "\n";
  } else {
    out << "warp  ref  cand  distance  discrepancy\n";
    for (const auto& w : report.warps)
      out << std::left << std::setw(6) << w.warp << std::setw(5) << w.ref_events << std::setw(6) << w.cand_events
          << std::setw(10) << w.distance << fixed(w.pct, 3) << "%\n";
    out << "aggregate discrepancy " << fixed(report.aggregate_pct, 3) << "%\n";
  }
  return report.aggregate_pct <= opts.threshold ? 0 : 1;
}

int cmd_stats(const StatsOptions& opts, std::ostream& out, std::ostream& err) {
  StorageBreakdown h;
  SimtStorage s;
  try {
    h = hanoi_storage(opts.warp_size, opts.num_bregs, opts.pc_bits);
    s = simt_stack_storage(opts.warp_size, opts.pc_bits);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  const double less = 100.0 * (1.0 - static_cast<double>(h.total_bytes()) / static_cast<double>(s.total_bytes()));
  const double more = 100.0 * (static_cast<double>(s.total_bytes()) / static_cast<double>(h.total_bytes()) - 1.0);
  if (opts.json) {
    json j = json::object();
    j["warp_size"] = opts.warp_size;
    j["num_bregs"] = opts.num_bregs;
    j["pc_bits"] = opts.pc_bits;
    j["ws_bits"] = h.ws_bits;
    j["rec_bits"] = h.rec_bits;
    j["breg_bits"] = h.breg_bits;
    j["mask_bits"] = h.mask_bits;
    j["hanoi_bits"] = h.total_bits();
    j["hanoi_bytes"] = h.total_bytes();
    j["simt_entries"] = s.entries;
    j["simt_bits"] = s.total_bits();
    j["simt_bytes"] = s.total_bytes();
    j["hanoi_less_pct"] = less;
    j["simt_more_pct"] = more;
    out << j.dump() << "\n";
    return 0;
  }
  const unsigned w = opts.warp_size, pc = opts.pc_bits;
  out << "Hanoi storage: warp size " << w << ", " << opts.num_bregs << " B registers, " << pc << "-bit pc\n";
  out << "  WS stack     " << w << " x (" << pc << " + " << w << ") bits = " << h.ws_bits << " bits\n";
  out << "  REC stack    " << (w - 1) << " x (" << pc << " + " << h.breg_index_bits << ") bits = " << h.rec_bits
      << " bits\n";
  out << "  B registers  " << opts.num_bregs << " x " << w << " bits = " << h.breg_bits << " bits\n";
  out << "  masks        2 x " << w << " bits = " << h.mask_bits << " bits\n";
  out << "  total        " << h.total_bits() << " bits = " << h.total_bytes() << " bytes\n";
  out << "SIMT stack:    " << s.entries << " x (" << pc << " + " << pc << " + " << w << ") bits = "
      << s.total_bits() << " bits = " << s.total_bytes() << " bytes\n";
  out << "Hanoi needs " << fixed(less, 1) << "% less storage; the SIMT stack needs " << fixed(more, 1)
      << "% more\n";
  return 0;
}

}  // namespace hanoi
