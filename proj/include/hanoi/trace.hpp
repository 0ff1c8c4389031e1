#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hanoi/isa.hpp"

namespace hanoi {

struct TraceEvent {
  unsigned warp = 0;
  std::uint64_t seq = 0;
  Pc pc = 0;
  std::string op;
  ThreadMask mask;

  bool operator==(const TraceEvent&) const = default;
};

// Two events describe the same issue if pc and mask agree; op follows from pc.
inline bool same_issue(const TraceEvent& a, const TraceEvent& b) { return a.pc == b.pc && a.mask == b.mask; }

class trace_parse_error : public std::runtime_error {
 public:
  trace_parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("trace line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// One JSON object per line: {"warp":0,"seq":12,"pc":24,"op":"BRA","mask":"1100"}
std::string format_event(const TraceEvent& e);
void write_trace(std::ostream& out, std::span<const TraceEvent> events);
std::vector<TraceEvent> read_trace(std::istream& in);
void write_trace_file(const std::string& path, std::span<const TraceEvent> events);
std::vector<TraceEvent> read_trace_file(const std::string& path);

// Events grouped by warp, in file order.
std::map<unsigned, std::vector<TraceEvent>> split_by_warp(std::span<const TraceEvent> events);

// Edit distance with unit-cost insert, delete and substitute; elements match per same_issue().
std::size_t levenshtein(std::span<const TraceEvent> a, std::span<const TraceEvent> b);

enum class Denominator { reference, longer };

// 100 * distance / length; throws std::invalid_argument when the denominator is zero.
double discrepancy_pct(std::span<const TraceEvent> reference, std::span<const TraceEvent> candidate,
                       Denominator denom = Denominator::reference);

struct WarpDiff {
  unsigned warp = 0;
  std::size_t ref_events = 0;
  std::size_t cand_events = 0;
  std::size_t distance = 0;
  double pct = 0.0;
};

struct DiffReport {
  std::vector<WarpDiff> warps;
  double aggregate_pct = 0.0;  // event-weighted mean over warps
};

DiffReport diff_traces(std::span<const TraceEvent> reference, std::span<const TraceEvent> candidate,
                       Denominator denom = Denominator::reference);

struct TraceSummary {
  std::map<unsigned, std::size_t> events_per_warp;
  std::size_t instructions = 0;
  double simd_utilization = 0.0;  // mean popcount(mask) / warp_size
};

TraceSummary summarize(std::span<const TraceEvent> events);

}  // namespace hanoi
