#include "hanoi/trace.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "json.hpp"

namespace hanoi {

std::string format_event(const TraceEvent& e) {
  std::string s = "{\"warp\":" + std::to_string(e.warp) + ",\"seq\":" + std::to_string(e.seq) +
                  ",\"pc\":" + std::to_string(e.pc) + ",\"op\":";
  s += nlohmann::json(e.op).dump();
  s += ",\"mask\":\"" + e.mask.to_string() + "\"}";
  return s;
}

void write_trace(std::ostream& out, std::span<const TraceEvent> events) {
  for (const auto& e : events) out << format_event(e) << '\n';
}

std::vector<TraceEvent> read_trace(std::istream& in) {
  std::vector<TraceEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& err) {
      throw trace_parse_error(line_no, std::string("malformed JSON: ") + err.what());
    }
    auto field = [&](const char* name) -> const nlohmann::json& {
      if (!j.is_object() || !j.contains(name)) throw trace_parse_error(line_no, std::string("missing field '") + name + "'");
      return j.at(name);
    };
    auto uint_field = [&](const char* name) -> std::uint64_t {
      const auto& v = field(name);
      if (!v.is_number_unsigned()) throw trace_parse_error(line_no, std::string("field '") + name + "' must be a non-negative integer");
      return v.get<std::uint64_t>();
    };
    TraceEvent e;
    e.warp = static_cast<unsigned>(uint_field("warp"));
    e.seq = uint_field("seq");
    e.pc = static_cast<Pc>(uint_field("pc"));
    const auto& op = field("op");
    const auto& mask = field("mask");
    if (!op.is_string() || !mask.is_string()) throw trace_parse_error(line_no, "fields 'op' and 'mask' must be strings");
    e.op = op.get<std::string>();
    try {
      e.mask = ThreadMask::from_string(mask.get<std::string>());
    } catch (const format_error& err) {
      throw trace_parse_error(line_no, err.what());
    }
    events.push_back(std::move(e));
  }
  return events;
}

void write_trace_file(const std::string& path, std::span<const TraceEvent> events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_trace(out, events);
}

std::vector<TraceEvent> read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_trace(in);
}

std::map<unsigned, std::vector<TraceEvent>> split_by_warp(std::span<const TraceEvent> events) {
  std::map<unsigned, std::vector<TraceEvent>> out;
  for (const auto& e : events) out[e.warp].push_back(e);
  return out;
}

std::size_t levenshtein(std::span<const TraceEvent> a, std::span<const TraceEvent> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (same_issue(a[i - 1], b[j - 1]) ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {
std::size_t denominator(std::size_t ref, std::size_t cand, Denominator d) {
  return d == Denominator::reference ? ref : std::max(ref, cand);
}
}  // namespace

double discrepancy_pct(std::span<const TraceEvent> reference, std::span<const TraceEvent> candidate,
                       Denominator denom) {
  const std::size_t n = denominator(reference.size(), candidate.size(), denom);
  if (n == 0) throw std::invalid_argument("discrepancy of an empty reference trace is undefined");
  return 100.0 * static_cast<double>(levenshtein(reference, candidate)) / static_cast<double>(n);
}

DiffReport diff_traces(std::span<const TraceEvent> reference, std::span<const TraceEvent> candidate,
                       Denominator denom) {
  const auto ref = split_by_warp(reference);
  const auto cand = split_by_warp(candidate);
  std::set<unsigned> warps;
  for (const auto& [w, _] : ref) warps.insert(w);
  for (const auto& [w, _] : cand) warps.insert(w);

  DiffReport report;
  std::size_t total_distance = 0, total_denom = 0;
  static const std::vector<TraceEvent> kEmpty;
  for (unsigned w : warps) {
    const auto& r = ref.contains(w) ? ref.at(w) : kEmpty;
    const auto& c = cand.contains(w) ? cand.at(w) : kEmpty;
    WarpDiff d{w, r.size(), c.size(), levenshtein(r, c), 0.0};
    const std::size_t n = denominator(r.size(), c.size(), denom);
    // A warp missing from the reference counts as fully discrepant.
    d.pct = n == 0 ? (d.distance ? 100.0 : 0.0) : 100.0 * static_cast<double>(d.distance) / static_cast<double>(n);
    total_distance += d.distance;
    total_denom += n;
    report.warps.push_back(d);
  }
  if (total_denom == 0) throw std::invalid_argument("discrepancy of an empty reference trace is undefined");
  report.aggregate_pct = 100.0 * static_cast<double>(total_distance) / static_cast<double>(total_denom);
  return report;
}

TraceSummary summarize(std::span<const TraceEvent> events) {
  TraceSummary s;
  double util = 0.0;
  for (const auto& e : events) {
    ++s.events_per_warp[e.warp];
    util += static_cast<double>(e.mask.count()) / static_cast<double>(e.mask.warp_size());
  }
  s.instructions = events.size();
  s.simd_utilization = events.empty() ? 0.0 : util / static_cast<double>(events.size());
  return s;
}

}  // namespace hanoi
