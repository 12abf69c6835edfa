#include "zforge/report.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "zforge/graph_file.hpp"

namespace zforge {
namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(strip(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_uint(std::string_view text, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("grid line " + std::to_string(line_no) + ": '" + std::string(text) + "' is not an integer");
  }
  return value;
}

template <typename T>
std::string cell(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, bool>) {
    return *v ? "true" : "false";
  } else if constexpr (std::is_floating_point_v<T>) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
  } else {
    return std::to_string(*v);
  }
}

}  // namespace

std::vector<GridEntry> parse_grid(std::string_view text) {
  std::vector<GridEntry> out;
  bool seen_header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = strip(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!seen_header) {
      if (line != kGridHeader) throw ParseError("grid must start with the header '" + std::string(kGridHeader) + "'");
      seen_header = true;
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != 5) throw ParseError("grid line " + std::to_string(line_no) + ": expected 5 fields");
    GridEntry e;
    e.s = parse_uint<std::uint32_t>(fields[0], line_no);
    e.t = parse_uint<std::uint32_t>(fields[1], line_no);
    e.q = parse_uint<std::uint64_t>(fields[2], line_no);
    try {
      e.variant = parse_variant(fields[3]);
    } catch (const InvalidArgument& err) {
      throw ParseError("grid line " + std::to_string(line_no) + ": " + err.what());
    }
    e.seed = parse_uint<std::uint64_t>(fields[4], line_no);
    out.push_back(e);
  }
  return out;
}

ReportRow run_grid_entry(const GridEntry& entry, std::size_t retry_budget) {
  ReportRow row;
  row.entry = entry;
  ConstructionParams params;
  try {
    params = params_derive(entry.s, entry.t, entry.q, entry.variant);
  } catch (const EllTooSmall&) {
    row.status = "ell_too_small";
    return row;
  } catch (const Error&) {
    row.status = "invalid_params";
    return row;
  }
  row.d = params.d;
  row.ell = params.ell;
  row.union_bound_ok = union_bound_ok(params);
  try {
    const Construction c = build(params, entry.seed, retry_budget);
    const auto& g = c.graph;
    if (!kst_free(g, params.s, params.t).free) {
      row.status = "not_free";
      return row;
    }
    const auto report = density_report(g, params.s, params.t);
    row.m = g.m();
    row.n = g.n();
    row.edges = report.edges;
    row.kst_upper = report.kst_upper;
    row.lower_target = report.lower_target;
    row.ratio_lower = report.ratio_lower;
    row.retries_total = c.retries_total();
    row.status = "ok";
  } catch (const NotPrime&) {
    row.status = "not_prime";
  } catch (const ConstructionFailed& e) {
    row.retries_total = 0;
    for (auto r : e.retries_used()) *row.retries_total += r;
    *row.retries_total += e.attempts();
    row.status = "construction_failed";
  } catch (const BudgetExceeded&) {
    row.status = "budget_exceeded";
  } catch (const Error&) {
    row.status = "invalid_params";
  }
  return row;
}

std::string to_csv(const ReportRow& row) {
  std::ostringstream out;
  const auto& e = row.entry;
  out << e.s << ',' << e.t << ',' << e.q << ',' << to_string(e.variant) << ',' << e.seed << ',' << cell(row.d) << ','
      << cell(row.ell) << ',' << cell(row.m) << ',' << cell(row.n) << ',' << cell(row.edges) << ','
      << cell(row.kst_upper) << ',' << cell(row.lower_target) << ',' << cell(row.ratio_lower) << ','
      << cell(row.union_bound_ok) << ',' << cell(row.retries_total) << ',' << row.status;
  return out.str();
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out;
  out += kReportVersionLine;
  out += '\n';
  out += kReportHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += to_csv(r);
    out += '\n';
  }
  return out;
}

}  // namespace zforge
