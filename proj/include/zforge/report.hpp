#pragma once

// Batch runs over a grid of construction parameters, one CSV row each.
//
// Grid files are CSV with the header "s,t,q,variant,seed"; blank lines and
// lines starting with '#' are skipped. Report files start with the line
// "# zforge report v1" followed by the fixed header kReportHeader.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zforge/construction.hpp"

namespace zforge {

inline constexpr std::string_view kReportVersionLine = "# zforge report v1";
inline constexpr std::string_view kReportHeader =
    "s,t,q,variant,seed,d,ell,m,n,edges,kst_upper,lower_target,ratio_lower,union_bound_ok,retries_total,status";
inline constexpr std::string_view kGridHeader = "s,t,q,variant,seed";

struct GridEntry {
  std::uint32_t s = 0;
  std::uint32_t t = 0;
  std::uint64_t q = 0;
  Variant variant = Variant::Graph;
  std::uint64_t seed = 0;
};

// Throws ParseError on malformed grids.
std::vector<GridEntry> parse_grid(std::string_view text);

struct ReportRow {
  GridEntry entry;
  std::optional<std::uint32_t> d;
  std::optional<std::uint64_t> ell;
  std::optional<std::uint64_t> m;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> edges;
  std::optional<std::uint64_t> kst_upper;
  std::optional<double> lower_target;
  std::optional<double> ratio_lower;
  std::optional<bool> union_bound_ok;
  std::optional<std::uint64_t> retries_total;
  // ok | invalid_params | not_prime | ell_too_small | construction_failed |
  // budget_exceeded | not_free
  std::string status;
};

// Never throws for parameter problems; they become the row's status.
ReportRow run_grid_entry(const GridEntry& entry, std::size_t retry_budget = kDefaultRetryBudget);

std::string to_csv(const ReportRow& row);
std::string report_csv(const std::vector<ReportRow>& rows);

}  // namespace zforge
