#pragma once

// Exact Zarankiewicz numbers z(m, n; s, t) for tiny instances.

#include <cstdint>

#include "zforge/graph.hpp"

namespace zforge {

inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;
inline constexpr std::uint64_t kNaiveMaxCells = 25;
inline constexpr std::size_t kOracleMaxColumns = 64;

struct OracleResult {
  std::uint64_t z = 0;
  BipartiteGraph witness;
  std::uint64_t nodes_explored = 0;
  // false when the node budget ran out; z is then only a lower bound.
  bool exact = true;
};

// Scans all 2^{mn} matrices, cell (i, j) being bit i*n + j of a counter.
// The witness is the maximiser with the smallest counter value. m*n <= 25.
OracleResult z_exact_naive(std::size_t m, std::size_t n, std::size_t s, std::size_t t);

struct OracleOptions {
  // Rows in non-increasing weight order; ones left-justified within each
  // class of columns that agree on all earlier rows.
  bool symmetry_breaking = true;
  // Prune with the row-weight cap and the double-count residual.
  bool bound_pruning = true;
};

// Row-by-row branch and bound; n <= 64. On budget exhaustion returns the best
// matrix found with exact = false.
OracleResult z_exact(std::size_t m, std::size_t n, std::size_t s, std::size_t t,
                     std::uint64_t node_budget = kDefaultNodeBudget, const OracleOptions& options = {});

}  // namespace zforge
