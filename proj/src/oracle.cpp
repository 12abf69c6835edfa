#include "zforge/oracle.hpp"

#include <algorithm>
#include <bit>

#include "zforge/errors.hpp"

namespace zforge {
namespace {

using u64 = std::uint64_t;

u64 low_mask(std::size_t bits) { return bits >= 64 ? ~u64{0} : (u64{1} << bits) - 1; }

// s-subset test over rows given as bit masks.
bool contains_kst(std::span<const u64> rows, std::size_t s, std::size_t t) {
  if (s > rows.size()) return false;
  auto rec = [&](auto&& self, std::size_t start, std::size_t depth, u64 inter) -> bool {
    if (depth == s) return true;
    for (std::size_t i = start; i + (s - depth) <= rows.size(); ++i) {
      const u64 next = inter & rows[i];
      if (static_cast<std::size_t>(std::popcount(next)) < t) continue;
      if (self(self, i + 1, depth + 1, next)) return true;
    }
    return false;
  };
  return rec(rec, 0, 0, ~u64{0});
}

BipartiteGraph graph_from_masks(std::span<const u64> rows, std::size_t n) {
  BipartiteGraph g(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if ((rows[i] >> j) & 1U) g.set(i, j);
    }
  }
  return g;
}

OracleResult all_ones(std::size_t m, std::size_t n) {
  OracleResult r;
  r.z = static_cast<u64>(m) * n;
  std::vector<u64> rows(m, low_mask(n));
  r.witness = graph_from_masks(rows, n);
  return r;
}

class BranchAndBound {
 public:
  BranchAndBound(std::size_t m, std::size_t n, std::size_t s, std::size_t t, u64 budget,
                 const OracleOptions& options)
      : m_(m), n_(n), s_(s), t_(t), budget_(budget), options_(options), rows_(m, 0), col_deg_(n, 0),
        dangers_(s) {
    global_cap_ = kst_upper_bound(m, n, s, t);
    // Double-count residual: sum_v C(deg v, s) <= (t-1) C(m, s).
    const BigInt rhs = BigInt(t - 1) * binomial(m, s);
    use_residual_ = rhs < BigInt(UINT64_MAX / 4);
    if (use_residual_) {
      rhs_ = static_cast<u64>(rhs);
      for (std::size_t d = 0; d <= m + 1; ++d) {
        const BigInt inc = binomial(d, s - 1);
        inc_.push_back(inc > BigInt(UINT64_MAX / 4) ? UINT64_MAX / 4 : static_cast<u64>(inc));
      }
    }
    if (n >= t) dangers_[0].push_back(low_mask(n));
  }

  OracleResult run() {
    place(0, n_, {{0, n_}}, 0, 0);
    OracleResult r;
    r.z = best_;
    r.witness = graph_from_masks(best_rows_, n_);
    r.nodes_explored = nodes_;
    r.exact = !exhausted_;
    return r;
  }

 private:
  using Blocks = std::vector<std::pair<std::size_t, std::size_t>>;  // (start, length)

  bool done() const { return exhausted_ || (have_best_ && best_ >= global_cap_); }

  bool conflicts(u64 row) const {
    for (u64 x : dangers_[s_ - 1]) {
      if (static_cast<std::size_t>(std::popcount(x & row)) >= t_) return true;
    }
    return false;
  }

  // Upper bound on edges still addable to rows r..m-1 under the double count.
  u64 residual_extra(std::size_t r, u64 lhs) const {
    const std::size_t rows_left = m_ - r;
    std::vector<std::size_t> by_degree(m_ + 1, 0);
    for (std::size_t d : col_deg_) ++by_degree[d];
    // Each column gets at most rows_left more; raise lowest degrees first.
    std::vector<std::size_t> cap_hit(m_ + 2, 0);  // columns reaching their cap at each degree
    for (std::size_t d = 0; d <= m_; ++d) {
      if (by_degree[d] != 0) cap_hit[std::min(d + rows_left, m_ + 1)] += by_degree[d];
    }
    u64 extra = 0;
    std::size_t active = 0;
    for (std::size_t level = 0; level <= m_; ++level) {
      active += by_degree[level];
      active -= std::min(active, cap_hit[level]);
      if (active == 0) continue;
      const u64 inc = inc_[level];
      if (inc == 0) {
        extra += active;
        continue;
      }
      const u64 room = rhs_ >= lhs ? (rhs_ - lhs) / inc : 0;
      if (room < active) return extra + room;
      extra += active;
      lhs += active * inc;
    }
    return extra;
  }

  void record(u64 edges) {
    if (!have_best_ || edges > best_) {
      best_ = edges;
      best_rows_ = rows_;
      have_best_ = true;
    }
  }

  void place(std::size_t r, std::size_t w_cap, const Blocks& blocks, u64 edges, u64 lhs) {
    if (done()) return;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return;
    }
    if (r == m_) {
      record(edges);
      return;
    }
    if (options_.bound_pruning && have_best_) {
      const u64 cap = static_cast<u64>(m_ - r) * w_cap;
      u64 extra = cap;
      if (edges + cap > best_ && use_residual_) extra = std::min(cap, residual_extra(r, lhs));
      if (edges + extra <= best_) return;
    }
    if (options_.symmetry_breaking) {
      choose_blocks(r, w_cap, blocks, 0, 0, 0, edges, lhs);
    } else {
      for (u64 row = low_mask(n_) + 1; row-- > 0;) {
        if (done()) return;
        if (conflicts(row)) continue;
        descend(r, row, blocks, edges, lhs, static_cast<std::size_t>(std::popcount(row)));
      }
    }
  }

  void choose_blocks(std::size_t r, std::size_t w_cap, const Blocks& blocks, std::size_t b, u64 row,
                     std::size_t weight, u64 edges, u64 lhs) {
    if (done()) return;
    if (b == blocks.size()) {
      descend(r, row, blocks, edges, lhs, weight);
      return;
    }
    std::size_t remaining_room = 0;
    for (std::size_t i = b; i < blocks.size(); ++i) remaining_room += blocks[i].second;
    if (options_.bound_pruning && have_best_) {
      const std::size_t w_max = weight + std::min(remaining_room, w_cap - weight);
      if (edges + static_cast<u64>(w_max) * (m_ - r) <= best_) return;
    }
    const auto [start, len] = blocks[b];
    for (std::size_t c = std::min(len, w_cap - weight) + 1; c-- > 0;) {
      const u64 next = row | (low_mask(c) << start);
      if (c > 0 && conflicts(next)) continue;  // more ones only add conflicts
      choose_blocks(r, w_cap, blocks, b + 1, next, weight + c, edges, lhs);
      if (done()) return;
    }
  }

  void descend(std::size_t r, u64 row, const Blocks& blocks, u64 edges, u64 lhs, std::size_t weight) {
    rows_[r] = row;
    std::vector<std::size_t> saved_sizes(s_);
    for (std::size_t j = 0; j < s_; ++j) saved_sizes[j] = dangers_[j].size();
    for (std::size_t j = s_; j-- > 1;) {
      for (std::size_t i = 0; i < saved_sizes[j - 1]; ++i) {
        const u64 x = dangers_[j - 1][i] & row;
        if (static_cast<std::size_t>(std::popcount(x)) >= t_) dangers_[j].push_back(x);
      }
    }
    u64 new_lhs = lhs;
    for (u64 bits = row; bits != 0; bits &= bits - 1) {
      const auto j = static_cast<std::size_t>(std::countr_zero(bits));
      if (use_residual_) new_lhs += inc_[col_deg_[j]];
      ++col_deg_[j];
    }
    Blocks next_blocks;
    if (options_.symmetry_breaking) {
      for (const auto& [start, len] : blocks) {
        const auto c = static_cast<std::size_t>(std::popcount(row & (low_mask(len) << start)));
        if (c > 0) next_blocks.emplace_back(start, c);
        if (len > c) next_blocks.emplace_back(start + c, len - c);
      }
    }
    const std::size_t next_cap = options_.symmetry_breaking ? weight : n_;
    place(r + 1, next_cap, next_blocks, edges + weight, new_lhs);

    for (u64 bits = row; bits != 0; bits &= bits - 1) --col_deg_[static_cast<std::size_t>(std::countr_zero(bits))];
    for (std::size_t j = 0; j < s_; ++j) dangers_[j].resize(saved_sizes[j]);
    rows_[r] = 0;
  }

  std::size_t m_, n_, s_, t_;
  u64 budget_;
  OracleOptions options_;
  std::vector<u64> rows_;
  std::vector<std::size_t> col_deg_;
  // dangers_[j]: intersections of j placed rows with at least t bits
  // (dangers_[0] holds the full row).
  std::vector<std::vector<u64>> dangers_;
  bool use_residual_ = false;
  u64 rhs_ = 0;
  std::vector<u64> inc_;  // C(d, s-1): growth of C(d, s) when d -> d + 1
  u64 global_cap_ = 0;
  u64 nodes_ = 0;
  bool exhausted_ = false;
  bool have_best_ = false;
  u64 best_ = 0;
  std::vector<u64> best_rows_;
};

}  // namespace

OracleResult z_exact_naive(std::size_t m, std::size_t n, std::size_t s, std::size_t t) {
  if (s < 1 || t < 1) throw InvalidArgument("s and t must be >= 1");
  const u64 cells = static_cast<u64>(m) * n;
  if (cells > kNaiveMaxCells) throw BudgetExceeded("naive oracle cells", cells, kNaiveMaxCells);
  const u64 total = u64{1} << cells;
  const u64 row_mask = low_mask(n);
  std::vector<u64> rows(m);
  std::int64_t best = -1;
  u64 best_code = 0;
  for (u64 code = 0; code < total; ++code) {
    const int weight = std::popcount(code);
    if (weight <= best) continue;  // cannot be a strictly better maximiser
    for (std::size_t i = 0; i < m; ++i) rows[i] = (code >> (i * n)) & row_mask;
    if (t > n || !contains_kst(rows, s, t)) {
      best = weight;
      best_code = code;
    }
  }
  OracleResult r;
  r.z = static_cast<u64>(best);
  for (std::size_t i = 0; i < m; ++i) rows[i] = (best_code >> (i * n)) & row_mask;
  r.witness = graph_from_masks(rows, n);
  r.nodes_explored = total;
  return r;
}

OracleResult z_exact(std::size_t m, std::size_t n, std::size_t s, std::size_t t, std::uint64_t node_budget,
                     const OracleOptions& options) {
  if (s < 1 || t < 1) throw InvalidArgument("s and t must be >= 1");
  if (n > kOracleMaxColumns) throw InvalidArgument("branch and bound supports at most 64 columns");
  if (!options.symmetry_breaking && n > 24) {
    throw InvalidArgument("unrestricted row enumeration supports at most 24 columns");
  }
  if (m == 0 || n == 0) return OracleResult{0, BipartiteGraph(m, n), 0, true};
  if (s > m || t > n) return all_ones(m, n);
  return BranchAndBound(m, n, s, t, node_budget, options).run();
}

}  // namespace zforge
