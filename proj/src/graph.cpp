#include "zforge/graph.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <thread>

#include "zforge/errors.hpp"
#include "zforge/threads.hpp"

namespace zforge {
namespace {

using Word = BipartiteGraph::Word;

std::size_t popcount(std::span<const Word> words) {
  std::size_t c = 0;
  for (Word w : words) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::vector<std::size_t> first_bits(std::span<const Word> words, std::size_t count) {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words.size() && out.size() < count; ++w) {
    Word x = words[w];
    while (x != 0 && out.size() < count) {
      out.push_back(w * BipartiteGraph::kWordBits + static_cast<std::size_t>(std::countr_zero(x)));
      x &= x - 1;
    }
  }
  return out;
}

// Depth-first search over s-subsets whose first row is `first`, in
// lexicographic order. Abandons a prefix once its running intersection has
// fewer than t bits.
class SubsetSearch {
 public:
  SubsetSearch(const BipartiteGraph& g, std::size_t s, std::size_t t)
      : g_(g), s_(s), t_(t), inter_(s, std::vector<Word>(g.words_per_row())), chosen_(s) {}

  std::optional<KstVerdict> from(std::size_t first) {
    const auto row = g_.row(first);
    std::copy(row.begin(), row.end(), inter_[0].begin());
    chosen_[0] = first;
    if (popcount(inter_[0]) < t_) return std::nullopt;
    if (extend(1)) {
      KstVerdict v;
      v.free = false;
      v.rows = chosen_;
      v.cols = first_bits(inter_[s_ - 1], t_);
      return v;
    }
    return std::nullopt;
  }

 private:
  bool extend(std::size_t depth) {
    if (depth == s_) return true;
    const std::size_t remaining = s_ - depth;
    for (std::size_t i = chosen_[depth - 1] + 1; i + remaining <= g_.m(); ++i) {
      const auto row = g_.row(i);
      std::size_t bits = 0;
      for (std::size_t w = 0; w < row.size(); ++w) {
        inter_[depth][w] = inter_[depth - 1][w] & row[w];
        bits += static_cast<std::size_t>(std::popcount(inter_[depth][w]));
      }
      if (bits < t_) continue;
      chosen_[depth] = i;
      if (extend(depth + 1)) return true;
    }
    return false;
  }

  const BipartiteGraph& g_;
  std::size_t s_;
  std::size_t t_;
  std::vector<std::vector<Word>> inter_;
  std::vector<std::size_t> chosen_;
};

constexpr std::size_t kParallelMinRows = 64;

}  // namespace

BipartiteGraph::BipartiteGraph(std::size_t m, std::size_t n)
    : m_(m), n_(n), words_((n + kWordBits - 1) / kWordBits), bits_(m * words_, 0) {}

void BipartiteGraph::set(std::size_t i, std::size_t j, bool value) {
  if (i >= m_ || j >= n_) throw OutOfRange("cell out of range");
  Word& w = bits_[i * words_ + j / kWordBits];
  const Word mask = Word{1} << (j % kWordBits);
  w = value ? (w | mask) : (w & ~mask);
}

std::size_t BipartiteGraph::row_degree(std::size_t i) const { return popcount(row(i)); }

std::vector<std::size_t> BipartiteGraph::column_degrees() const {
  std::vector<std::size_t> deg(n_, 0);
  for (std::size_t i = 0; i < m_; ++i) {
    const auto r = row(i);
    for (std::size_t w = 0; w < r.size(); ++w) {
      Word x = r[w];
      while (x != 0) {
        ++deg[w * kWordBits + static_cast<std::size_t>(std::countr_zero(x))];
        x &= x - 1;
      }
    }
  }
  return deg;
}

std::uint64_t BipartiteGraph::edge_count() const { return popcount(bits_); }

BipartiteGraph BipartiteGraph::transpose() const {
  BipartiteGraph out(n_, m_);
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (get(i, j)) out.set(j, i);
    }
  }
  return out;
}

BipartiteGraph BipartiteGraph::from_rows(std::size_t n, const std::vector<std::vector<std::size_t>>& rows) {
  BipartiteGraph g(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j : rows[i]) g.set(i, j);
  }
  return g;
}

BipartiteGraph BipartiteGraph::from_strings(const std::vector<std::string>& rows) {
  const std::size_t n = rows.empty() ? 0 : rows.front().size();
  BipartiteGraph g(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) throw InvalidArgument("ragged rows");
    for (std::size_t j = 0; j < n; ++j) {
      if (rows[i][j] == '1') {
        g.set(i, j);
      } else if (rows[i][j] != '0') {
        throw InvalidArgument("rows must contain only 0 and 1");
      }
    }
  }
  return g;
}

KstVerdict kst_free(const BipartiteGraph& g, std::size_t s, std::size_t t) {
  if (s < 1 || t < 1) throw InvalidArgument("s and t must be >= 1");
  if (s > g.m() || t > g.n()) return {};
  const std::size_t last_first = g.m() - s;  // first row of any s-subset is <= this

  const std::size_t nthreads = std::min(worker_threads(), last_first + 1);
  if (g.m() < kParallelMinRows || nthreads <= 1) {
    SubsetSearch search(g, s, t);
    for (std::size_t first = 0; first <= last_first; ++first) {
      if (auto v = search.from(first)) return *v;
    }
    return {};
  }

  // Strided partition over the first row; the smallest first row wins, so
  // the witness matches the sequential order.
  std::atomic<std::size_t> best{SIZE_MAX};
  std::vector<std::optional<KstVerdict>> found(nthreads);
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < nthreads; ++w) {
      workers.emplace_back([&, w] {
        SubsetSearch search(g, s, t);
        for (std::size_t first = w; first <= last_first; first += nthreads) {
          if (first > best.load(std::memory_order_relaxed)) return;
          if (auto v = search.from(first)) {
            found[w] = std::move(v);
            std::size_t cur = best.load();
            while (first < cur && !best.compare_exchange_weak(cur, first)) {
            }
            return;
          }
        }
      });
    }
  }
  const std::size_t winner = best.load();
  if (winner == SIZE_MAX) return {};
  return *found[winner % nthreads];
}

bool is_all_ones(const BipartiteGraph& g, std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
  for (std::size_t i : rows) {
    for (std::size_t j : cols) {
      if (i >= g.m() || j >= g.n() || !g.get(i, j)) return false;
    }
  }
  return true;
}

namespace {
// Advances a sorted k-combination of [0, n) in lexicographic order.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::size_t> first_combination(std::size_t k) {
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  return c;
}
}  // namespace

KstVerdict kst_free_reference(const BipartiteGraph& g, std::size_t s, std::size_t t, std::uint64_t budget) {
  if (s < 1 || t < 1) throw InvalidArgument("s and t must be >= 1");
  if (s > g.m() || t > g.n()) return {};
  const BigInt work = binomial(g.m(), s) * binomial(g.n(), t);
  if (work > budget) {
    throw BudgetExceeded("reference K_{s,t} enumeration",
                         work > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(work), budget);
  }
  auto rows = first_combination(s);
  do {
    auto cols = first_combination(t);
    do {
      if (is_all_ones(g, rows, cols)) return {false, rows, cols};
    } while (next_combination(cols, g.n()));
  } while (next_combination(rows, g.m()));
  return {};
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

DoubleCount kst_double_count(const BipartiteGraph& g, std::size_t s, std::size_t t) {
  if (s < 1 || t < 1) throw InvalidArgument("s and t must be >= 1");
  DoubleCount out;
  out.lhs = 0;
  for (std::size_t deg : g.column_degrees()) out.lhs += binomial(deg, s);
  out.rhs = BigInt(t - 1) * binomial(g.m(), s);
  out.holds = out.lhs <= out.rhs;
  return out;
}

std::uint64_t kst_upper_bound(std::uint64_t m, std::uint64_t n, std::uint64_t s, std::uint64_t t) {
  if (m < 1 || n < 1) throw InvalidArgument("m and n must be >= 1");
  if (s < 1 || t < 1) throw InvalidArgument("s and t must be >= 1");
  // n * B(e/n, s) <= (t-1) C(m,s)  <=>  prod_{i<s} (e - i n) <= (t-1) C(m,s) s! n^{s-1}
  BigInt cap = BigInt(t - 1) * binomial(m, s);
  for (std::uint64_t i = 2; i <= s; ++i) cap *= i;
  for (std::uint64_t i = 1; i < s; ++i) cap *= n;
  auto feasible = [&](std::uint64_t e) {
    const BigInt e_big = e;
    const BigInt floor_arg = BigInt(s - 1) * n;
    if (e_big < floor_arg) return true;  // x < s - 1 contributes 0
    BigInt prod = 1;
    for (std::uint64_t i = 0; i < s; ++i) prod *= e_big - BigInt(i) * n;
    return prod <= cap;
  };
  std::uint64_t lo = 0;
  std::uint64_t hi = m * n;
  if (feasible(hi)) return hi;
  while (hi - lo > 1) {  // feasible(lo), !feasible(hi)
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

BigInt integer_root_floor(const BigInt& x, std::uint64_t k) {
  if (k < 1) throw InvalidArgument("root order must be >= 1");
  if (x < 0) throw InvalidArgument("negative radicand");
  if (k == 1 || x < 2) return x;
  BigInt lo = 1;
  BigInt hi = 2;
  while (boost::multiprecision::pow(hi, static_cast<unsigned>(k)) <= x) hi *= 2;
  while (hi - lo > 1) {
    const BigInt mid = (lo + hi) / 2;
    (boost::multiprecision::pow(mid, static_cast<unsigned>(k)) <= x ? lo : hi) = mid;
  }
  return lo;
}

double lower_target(std::uint64_t m, std::uint64_t n, std::uint64_t s) {
  if (s < 1) throw InvalidArgument("s must be >= 1");
  const BigInt root = integer_root_floor(n, s);
  if (boost::multiprecision::pow(root, static_cast<unsigned>(s)) == n) {
    const BigInt exact = BigInt(m) * boost::multiprecision::pow(root, static_cast<unsigned>(s - 1));
    return exact.convert_to<double>();
  }
  return static_cast<double>(m) * std::pow(static_cast<double>(n), 1.0 - 1.0 / static_cast<double>(s));
}

DensityReport density_report(const BipartiteGraph& g, std::size_t s, std::size_t t) {
  DensityReport r;
  r.edges = g.edge_count();
  r.kst_upper = (g.m() == 0 || g.n() == 0) ? 0 : kst_upper_bound(g.m(), g.n(), s, t);
  r.lower_target = lower_target(g.m(), g.n(), s);
  r.ratio_lower = (r.edges == 0 || r.lower_target == 0.0) ? 0.0 : static_cast<double>(r.edges) / r.lower_target;
  auto dc = kst_double_count(g, s, t);
  r.double_count_lhs = std::move(dc.lhs);
  r.double_count_rhs = std::move(dc.rhs);
  return r;
}

}  // namespace zforge
