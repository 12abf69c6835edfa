#pragma once

// Bipartite graphs G = (U, V; E) as m x n 0/1 matrices with bit-vector rows,
// and the K_{s,t} certificates over them. Orientation is fixed throughout:
// the s-side of K_{s,t} sits in U (rows), the t-side in V (columns).

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace zforge {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kDefaultReferenceBudget = 100'000'000;

struct Provenance {
  std::uint32_t s = 0;
  std::uint32_t t = 0;
  std::uint64_t q = 0;
  std::string variant;
  std::uint64_t seed = 0;

  bool operator==(const Provenance&) const = default;
};

class BipartiteGraph {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BipartiteGraph() = default;
  BipartiteGraph(std::size_t m, std::size_t n);

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::size_t words_per_row() const { return words_; }

  bool get(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / kWordBits] >> (j % kWordBits)) & 1U;
  }
  void set(std::size_t i, std::size_t j, bool value = true);

  std::span<const Word> row(std::size_t i) const { return {bits_.data() + i * words_, words_}; }
  std::span<Word> row(std::size_t i) { return {bits_.data() + i * words_, words_}; }

  std::size_t row_degree(std::size_t i) const;
  std::vector<std::size_t> column_degrees() const;
  std::uint64_t edge_count() const;

  // Swaps the roles of U and V; provenance is dropped.
  BipartiteGraph transpose() const;

  // Rows given as index lists into V.
  static BipartiteGraph from_rows(std::size_t n, const std::vector<std::vector<std::size_t>>& rows);
  // Rows given as 0/1 strings, e.g. {"110", "011"}.
  static BipartiteGraph from_strings(const std::vector<std::string>& rows);

  const std::optional<Provenance>& provenance() const { return provenance_; }
  void set_provenance(std::optional<Provenance> p) { provenance_ = std::move(p); }

  bool operator==(const BipartiteGraph& other) const {
    return m_ == other.m_ && n_ == other.n_ && bits_ == other.bits_;
  }

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<Word> bits_;
  std::optional<Provenance> provenance_;
};

// Either free, or an all-ones s x t submatrix given by sorted row and column
// indices.
struct KstVerdict {
  bool free = true;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;

  bool operator==(const KstVerdict&) const = default;
};

// Returns the witness whose row subset is lexicographically first, with the
// first t common neighbours as columns. s > m is trivially free.
KstVerdict kst_free(const BipartiteGraph& g, std::size_t s, std::size_t t);

// Direct enumeration of all s-subsets x t-subsets; same verdict and witness
// as kst_free. Throws BudgetExceeded when C(m,s) * C(n,t) > budget.
KstVerdict kst_free_reference(const BipartiteGraph& g, std::size_t s, std::size_t t,
                              std::uint64_t budget = kDefaultReferenceBudget);

bool is_all_ones(const BipartiteGraph& g, std::span<const std::size_t> rows, std::span<const std::size_t> cols);

struct DoubleCount {
  BigInt lhs;  // sum over v in V of C(deg v, s)
  BigInt rhs;  // (t - 1) * C(m, s)
  bool holds = false;
};

DoubleCount kst_double_count(const BipartiteGraph& g, std::size_t s, std::size_t t);

// Largest e with n * B(e/n, s) <= (t - 1) * C(m, s), B(x, s) the falling
// factorial x(x-1)...(x-s+1)/s! taken as 0 for x < s - 1.
std::uint64_t kst_upper_bound(std::uint64_t m, std::uint64_t n, std::uint64_t s, std::uint64_t t);

struct DensityReport {
  std::uint64_t edges = 0;
  std::uint64_t kst_upper = 0;
  double lower_target = 0.0;  // m * n^{1 - 1/s}
  double ratio_lower = 0.0;   // edges / lower_target
  BigInt double_count_lhs;
  BigInt double_count_rhs;
};

// n^{1-1/s} is taken exactly as r^{s-1} when n = r^s, otherwise via std::pow.
double lower_target(std::uint64_t m, std::uint64_t n, std::uint64_t s);

DensityReport density_report(const BipartiteGraph& g, std::size_t s, std::size_t t);

BigInt binomial(std::uint64_t n, std::uint64_t k);

// Largest r with r^k <= x.
BigInt integer_root_floor(const BigInt& x, std::uint64_t k);

}  // namespace zforge
