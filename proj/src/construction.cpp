#include "zforge/construction.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "zforge/errors.hpp"

namespace zforge {
namespace {

using u64 = std::uint64_t;
using Word = BipartiteGraph::Word;

constexpr u64 kMaxVertices = u64{1} << 26;
constexpr u64 kMaxMatrixBits = u64{1} << 33;

u64 checked_pow_u64(u64 base, u64 e) {
  unsigned __int128 out = 1;
  for (u64 i = 0; i < e; ++i) {
    out *= base;
    if (out > UINT64_MAX) throw InvalidArgument("q^s overflows 64 bits");
  }
  return static_cast<u64>(out);
}

u64 default_ell(u64 q, std::uint32_t d, std::uint32_t s) {
  if (d == 0) throw InvalidArgument("ell has no default for d = 0");
  const BigInt power = boost::multiprecision::pow(BigInt(q), d + 1);
  const BigInt root = integer_root_floor(power, s - 1);
  const BigInt ell = root / (2 * d);
  if (ell > UINT64_MAX) throw BudgetExceeded("ell", UINT64_MAX, UINT64_MAX);
  return static_cast<u64>(ell);
}

void check_poly(const MultiPoly& f, const ConstructionParams& params) {
  if (f.nvars() != params.nvars()) throw ArityMismatch(params.nvars(), f.nvars());
  if (f.field()->order() != params.q || !f.field()->is_prime_field()) {
    throw IncompatibleField("polynomial field does not match the construction's prime field");
  }
}

// True if some (s-1)-subset of rows[0, k) meets `candidate` in >= t columns.
class SubsetViolation {
 public:
  SubsetViolation(const BipartiteGraph& g, std::size_t s, std::size_t t)
      : g_(g), need_(s - 1), t_(t), inter_(s, std::vector<Word>(g.words_per_row())) {}

  bool check(std::span<const Word> candidate, std::size_t k) {
    std::copy(candidate.begin(), candidate.end(), inter_[0].begin());
    if (count(inter_[0]) < t_) return false;
    return extend(0, 0, k);
  }

 private:
  static std::size_t count(const std::vector<Word>& v) {
    std::size_t c = 0;
    for (Word w : v) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool extend(std::size_t depth, std::size_t start, std::size_t k) {
    if (depth == need_) return true;
    for (std::size_t i = start; i + (need_ - depth) <= k; ++i) {
      const auto row = g_.row(i);
      std::size_t bits = 0;
      for (std::size_t w = 0; w < row.size(); ++w) {
        inter_[depth + 1][w] = inter_[depth][w] & row[w];
        bits += static_cast<std::size_t>(std::popcount(inter_[depth + 1][w]));
      }
      if (bits < t_) continue;
      if (extend(depth + 1, i + 1, k)) return true;
    }
    return false;
  }

  const BipartiteGraph& g_;
  std::size_t need_;
  std::size_t t_;
  std::vector<std::vector<Word>> inter_;
};

}  // namespace

std::string_view to_string(Variant v) { return v == Variant::Graph ? "graph" : "zeroset"; }

Variant parse_variant(std::string_view name) {
  if (name == "graph") return Variant::Graph;
  if (name == "zeroset") return Variant::ZeroSet;
  throw InvalidArgument("unknown variant: " + std::string(name));
}

std::uint64_t integer_root_ceil(std::uint64_t x, std::uint64_t k) {
  const BigInt floor_root = integer_root_floor(BigInt(x), k);
  const u64 r = static_cast<u64>(floor_root);
  return boost::multiprecision::pow(floor_root, static_cast<unsigned>(k)) == x ? r : r + 1;
}

ConstructionParams params_derive(std::uint32_t s, std::uint32_t t, std::uint64_t q, Variant variant,
                                 const VariantOverrides& overrides) {
  if (s < 2 || t < s) throw InvalidArgument("need 2 <= s <= t");
  if (!prime_power(q)) throw InvalidArgument("q = " + std::to_string(q) + " is not a prime power");
  if (variant == Variant::Graph && (overrides.d || overrides.ell)) {
    throw InvalidArgument("d and ell are fixed for the graph variant");
  }
  ConstructionParams p;
  p.s = s;
  p.t = t;
  p.q = q;
  p.variant = variant;
  p.n = checked_pow_u64(q, s);
  if (variant == Variant::Graph) {
    p.d = static_cast<std::uint32_t>(integer_root_ceil(t, s - 1) - 1);
  } else {
    p.d = overrides.d.value_or(static_cast<std::uint32_t>(integer_root_ceil(t, s) - 1));
  }
  p.ell = overrides.ell ? *overrides.ell : default_ell(q, p.d, s);
  if (p.ell < 1) throw EllTooSmall();
  p.exponent_num = p.d + 1;
  p.exponent_den = static_cast<u64>(s) * (s - 1);
  return p;
}

bool union_bound_ok(const ConstructionParams& params) {
  const unsigned e = params.s - 1;
  const BigInt lhs = boost::multiprecision::pow(BigInt(params.ell) * params.d, e);
  const BigInt rhs = boost::multiprecision::pow(BigInt(params.q), params.d + 1);
  return lhs < rhs;
}

std::uint64_t point_index(std::span<const Value> point, std::uint64_t q) {
  u64 idx = 0;
  for (Value v : point) idx = idx * q + v;
  return idx;
}

std::vector<std::vector<Value>> neighborhood_points(const MultiPoly& f, const ConstructionParams& params) {
  check_poly(f, params);
  const FieldSpec& field = *f.field();
  if (params.variant == Variant::ZeroSet) {
    const MultiPoly single[] = {f};
    return common_zeros(single, f.field(), params.s, kMaxVertices).points();
  }
  const std::size_t k = params.s - 1;
  const u64 prefixes = checked_pow_u64(params.q, k);
  std::vector<std::vector<Value>> out;
  out.reserve(prefixes);
  std::vector<Value> pt(params.s, 0);
  for (u64 idx = 0; idx < prefixes; ++idx) {
    u64 rest = idx;
    for (std::size_t v = k; v-- > 0;) {
      pt[v] = static_cast<Value>(rest % params.q);
      rest /= params.q;
    }
    pt[k] = poly_eval(f, field, std::span<const Value>(pt.data(), k));
    out.push_back(pt);
  }
  return out;
}

std::vector<Word> neighborhood_row(const MultiPoly& f, const ConstructionParams& params) {
  std::vector<Word> row((params.n + BipartiteGraph::kWordBits - 1) / BipartiteGraph::kWordBits, 0);
  for (const auto& pt : neighborhood_points(f, params)) {
    const u64 j = point_index(pt, params.q);
    row[j / BipartiteGraph::kWordBits] |= Word{1} << (j % BipartiteGraph::kWordBits);
  }
  return row;
}

std::size_t Construction::retries_total() const {
  return std::accumulate(retries_used.begin(), retries_used.end(), std::size_t{0});
}

Construction build(const ConstructionParams& params, std::uint64_t seed, std::size_t retry_budget) {
  if (retry_budget < 1) throw InvalidArgument("retry budget must be >= 1");
  if (!is_prime(params.q)) throw NotPrime(params.q);
  if (params.n > kMaxVertices) throw BudgetExceeded("|V| = q^s", params.n, kMaxVertices);
  if (params.ell > kMaxVertices) throw BudgetExceeded("|U| = ell", params.ell, kMaxVertices);
  if (params.ell * params.n > kMaxMatrixBits) throw BudgetExceeded("ell * q^s", params.ell * params.n, kMaxMatrixBits);

  const Field field = field_make(params.q, 1);
  Construction c;
  c.params = params;
  c.seed = seed;
  c.graph = BipartiteGraph(params.ell, params.n);
  c.polynomials.reserve(params.ell);
  c.retries_used.reserve(params.ell);

  const Rng root(seed);
  SubsetViolation violation(c.graph, params.s, params.t);
  for (std::size_t k = 0; k < params.ell; ++k) {
    Rng stream = root.split(k);
    bool accepted = false;
    for (std::size_t attempt = 0; attempt < retry_budget; ++attempt) {
      MultiPoly f = poly_random(field, params.nvars(), params.d, stream);
      if (std::find(c.polynomials.begin(), c.polynomials.end(), f) != c.polynomials.end()) continue;
      const auto row = neighborhood_row(f, params);
      if (violation.check(row, k)) continue;
      std::copy(row.begin(), row.end(), c.graph.row(k).begin());
      c.polynomials.push_back(std::move(f));
      c.retries_used.push_back(attempt);
      accepted = true;
      break;
    }
    if (!accepted) throw ConstructionFailed(k, retry_budget, c.retries_used);
  }
  c.graph.set_provenance(Provenance{params.s, params.t, params.q, std::string(to_string(params.variant)), seed});
  return c;
}

Construction build(std::uint32_t s, std::uint32_t t, std::uint64_t q, Variant variant, std::uint64_t seed,
                   std::size_t retry_budget) {
  return build(params_derive(s, t, q, variant), seed, retry_budget);
}

BipartiteGraph materialize(const ConstructionParams& params, std::span<const MultiPoly> polys) {
  BipartiteGraph g(polys.size(), params.n);
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const auto row = neighborhood_row(polys[i], params);
    std::copy(row.begin(), row.end(), g.row(i).begin());
  }
  return g;
}

std::uint64_t intersection_size_via_differences(std::span<const MultiPoly> polys,
                                                std::span<const std::size_t> indices,
                                                const ConstructionParams& params) {
  if (params.variant != Variant::Graph) {
    throw VariantMismatch("intersection via differences applies to the graph variant only");
  }
  if (indices.empty()) throw InvalidArgument("need at least one index");
  for (std::size_t a = 0; a < indices.size(); ++a) {
    if (indices[a] >= polys.size()) throw OutOfRange("polynomial index out of range");
    for (std::size_t b = 0; b < a; ++b) {
      if (indices[a] == indices[b]) throw InvalidArgument("indices must be distinct");
    }
  }
  const MultiPoly& base = polys[indices[0]];
  check_poly(base, params);
  std::vector<MultiPoly> diffs;
  for (std::size_t a = 1; a < indices.size(); ++a) diffs.push_back(poly_sub(base, polys[indices[a]]));
  return common_zeros(diffs, base.field(), params.s - 1, kMaxVertices).size();
}

BipartiteGraph subsample(const Construction& c, std::size_t m, Rng& rng) {
  const std::size_t ell = c.graph.m();
  if (m < 1 || m > ell) throw OutOfRange("subsample size must be in [1, ell]");
  std::vector<std::size_t> order(ell);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(ell - i));
    std::swap(order[i], order[j]);
  }
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
  BipartiteGraph out(m, c.graph.n());
  for (std::size_t i = 0; i < m; ++i) {
    const auto src = c.graph.row(order[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  out.set_provenance(c.graph.provenance());
  return out;
}

FieldForN field_for_n(std::uint64_t n, std::uint32_t s) {
  if (s < 1) throw InvalidArgument("s must be >= 1");
  if (s >= 64 || n < (u64{1} << s)) throw TooSmall("n must be at least 2^s");
  const u64 root = static_cast<u64>(integer_root_floor(BigInt(n), s));
  const u64 q = next_prime_below(root);
  return {q, checked_pow_u64(q, s)};
}

}  // namespace zforge
