#include "zforge/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include "zforge/errors.hpp"
#include "zforge/threads.hpp"

namespace zforge {
namespace {

using u64 = std::uint64_t;

void check_embeddable(const Field& coeff_field, const FieldSpec& point_field) {
  if (*coeff_field == point_field) return;
  if (coeff_field->is_prime_field() && coeff_field->characteristic() == point_field.characteristic()) {
    return;
  }
  throw IncompatibleField("points must lie in the coefficient field or an extension of a prime field");
}

// q^e, or nullopt past the limit.
std::optional<u64> checked_pow(u64 base, u64 e, u64 limit) {
  u64 out = 1;
  for (u64 i = 0; i < e; ++i) {
    if (base != 0 && out > limit / base) return std::nullopt;
    out *= base;
  }
  if (out > limit) return std::nullopt;
  return out;
}

void basis_rec(std::size_t var, std::size_t nvars, std::uint32_t remaining, std::vector<std::uint32_t>& cur,
               std::vector<Monomial>& out) {
  if (var + 1 == nvars) {
    cur[var] = remaining;
    out.push_back(Monomial{cur});
    return;
  }
  for (std::uint32_t e = remaining + 1; e-- > 0;) {
    cur[var] = e;
    basis_rec(var + 1, nvars, remaining - e, cur, out);
  }
}

// Monomial values at each point: table[i][j] = basis[j](points[i]).
std::vector<std::vector<Value>> monomial_values(const PointSet& points, const std::vector<Monomial>& basis,
                                                std::uint32_t d) {
  const FieldSpec& pf = *points.field();
  std::vector<std::vector<Value>> table(points.size(), std::vector<Value>(basis.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto pt = points[i];
    // powers[v][e] = x_v^e
    std::vector<std::vector<Value>> powers(pt.size(), std::vector<Value>(d + 1, 1));
    for (std::size_t v = 0; v < pt.size(); ++v) {
      for (std::uint32_t e = 1; e <= d; ++e) powers[v][e] = pf.mul(powers[v][e - 1], pt[v]);
    }
    for (std::size_t j = 0; j < basis.size(); ++j) {
      Value acc = 1;
      for (std::size_t v = 0; v < pt.size(); ++v) acc = pf.mul(acc, powers[v][basis[j].exponents[v]]);
      table[i][j] = acc;
    }
  }
  return table;
}

}  // namespace

std::uint32_t Monomial::total_degree() const {
  return std::accumulate(exponents.begin(), exponents.end(), std::uint32_t{0});
}

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
  const auto da = a.total_degree();
  const auto db = b.total_degree();
  if (da != db) return da < db;
  // larger exponent of the earlier variable comes first
  return std::lexicographical_compare(b.exponents.begin(), b.exponents.end(), a.exponents.begin(),
                                      a.exponents.end());
}

std::uint64_t monomial_count(std::size_t nvars, std::uint32_t d) {
  if (nvars < 1) throw InvalidArgument("nvars must be >= 1");
  // C(d + nvars, nvars) built up as a product of exact binomials
  unsigned __int128 c = 1;
  for (std::size_t i = 1; i <= nvars; ++i) {
    c = c * (d + i) / i;
    if (c > UINT64_MAX) throw BudgetExceeded("monomial count", UINT64_MAX, UINT64_MAX);
  }
  return static_cast<u64>(c);
}

std::vector<Monomial> monomial_basis(std::size_t nvars, std::uint32_t d) {
  if (nvars < 1) throw InvalidArgument("nvars must be >= 1");
  std::vector<Monomial> out;
  std::vector<std::uint32_t> cur(nvars, 0);
  for (std::uint32_t deg = 0; deg <= d; ++deg) basis_rec(0, nvars, deg, cur, out);
  return out;
}

MultiPoly::MultiPoly(Field field, std::size_t nvars, std::uint32_t degree_cap)
    : field_(std::move(field)), nvars_(nvars), degree_cap_(degree_cap) {
  if (!field_) throw InvalidArgument("null field");
  if (nvars_ < 1) throw InvalidArgument("nvars must be >= 1");
}

MultiPoly MultiPoly::from_dense(Field field, std::size_t nvars, std::uint32_t degree_cap,
                                std::span<const Value> coeffs) {
  MultiPoly out(std::move(field), nvars, degree_cap);
  const auto basis = monomial_basis(nvars, degree_cap);
  if (coeffs.size() != basis.size()) {
    throw InvalidArgument("expected " + std::to_string(basis.size()) + " coefficients, got " +
                          std::to_string(coeffs.size()));
  }
  for (std::size_t j = 0; j < basis.size(); ++j) out.set(basis[j], coeffs[j]);
  return out;
}

Value MultiPoly::coefficient(const Monomial& mono) const {
  const auto it = terms_.find(mono);
  return it == terms_.end() ? 0 : it->second;
}

void MultiPoly::set(const Monomial& mono, Value coeff) {
  if (mono.exponents.size() != nvars_) throw ArityMismatch(nvars_, mono.exponents.size());
  if (mono.total_degree() > degree_cap_) throw InvalidArgument("monomial exceeds the degree cap");
  if (coeff >= field_->order()) throw InvalidArgument("coefficient out of range");
  if (coeff == 0) {
    terms_.erase(mono);
  } else {
    terms_[mono] = coeff;
  }
}

std::vector<Value> MultiPoly::dense() const {
  const auto basis = monomial_basis(nvars_, degree_cap_);
  std::vector<Value> out;
  out.reserve(basis.size());
  for (const auto& mono : basis) out.push_back(coefficient(mono));
  return out;
}

bool MultiPoly::operator==(const MultiPoly& other) const {
  return nvars_ == other.nvars_ && degree_cap_ == other.degree_cap_ && same_field(field_, other.field_) &&
         terms_ == other.terms_;
}

MultiPoly poly_random(const Field& field, std::size_t nvars, std::uint32_t d, Rng& rng,
                      std::uint64_t max_monomials) {
  const auto count = monomial_count(nvars, d);
  if (count > max_monomials) throw BudgetExceeded("monomial count", count, max_monomials);
  std::vector<Value> coeffs(count);
  for (auto& c : coeffs) c = static_cast<Value>(rng.below(field->order()));
  return MultiPoly::from_dense(field, nvars, d, coeffs);
}

Value poly_eval(const MultiPoly& f, const FieldSpec& point_field, std::span<const Value> point) {
  if (point.size() != f.nvars()) throw ArityMismatch(f.nvars(), point.size());
  check_embeddable(f.field(), point_field);
  Value acc = 0;
  for (const auto& [mono, coeff] : f.terms()) {
    Value term = coeff;
    for (std::size_t v = 0; v < point.size(); ++v) {
      const auto e = mono.exponents[v];
      if (e != 0) term = point_field.mul(term, point_field.pow(point[v], e));
    }
    acc = point_field.add(acc, term);
  }
  return acc;
}

FieldElem poly_eval(const MultiPoly& f, std::span<const FieldElem> point) {
  if (point.size() != f.nvars()) throw ArityMismatch(f.nvars(), point.size());
  // an empty point only arises for nvars == 0, which MultiPoly forbids
  const Field& pf = point.front().field;
  std::vector<Value> raw;
  raw.reserve(point.size());
  for (const auto& x : point) {
    if (!same_field(x.field, pf)) throw SpecMismatch();
    raw.push_back(x.value);
  }
  return FieldElem{pf, poly_eval(f, *pf, raw)};
}

namespace {
MultiPoly combine(const MultiPoly& f, const MultiPoly& g, bool subtract) {
  if (!same_field(f.field(), g.field())) throw SpecMismatch();
  if (f.nvars() != g.nvars()) throw ArityMismatch(f.nvars(), g.nvars());
  if (f.degree_cap() != g.degree_cap()) throw InvalidArgument("degree caps differ");
  const FieldSpec& field = *f.field();
  MultiPoly out = f;
  for (const auto& [mono, coeff] : g.terms()) {
    const Value cur = out.coefficient(mono);
    out.set(mono, subtract ? field.sub(cur, coeff) : field.add(cur, coeff));
  }
  return out;
}
}  // namespace

MultiPoly poly_add(const MultiPoly& f, const MultiPoly& g) { return combine(f, g, false); }
MultiPoly poly_sub(const MultiPoly& f, const MultiPoly& g) { return combine(f, g, true); }

PointSet::PointSet(Field field, std::size_t nvars, std::vector<std::vector<Value>> points)
    : field_(std::move(field)), nvars_(nvars), points_(std::move(points)) {
  if (!field_) throw InvalidArgument("null field");
  for (const auto& pt : points_) {
    if (pt.size() != nvars_) throw ArityMismatch(nvars_, pt.size());
    for (Value v : pt) {
      if (v >= field_->order()) throw InvalidArgument("coordinate out of range");
    }
  }
  std::set<std::vector<Value>> seen(points_.begin(), points_.end());
  if (seen.size() != points_.size()) throw DuplicatePoints();
}

PointSet common_zeros(std::span<const MultiPoly> polys, const Field& field, std::size_t nvars,
                      std::uint64_t budget) {
  for (const auto& f : polys) {
    if (!same_field(f.field(), field)) throw SpecMismatch();
    if (f.nvars() != nvars) throw ArityMismatch(nvars, f.nvars());
  }
  const u64 q = field->order();
  const auto total = checked_pow(q, nvars, budget);
  if (!total) throw BudgetExceeded("common_zeros enumeration", UINT64_MAX, budget);

  std::vector<std::vector<Value>> zeros;
  std::vector<Value> pt(nvars, 0);
  for (u64 idx = 0; idx < *total; ++idx) {
    // last coordinate varies fastest, giving lexicographic order
    u64 rest = idx;
    for (std::size_t v = nvars; v-- > 0;) {
      pt[v] = static_cast<Value>(rest % q);
      rest /= q;
    }
    const bool all_zero = std::all_of(polys.begin(), polys.end(),
                                      [&](const MultiPoly& f) { return poly_eval(f, *field, pt) == 0; });
    if (all_zero) zeros.push_back(pt);
  }
  return PointSet(field, nvars, std::move(zeros));
}

Fraction Fraction::make(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  const u64 g = std::gcd(num, den);
  return g == 0 ? Fraction{0, 1} : Fraction{num / g, den / g};
}

std::strong_ordering Fraction::operator<=>(const Fraction& other) const {
  const auto lhs = static_cast<unsigned __int128>(num) * other.den;
  const auto rhs = static_cast<unsigned __int128>(other.num) * den;
  return lhs <=> rhs;
}

VanishCount vanish_probability_exact(const PointSet& points, const Field& coeff_field, std::size_t nvars,
                                     std::uint32_t d, std::uint64_t budget) {
  if (points.nvars() != nvars) throw ArityMismatch(nvars, points.nvars());
  check_embeddable(coeff_field, *points.field());
  const auto basis = monomial_basis(nvars, d);
  const u64 q = coeff_field->order();
  const auto total = checked_pow(q, basis.size(), budget);
  if (!total) throw BudgetExceeded("P_d enumeration", UINT64_MAX, budget);

  const FieldSpec& pf = *points.field();
  const FieldSpec& cf = *coeff_field;
  const auto mv = monomial_values(points, basis, d);
  const std::size_t npts = points.size();
  const std::size_t nmono = basis.size();

  // step[i][j][c]: change of f(x_i) when coefficient j moves from encoding c
  // to (c + 1) mod q.
  std::vector<Value> step(npts * nmono * q);
  for (std::size_t i = 0; i < npts; ++i) {
    for (std::size_t j = 0; j < nmono; ++j) {
      for (u64 c = 0; c < q; ++c) {
        const Value delta = cf.sub(static_cast<Value>((c + 1) % q), static_cast<Value>(c));
        step[(i * nmono + j) * q + c] = pf.mul(delta, mv[i][j]);
      }
    }
  }

  // Odometer over coefficient vectors; every evaluation starts at f = 0.
  std::vector<Value> coeffs(nmono, 0);
  std::vector<Value> evals(npts, 0);
  std::size_t nonzero = 0;
  u64 vanishing = 0;
  u64 visited = 0;
  for (;;) {
    ++visited;
    if (nonzero == 0) ++vanishing;
    std::size_t j = 0;
    for (; j < nmono; ++j) {
      const Value c = coeffs[j];
      for (std::size_t i = 0; i < npts; ++i) {
        const Value before = evals[i];
        const Value after = pf.add(before, step[(i * nmono + j) * q + c]);
        evals[i] = after;
        nonzero += (before == 0 && after != 0);
        nonzero -= (before != 0 && after == 0);
      }
      coeffs[j] = static_cast<Value>((c + 1) % q);
      if (coeffs[j] != 0) break;
    }
    if (j == nmono) break;
  }
  return VanishCount{Fraction::make(vanishing, visited), vanishing, visited};
}

McEstimate vanish_probability_mc(const PointSet& points, const Field& coeff_field, std::size_t nvars,
                                 std::uint32_t d, std::uint64_t trials, const Rng& rng) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (points.nvars() != nvars) throw ArityMismatch(nvars, points.nvars());
  check_embeddable(coeff_field, *points.field());
  const auto basis = monomial_basis(nvars, d);
  const auto mv = monomial_values(points, basis, d);
  const FieldSpec& pf = *points.field();
  const u64 q = coeff_field->order();

  constexpr std::size_t kChunks = 64;
  std::vector<u64> hits(kChunks, 0);
  auto run_chunk = [&](std::size_t chunk) {
    Rng local = rng.split(chunk);
    const u64 begin = trials * chunk / kChunks;
    const u64 end = trials * (chunk + 1) / kChunks;
    std::vector<Value> coeffs(basis.size());
    u64 local_hits = 0;
    for (u64 trial = begin; trial < end; ++trial) {
      for (auto& c : coeffs) c = static_cast<Value>(local.below(q));
      bool all_zero = true;
      for (std::size_t i = 0; i < mv.size() && all_zero; ++i) {
        Value acc = 0;
        for (std::size_t j = 0; j < coeffs.size(); ++j) acc = pf.add(acc, pf.mul(coeffs[j], mv[i][j]));
        all_zero = acc == 0;
      }
      local_hits += all_zero;
    }
    hits[chunk] = local_hits;
  };

  const std::size_t nthreads = std::min(worker_threads(), kChunks);
  if (nthreads <= 1) {
    for (std::size_t c = 0; c < kChunks; ++c) run_chunk(c);
  } else {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < nthreads; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t c = w; c < kChunks; c += nthreads) run_chunk(c);
      });
    }
  }

  McEstimate out;
  out.trials = trials;
  out.hits = std::accumulate(hits.begin(), hits.end(), u64{0});
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(trials);
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
  return out;
}

}  // namespace zforge
