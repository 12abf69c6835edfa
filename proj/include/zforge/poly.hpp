#pragma once

// Multivariate polynomials of bounded total degree over a finite field.
//
// Monomials are indexed in a fixed graded-lexicographic basis: total degree
// ascending, and within one degree the exponent vectors in descending
// lexicographic order (X_1 before X_2). For nvars = 2, d = 2 the basis is
// 1, X1, X2, X1^2, X1*X2, X2^2. Random sampling, exhaustive enumeration and
// the dense coefficient lists of the graph file all use this order.

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "zforge/gf.hpp"
#include "zforge/rng.hpp"

namespace zforge {

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kDefaultMaxMonomials = 64;

struct Monomial {
  std::vector<std::uint32_t> exponents;

  std::uint32_t total_degree() const;
  bool operator==(const Monomial&) const = default;
};

// Strict weak order matching the basis order described above.
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// binomial(d + nvars, nvars); throws on overflow.
std::uint64_t monomial_count(std::size_t nvars, std::uint32_t d);

std::vector<Monomial> monomial_basis(std::size_t nvars, std::uint32_t d);

class MultiPoly {
 public:
  using Terms = std::map<Monomial, Value, GradedLexLess>;

  // The zero polynomial.
  MultiPoly(Field field, std::size_t nvars, std::uint32_t degree_cap);

  // coeffs are given in basis order and must have monomial_count entries.
  static MultiPoly from_dense(Field field, std::size_t nvars, std::uint32_t degree_cap,
                              std::span<const Value> coeffs);

  const Field& field() const { return field_; }
  std::size_t nvars() const { return nvars_; }
  std::uint32_t degree_cap() const { return degree_cap_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Value coefficient(const Monomial& mono) const;
  // Setting a zero coefficient removes the term.
  void set(const Monomial& mono, Value coeff);

  std::vector<Value> dense() const;

  bool operator==(const MultiPoly& other) const;

 private:
  Field field_;
  std::size_t nvars_;
  std::uint32_t degree_cap_;
  Terms terms_;
};

// Uniform over all q^{monomial_count} polynomials of degree <= d.
MultiPoly poly_random(const Field& field, std::size_t nvars, std::uint32_t d, Rng& rng,
                      std::uint64_t max_monomials = kDefaultMaxMonomials);

// Point coordinates may live in the coefficient field or, when the
// coefficient field is prime, in any extension of it.
FieldElem poly_eval(const MultiPoly& f, std::span<const FieldElem> point);
Value poly_eval(const MultiPoly& f, const FieldSpec& point_field, std::span<const Value> point);

MultiPoly poly_add(const MultiPoly& f, const MultiPoly& g);
MultiPoly poly_sub(const MultiPoly& f, const MultiPoly& g);

// Distinct points of one field, all of the same arity.
class PointSet {
 public:
  PointSet(Field field, std::size_t nvars, std::vector<std::vector<Value>> points);

  const Field& field() const { return field_; }
  std::size_t nvars() const { return nvars_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::span<const Value> operator[](std::size_t i) const { return points_[i]; }
  const std::vector<std::vector<Value>>& points() const { return points_; }

 private:
  Field field_;
  std::size_t nvars_;
  std::vector<std::vector<Value>> points_;
};

// Every point of F_q^nvars where all polys vanish, in lexicographic order.
PointSet common_zeros(std::span<const MultiPoly> polys, const Field& field, std::size_t nvars,
                      std::uint64_t budget = kDefaultEnumerationBudget);

// Reduced non-negative fraction.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Fraction make(std::uint64_t num, std::uint64_t den);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Fraction&) const = default;
  std::strong_ordering operator<=>(const Fraction& other) const;
};

struct VanishCount {
  Fraction probability;
  std::uint64_t vanishing = 0;  // polynomials vanishing on every point
  std::uint64_t visited = 0;    // polynomials enumerated, q^{monomial_count}
};

// Exact probability that a uniform f in P_d (coefficients in coeff_field)
// vanishes on every point, by exhaustive enumeration of P_d.
VanishCount vanish_probability_exact(const PointSet& points, const Field& coeff_field,
                                     std::size_t nvars, std::uint32_t d,
                                     std::uint64_t budget = kDefaultEnumerationBudget);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
};

// Monte-Carlo version. Trials are split into fixed chunks with their own
// child streams, so the result does not depend on the thread count.
McEstimate vanish_probability_mc(const PointSet& points, const Field& coeff_field,
                                 std::size_t nvars, std::uint32_t d, std::uint64_t trials,
                                 const Rng& rng);

}  // namespace zforge
