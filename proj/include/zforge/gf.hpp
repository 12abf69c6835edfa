#pragma once

// Finite fields F_{p^k} in the polynomial basis.
//
// An element is a single integer in [0, q): its base-p digits, least
// significant first, are the coefficients of a polynomial of degree < k
// reduced modulo the field's monic irreducible modulus. Values below p form
// the prime subfield.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace zforge {

using Value = std::uint32_t;

inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 31;

class FieldSpec {
 public:
  // modulus is c_0..c_k (low to high); must be monic and irreducible when
  // k > 1, empty when k == 1.
  FieldSpec(std::uint32_t p, std::uint32_t k, std::vector<std::uint32_t> modulus);

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return k_; }
  std::uint32_t order() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  bool is_prime_field() const { return k_ == 1; }

  Value add(Value a, Value b) const;
  Value sub(Value a, Value b) const;
  Value neg(Value a) const;
  Value mul(Value a, Value b) const;
  Value pow(Value a, std::uint64_t e) const;
  // Extended Euclid for k > 1 and Fermat for k == 1.
  Value inv(Value a) const;
  Value inv_fermat(Value a) const;
  Value inv_euclid(Value a) const;

  // Digit vector (length k) of a value and back.
  std::vector<std::uint32_t> digits(Value a) const;
  Value from_digits(std::span<const std::uint32_t> digits) const;

  bool operator==(const FieldSpec& other) const {
    return p_ == other.p_ && k_ == other.k_ && modulus_ == other.modulus_;
  }

 private:
  Value add_slow(Value a, Value b) const;
  Value mul_slow(Value a, Value b) const;

  std::uint32_t p_;
  std::uint32_t k_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> pow_p_;  // p^i for i < k
  // Dense add/mul tables for small extension fields.
  std::vector<Value> add_table_;
  std::vector<Value> mul_table_;
};

using Field = std::shared_ptr<const FieldSpec>;

// Builds F_{p^k}. For k > 1 the modulus is the monic irreducible of degree k
// with the lowest base-p encoding of its lower coefficients.
Field field_make(std::uint64_t p, std::uint64_t k);

inline bool same_field(const Field& a, const Field& b) { return a == b || (a && b && *a == *b); }

struct FieldElem {
  Field field;
  Value value = 0;

  bool operator==(const FieldElem& other) const {
    return value == other.value && same_field(field, other.field);
  }
};

FieldElem make_elem(const Field& field, std::uint64_t value);

FieldElem add(const FieldElem& a, const FieldElem& b);
FieldElem sub(const FieldElem& a, const FieldElem& b);
FieldElem mul(const FieldElem& a, const FieldElem& b);
FieldElem neg(const FieldElem& a);
FieldElem inv(const FieldElem& a);
FieldElem pow(const FieldElem& a, std::uint64_t e);

inline FieldElem operator+(const FieldElem& a, const FieldElem& b) { return add(a, b); }
inline FieldElem operator-(const FieldElem& a, const FieldElem& b) { return sub(a, b); }
inline FieldElem operator*(const FieldElem& a, const FieldElem& b) { return mul(a, b); }
inline FieldElem operator-(const FieldElem& a) { return neg(a); }

// All q elements, ascending by value.
std::vector<FieldElem> enumerate_elements(const Field& field);

// --- integer utilities -------------------------------------------------------

bool is_prime(std::uint64_t x);

// Largest prime <= x; x >= 2.
std::uint64_t next_prime_below(std::uint64_t x);

// (p, k) with q = p^k, or nullopt if q is not a prime power.
std::optional<std::pair<std::uint64_t, std::uint64_t>> prime_power(std::uint64_t q);

// Exhaustive factor search: true iff the polynomial with coefficients
// c_0..c_n (low to high, c_n != 0) has no factor of degree 1..n/2 over F_p.
bool is_irreducible_mod_p(std::span<const std::uint32_t> coeffs, std::uint32_t p);

}  // namespace zforge
