#include "zforge/gf.hpp"

#include <algorithm>
#include <cassert>

#include "zforge/errors.hpp"

namespace zforge {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr std::uint32_t kTableMaxOrder = 256;

using Poly = std::vector<std::uint32_t>;  // low to high, over F_p

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

u64 inv_mod(u64 a, u64 p) {
  // extended Euclid over the integers
  std::int64_t r0 = static_cast<std::int64_t>(p), r1 = static_cast<std::int64_t>(a % p);
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t quot = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - quot * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - quot * s1);
  }
  assert(r0 == 1);
  std::int64_t res = s0 % static_cast<std::int64_t>(p);
  if (res < 0) res += static_cast<std::int64_t>(p);
  return static_cast<u64>(res);
}

// Remainder of f modulo g (g nonzero), both trimmed.
Poly poly_rem(Poly f, const Poly& g, std::uint32_t p) {
  const u64 lead_inv = inv_mod(g.back(), p);
  while (f.size() >= g.size()) {
    const u64 factor = (static_cast<u64>(f.back()) * lead_inv) % p;
    const std::size_t shift = f.size() - g.size();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const u64 sub = (factor * g[i]) % p;
      f[shift + i] = static_cast<std::uint32_t>((f[shift + i] + p - sub) % p);
    }
    trim(f);
  }
  return f;
}

// Quotient and remainder of f / g.
std::pair<Poly, Poly> poly_divmod(Poly f, const Poly& g, std::uint32_t p) {
  const u64 lead_inv = inv_mod(g.back(), p);
  Poly quot(f.size() >= g.size() ? f.size() - g.size() + 1 : 0, 0);
  while (f.size() >= g.size()) {
    const u64 factor = (static_cast<u64>(f.back()) * lead_inv) % p;
    const std::size_t shift = f.size() - g.size();
    quot[shift] = static_cast<std::uint32_t>(factor);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const u64 sub = (factor * g[i]) % p;
      f[shift + i] = static_cast<std::uint32_t>((f[shift + i] + p - sub) % p);
    }
    trim(f);
  }
  trim(quot);
  return {std::move(quot), std::move(f)};
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = static_cast<std::uint32_t>((out[i + j] + static_cast<u64>(a[i]) * b[j]) % p);
    }
  }
  trim(out);
  return out;
}

Poly poly_sub(const Poly& a, const Poly& b, std::uint32_t p) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const u64 x = i < a.size() ? a[i] : 0;
    const u64 y = i < b.size() ? b[i] : 0;
    out[i] = static_cast<std::uint32_t>((x + p - y) % p);
  }
  trim(out);
  return out;
}

u64 pow_u64(u64 base, u64 e, u64 mod) {
  u64 result = 1 % mod;
  base %= mod;
  while (e > 0) {
    if (e & 1) result = static_cast<u64>(static_cast<u128>(result) * base % mod);
    base = static_cast<u64>(static_cast<u128>(base) * base % mod);
    e >>= 1;
  }
  return result;
}

}  // namespace

bool is_irreducible_mod_p(std::span<const std::uint32_t> coeffs, std::uint32_t p) {
  Poly f(coeffs.begin(), coeffs.end());
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t deg = f.size() - 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    // every monic polynomial of degree d
    u64 count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    Poly g(d + 1, 0);
    g[d] = 1;
    for (u64 code = 0; code < count; ++code) {
      u64 c = code;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      if (poly_rem(f, g, p).empty()) return false;
    }
  }
  return true;
}

FieldSpec::FieldSpec(std::uint32_t p, std::uint32_t k, std::vector<std::uint32_t> modulus)
    : p_(p), k_(k), q_(0), modulus_(std::move(modulus)) {
  if (!is_prime(p)) throw NotPrime(p);
  if (k < 1) throw InvalidArgument("extension degree must be >= 1");
  u64 q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    pow_p_.push_back(static_cast<std::uint32_t>(q));
    q *= p;
    if (q > kMaxFieldOrder) throw InvalidArgument("field order exceeds 2^31");
  }
  q_ = static_cast<std::uint32_t>(q);
  if (k == 1) {
    if (!modulus_.empty()) throw InvalidArgument("prime field takes no modulus");
    return;
  }
  if (modulus_.size() != k + 1 || modulus_.back() != 1 ||
      std::any_of(modulus_.begin(), modulus_.end(), [p](std::uint32_t c) { return c >= p; })) {
    throw InvalidArgument("modulus must be monic of degree k with coefficients in [0, p)");
  }
  if (!is_irreducible_mod_p(modulus_, p)) throw InvalidArgument("modulus is reducible");
  if (q_ <= kTableMaxOrder) {
    add_table_.resize(static_cast<std::size_t>(q_) * q_);
    mul_table_.resize(static_cast<std::size_t>(q_) * q_);
    for (Value a = 0; a < q_; ++a) {
      for (Value b = 0; b < q_; ++b) {
        add_table_[a * q_ + b] = add_slow(a, b);
        mul_table_[a * q_ + b] = mul_slow(a, b);
      }
    }
  }
}

std::vector<std::uint32_t> FieldSpec::digits(Value a) const {
  std::vector<std::uint32_t> out(k_);
  for (std::uint32_t i = 0; i < k_; ++i) {
    out[i] = a % p_;
    a /= p_;
  }
  return out;
}

Value FieldSpec::from_digits(std::span<const std::uint32_t> d) const {
  Value v = 0;
  for (std::size_t i = 0; i < d.size() && i < k_; ++i) v += (d[i] % p_) * pow_p_[i];
  return v;
}

Value FieldSpec::add_slow(Value a, Value b) const {
  Value out = 0;
  for (std::uint32_t i = 0; i < k_; ++i) {
    const std::uint32_t s = (a % p_ + b % p_) % p_;
    out += s * pow_p_[i];
    a /= p_;
    b /= p_;
  }
  return out;
}

Value FieldSpec::mul_slow(Value a, Value b) const {
  const auto da = digits(a);
  const auto db = digits(b);
  std::vector<u64> prod(2 * k_ - 1, 0);
  for (std::uint32_t i = 0; i < k_; ++i) {
    if (da[i] == 0) continue;
    for (std::uint32_t j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + static_cast<u64>(da[i]) * db[j]) % p_;
  }
  // reduce by the monic modulus: x^k = -(c_0 + ... + c_{k-1} x^{k-1})
  for (std::size_t top = prod.size(); top-- > k_;) {
    const u64 c = prod[top];
    if (c == 0) continue;
    prod[top] = 0;
    for (std::uint32_t i = 0; i < k_; ++i) {
      const std::size_t at = top - k_ + i;
      prod[at] = (prod[at] + (p_ - modulus_[i]) % p_ * c) % p_;
    }
  }
  Value out = 0;
  for (std::uint32_t i = 0; i < k_; ++i) out += static_cast<Value>(prod[i]) * pow_p_[i];
  return out;
}

Value FieldSpec::add(Value a, Value b) const {
  if (k_ == 1) {
    const u64 s = static_cast<u64>(a) + b;
    return static_cast<Value>(s >= p_ ? s - p_ : s);
  }
  if (!add_table_.empty()) return add_table_[a * q_ + b];
  return add_slow(a, b);
}

Value FieldSpec::neg(Value a) const {
  if (k_ == 1) return a == 0 ? 0 : p_ - a;
  Value out = 0;
  for (std::uint32_t i = 0; i < k_; ++i) {
    const std::uint32_t d = a % p_;
    out += (d == 0 ? 0 : p_ - d) * pow_p_[i];
    a /= p_;
  }
  return out;
}

Value FieldSpec::sub(Value a, Value b) const {
  if (k_ == 1) return a >= b ? a - b : static_cast<Value>(static_cast<u64>(a) + p_ - b);
  return add(a, neg(b));
}

Value FieldSpec::mul(Value a, Value b) const {
  if (k_ == 1) return static_cast<Value>(static_cast<u64>(a) * b % p_);
  if (!mul_table_.empty()) return mul_table_[a * q_ + b];
  return mul_slow(a, b);
}

Value FieldSpec::pow(Value a, std::uint64_t e) const {
  Value result = 1;
  Value base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Value FieldSpec::inv_fermat(Value a) const {
  if (a == 0) throw DivisionByZero();
  return pow(a, static_cast<u64>(q_) - 2);
}

Value FieldSpec::inv_euclid(Value a) const {
  if (a == 0) throw DivisionByZero();
  if (k_ == 1) return static_cast<Value>(inv_mod(a, p_));
  // Invariant: s_i * a == r_i (mod modulus).
  Poly r0(modulus_.begin(), modulus_.end());
  Poly r1 = digits(a);
  trim(r1);
  Poly s0, s1{1};
  while (!r1.empty()) {
    auto [quot, rem] = poly_divmod(r0, r1, p_);
    Poly s2 = poly_sub(s0, poly_mul(quot, s1, p_), p_);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r0 is a nonzero constant since the modulus is irreducible
  assert(r0.size() == 1);
  const u64 scale = inv_mod(r0[0], p_);
  Poly result(k_, 0);
  for (std::size_t i = 0; i < s0.size() && i < k_; ++i) {
    result[i] = static_cast<std::uint32_t>(s0[i] * scale % p_);
  }
  return from_digits(result);
}

Value FieldSpec::inv(Value a) const { return k_ == 1 ? inv_fermat(a) : inv_euclid(a); }

Field field_make(std::uint64_t p, std::uint64_t k) {
  if (p < 2 || !is_prime(p)) throw NotPrime(p);
  if (k < 1) throw InvalidArgument("extension degree must be >= 1");
  u64 q = 1;
  for (u64 i = 0; i < k; ++i) {
    q *= p;
    if (q > kMaxFieldOrder) throw InvalidArgument("field order exceeds 2^31");
  }
  const auto p32 = static_cast<std::uint32_t>(p);
  const auto k32 = static_cast<std::uint32_t>(k);
  if (k == 1) return std::make_shared<const FieldSpec>(p32, 1, std::vector<std::uint32_t>{});

  // Monic candidates x^k + (lower part), lower part ordered by its encoding.
  std::vector<std::uint32_t> modulus(k + 1, 0);
  modulus[k] = 1;
  for (u64 code = 0; code < q; ++code) {
    u64 c = code;
    for (u64 i = 0; i < k; ++i) {
      modulus[i] = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
    if (modulus[0] == 0) continue;  // divisible by x
    if (is_irreducible_mod_p(modulus, p32)) return std::make_shared<const FieldSpec>(p32, k32, modulus);
  }
  throw NoIrreducibleFound("no monic irreducible of degree " + std::to_string(k) + " over F_" +
                           std::to_string(p));
}

FieldElem make_elem(const Field& field, std::uint64_t value) {
  if (!field) throw InvalidArgument("null field");
  if (value >= field->order()) throw InvalidArgument("element value out of range");
  return FieldElem{field, static_cast<Value>(value)};
}

namespace {
const Field& common(const FieldElem& a, const FieldElem& b) {
  if (!same_field(a.field, b.field)) throw SpecMismatch();
  return a.field;
}
}  // namespace

FieldElem add(const FieldElem& a, const FieldElem& b) {
  const auto& f = common(a, b);
  return {f, f->add(a.value, b.value)};
}
FieldElem sub(const FieldElem& a, const FieldElem& b) {
  const auto& f = common(a, b);
  return {f, f->sub(a.value, b.value)};
}
FieldElem mul(const FieldElem& a, const FieldElem& b) {
  const auto& f = common(a, b);
  return {f, f->mul(a.value, b.value)};
}
FieldElem neg(const FieldElem& a) { return {a.field, a.field->neg(a.value)}; }
FieldElem inv(const FieldElem& a) { return {a.field, a.field->inv(a.value)}; }
FieldElem pow(const FieldElem& a, std::uint64_t e) { return {a.field, a.field->pow(a.value, e)}; }

std::vector<FieldElem> enumerate_elements(const Field& field) {
  std::vector<FieldElem> out;
  out.reserve(field->order());
  for (Value v = 0; v < field->order(); ++v) out.push_back({field, v});
  return out;
}

bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (u64 small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (x % small == 0) return x == small;
  }
  u64 d = x - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // deterministic witness set for all 64-bit integers
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 y = pow_u64(a, d, x);
    if (y == 1 || y == x - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      y = static_cast<u64>(static_cast<u128>(y) * y % x);
      if (y == x - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime_below(std::uint64_t x) {
  if (x < 2) throw InvalidArgument("next_prime_below requires x >= 2");
  while (!is_prime(x)) --x;
  return x;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  for (u64 p = 2; p * p <= q; ++p) {
    if (q % p != 0) continue;
    u64 k = 0;
    while (q % p == 0) {
      q /= p;
      ++k;
    }
    if (q != 1) return std::nullopt;
    return std::make_pair(p, k);
  }
  return std::make_pair(q, std::uint64_t{1});
}

}  // namespace zforge
