#pragma once

// K_{s,t}-free bipartite graphs from random low-degree polynomials.
//
// U has ell vertices, one polynomial f_i each; V is F_q^s. In the graph
// variant u_i is joined to {(x, f_i(x)) : x in F_q^{s-1}}, in the zero-set
// variant to {x in F_q^s : f_i(x) = 0}. Polynomials are drawn in sequence and
// a draw is kept only if no s rows, the new one included, share t or more
// neighbours.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zforge/gf.hpp"
#include "zforge/graph.hpp"
#include "zforge/poly.hpp"
#include "zforge/rng.hpp"

namespace zforge {

enum class Variant { Graph, ZeroSet };

std::string_view to_string(Variant v);
// Accepts "graph" and "zeroset".
Variant parse_variant(std::string_view name);

inline constexpr std::size_t kDefaultRetryBudget = 200;

struct ConstructionParams {
  std::uint32_t s = 0;
  std::uint32_t t = 0;
  std::uint64_t q = 0;
  std::uint32_t d = 0;
  std::uint64_t ell = 0;
  Variant variant = Variant::Graph;
  std::uint64_t n = 0;  // q^s
  // Exponent (d + 1) / (s (s - 1)) of the m_0 = n^{...} range, unreduced.
  std::uint64_t exponent_num = 0;
  std::uint64_t exponent_den = 0;

  // Variables of each f_i: s - 1 for the graph variant, s for zero sets.
  std::size_t nvars() const { return variant == Variant::Graph ? s - 1 : s; }

  bool operator==(const ConstructionParams&) const = default;
};

// Overrides apply to the zero-set variant only; its defaults are
// d = ceil(t^{1/s}) - 1 and ell = floor(q^{(d+1)/(s-1)} / (2d)).
struct VariantOverrides {
  std::optional<std::uint32_t> d;
  std::optional<std::uint64_t> ell;
};

// Graph variant: d = ceil(t^{1/(s-1)}) - 1, ell = floor(q^{(d+1)/(s-1)} / (2d)),
// both in exact integer arithmetic.
ConstructionParams params_derive(std::uint32_t s, std::uint32_t t, std::uint64_t q, Variant variant,
                                 const VariantOverrides& overrides = {});

// ell^{s-1} d^{s-1} q^{-(d+1)} < 1.
bool union_bound_ok(const ConstructionParams& params);

// Smallest r with r^k >= x.
std::uint64_t integer_root_ceil(std::uint64_t x, std::uint64_t k);

// Index of a point of F_q^s in V (lexicographic, last coordinate fastest).
std::uint64_t point_index(std::span<const Value> point, std::uint64_t q);

std::vector<std::vector<Value>> neighborhood_points(const MultiPoly& f, const ConstructionParams& params);

// The same neighbourhood as a bit row of width q^s.
std::vector<BipartiteGraph::Word> neighborhood_row(const MultiPoly& f, const ConstructionParams& params);

struct Construction {
  ConstructionParams params;
  std::vector<MultiPoly> polynomials;
  BipartiteGraph graph;
  std::uint64_t seed = 0;
  std::vector<std::size_t> retries_used;  // rejected draws per index

  std::size_t retries_total() const;
};

// Throws ConstructionFailed(index, retry_budget) if some index exhausts its
// draws. Prime q only.
Construction build(const ConstructionParams& params, std::uint64_t seed,
                   std::size_t retry_budget = kDefaultRetryBudget);
Construction build(std::uint32_t s, std::uint32_t t, std::uint64_t q, Variant variant, std::uint64_t seed,
                   std::size_t retry_budget = kDefaultRetryBudget);

// Rebuilds graph rows from polynomials (e.g. after loading a file).
BipartiteGraph materialize(const ConstructionParams& params, std::span<const MultiPoly> polys);

// |T_{i1,i2} ∩ ... ∩ T_{i1,ij}| where T_{a,b} is the zero set of f_a - f_b
// on F_q^{s-1}; indices[0] plays i1. Graph variant only.
std::uint64_t intersection_size_via_differences(std::span<const MultiPoly> polys,
                                                std::span<const std::size_t> indices,
                                                const ConstructionParams& params);

// Induced subgraph on a uniform m-subset of U (rows kept in ascending order)
// and all of V.
BipartiteGraph subsample(const Construction& c, std::size_t m, Rng& rng);

struct FieldForN {
  std::uint64_t q = 0;
  std::uint64_t n_used = 0;
};

// q = largest prime <= floor(n^{1/s}), n_used = q^s.
FieldForN field_for_n(std::uint64_t n, std::uint32_t s);

}  // namespace zforge
