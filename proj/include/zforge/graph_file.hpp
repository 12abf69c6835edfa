#pragma once

// On-disk graph format (JSON, format_version 1).
//
//   {
//     "format_version": 1,
//     "s": 2, "t": 2, "q": 5, "variant": "graph", "seed": 7, "d": 1,
//     "m": 12, "n": 25,
//     "polynomials": [[c_0, c_1, ...], ...],
//     "adjacency": ["1f0...", ...]
//   }
//
// Provenance keys (s, t, q, variant, seed, d) and "polynomials" are optional.
// Each polynomial is its dense coefficient list in the graded-lex basis of
// poly.hpp. Each adjacency row is ceil(n/4) lowercase hex digits; digit k
// holds columns 4k..4k+3 with column 4k in its least significant bit, and
// bits past column n-1 must be zero.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zforge/construction.hpp"
#include "zforge/errors.hpp"
#include "zforge/graph.hpp"

namespace zforge {

class ParseError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kGraphFileVersion = 1;

struct GraphFile {
  int format_version = kGraphFileVersion;
  std::optional<std::uint32_t> s;
  std::optional<std::uint32_t> t;
  std::optional<std::uint64_t> q;
  std::optional<std::string> variant;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> d;
  std::vector<std::vector<Value>> polynomials;
  BipartiteGraph adjacency;

  bool operator==(const GraphFile&) const = default;
};

GraphFile graph_file_from_construction(const Construction& c);

std::string to_json(const GraphFile& file);
// Throws ParseError on malformed input.
GraphFile graph_file_from_json(std::string_view text);

std::string encode_row_hex(const BipartiteGraph& g, std::size_t row);
void decode_row_hex(std::string_view hex, BipartiteGraph& g, std::size_t row);

// Construction parameters implied by the file's provenance, if complete.
std::optional<ConstructionParams> file_params(const GraphFile& file);

// Re-materialises the rows from the polynomials; true when they reproduce
// the adjacency exactly. Files without polynomials are trivially coherent.
bool polynomials_match_adjacency(const GraphFile& file);

}  // namespace zforge
