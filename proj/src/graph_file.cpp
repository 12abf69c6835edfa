#include "zforge/graph_file.hpp"

#include <json.hpp>
#include <sstream>

namespace zforge {
namespace {

using json = nlohmann::json;

constexpr char kHexDigits[] = "0123456789abcdef";

template <typename T>
std::optional<T> optional_field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_unsigned()) throw ParseError(std::string("field '") + key + "' must be a non-negative integer");
  return it->get<T>();
}

template <typename T>
T required_field(const json& j, const char* key) {
  auto v = optional_field<T>(j, key);
  if (!v) throw ParseError(std::string("missing field '") + key + "'");
  return *v;
}

}  // namespace

std::string encode_row_hex(const BipartiteGraph& g, std::size_t row) {
  const std::size_t digits = (g.n() + 3) / 4;
  std::string out(digits, '0');
  for (std::size_t k = 0; k < digits; ++k) {
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t col = 4 * k + b;
      if (col < g.n() && g.get(row, col)) nibble |= 1U << b;
    }
    out[k] = kHexDigits[nibble];
  }
  return out;
}

void decode_row_hex(std::string_view hex, BipartiteGraph& g, std::size_t row) {
  const std::size_t digits = (g.n() + 3) / 4;
  if (hex.size() != digits) {
    throw ParseError("adjacency row " + std::to_string(row) + " has " + std::to_string(hex.size()) +
                     " digits, expected " + std::to_string(digits));
  }
  for (std::size_t k = 0; k < digits; ++k) {
    const char ch = hex[k];
    unsigned nibble = 0;
    if (ch >= '0' && ch <= '9') {
      nibble = static_cast<unsigned>(ch - '0');
    } else if (ch >= 'a' && ch <= 'f') {
      nibble = static_cast<unsigned>(ch - 'a' + 10);
    } else {
      throw ParseError("adjacency rows must be lowercase hex");
    }
    for (std::size_t b = 0; b < 4; ++b) {
      if (!((nibble >> b) & 1U)) continue;
      const std::size_t col = 4 * k + b;
      if (col >= g.n()) throw ParseError("adjacency row " + std::to_string(row) + " sets bits past column n-1");
      g.set(row, col);
    }
  }
}

GraphFile graph_file_from_construction(const Construction& c) {
  GraphFile f;
  f.s = c.params.s;
  f.t = c.params.t;
  f.q = c.params.q;
  f.variant = std::string(to_string(c.params.variant));
  f.seed = c.seed;
  f.d = c.params.d;
  for (const auto& p : c.polynomials) f.polynomials.push_back(p.dense());
  f.adjacency = c.graph;
  f.adjacency.set_provenance(std::nullopt);
  return f;
}

std::string to_json(const GraphFile& file) {
  // Hand-laid so that every row sits on its own line.
  std::ostringstream out;
  out << "{\n";
  out << "  \"format_version\": " << file.format_version << ",\n";
  if (file.s) out << "  \"s\": " << *file.s << ",\n";
  if (file.t) out << "  \"t\": " << *file.t << ",\n";
  if (file.q) out << "  \"q\": " << *file.q << ",\n";
  if (file.variant) out << "  \"variant\": " << json(*file.variant).dump() << ",\n";
  if (file.seed) out << "  \"seed\": " << *file.seed << ",\n";
  if (file.d) out << "  \"d\": " << *file.d << ",\n";
  out << "  \"m\": " << file.adjacency.m() << ",\n";
  out << "  \"n\": " << file.adjacency.n() << ",\n";
  if (!file.polynomials.empty()) {
    out << "  \"polynomials\": [\n";
    for (std::size_t i = 0; i < file.polynomials.size(); ++i) {
      out << "    " << json(file.polynomials[i]).dump() << (i + 1 < file.polynomials.size() ? ",\n" : "\n");
    }
    out << "  ],\n";
  }
  out << "  \"adjacency\": [";
  const std::size_t m = file.adjacency.m();
  if (m == 0) {
    out << "]\n";
  } else {
    out << "\n";
    for (std::size_t i = 0; i < m; ++i) {
      out << "    \"" << encode_row_hex(file.adjacency, i) << "\"" << (i + 1 < m ? ",\n" : "\n");
    }
    out << "  ]\n";
  }
  out << "}\n";
  return out.str();
}

GraphFile graph_file_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("graph file must be a JSON object");

  GraphFile f;
  try {
    f.format_version = static_cast<int>(required_field<std::uint64_t>(j, "format_version"));
    if (f.format_version != kGraphFileVersion) {
      throw ParseError("unsupported format_version " + std::to_string(f.format_version));
    }
    f.s = optional_field<std::uint32_t>(j, "s");
    f.t = optional_field<std::uint32_t>(j, "t");
    f.q = optional_field<std::uint64_t>(j, "q");
    f.seed = optional_field<std::uint64_t>(j, "seed");
    f.d = optional_field<std::uint32_t>(j, "d");
    if (const auto it = j.find("variant"); it != j.end() && !it->is_null()) {
      if (!it->is_string()) throw ParseError("field 'variant' must be a string");
      f.variant = it->get<std::string>();
      parse_variant(*f.variant);
    }
    const auto m = required_field<std::uint64_t>(j, "m");
    const auto n = required_field<std::uint64_t>(j, "n");
    const auto adj = j.find("adjacency");
    if (adj == j.end() || !adj->is_array()) throw ParseError("missing array 'adjacency'");
    if (adj->size() != m) throw ParseError("adjacency has " + std::to_string(adj->size()) + " rows, m = " + std::to_string(m));
    f.adjacency = BipartiteGraph(m, n);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& row = (*adj)[i];
      if (!row.is_string()) throw ParseError("adjacency rows must be strings");
      decode_row_hex(row.get<std::string>(), f.adjacency, i);
    }
    if (const auto it = j.find("polynomials"); it != j.end() && !it->is_null()) {
      if (!it->is_array()) throw ParseError("'polynomials' must be an array");
      for (const auto& poly : *it) {
        if (!poly.is_array()) throw ParseError("each polynomial must be an array of coefficients");
        std::vector<Value> coeffs;
        for (const auto& c : poly) {
          if (!c.is_number_unsigned()) throw ParseError("coefficients must be non-negative integers");
          coeffs.push_back(c.get<Value>());
        }
        f.polynomials.push_back(std::move(coeffs));
      }
      if (!f.polynomials.empty() && f.polynomials.size() != m) {
        throw ParseError("number of polynomials differs from m");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed graph file: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return f;
}

std::optional<ConstructionParams> file_params(const GraphFile& file) {
  if (!file.s || !file.t || !file.q || !file.variant) return std::nullopt;
  const Variant variant = parse_variant(*file.variant);
  ConstructionParams p;
  if (variant == Variant::Graph) {
    p = params_derive(*file.s, *file.t, *file.q, variant);
    if (file.d && *file.d != p.d) throw ParseError("d does not match the graph-variant formula");
  } else {
    VariantOverrides o;
    o.d = file.d;
    o.ell = file.adjacency.m() > 0 ? std::optional<std::uint64_t>(file.adjacency.m()) : std::nullopt;
    p = params_derive(*file.s, *file.t, *file.q, variant, o);
  }
  p.ell = file.adjacency.m();
  return p;
}

bool polynomials_match_adjacency(const GraphFile& file) {
  if (file.polynomials.empty()) return true;
  const auto params = file_params(file);
  if (!params) throw ParseError("polynomials present without s, t, q and variant");
  if (params->n != file.adjacency.n()) return false;
  const Field field = field_make(params->q, 1);
  std::vector<MultiPoly> polys;
  for (const auto& coeffs : file.polynomials) {
    for (Value c : coeffs) {
      if (c >= params->q) throw ParseError("coefficient out of range for q");
    }
    polys.push_back(MultiPoly::from_dense(field, params->nvars(), params->d, coeffs));
  }
  return materialize(*params, polys) == file.adjacency;
}

}  // namespace zforge
