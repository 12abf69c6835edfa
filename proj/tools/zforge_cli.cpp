// zforge: build and check K_{s,t}-free bipartite graphs.
//
// Exit codes: 0 success, 1 usage or malformed input, 2 construction or
// verification failure (including an exhausted oracle budget).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "zforge/construction.hpp"
#include "zforge/graph.hpp"
#include "zforge/graph_file.hpp"
#include "zforge/oracle.hpp"
#include "zforge/report.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace zforge;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json big_to_json(const BigInt& v) {
  if (v >= 0 && v <= BigInt(UINT64_MAX)) return static_cast<std::uint64_t>(v);
  return v.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << contents;
  if (!out) throw UsageError("failed writing " + path);
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

json rows_hex(const BipartiteGraph& g) {
  json rows = json::array();
  for (std::size_t i = 0; i < g.m(); ++i) rows.push_back(encode_row_hex(g, i));
  return rows;
}

// --- construct ---------------------------------------------------------------

struct ConstructOpts {
  std::uint32_t s = 0, t = 0;
  std::uint64_t q = 0;
  std::string variant = "graph";
  std::optional<std::uint32_t> d;
  std::optional<std::uint64_t> ell;
  std::optional<std::uint64_t> seed;
  std::size_t retries = kDefaultRetryBudget;
  std::string out;
};

int run_construct(const ConstructOpts& o) {
  if (!is_prime(o.q)) throw UsageError("--q must be prime, got " + std::to_string(o.q));
  const Variant variant = parse_variant(o.variant);
  VariantOverrides overrides;
  overrides.d = o.d;
  overrides.ell = o.ell;
  ConstructionParams params;
  try {
    params = params_derive(o.s, o.t, o.q, variant, overrides);
  } catch (const EllTooSmall& e) {
    std::cerr << "zforge: " << e.what() << "\n";
    return kExitFailure;
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  std::uint64_t seed = 0;
  if (o.seed) {
    seed = *o.seed;
  } else {
    seed = fresh_seed();
    std::cerr << "zforge: using generated seed " << seed << "\n";
  }
  Construction c;
  try {
    c = build(params, seed, o.retries);
  } catch (const ConstructionFailed& e) {
    std::cerr << "zforge: " << e.what() << "; rejections per accepted index:";
    for (auto r : e.retries_used()) std::cerr << ' ' << r;
    std::cerr << "\n";
    return kExitFailure;
  } catch (const BudgetExceeded& e) {
    std::cerr << "zforge: " << e.what() << "\n";
    return kExitFailure;
  }
  if (!kst_free(c.graph, params.s, params.t).free) {
    std::cerr << "zforge: construction is not K_{s,t}-free\n";
    return kExitFailure;
  }
  write_file(o.out, to_json(graph_file_from_construction(c)));
  json summary;
  summary["m"] = c.graph.m();
  summary["n"] = c.graph.n();
  summary["edges"] = c.graph.edge_count();
  summary["d"] = params.d;
  summary["ell"] = params.ell;
  summary["seed"] = seed;
  summary["retries_total"] = c.retries_total();
  summary["union_bound_ok"] = union_bound_ok(params);
  std::cout << summary.dump() << "\n";
  return kExitOk;
}

// --- verify ------------------------------------------------------------------

struct VerifyOpts {
  std::optional<std::uint32_t> s, t;
  std::string in;
  bool report = false;
};

int run_verify(const VerifyOpts& o) {
  GraphFile file;
  try {
    file = graph_file_from_json(read_file(o.in));
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
  const auto s = o.s ? o.s : file.s;
  const auto t = o.t ? o.t : file.t;
  if (!s || !t || *s < 1 || *t < 1) throw UsageError("--s and --t are required (or must be in the file)");

  json out;
  bool ok = true;
  if (!file.polynomials.empty()) {
    bool coherent = false;
    try {
      coherent = polynomials_match_adjacency(file);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    out["coherent"] = coherent;
    ok = ok && coherent;
  }
  const auto verdict = kst_free(file.adjacency, *s, *t);
  out["free"] = verdict.free;
  if (!verdict.free) {
    out["witness"] = {{"rows", verdict.rows}, {"cols", verdict.cols}};
    ok = false;
  }
  if (o.report) {
    const auto r = density_report(file.adjacency, *s, *t);
    json rep;
    rep["m"] = file.adjacency.m();
    rep["n"] = file.adjacency.n();
    rep["edges"] = r.edges;
    rep["kst_upper"] = r.kst_upper;
    rep["lower_target"] = r.lower_target;
    rep["ratio_lower"] = r.ratio_lower;
    rep["double_count_lhs"] = big_to_json(r.double_count_lhs);
    rep["double_count_rhs"] = big_to_json(r.double_count_rhs);
    rep["double_count_holds"] = r.double_count_lhs <= r.double_count_rhs;
    out["report"] = rep;
  }
  std::cout << out.dump() << "\n";
  return ok ? kExitOk : kExitFailure;
}

// --- bound / oracle / params -----------------------------------------------

int run_bound(std::uint64_t m, std::uint64_t n, std::uint64_t s, std::uint64_t t) {
  if (m < 1 || n < 1 || s < 1 || t < 1) throw UsageError("m, n, s, t must be >= 1");
  json out;
  out["m"] = m;
  out["n"] = n;
  out["s"] = s;
  out["t"] = t;
  out["upper"] = kst_upper_bound(m, n, s, t);
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int run_oracle(std::size_t m, std::size_t n, std::size_t s, std::size_t t, std::uint64_t budget) {
  if (m < 1 || n < 1 || s < 1 || t < 1) throw UsageError("m, n, s, t must be >= 1");
  if (n > kOracleMaxColumns) throw UsageError("oracle supports n <= 64");
  const auto r = z_exact(m, n, s, t, budget);
  json out;
  out["m"] = m;
  out["n"] = n;
  out["s"] = s;
  out["t"] = t;
  out["z"] = r.z;
  out["exact"] = r.exact;
  out["nodes"] = r.nodes_explored;
  out["witness"] = rows_hex(r.witness);
  std::cout << out.dump() << "\n";
  return r.exact ? kExitOk : kExitFailure;
}

int run_params(std::uint32_t s, std::uint32_t t, std::optional<std::uint64_t> q, std::optional<std::uint64_t> n,
               const std::string& variant_name) {
  if (q.has_value() == n.has_value()) throw UsageError("give exactly one of --q and --n");
  const Variant variant = parse_variant(variant_name);
  json out;
  try {
    std::uint64_t field_order = 0;
    if (n) {
      const auto f = field_for_n(*n, s);
      field_order = f.q;
      out["n_requested"] = *n;
    } else {
      field_order = *q;
    }
    const auto p = params_derive(s, t, field_order, variant);
    out["s"] = p.s;
    out["t"] = p.t;
    out["q"] = p.q;
    out["variant"] = std::string(to_string(p.variant));
    out["d"] = p.d;
    out["ell"] = p.ell;
    out["n"] = p.n;
    out["union_bound_ok"] = union_bound_ok(p);
  } catch (const EllTooSmall& e) {
    std::cerr << "zforge: " << e.what() << "\n";
    return kExitFailure;
  } catch (const TooSmall& e) {
    std::cerr << "zforge: " << e.what() << "\n";
    return kExitFailure;
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int run_report(const std::string& grid_path, const std::string& out_path, std::size_t retries) {
  std::vector<GridEntry> grid;
  try {
    grid = parse_grid(read_file(grid_path));
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
  std::vector<ReportRow> rows;
  rows.reserve(grid.size());
  for (const auto& entry : grid) rows.push_back(run_grid_entry(entry, retries));
  write_file(out_path, report_csv(rows));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct and certify K_{s,t}-free bipartite graphs"};
  app.require_subcommand(1);

  ConstructOpts copts;
  auto* construct = app.add_subcommand("construct", "Build a construction and write it as a graph file");
  construct->add_option("--s", copts.s)->required();
  construct->add_option("--t", copts.t)->required();
  construct->add_option("--q", copts.q, "prime field order")->required();
  construct->add_option("--variant", copts.variant)->check(CLI::IsMember({"graph", "zeroset"}));
  construct->add_option("--d", copts.d, "degree cap (zeroset only)");
  construct->add_option("--ell", copts.ell, "number of U-vertices (zeroset only)");
  construct->add_option("--seed", copts.seed);
  construct->add_option("--retries", copts.retries, "draws allowed per index")->check(CLI::PositiveNumber);
  construct->add_option("--out", copts.out)->required();

  VerifyOpts vopts;
  auto* verify = app.add_subcommand("verify", "Check a graph file for K_{s,t}");
  verify->add_option("--s", vopts.s);
  verify->add_option("--t", vopts.t);
  verify->add_option("--in", vopts.in)->required();
  verify->add_flag("--report", vopts.report, "include the density report");

  std::uint64_t bm = 0, bn = 0, bs = 0, bt = 0;
  auto* bound = app.add_subcommand("bound", "Double-counting upper bound on z(m,n;s,t)");
  bound->add_option("--m", bm)->required();
  bound->add_option("--n", bn)->required();
  bound->add_option("--s", bs)->required();
  bound->add_option("--t", bt)->required();

  std::size_t om = 0, on = 0, os = 0, ot = 0;
  std::uint64_t obudget = kDefaultNodeBudget;
  auto* oracle = app.add_subcommand("oracle", "Exact z(m,n;s,t) by branch and bound");
  oracle->add_option("--m", om)->required();
  oracle->add_option("--n", on)->required();
  oracle->add_option("--s", os)->required();
  oracle->add_option("--t", ot)->required();
  oracle->add_option("--budget", obudget, "node budget");

  std::uint32_t ps = 0, pt = 0;
  std::optional<std::uint64_t> pq, pn;
  std::string pvariant = "graph";
  auto* params = app.add_subcommand("params", "Derived construction parameters");
  params->add_option("--s", ps)->required();
  params->add_option("--t", pt)->required();
  params->add_option("--q", pq);
  params->add_option("--n", pn, "target |V|; q is chosen as the largest prime <= n^{1/s}");
  params->add_option("--variant", pvariant)->check(CLI::IsMember({"graph", "zeroset"}));

  std::string grid_path, report_out;
  std::size_t report_retries = kDefaultRetryBudget;
  auto* report = app.add_subcommand("report", "Run a grid of constructions and write a CSV report");
  report->add_option("--grid", grid_path)->required();
  report->add_option("--out", report_out)->required();
  report->add_option("--retries", report_retries)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*construct) return run_construct(copts);
    if (*verify) return run_verify(vopts);
    if (*bound) return run_bound(bm, bn, bs, bt);
    if (*oracle) return run_oracle(om, on, os, ot, obudget);
    if (*params) return run_params(ps, pt, pq, pn, pvariant);
    if (*report) return run_report(grid_path, report_out, report_retries);
  } catch (const UsageError& e) {
    std::cerr << "zforge: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "zforge: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "zforge: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
