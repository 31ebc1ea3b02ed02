#ifndef FSDISC_CLI_HPP
#define FSDISC_CLI_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsdisc/corpus.hpp"
#include "fsdisc/dual.hpp"
#include "fsdisc/errors.hpp"
#include "fsdisc/grid.hpp"
#include "fsdisc/norms.hpp"
#include "fsdisc/report.hpp"
#include "fsdisc/search.hpp"

namespace fsdisc::cli {

enum class Format { csv, json };

inline Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

/// One norm kind with one parameter tuple.
struct NormRequest {
  NormKind kind = NormKind::bloch;
  std::map<std::string, double> params;
};

struct RunConfig {
  CorpusConfig corpus = CorpusConfig::defaults();
  GridConfig grid;
  Theorem theorem = Theorem::S2_bergman;
  double p = 3.0;
  double alpha = 1.8;
  double s = 1.0;
  double aperture = 2.0;
  std::vector<NormRequest> norms{{NormKind::bloch, {}}, {NormKind::bergman_p, {{"p", 2.0}}},
                                 {NormKind::hardy_p, {{"p", 2.0}}}};
  /// equivalence runs the search only when set; search always runs it.
  std::optional<SearchConfig> search;
  std::vector<MoebiusPoint> a_grid = default_a_grid();
  bool refine = false;
  std::string output;
  std::optional<Format> format;
  std::optional<std::uint64_t> seed;
  std::size_t grid_scale = 1;

  [[nodiscard]] DualParams dual_params() const { return DualParams::make(theorem, p, alpha, s, aperture); }
};

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::string> output;
  std::optional<Format> format;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid_scale;
};

namespace detail {

inline nlohmann::json read_json_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string(what) + " not found: " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string(what) + " " + path.string() + " is not valid JSON: " + e.what());
  }
}

// {"kind": k, "p": x | [x...], ...}: one request per element of the cartesian product.
inline std::vector<NormRequest> expand_norm_request(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("norms: each entry needs a 'kind'");
  const NormKind kind = norm_kind_from_string(j.at("kind").get<std::string>());
  std::vector<NormRequest> out{{kind, {}}};
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") continue;
    std::vector<double> xs;
    if (value.is_number()) {
      xs.push_back(value.get<double>());
    } else if (value.is_array() && !value.empty()) {
      for (const auto& x : value) {
        if (!x.is_number()) throw ConfigError("norms: parameter '" + key + "' must be numeric");
        xs.push_back(x.get<double>());
      }
    } else {
      throw ConfigError("norms: parameter '" + key + "' must be a number or a non-empty list");
    }
    std::vector<NormRequest> next;
    for (const NormRequest& r : out)
      for (double x : xs) {
        NormRequest c = r;
        c.params[key] = x;
        next.push_back(std::move(c));
      }
    out = std::move(next);
  }
  for (const NormRequest& r : out)
    for (const std::string& key : required_params(kind))
      if (key != "a_grid" && !r.params.contains(key))
        throw ConfigError(std::string("norms: ") + to_string(kind) + " needs parameter '" + key + "'");
  return out;
}

inline std::vector<MoebiusPoint> a_grid_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "default") return default_a_grid();
    if (s == "doubled") return doubled_a_grid();
    throw ConfigError("a_grid: expected \"default\", \"doubled\" or {\"radii\", \"phases\"}");
  }
  if (!j.is_object()) throw ConfigError("a_grid: expected \"default\", \"doubled\" or {\"radii\", \"phases\"}");
  try {
    return make_a_grid(j.at("radii").get<std::vector<double>>(), j.value("phases", std::size_t{8}));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("a_grid: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("a_grid: ") + e.what());
  }
}

}  // namespace detail

/// Builds a RunConfig from JSON. Relative corpus paths resolve against `base_dir`.
///   {"corpus": path | {...}, "grid": {...}, "theorem": "S2", "p", "alpha", "s", "aperture",
///    "norms": [{"kind": ..., params}], "search": {...} | false, "a_grid": ..., "refine": bool,
///    "output": path, "format": "csv" | "json", "seed": n}
inline RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  RunConfig c;
  try {
    if (j.contains("corpus")) {
      const auto& cj = j.at("corpus");
      if (cj.is_string()) {
        std::filesystem::path path = cj.get<std::string>();
        if (path.is_relative()) path = base_dir / path;
        c.corpus = corpus_config_from_json(detail::read_json_file(path, "corpus file"));
      } else {
        c.corpus = corpus_config_from_json(cj);
      }
    }
    if (j.contains("grid")) c.grid = grid_config_from_json(j.at("grid"));
    if (j.contains("theorem")) c.theorem = theorem_from_string(j.at("theorem").get<std::string>());
    c.p = j.value("p", c.p);
    c.alpha = j.value("alpha", c.alpha);
    c.s = j.value("s", c.s);
    c.aperture = j.value("aperture", c.aperture);
    if (j.contains("norms")) {
      c.norms.clear();
      for (const auto& n : j.at("norms"))
        for (NormRequest& r : detail::expand_norm_request(n)) c.norms.push_back(std::move(r));
    }
    if (j.contains("search")) {
      const auto& sj = j.at("search");
      if (sj.is_boolean()) {
        if (sj.get<bool>()) c.search = SearchConfig{};
      } else {
        c.search = search_config_from_json(sj);
      }
    }
    if (j.contains("a_grid")) c.a_grid = detail::a_grid_from_json(j.at("a_grid"));
    c.refine = j.value("refine", c.refine);
    c.output = j.value("output", c.output);
    if (j.contains("format")) c.format = format_from_string(j.at("format").get<std::string>());
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("grid_scale")) c.grid_scale = j.at("grid_scale").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_json(detail::read_json_file(path, "config file"), path.parent_path());
}

/// Applies command-line overrides; the seed reaches every random choice
/// (corpus generation and search restarts).
inline void apply(RunConfig& c, const Overrides& o) {
  if (o.output) c.output = *o.output;
  if (o.format) c.format = *o.format;
  if (o.seed) c.seed = *o.seed;
  if (o.grid_scale) c.grid_scale = *o.grid_scale;
  if (c.grid_scale < 1) throw ConfigError("--grid-scale must be >= 1");
  if (c.seed) {
    c.corpus.seed = *c.seed;
    if (c.search) c.search->seed = *c.seed;
  }
  if (!c.format) {
    const bool json = std::filesystem::path(c.output).extension() == ".json";
    c.format = json ? Format::json : Format::csv;
  }
}

/// A cell is text, an integer, or a double (NaN prints as empty / null).
using Cell = std::variant<std::string, long long, double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
  bool has_summary = false;
};

namespace detail {

inline std::string format_number(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "" : (x > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_field(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

inline nlohmann::json json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json();
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

inline void write_csv_line(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << fields[i];
  os << '\n';
}

}  // namespace detail

inline void write_csv(std::ostream& os, const Table& t) {
  detail::write_csv_line(os, t.columns);
  for (const auto& row : t.rows) {
    std::vector<std::string> f;
    for (const Cell& c : row) f.push_back(detail::csv_field(c));
    detail::write_csv_line(os, f);
  }
}

inline void write_summary_csv(std::ostream& os, const Table& t) {
  detail::write_csv_line(os, {"key", "value"});
  for (const auto& [k, v] : t.summary) detail::write_csv_line(os, {k, detail::csv_field(v)});
}

inline nlohmann::json table_json(const Table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (std::size_t i = 0; i < t.columns.size(); ++i) r[t.columns[i]] = detail::json_cell(row[i]);
    rows.push_back(std::move(r));
  }
  nlohmann::json j = {{"columns", t.columns}, {"rows", rows}};
  if (t.has_summary) {
    nlohmann::json s = nlohmann::json::object();
    for (const auto& [k, v] : t.summary) s[k] = detail::json_cell(v);
    j["summary"] = std::move(s);
  }
  return j;
}

/// Companion file of a CSV report: out.csv -> out.summary.csv.
inline std::filesystem::path summary_path(const std::filesystem::path& output) {
  std::filesystem::path p = output;
  p.replace_extension(".summary.csv");
  return p;
}

/// Writes the table to `output` (stdout when empty).
inline void write_table(const Table& t, const std::string& output, Format format) {
  std::ostringstream body;
  if (format == Format::json) {
    body << table_json(t).dump(2) << '\n';
  } else {
    write_csv(body, t);
  }
  if (output.empty()) {
    std::cout << body.str();
    if (format == Format::csv && t.has_summary) {
      std::cout << '\n';
      write_summary_csv(std::cout, t);
    }
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + output);
  out << body.str();
  if (format == Format::csv && t.has_summary) {
    std::ofstream sum(summary_path(output), std::ios::binary);
    if (!sum) throw ConfigError("cannot open summary file " + summary_path(output).string());
    write_summary_csv(sum, t);
  }
}

namespace detail {

inline std::string params_label(const std::map<std::string, double>& params) {
  std::string s;
  for (const auto& [k, v] : params) s += (s.empty() ? "" : ";") + k + "=" + format_number(v);
  return s;
}

inline double param(const NormRequest& r, const char* key) { return r.params.at(key); }

// Rules are built on first use; bidisc rules are costly.
class NormRules {
 public:
  NormRules(GridConfig grid, std::vector<MoebiusPoint> a_grid) : grid_(grid), a_grid_(std::move(a_grid)) {}

  const DiscRule& disc() {
    if (!disc_) disc_.emplace(grid_.disc_rule());
    return *disc_;
  }
  const BidiscRule& bidisc() {
    if (!bidisc_) bidisc_.emplace(grid_.bidisc_rule());
    return *bidisc_;
  }
  [[nodiscard]] const GridConfig& grid() const { return grid_; }
  [[nodiscard]] const std::vector<MoebiusPoint>& a_grid() const { return a_grid_; }

 private:
  GridConfig grid_;
  std::vector<MoebiusPoint> a_grid_;
  std::optional<DiscRule> disc_;
  std::optional<BidiscRule> bidisc_;
};

inline NormValue evaluate_norm(const TaylorFunction& f, const NormRequest& r, NormRules& rules) {
  switch (r.kind) {
    case NormKind::hardy_p: return hardy_norm_p(f, param(r, "p"), rules.grid().circle);
    case NormKind::bergman_p: return bergman_norm_p(f, param(r, "p"), rules.disc());
    case NormKind::bloch: return bloch_norm(f, rules.disc());
    case NormKind::bp: return bp_norm_p(f, param(r, "p"), rules.disc());
    case NormKind::lusin:
      return lusin_functional(f, param(r, "p"), param(r, "t"), param(r, "aperture"), rules.disc(),
                              rules.grid().circle);
    case NormKind::kwon_ast: return kwon_ast_rhs(f, param(r, "p"), param(r, "beta"), rules.disc());
    case NormKind::kwon_bloch:
      return kwon_bloch_functional(f, param(r, "p"), param(r, "beta"), rules.a_grid(), rules.bidisc());
    case NormKind::kwon_bp: return kwon_bp_functional(f, param(r, "p"), param(r, "beta"), rules.bidisc());
  }
  throw ConfigError("unknown norm kind");
}

inline double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace detail

/// Outcome of a command: the report and whether any row failed to evaluate.
struct CommandResult {
  Table table;
  bool evaluation_error = false;
};

/// One row per (corpus entry, norm request).
inline CommandResult run_norms(const RunConfig& c) {
  CommandResult out;
  out.table.columns = {"label", "kind", "params", "value", "grid", "error"};
  const std::vector<CorpusEntry> corpus = make_corpus(c.corpus);
  detail::NormRules rules(c.grid.scaled(c.grid_scale), c.a_grid);
  for (const CorpusEntry& e : corpus) {
    for (const NormRequest& r : c.norms) {
      std::vector<Cell> row{e.label, std::string(to_string(r.kind)), detail::params_label(r.params)};
      try {
        const NormValue v = detail::evaluate_norm(e.function, r, rules);
        row.insert(row.end(), {v.value, v.grid, std::string()});
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& ex) {
        out.evaluation_error = true;
        row.insert(row.end(), {detail::nan(), std::string(), std::string(ex.what())});
      }
      out.table.rows.push_back(std::move(row));
    }
  }
  return out;
}

namespace detail {

inline ReportOptions report_options(const RunConfig& c, bool search, bool refine) {
  ReportOptions o;
  o.grid = c.grid.scaled(c.grid_scale);
  o.a_grid = c.a_grid;
  o.search = search;
  if (c.search) o.search_config = *c.search;
  if (c.seed) o.search_config.seed = *c.seed;
  o.refine = refine;
  return o;
}

}  // namespace detail

/// Equivalence rows for the LHS-normalized corpus and the band summary.
inline CommandResult run_equivalence(const RunConfig& c) {
  const DualParams params = c.dual_params();
  CommandResult out;
  out.table.columns = {"label",        "theorem",     "p",          "alpha",          "lhs_power_value",
                       "test_dual",    "searched_dual", "holder_floor", "ratio_test", "ratio_searched",
                       "refine_delta", "error"};
  const ReportOptions options = detail::report_options(c, c.search.has_value(), c.refine);
  std::vector<EquivalenceRow> rows;
  for (const CorpusEntry& e : make_corpus(c.corpus)) {
    EquivalenceRow r = equivalence_row(e, params, options);
    if (!r.error.empty()) out.evaluation_error = true;
    out.table.rows.push_back({r.label, std::string(to_string(r.theorem)), r.p, r.alpha, r.lhs_power_value,
                              r.test_dual, r.searched_dual, r.holder_floor, r.ratio_test, r.ratio_searched,
                              r.refine_delta, r.message()});
    rows.push_back(std::move(r));
  }
  const ReportSummary s = summarize(rows);
  out.table.has_summary = true;
  out.table.summary = {{"rows", static_cast<long long>(s.rows)},
                       {"errors", static_cast<long long>(s.errors)},
                       {"min_ratio", s.min_ratio},
                       {"max_ratio", s.max_ratio},
                       {"band", s.band},
                       {"min_ratio_searched", s.min_ratio_searched},
                       {"max_ratio_searched", s.max_ratio_searched},
                       {"max_refine_delta", s.max_refine_delta},
                       {"max_a_grid_delta", s.max_a_grid_delta},
                       {"normalization", homogeneity_note(params.theorem)}};
  return out;
}

/// Relative slack of the floor <= searched <= test ordering checks.
inline constexpr double kOrderingTolerance = 1e-10;

/// "ok", "n/a" or a description of the violated ordering.
inline std::string ordering_check(double floor, double searched, double test) {
  if (!std::isfinite(searched)) return "n/a";
  std::string bad;
  if (std::isfinite(test) && searched > test * (1.0 + kOrderingTolerance)) bad = "searched > test";
  if (std::isfinite(floor) && floor > searched * (1.0 + kOrderingTolerance))
    bad += std::string(bad.empty() ? "" : "; ") + "floor > searched";
  return bad.empty() ? "ok" : "violated: " + bad;
}

/// infimum_search per entry, with the floor <= searched <= test ordering.
inline CommandResult run_search(const RunConfig& c) {
  const DualParams params = c.dual_params();
  CommandResult out;
  out.table.columns = {"label",      "theorem",     "p",     "alpha",    "test_dual",
                       "searched_dual", "holder_floor", "evaluations", "feasible_candidates", "u",
                       "v",          "s",           "softening", "scale", "ordering",
                       "error"};
  const ReportOptions options = detail::report_options(c, true, false);
  long long violations = 0, failures = 0;
  for (const CorpusEntry& e : make_corpus(c.corpus)) {
    const EquivalenceRow r = equivalence_row(e, params, options);
    if (!r.error.empty()) out.evaluation_error = true;
    if (!r.message().empty()) ++failures;
    const std::string ordering = ordering_check(r.holder_floor, r.searched_dual, r.test_dual);
    if (ordering.rfind("violated", 0) == 0) ++violations;
    const double nan = detail::nan();
    const WeightSpec* w = r.searched ? &r.searched->weight : nullptr;
    out.table.rows.push_back({r.label, std::string(to_string(r.theorem)), r.p, r.alpha, r.test_dual,
                              r.searched_dual, r.holder_floor, static_cast<long long>(r.search_evaluations),
                              static_cast<long long>(r.search_feasible), w ? w->exponents.u : nan,
                              w ? w->exponents.v : nan, w ? w->exponents.s : nan, w ? w->softening : nan,
                              w ? w->scale : nan, ordering, r.message()});
  }
  out.table.has_summary = true;
  out.table.summary = {{"rows", static_cast<long long>(out.table.rows.size())},
                       {"failures", failures},
                       {"ordering_violations", violations}};
  return out;
}

/// Exit codes: 0 success, 2 configuration error, 3 evaluation error (the
/// report is still written, failing rows carry the message).
inline int run_command(const std::string& command, RunConfig config, const Overrides& overrides,
                       std::ostream& err = std::cerr) {
  try {
    apply(config, overrides);
    CommandResult r;
    if (command == "norms") {
      r = run_norms(config);
    } else if (command == "equivalence") {
      r = run_equivalence(config);
    } else if (command == "search") {
      r = run_search(config);
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
    write_table(r.table, config.output, *config.format);
    if (r.evaluation_error) {
      err << "fsdisc: evaluation errors in " << command << " report (see error column)\n";
      return 3;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "fsdisc: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "fsdisc: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace fsdisc::cli

#endif  // FSDISC_CLI_HPP
