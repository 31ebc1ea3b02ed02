#ifndef FSDISC_REPORT_HPP
#define FSDISC_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsdisc/corpus.hpp"
#include "fsdisc/dual.hpp"
#include "fsdisc/grid.hpp"
#include "fsdisc/norms.hpp"
#include "fsdisc/search.hpp"

namespace fsdisc {

struct ReportOptions {
  GridConfig grid;
  std::vector<MoebiusPoint> a_grid = default_a_grid();
  bool search = true;
  SearchConfig search_config;
  /// Recompute at twice the grid counts (and, for S3, on the doubled a grid).
  bool refine = false;
};

/// One corpus entry. Values are for the entry rescaled so its left-hand side
/// equals 1; `lhs_power_value` is the left-hand side of the entry as given.
/// NaN marks a value that does not apply or was not computed.
struct EquivalenceRow {
  std::string label;
  Theorem theorem = Theorem::S2_bergman;
  double p = 0.0;
  double alpha = 0.0;
  double lhs_power_value = nan();
  double test_dual = nan();
  double searched_dual = nan();
  double holder_floor = nan();
  double ratio_test = nan();
  double ratio_searched = nan();
  double refine_delta = nan();
  double a_grid_delta = nan();
  std::optional<DualEvaluation> searched;
  std::size_t search_evaluations = 0;
  std::size_t search_feasible = 0;
  /// The search found no feasible weight (the row still completed).
  std::string search_failure;
  /// Evaluation error; the other values may be partial.
  std::string error;

  /// The error column of a report: the evaluation error, else the search failure.
  [[nodiscard]] const std::string& message() const { return error.empty() ? search_failure : error; }

  static double nan() { return std::numeric_limits<double>::quiet_NaN(); }
};

struct ReportSummary {
  std::size_t rows = 0;
  std::size_t errors = 0;
  double min_ratio = EquivalenceRow::nan();
  double max_ratio = EquivalenceRow::nan();
  double band = EquivalenceRow::nan();
  double min_ratio_searched = EquivalenceRow::nan();
  double max_ratio_searched = EquivalenceRow::nan();
  double max_refine_delta = EquivalenceRow::nan();
  double max_a_grid_delta = EquivalenceRow::nan();
};

struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;
  ReportSummary summary;
};

/// Left-hand side of the theorem, to the p-th power: int |F|^p dm (S2),
/// ||F||_B^p (S3), ||F||_{B_p}^p (S4), int_T (int_Gamma |f'|^2 dm)^{p/2} (S1).
inline double lhs_power_value(const TaylorFunction& F, const DualParams& params, const GridConfig& grid) {
  const DiscRule rule = grid.disc_rule();
  switch (params.theorem) {
    case Theorem::S2_bergman: return bergman_norm_p(F, params.p, rule).value;
    case Theorem::S3_bloch: return std::pow(bloch_norm(F, rule).value, params.p);
    case Theorem::S4_bp: return bp_norm_p(F, params.p, rule).value;
    case Theorem::S1_hardy: {
      const TaylorFunction dF = derivative(F);
      std::vector<double> density(rule.size());
      for (std::size_t i = 0; i < rule.size(); ++i) density[i] = std::norm(dF.evaluate_unchecked(rule.node(i).z));
      return cone_functional(rule, density, params.p, params.aperture, grid.circle);
    }
  }
  return EquivalenceRow::nan();
}

/// The report-layer power of a dual value: 1/alpha (S2-S4), p/2 (S1).
inline double dual_power(double dual_value, const DualParams& params) {
  return std::pow(dual_value, params.theorem == Theorem::S1_hardy ? 0.5 * params.p : 1.0 / params.alpha);
}

namespace detail {

// Normalized reference weight: the explicit test weight, or omega = 1 for S1.
inline WeightSpec reference_weight(const TaylorFunction& F, const DualParams& params) {
  switch (params.theorem) {
    case Theorem::S1_hardy: return WeightSpec::make(Arity::one_point, {0.0, 0.0, 0.0});
    case Theorem::S2_bergman: return test_weight_S2(F, params);
    default: return test_weight_S3(F, params);
  }
}

struct Normalized {
  TaylorFunction F;
  double lhs_raw;
  double lhs;
};

inline Normalized normalize_entry(const TaylorFunction& F, const DualParams& params, const GridConfig& grid) {
  const double lhs_raw = lhs_power_value(F, params, grid);
  if (!(lhs_raw > 0.0) || !std::isfinite(lhs_raw))
    throw NormalizationError("equivalence_report: left-hand side is zero or non-finite");
  const TaylorFunction Fn = scale(F, std::pow(lhs_raw, -1.0 / params.p));
  return {Fn, lhs_raw, lhs_power_value(Fn, params, grid)};
}

inline double reference_value(const TaylorFunction& F, const DualParams& params, const GridConfig& grid,
                              const std::vector<MoebiusPoint>& a_grid) {
  const Normalized n = normalize_entry(F, params, grid);
  const DualProblem problem(n.F, params, grid.dual_rules(params, a_grid, n.F.degree()));
  return dual_power(problem.normalize(reference_weight(n.F, params)).dual_value, params) / n.lhs;
}

inline double relative_change(double a, double b) { return std::abs(a - b) / std::abs(a); }

}  // namespace detail

/// One row per corpus entry; an entry that fails records its error and the
/// batch continues.
inline EquivalenceRow equivalence_row(const CorpusEntry& entry, const DualParams& params,
                                      const ReportOptions& options) {
  EquivalenceRow row;
  row.label = entry.label;
  row.theorem = params.theorem;
  row.p = params.p;
  row.alpha = params.alpha;
  try {
    const detail::Normalized n = detail::normalize_entry(entry.function, params, options.grid);
    row.lhs_power_value = n.lhs_raw;
    const DualProblem problem(n.F, params, options.grid.dual_rules(params, options.a_grid, n.F.degree()),
                              options.search);
    if (params.theorem != Theorem::S1_hardy) {
      row.test_dual = dual_power(problem.normalize(detail::reference_weight(n.F, params)).dual_value, params);
      row.ratio_test = row.test_dual / n.lhs;
      row.holder_floor = problem.holder_floor();
    }
    if (options.search) {
      const SearchResult s = infimum_search(problem, options.search_config);
      row.search_evaluations = s.evaluations;
      row.search_feasible = s.feasible_candidates;
      if (s.best) {
        row.searched = s.best;
        row.searched_dual = dual_power(s.best->dual_value, params);
        row.ratio_searched = row.searched_dual / n.lhs;
      } else {
        row.search_failure = s.failure;
      }
    }
    if (options.refine) {
      const double base = std::isfinite(row.ratio_test)
                              ? row.ratio_test
                              : detail::reference_value(entry.function, params, options.grid, options.a_grid);
      row.refine_delta =
          detail::relative_change(base, detail::reference_value(entry.function, params, options.grid.scaled(2),
                                                                options.a_grid));
      if (params.theorem == Theorem::S3_bloch)
        row.a_grid_delta = detail::relative_change(
            base, detail::reference_value(entry.function, params, options.grid, doubled_a_grid()));
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

inline ReportSummary summarize(const std::vector<EquivalenceRow>& rows) {
  ReportSummary s;
  s.rows = rows.size();
  const auto fold_min = [](double& acc, double v) {
    if (std::isfinite(v)) acc = std::isnan(acc) ? v : std::min(acc, v);
  };
  const auto fold_max = [](double& acc, double v) {
    if (std::isfinite(v)) acc = std::isnan(acc) ? v : std::max(acc, v);
  };
  for (const EquivalenceRow& r : rows) {
    if (!r.message().empty()) ++s.errors;
    const double ratio = std::isfinite(r.ratio_test) ? r.ratio_test : r.ratio_searched;
    fold_min(s.min_ratio, ratio);
    fold_max(s.max_ratio, ratio);
    fold_min(s.min_ratio_searched, r.ratio_searched);
    fold_max(s.max_ratio_searched, r.ratio_searched);
    fold_max(s.max_refine_delta, r.refine_delta);
    fold_max(s.max_a_grid_delta, r.a_grid_delta);
  }
  if (std::isfinite(s.min_ratio) && s.min_ratio > 0.0) s.band = s.max_ratio / s.min_ratio;
  return s;
}

/// Per-entry equivalence rows and the aggregate ratio band. For S1 (no
/// explicit test weight) ratios come from the searched weight only.
inline EquivalenceReport equivalence_report(const std::vector<CorpusEntry>& corpus, const DualParams& params,
                                            const ReportOptions& options) {
  EquivalenceReport r;
  for (const CorpusEntry& e : corpus) r.rows.push_back(equivalence_row(e, params, options));
  r.summary = summarize(r.rows);
  return r;
}

/// How the two sides scale under F -> lambda F, for the report summary.
inline std::string homogeneity_note(Theorem t) {
  switch (t) {
    case Theorem::S3_bloch:
    case Theorem::S4_bp:
      return "entries rescaled to LHS = 1; stated LHS ||F|| has degree 1 in F, dual side degree p, compared as ||F||^p";
    default: return "entries rescaled to LHS = 1; both sides have degree p in F";
  }
}

namespace detail {

inline nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace detail

inline nlohmann::json to_json(const EquivalenceRow& r) {
  using detail::number_or_null;
  nlohmann::json j = {{"label", r.label},
                      {"theorem", to_string(r.theorem)},
                      {"p", r.p},
                      {"alpha", r.alpha},
                      {"lhs_power_value", number_or_null(r.lhs_power_value)},
                      {"test_dual", number_or_null(r.test_dual)},
                      {"searched_dual", number_or_null(r.searched_dual)},
                      {"holder_floor", number_or_null(r.holder_floor)},
                      {"ratio_test", number_or_null(r.ratio_test)},
                      {"ratio_searched", number_or_null(r.ratio_searched)},
                      {"refine_delta", number_or_null(r.refine_delta)},
                      {"error", r.message()}};
  return j;
}

inline nlohmann::json to_json(const ReportSummary& s) {
  using detail::number_or_null;
  return {{"rows", s.rows},
          {"errors", s.errors},
          {"min_ratio", number_or_null(s.min_ratio)},
          {"max_ratio", number_or_null(s.max_ratio)},
          {"band", number_or_null(s.band)},
          {"min_ratio_searched", number_or_null(s.min_ratio_searched)},
          {"max_ratio_searched", number_or_null(s.max_ratio_searched)},
          {"max_refine_delta", number_or_null(s.max_refine_delta)},
          {"max_a_grid_delta", number_or_null(s.max_a_grid_delta)},
          {"searched_label", "family infimum"}};
}

}  // namespace fsdisc

#endif  // FSDISC_REPORT_HPP
