#ifndef FSDISC_NORMS_HPP
#define FSDISC_NORMS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsdisc/bidisc.hpp"
#include "fsdisc/errors.hpp"
#include "fsdisc/quadrature.hpp"
#include "fsdisc/summation.hpp"
#include "fsdisc/taylor.hpp"

namespace fsdisc {

enum class NormKind { hardy_p, bergman_p, bloch, bp, lusin, kwon_ast, kwon_bloch, kwon_bp };

inline const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::hardy_p: return "hardy_p";
    case NormKind::bergman_p: return "bergman_p";
    case NormKind::bloch: return "bloch";
    case NormKind::bp: return "bp";
    case NormKind::lusin: return "lusin";
    case NormKind::kwon_ast: return "kwon_ast";
    case NormKind::kwon_bloch: return "kwon_bloch";
    case NormKind::kwon_bp: return "kwon_bp";
  }
  return "?";
}

inline NormKind norm_kind_from_string(const std::string& s) {
  for (NormKind k : {NormKind::hardy_p, NormKind::bergman_p, NormKind::bloch, NormKind::bp, NormKind::lusin,
                     NormKind::kwon_ast, NormKind::kwon_bloch, NormKind::kwon_bp})
    if (s == to_string(k)) return k;
  throw ConfigError("unknown norm kind '" + s + "'");
}

/// Parameters each kind must carry.
inline std::vector<std::string> required_params(NormKind k) {
  switch (k) {
    case NormKind::bloch: return {};
    case NormKind::hardy_p:
    case NormKind::bergman_p:
    case NormKind::bp: return {"p"};
    case NormKind::lusin: return {"p", "t", "aperture"};
    case NormKind::kwon_ast:
    case NormKind::kwon_bp: return {"p", "beta"};
    case NormKind::kwon_bloch: return {"p", "beta", "a_grid"};
  }
  return {};
}

/// A computed (quasi)norm or functional. For the p-th power functionals
/// (bergman_p, bp, kwon_*) `value` is the integral itself, not its p-th root.
struct NormValue {
  double value = 0.0;
  NormKind kind = NormKind::bloch;
  std::map<std::string, double> params;
  std::string grid;

  static NormValue make(double value, NormKind kind, std::map<std::string, double> params, std::string grid) {
    if (!(value >= 0.0) || !std::isfinite(value))
      throw EvaluationError(std::string(to_string(kind)) + ": value is negative or non-finite");
    for (const auto& key : required_params(kind))
      if (!params.contains(key)) throw ConfigError(std::string(to_string(kind)) + ": missing parameter " + key);
    return {value, kind, std::move(params), std::move(grid)};
  }
};

inline nlohmann::json to_json(const NormValue& v) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, x] : v.params) params[k] = x;
  return {{"kind", to_string(v.kind)}, {"value", v.value}, {"params", params}, {"grid", v.grid}};
}

/// |F| and |F'| on every node of a rule.
struct NodeMagnitudes {
  std::vector<complex> f;
  std::vector<double> abs_f;
  std::vector<double> abs_df;

  NodeMagnitudes(const TaylorFunction& F, const DiscRule& rule) {
    const TaylorFunction dF = derivative(F);
    f.reserve(rule.size());
    abs_f.reserve(rule.size());
    abs_df.reserve(rule.size());
    for (const DiscNode& n : rule.nodes()) {
      f.push_back(F.evaluate_unchecked(n.z));
      abs_f.push_back(std::abs(f.back()));
      abs_df.push_back(std::abs(dF.evaluate_unchecked(n.z)));
    }
  }
};

/// exponent * log(x) with 0 * log(0) taken as 0, so x^0 = 1 everywhere.
inline double log_power(double exponent, double x) noexcept {
  return exponent == 0.0 ? 0.0 : exponent * std::log(x);
}

/// x^exponent with 0^0 = 1.
inline double power(double x, double exponent) noexcept { return exponent == 0.0 ? 1.0 : std::pow(x, exponent); }

/// sup |f'(z)| (1 - |z|) over the rule nodes and z = 0. A grid sup, so never
/// above the true Bloch seminorm.
inline NormValue bloch_norm(const TaylorFunction& f, const DiscRule& rule) {
  const TaylorFunction df = derivative(f);
  double best = std::abs(df.coefficient(0));
  for (const DiscNode& n : rule.nodes()) best = std::max(best, std::abs(df.evaluate_unchecked(n.z)) * n.dist);
  return NormValue::make(best, NormKind::bloch, {}, rule.provenance());
}

/// int |f'|^p (1-|z|)^{p-2} dm, the p-th power of the B_p seminorm.
inline NormValue bp_norm_p(const TaylorFunction& f, double p, const DiscRule& rule) {
  if (!(p > 1.0)) throw DomainError("bp_norm_p: p must exceed 1");
  const TaylorFunction df = derivative(f);
  const double v = integrate_disc(rule, [&](const DiscNode& n) {
    return power(std::abs(df.evaluate_unchecked(n.z)), p) * power(n.dist, p - 2.0);
  });
  return NormValue::make(v, NormKind::bp, {{"p", p}}, rule.provenance());
}

/// int |F|^p dm.
inline NormValue bergman_norm_p(const TaylorFunction& F, double p, const DiscRule& rule) {
  if (!(p > 0.0)) throw DomainError("bergman_norm_p: p must be positive");
  const double v =
      integrate_disc(rule, [&](const DiscNode& n) { return power(std::abs(F.evaluate_unchecked(n.z)), p); });
  return NormValue::make(v, NormKind::bergman_p, {{"p", p}}, rule.provenance());
}

/// r_k = 1 - 2^-k, k = 1..40.
inline std::vector<double> default_hardy_radii() {
  std::vector<double> r;
  for (int k = 1; k <= 40; ++k) r.push_back(1.0 - std::ldexp(1.0, -k));
  return r;
}

/// max over the radii of the normalized circle mean of |f(r xi)|^p.
inline NormValue hardy_norm_p(const TaylorFunction& f, double p, const std::vector<double>& radii,
                              std::size_t angular_count) {
  if (!(p > 0.0)) throw DomainError("hardy_norm_p: p must be positive");
  if (radii.empty()) throw ConfigError("hardy_norm_p: radii must be non-empty");
  double best = 0.0;
  for (double r : radii) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("hardy_norm_p: radii must lie in (0, 1)");
    best = std::max(best, integrate_circle(angular_count, [&](complex xi) {
                      return power(std::abs(f.evaluate_unchecked(r * xi)), p);
                    }));
  }
  return NormValue::make(best, NormKind::hardy_p, {{"p", p}, {"radii", static_cast<double>(radii.size())}},
                         "circle:" + std::to_string(angular_count));
}

inline NormValue hardy_norm_p(const TaylorFunction& f, double p, std::size_t angular_count = 256) {
  return hardy_norm_p(f, p, default_hardy_radii(), angular_count);
}

/// Circle average of (int over the Stolz region at xi of density dm)^{p/2},
/// with `density` given per rule node.
inline double cone_functional(const DiscRule& rule, const std::vector<double>& density, double p, double aperture,
                              std::size_t angular_count) {
  const auto& nodes = rule.nodes();
  return integrate_circle(angular_count, [&](complex xi) {
    const StolzRegion region = StolzRegion::make(xi, aperture);
    CompensatedSum inner;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (stolz_contains(region, nodes[i].z, nodes[i].dist)) inner.add(nodes[i].weight * density[i]);
    return power(inner.value(), 0.5 * p);
  });
}

/// int_T ( int_{Gamma(xi)} |D^t f|^2 (1-|z|)^{2t-2} dm )^{p/2} dxi.
inline NormValue lusin_functional(const TaylorFunction& f, double p, double t, double aperture, const DiscRule& rule,
                                  std::size_t angular_count) {
  if (!(p > 0.0) || !(t > 0.0)) throw DomainError("lusin_functional: p and t must be positive");
  if (!(aperture > 1.0)) throw DomainError("lusin_functional: aperture must exceed 1");
  const TaylorFunction Dt = fractional_derivative(f, t);
  std::vector<double> density(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const DiscNode& n = rule.node(i);
    density[i] = std::norm(Dt.evaluate_unchecked(n.z)) * power(n.dist, 2.0 * t - 2.0);
  }
  const double v = cone_functional(rule, density, p, aperture, angular_count);
  return NormValue::make(v, NormKind::lusin, {{"p", p}, {"t", t}, {"aperture", aperture}},
                         rule.provenance() + ";circle:" + std::to_string(angular_count));
}

namespace detail {

inline void check_beta(const char* where, double p, double beta) {
  if (!(beta >= 0.0) || !(beta < p + 2.0))
    throw DomainError(std::string(where) + ": beta must satisfy 0 <= beta < p + 2");
}

}  // namespace detail

/// int |F|^{p-beta} |F'|^beta (1-|z|)^beta dm, for F(0) = 0.
inline NormValue kwon_ast_rhs(const TaylorFunction& F, double p, double beta, const DiscRule& rule) {
  if (!(p > 0.0)) throw DomainError("kwon_ast_rhs: p must be positive");
  detail::check_beta("kwon_ast_rhs", p, beta);
  if (!F.vanishes_at_zero()) throw DomainError("kwon_ast_rhs: F(0) must be 0");
  const TaylorFunction dF = derivative(F);
  const double v = integrate_disc(rule, [&](const DiscNode& n) {
    return power(std::abs(F.evaluate_unchecked(n.z)), p - beta) * power(std::abs(dF.evaluate_unchecked(n.z)), beta) *
           power(n.dist, beta);
  });
  return NormValue::make(v, NormKind::kwon_ast, {{"p", p}, {"beta", beta}}, rule.provenance());
}

namespace detail {

// z-only log factor beta log|f'| + beta log(1-|z|) and the f-difference power p - beta.
inline PairTerm kwon_pair_term(const NodeMagnitudes& z_nodes, const DiscRule& rule_z, double p, double beta) {
  PairTerm term;
  term.log_z.resize(rule_z.size());
  for (std::size_t i = 0; i < rule_z.size(); ++i)
    term.log_z[i] = log_power(beta, z_nodes.abs_df[i]) + log_power(beta, rule_z.node(i).dist);
  term.diff_exponent = p - beta;
  return term;
}

}  // namespace detail

/// Largest entry of per-a totals; also reports where.
struct MuASup {
  double value = 0.0;
  MoebiusPoint argmax{0.0};
};

inline MuASup sup_over_a(std::span<const double> per_a, const std::vector<MoebiusPoint>& a_grid) {
  if (a_grid.empty() || per_a.size() != a_grid.size()) throw ConfigError("a grid must be non-empty");
  MuASup best{per_a[0], a_grid[0]};
  for (std::size_t k = 1; k < a_grid.size(); ++k)
    if (per_a[k] > best.value) best = {per_a[k], a_grid[k]};
  return best;
}

/// sup over a in the grid of the double integral
///   |f(z)-f(w)|^{p-beta} |f'(z)|^beta (1-|z|)^beta d mu_a(z, w).
inline NormValue kwon_bloch_functional(const TaylorFunction& f, double p, double beta,
                                       const std::vector<MoebiusPoint>& a_grid, const BidiscRule& rule) {
  if (!(p > 0.0)) throw DomainError("kwon_bloch_functional: p must be positive");
  detail::check_beta("kwon_bloch_functional", p, beta);
  if (a_grid.empty()) throw DomainError("kwon_bloch_functional: a grid must be non-empty");
  const NodeMagnitudes zn(f, rule.rule_z());
  const std::vector<PairTerm> terms{detail::kwon_pair_term(zn, rule.rule_z(), p, beta)};
  const PairTotals sums = pair_sums(rule, f, terms, a_grid, false);
  const double v = sup_over_a(sums.mu_a[0], a_grid).value;
  return NormValue::make(v, NormKind::kwon_bloch,
                         {{"p", p}, {"beta", beta}, {"a_grid", static_cast<double>(a_grid.size())}},
                         rule.provenance());
}

/// int int |f(w)-f(z)|^{p-beta} |f'(z)|^beta (1-|z|)^beta d mu(z, w).
inline NormValue kwon_bp_functional(const TaylorFunction& f, double p, double beta, const BidiscRule& rule) {
  if (!(p > 1.0)) throw DomainError("kwon_bp_functional: p must exceed 1");
  detail::check_beta("kwon_bp_functional", p, beta);
  const NodeMagnitudes zn(f, rule.rule_z());
  const std::vector<PairTerm> terms{detail::kwon_pair_term(zn, rule.rule_z(), p, beta)};
  const PairTotals sums = pair_sums(rule, f, terms, {}, true);
  return NormValue::make(sums.mu[0], NormKind::kwon_bp, {{"p", p}, {"beta", beta}}, rule.provenance());
}

}  // namespace fsdisc

#endif  // FSDISC_NORMS_HPP
