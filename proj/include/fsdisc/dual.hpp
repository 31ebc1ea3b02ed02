#ifndef FSDISC_DUAL_HPP
#define FSDISC_DUAL_HPP

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsdisc/bidisc.hpp"
#include "fsdisc/errors.hpp"
#include "fsdisc/norms.hpp"
#include "fsdisc/quadrature.hpp"
#include "fsdisc/summation.hpp"
#include "fsdisc/taylor.hpp"

namespace fsdisc {

enum class Theorem { S1_hardy, S2_bergman, S3_bloch, S4_bp };

inline const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::S1_hardy: return "S1_hardy";
    case Theorem::S2_bergman: return "S2_bergman";
    case Theorem::S3_bloch: return "S3_bloch";
    case Theorem::S4_bp: return "S4_bp";
  }
  return "?";
}

/// Accepts the enum names and the short forms S1..S4.
inline Theorem theorem_from_string(const std::string& s) {
  for (Theorem t : {Theorem::S1_hardy, Theorem::S2_bergman, Theorem::S3_bloch, Theorem::S4_bp}) {
    const std::string name = to_string(t);
    if (s == name || s == name.substr(0, 2)) return t;
  }
  throw ConfigError("unknown theorem '" + s + "'");
}

inline bool is_two_point(Theorem t) { return t == Theorem::S3_bloch || t == Theorem::S4_bp; }

struct DualParams {
  double p = 3.0;
  double alpha = 1.8;
  double alpha_conj = 2.25;
  Theorem theorem = Theorem::S2_bergman;
  /// Exponent s of the S1 class; unused elsewhere.
  double s = 1.0;
  /// Stolz aperture of the S1 class; unused elsewhere.
  double aperture = 2.0;

  static DualParams make(Theorem theorem, double p, double alpha, double s = 1.0, double aperture = 2.0) {
    DualParams d;
    d.theorem = theorem;
    d.p = p;
    d.alpha = alpha;
    d.s = s;
    d.aperture = aperture;
    if (!std::isfinite(p) || !std::isfinite(alpha)) throw ConfigError("DualParams: p and alpha must be finite");
    if (theorem == Theorem::S1_hardy) {
      if (!(p > 0.0 && p < 2.0)) throw ConfigError("DualParams: S1 needs 0 < p < 2");
      if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("DualParams: S1 needs s > 0");
      if (!(aperture > 1.0)) throw ConfigError("DualParams: aperture must exceed 1");
      d.alpha_conj = alpha > 1.0 ? alpha / (alpha - 1.0) : std::numeric_limits<double>::infinity();
      return d;
    }
    if (!(alpha > 1.0 && alpha < 2.0)) throw ConfigError("DualParams: alpha must lie in (1, 2)");
    d.alpha_conj = alpha / (alpha - 1.0);
    if (!(p >= d.alpha_conj))
      throw ConfigError("DualParams: hypothesis p ≥ α′ violated (p = " + std::to_string(p) +
                        ", α′ = " + std::to_string(d.alpha_conj) + ")");
    if (theorem == Theorem::S4_bp && !(p > 1.0)) throw ConfigError("DualParams: S4 needs p > 1");
    return d;
  }
};

enum class Arity { one_point, two_point };

inline const char* to_string(Arity a) { return a == Arity::one_point ? "one_point" : "two_point"; }

/// Exponents of the power-product weight family:
///   scale * |F'(z)|^u (1-|z|)^v / (R + softening)^s
/// with R = |F(z)| (one point) or |F(z) - F(w)| (two point).
struct WeightExponents {
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;

  friend bool operator==(const WeightExponents&, const WeightExponents&) = default;
};

struct WeightSpec {
  Arity arity = Arity::one_point;
  WeightExponents exponents;
  double softening = 0.0;
  double scale = 1.0;

  static WeightSpec make(Arity arity, WeightExponents e, double softening = 0.0, double scale = 1.0) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("WeightSpec: scale must be positive");
    if (!(softening >= 0.0) || !std::isfinite(softening)) throw ConfigError("WeightSpec: softening must be >= 0");
    if (!std::isfinite(e.u) || !std::isfinite(e.v) || !std::isfinite(e.s))
      throw ConfigError("WeightSpec: exponents must be finite");
    return {arity, e, softening, scale};
  }

  [[nodiscard]] WeightSpec scaled(double c) const { return make(arity, exponents, softening, scale * c); }
};

/// omega(z) for a one-point weight.
inline double weight_value(const WeightSpec& w, const TaylorFunction& F, complex z) {
  if (w.arity != Arity::one_point) throw ConfigError("weight_value: weight needs (z, w)");
  const double dist = 1.0 - std::abs(z);
  if (!(dist > 0.0)) throw DomainError("weight_value: z must lie in the unit disc");
  const double adf = std::abs(derivative(F).evaluate_unchecked(z));
  const double af = std::abs(F.evaluate_unchecked(z));
  return w.scale * power(adf, w.exponents.u) * power(dist, w.exponents.v) /
         power(af + w.softening, w.exponents.s);
}

/// omega(z, w) for a two-point weight.
inline double weight_value(const WeightSpec& w, const TaylorFunction& F, complex z, complex zw) {
  if (w.arity != Arity::two_point) throw ConfigError("weight_value: weight is one-point");
  const double dist = 1.0 - std::abs(z);
  if (!(dist > 0.0) || !(std::abs(zw) < 1.0)) throw DomainError("weight_value: points must lie in the unit disc");
  const double adf = std::abs(derivative(F).evaluate_unchecked(z));
  const double diff = std::abs(F.evaluate_unchecked(z) - F.evaluate_unchecked(zw));
  return w.scale * power(adf, w.exponents.u) * power(dist, w.exponents.v) /
         power(diff + w.softening, w.exponents.s);
}

struct DualEvaluation {
  double constraint_value = 0.0;
  double dual_value = 0.0;
  double normalization_scale = 1.0;
  bool feasible = false;
  WeightSpec weight;
  DualParams params;
  std::string grid_provenance;
};

inline nlohmann::json to_json(const WeightSpec& w) {
  return {{"arity", to_string(w.arity)},
          {"exponents", {{"u", w.exponents.u}, {"v", w.exponents.v}, {"s", w.exponents.s}}},
          {"softening", w.softening},
          {"scale", w.scale}};
}

inline nlohmann::json to_json(const DualParams& d) {
  return {{"p", d.p},         {"alpha", d.alpha}, {"alpha_conj", d.alpha_conj}, {"theorem", to_string(d.theorem)},
          {"s", d.s},         {"aperture", d.aperture}};
}

inline nlohmann::json to_json(const DualEvaluation& e) {
  return {{"constraint_value", e.constraint_value},
          {"dual_value", e.dual_value},
          {"normalization_scale", e.normalization_scale},
          {"feasible", e.feasible},
          {"weight", to_json(e.weight)},
          {"params", to_json(e.params)},
          {"grid_provenance", e.grid_provenance}};
}

/// The explicit test weight for S2: u = p/alpha, v = 1 + p/alpha, s = 1.
inline WeightSpec test_weight_S2(const TaylorFunction& F, const DualParams& params) {
  if (F.is_zero()) throw DomainError("test_weight_S2: F must not vanish identically");
  if (!F.vanishes_at_zero()) throw DomainError("test_weight_S2: F(0) must be 0");
  const double r = params.p / params.alpha;
  return WeightSpec::make(Arity::one_point, {r, 1.0 + r, 1.0});
}

/// The two-point test weight for S3 (also used for S4): u = p/alpha, v = (p + alpha)/alpha, s = 1.
inline WeightSpec test_weight_S3(const TaylorFunction& F, const DualParams& params) {
  if (F.is_constant()) throw DomainError("test_weight_S3: F must be nonconstant");
  return WeightSpec::make(Arity::two_point, {params.p / params.alpha, (params.p + params.alpha) / params.alpha, 1.0});
}

/// Grids a theorem evaluates on. S1/S2 use `disc`; S3/S4 use `bidisc`.
struct DualRules {
  std::shared_ptr<const DiscRule> disc;
  std::shared_ptr<const BidiscRule> bidisc;
  std::vector<MoebiusPoint> a_grid = default_a_grid();
  std::size_t circle_count = 256;
};

/// Constraint and dual sums of one weight before the scale factor.
struct RawSums {
  double constraint = 0.0;  // at scale 1
  double dual = 0.0;        // at scale 1
};

/// One function on one set of grids: evaluates the constraint, the dual
/// functional and the Hölder floor of a theorem for any weight of the family.
/// Node data (and, on request, bidisc pair data) are computed once.
class DualProblem {
 public:
  DualProblem(TaylorFunction F, DualParams params, DualRules rules, bool cache_pairs = false)
      : F_(std::move(F)), params_(params), rules_(std::move(rules)) {
    const Theorem th = params_.theorem;
    if (th != Theorem::S1_hardy && !F_.vanishes_at_zero()) throw DomainError("fs_dual: F(0) must be 0");
    if (is_two_point(th)) {
      if (!rules_.bidisc) throw ConfigError("fs_dual: theorem needs a bidisc rule");
      if (th == Theorem::S3_bloch && rules_.a_grid.empty()) throw ConfigError("fs_dual: a grid must be non-empty");
      nodes_.emplace(F_, rules_.bidisc->rule_z());
      if (cache_pairs) cache_.emplace(*rules_.bidisc, F_);
    } else {
      if (!rules_.disc) throw ConfigError("fs_dual: theorem needs a disc rule");
      nodes_.emplace(F_, *rules_.disc);
      if (th == Theorem::S1_hardy) build_cones();
    }
  }

  [[nodiscard]] const TaylorFunction& function() const noexcept { return F_; }
  [[nodiscard]] const DualParams& params() const noexcept { return params_; }
  [[nodiscard]] const DualRules& rules() const noexcept { return rules_; }

  [[nodiscard]] std::string provenance() const {
    if (is_two_point(params_.theorem)) {
      std::string s = rules_.bidisc->provenance();
      if (params_.theorem == Theorem::S3_bloch) s += ";a_grid:" + std::to_string(rules_.a_grid.size());
      return s;
    }
    std::string s = rules_.disc->provenance();
    if (params_.theorem == Theorem::S1_hardy) s += ";circle:" + std::to_string(rules_.circle_count);
    return s;
  }

  /// Unscaled sums (weight scale treated as 1).
  [[nodiscard]] RawSums raw(const WeightSpec& w) const {
    check_arity(w);
    switch (params_.theorem) {
      case Theorem::S1_hardy: return raw_S1(w);
      case Theorem::S2_bergman: return raw_S2(w);
      default: return raw_pairs(w);
    }
  }

  [[nodiscard]] double constraint(const WeightSpec& w) const {
    return raw(w).constraint * std::pow(w.scale, constraint_degree());
  }

  [[nodiscard]] double dual(const WeightSpec& w) const { return raw(w).dual * std::pow(w.scale, dual_degree()); }

  /// Homogeneity degree of the constraint in the weight: -alpha' (S2-S4), 1 (S1).
  [[nodiscard]] double constraint_degree() const {
    return params_.theorem == Theorem::S1_hardy ? 1.0 : -params_.alpha_conj;
  }
  /// Homogeneity degree of the dual functional: alpha (S2-S4), -1 (S1).
  [[nodiscard]] double dual_degree() const { return params_.theorem == Theorem::S1_hardy ? -1.0 : params_.alpha; }

  /// Rescales w so its constraint equals 1; the dual follows by homogeneity.
  [[nodiscard]] DualEvaluation normalize(const WeightSpec& w) const {
    const RawSums r = raw(w);
    const double C = r.constraint * std::pow(w.scale, constraint_degree());
    const double D = r.dual * std::pow(w.scale, dual_degree());
    if (!(C > 0.0) || !std::isfinite(C))
      throw NormalizationError("normalize_weight: constraint is zero or non-finite");
    if (!std::isfinite(D)) throw EvaluationError("normalize_weight: dual functional is non-finite");
    const double c = std::pow(C, -1.0 / constraint_degree());
    DualEvaluation e;
    e.weight = w.scaled(c);
    e.normalization_scale = e.weight.scale;
    e.constraint_value = C * std::pow(c, constraint_degree());
    e.dual_value = D * std::pow(c, dual_degree());
    e.feasible = e.constraint_value <= 1.0 + 1e-9;
    e.params = params_;
    e.grid_provenance = provenance();
    return e;
  }

  /// Lower bound on dual^{1/alpha} valid for every normalized weight on this
  /// grid: the beta = p Kwon node sum (S2: kwon_ast_rhs, S3: sup over the a
  /// grid of the mu_a sum, S4: the mu sum). NaN for S1, which has none.
  [[nodiscard]] double holder_floor() const {
    if (!floor_) floor_ = compute_floor();
    return *floor_;
  }

 private:
  void check_arity(const WeightSpec& w) const {
    const Arity want = is_two_point(params_.theorem) ? Arity::two_point : Arity::one_point;
    if (w.arity != want)
      throw ConfigError(std::string("fs_dual: ") + to_string(params_.theorem) + " needs a " + to_string(want) +
                        " weight");
  }

  [[nodiscard]] const DiscRule& z_rule() const {
    return is_two_point(params_.theorem) ? rules_.bidisc->rule_z() : *rules_.disc;
  }

  // Log of the z-only constraint and dual factors at node i (scale 1, no R factor).
  [[nodiscard]] double log_constraint_z(const WeightExponents& e, std::size_t i) const {
    const double a = params_.alpha_conj, p = params_.p;
    return log_power(a * (p - 1.0 - e.u), nodes_->abs_df[i]) + log_power(a * (p - e.v), z_rule().node(i).dist);
  }
  [[nodiscard]] double log_dual_z(const WeightExponents& e, std::size_t i) const {
    const double a = params_.alpha;
    return log_power(a * (1.0 + e.u), nodes_->abs_df[i]) + log_power(a * e.v, z_rule().node(i).dist);
  }

  [[nodiscard]] RawSums raw_S2(const WeightSpec& w) const {
    const DiscRule& rule = *rules_.disc;
    const WeightExponents& e = w.exponents;
    CompensatedSum c, d;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double lr = nodes_->abs_f[i] + w.softening;
      const double vc = std::exp(log_constraint_z(e, i) + log_power(e.s * params_.alpha_conj, lr));
      const double vd = std::exp(log_dual_z(e, i) + log_power(-e.s * params_.alpha, lr));
      if (!std::isfinite(vc) || !std::isfinite(vd))
        throw detail::non_finite_at("fs_dual S2", rule.node(i).z, std::isfinite(vc) ? vd : vc);
      c.add(rule.node(i).weight * vc);
      d.add(rule.node(i).weight * vd);
    }
    return {c.value(), d.value()};
  }

  [[nodiscard]] RawSums raw_pairs(const WeightSpec& w) const {
    const std::size_t n = z_rule().size();
    std::vector<PairTerm> terms(2);
    terms[0].log_z.resize(n);
    terms[1].log_z.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      terms[0].log_z[i] = log_constraint_z(w.exponents, i);
      terms[1].log_z[i] = log_dual_z(w.exponents, i);
    }
    terms[0].diff_exponent = w.exponents.s * params_.alpha_conj;
    terms[1].diff_exponent = -w.exponents.s * params_.alpha;
    terms[0].softening = terms[1].softening = w.softening;
    return pair_raw(terms);
  }

  [[nodiscard]] PairTotals pair_totals(const std::vector<PairTerm>& terms) const {
    const bool s3 = params_.theorem == Theorem::S3_bloch;
    const std::span<const MoebiusPoint> a =
        s3 ? std::span<const MoebiusPoint>(rules_.a_grid) : std::span<const MoebiusPoint>();
    if (cache_) return cache_->sums(terms, a, !s3);
    return pair_sums(*rules_.bidisc, F_, terms, a, !s3);
  }

  [[nodiscard]] RawSums pair_raw(const std::vector<PairTerm>& terms) const {
    const PairTotals t = pair_totals(terms);
    if (params_.theorem == Theorem::S4_bp) return {t.mu[0], t.mu[1]};
    return {sup_over_a(t.mu_a[0], rules_.a_grid).value, sup_over_a(t.mu_a[1], rules_.a_grid).value};
  }

  void build_cones() {
    const DiscRule& rule = *rules_.disc;
    if (rules_.circle_count < 4) throw ConfigError("fs_dual: circle_count must be >= 4");
    cones_.resize(rules_.circle_count);
    const auto xs = circle_nodes(rules_.circle_count);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const StolzRegion region = StolzRegion::make(xs[k], params_.aperture);
      for (std::size_t i = 0; i < rule.size(); ++i)
        if (stolz_contains(region, rule.node(i).z, rule.node(i).dist)) cones_[k].push_back(i);
    }
  }

  // S1: constraint = || sup_cone omega (1-|z|)^{2-s} |f'|^{2-s} ||_{L^{p/(2-p)}(T)},
  //     dual = int |f'|^s (1-|z|)^{s-1} / omega dm.
  [[nodiscard]] RawSums raw_S1(const WeightSpec& w) const {
    const DiscRule& rule = *rules_.disc;
    const WeightExponents& e = w.exponents;
    const double s = params_.s;
    std::vector<double> g(rule.size());
    CompensatedSum d;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double adf = nodes_->abs_df[i], dist = rule.node(i).dist;
      const double lr = nodes_->abs_f[i] + w.softening;
      g[i] = std::exp(log_power(e.u + 2.0 - s, adf) + log_power(e.v + 2.0 - s, dist) + log_power(-e.s, lr));
      const double vd = std::exp(log_power(s - e.u, adf) + log_power(s - 1.0 - e.v, dist) + log_power(e.s, lr));
      if (!std::isfinite(g[i]) || !std::isfinite(vd))
        throw detail::non_finite_at("fs_dual S1", rule.node(i).z, std::isfinite(vd) ? g[i] : vd);
      d.add(rule.node(i).weight * vd);
    }
    const double r = params_.p / (2.0 - params_.p);
    CompensatedSum mean;
    for (const auto& cone : cones_) {
      double sup = 0.0;
      for (std::size_t i : cone) sup = std::max(sup, g[i]);
      mean.add(std::pow(sup, r));
    }
    const double m = mean.value() / static_cast<double>(cones_.size());
    return {std::pow(m, 1.0 / r), d.value()};
  }

  [[nodiscard]] double compute_floor() const {
    switch (params_.theorem) {
      case Theorem::S1_hardy: return std::numeric_limits<double>::quiet_NaN();
      case Theorem::S2_bergman: return kwon_ast_rhs(F_, params_.p, params_.p, *rules_.disc).value;
      default: {
        const std::vector<PairTerm> terms{detail::kwon_pair_term(*nodes_, z_rule(), params_.p, params_.p)};
        const PairTotals t = pair_totals(terms);
        return params_.theorem == Theorem::S4_bp ? t.mu[0] : sup_over_a(t.mu_a[0], rules_.a_grid).value;
      }
    }
  }

  TaylorFunction F_;
  DualParams params_;
  DualRules rules_;
  std::optional<NodeMagnitudes> nodes_;
  std::optional<PairCache> cache_;
  std::vector<std::vector<std::size_t>> cones_;
  mutable std::optional<double> floor_;
};

namespace detail {

inline DualRules disc_rules(const DiscRule& rule) {
  DualRules r;
  r.disc = std::make_shared<const DiscRule>(rule);
  return r;
}

inline DualRules bidisc_rules(const BidiscRule& rule, const std::vector<MoebiusPoint>& a_grid) {
  DualRules r;
  r.bidisc = std::make_shared<const BidiscRule>(rule);
  r.a_grid = a_grid;
  return r;
}

inline void require_theorem(const DualParams& p, Theorem t, const char* where) {
  if (p.theorem != t) throw ConfigError(std::string(where) + ": params are for " + to_string(p.theorem));
}

}  // namespace detail

/// int |F'|^{(p-1)alpha'} omega^{-alpha'} (1-|z|)^{p alpha'} dm.
inline double constraint_S2(const TaylorFunction& F, const WeightSpec& w, const DualParams& params,
                            const DiscRule& rule) {
  detail::require_theorem(params, Theorem::S2_bergman, "constraint_S2");
  return DualProblem(F, params, detail::disc_rules(rule)).constraint(w);
}

/// int |F'|^alpha omega^alpha dm.
inline double dual_S2(const TaylorFunction& F, const WeightSpec& w, const DualParams& params, const DiscRule& rule) {
  detail::require_theorem(params, Theorem::S2_bergman, "dual_S2");
  return DualProblem(F, params, detail::disc_rules(rule)).dual(w);
}

/// sup over the a grid of the d mu_a constraint integral.
inline double constraint_S3(const TaylorFunction& F, const WeightSpec& w, const DualParams& params,
                            const std::vector<MoebiusPoint>& a_grid, const BidiscRule& rule) {
  detail::require_theorem(params, Theorem::S3_bloch, "constraint_S3");
  return DualProblem(F, params, detail::bidisc_rules(rule, a_grid)).constraint(w);
}

/// sup over the a grid of int int omega^alpha |F'|^alpha d mu_a.
inline double dual_S3(const TaylorFunction& F, const WeightSpec& w, const DualParams& params,
                      const std::vector<MoebiusPoint>& a_grid, const BidiscRule& rule) {
  detail::require_theorem(params, Theorem::S3_bloch, "dual_S3");
  return DualProblem(F, params, detail::bidisc_rules(rule, a_grid)).dual(w);
}

inline double constraint_S4(const TaylorFunction& F, const WeightSpec& w, const DualParams& params,
                            const BidiscRule& rule) {
  detail::require_theorem(params, Theorem::S4_bp, "constraint_S4");
  return DualProblem(F, params, detail::bidisc_rules(rule, {})).constraint(w);
}

inline double dual_S4(const TaylorFunction& F, const WeightSpec& w, const DualParams& params,
                      const BidiscRule& rule) {
  detail::require_theorem(params, Theorem::S4_bp, "dual_S4");
  return DualProblem(F, params, detail::bidisc_rules(rule, {})).dual(w);
}

inline double constraint_S1(const TaylorFunction& f, const WeightSpec& w, const DualParams& params,
                            const DiscRule& rule, std::size_t angular_count) {
  detail::require_theorem(params, Theorem::S1_hardy, "constraint_S1");
  DualRules r = detail::disc_rules(rule);
  r.circle_count = angular_count;
  return DualProblem(f, params, std::move(r)).constraint(w);
}

inline double dual_S1(const TaylorFunction& f, const WeightSpec& w, const DualParams& params, const DiscRule& rule) {
  detail::require_theorem(params, Theorem::S1_hardy, "dual_S1");
  DualRules r = detail::disc_rules(rule);
  r.circle_count = 4;  // the dual does not use the circle
  return DualProblem(f, params, std::move(r)).dual(w);
}

inline DualEvaluation normalize_weight(const TaylorFunction& F, const WeightSpec& w, const DualParams& params,
                                       const DualRules& rules) {
  return DualProblem(F, params, rules).normalize(w);
}

}  // namespace fsdisc

#endif  // FSDISC_DUAL_HPP
