#ifndef FSDISC_BIDISC_HPP
#define FSDISC_BIDISC_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "fsdisc/errors.hpp"
#include "fsdisc/gauss_legendre.hpp"
#include "fsdisc/quadrature.hpp"
#include "fsdisc/summation.hpp"
#include "fsdisc/taylor.hpp"

namespace fsdisc {

/// Parameter a of the measure d mu_a; |a| < 1.
struct MoebiusPoint {
  complex a;

  static MoebiusPoint make(complex a) {
    if (!(std::abs(a) < 1.0)) throw DomainError("MoebiusPoint: |a| must be < 1");
    return {a};
  }
};

/// Grid for suprema over a: {0} and radii x phases, phases equispaced.
inline std::vector<MoebiusPoint> make_a_grid(const std::vector<double>& radii, std::size_t phases) {
  std::vector<MoebiusPoint> grid{MoebiusPoint{0.0}};
  for (double r : radii) {
    for (std::size_t k = 0; k < phases; ++k)
      grid.push_back(MoebiusPoint::make(
          std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(phases))));
  }
  return grid;
}

inline std::vector<MoebiusPoint> default_a_grid() { return make_a_grid({0.3, 0.6, 0.85}, 8); }

/// Twice the phases, radii with midpoints inserted; used for a-grid refinement checks.
inline std::vector<MoebiusPoint> doubled_a_grid() {
  return make_a_grid({0.15, 0.3, 0.45, 0.6, 0.725, 0.85}, 16);
}

/// Node counts of the per-z rule for w (see BidiscRule).
struct ChartConfig {
  std::size_t core_radial = 12;
  std::size_t core_angular = 16;
  std::size_t cap_radial = 40;
  std::size_t cap_angular = 24;
  /// Radial grading exponent k of the core chart at zeta = 0, rho ~ u^k.
  /// k = 1/(2 - alpha) makes |z - w|^{-alpha} polynomial in u.
  double origin_grading = 5.0;

  /// Counts derived from a nominal radial x angular bidisc grid (48 x 64 gives the defaults).
  static ChartConfig for_grid(std::size_t radial, std::size_t angular, double origin_grading = 5.0) {
    ChartConfig c;
    c.core_radial = std::max<std::size_t>(4, radial / 4);
    c.core_angular = std::max<std::size_t>(4, angular / 4);
    c.cap_radial = std::max<std::size_t>(4, radial * 5 / 6);
    c.cap_angular = std::max<std::size_t>(4, angular * 3 / 8);
    c.origin_grading = origin_grading;
    return c;
  }
};

/// Origin grading suited to the |f(z) - f(w)|^{-alpha} diagonal singularity.
inline double chart_origin_grading(double alpha) {
  if (!(alpha < 2.0)) return 10.0;
  return std::clamp(1.0 / (2.0 - alpha), 1.0, 10.0);
}

enum class DiagonalPolicy { moebius_chart };

/// One (z, w) quadrature pair. `dz` = z - w and `dist_w` = 1 - |w| are
/// computed without cancellation.
struct PairNode {
  complex z;
  complex w;
  complex dz;
  double dist_z;
  double dist_w;
};

namespace detail {

// C-infinity step: 1 on [0, lo], 0 on [hi, inf).
inline double smooth_cutoff(double rho, double lo, double hi) {
  const double x = (rho - lo) / (hi - lo);
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return b / (a + b);
}

inline constexpr double kCoreInner = 0.3;
inline constexpr double kCoreOuter = 0.6;

struct CoreNode {
  complex zeta;
  double one_minus_abs2;  // 1 - |zeta|^2
  double weight;
};

// Cap node relative to the cap point xi: zeta = xi (1 - eta).
struct CapNode {
  complex eta;
  double one_minus_abs2;
  double weight;
};

}  // namespace detail

/// Quadrature on D x D for pair integrals.
///
/// z runs over a DiscRule. For each z node the w integral is pulled back by
/// the involution w = phi_z(zeta) = (z - zeta)/(1 - conj(z) zeta), under which
/// |1 - conj(w) z|^{-4} dm(w) = dm(zeta) / (1 - |z|^2)^2. The zeta disc is
/// covered by two polar charts joined by a smooth partition of unity: a core
/// chart at zeta = 0 (the diagonal w = z, origin-graded) and a cap chart at
/// zeta = z/|z| with log-graded radius (the part of the zeta disc that carries
/// w far from z when z is near the circle). No pair has w = z. All weights
/// are positive and shared by every pair integral on the rule.
class BidiscRule {
 public:
  BidiscRule(DiscRule rule_z, ChartConfig chart) : rule_z_(std::move(rule_z)), chart_(chart) {
    if (chart.core_radial < 2 || chart.core_angular < 4 || chart.cap_radial < 4 || chart.cap_angular < 4)
      throw ConfigError("BidiscRule: chart node counts too small");
    if (!(chart.origin_grading >= 1.0) || !std::isfinite(chart.origin_grading))
      throw ConfigError("BidiscRule: origin grading must be >= 1");
    build_core();
    build_caps();
  }

  [[nodiscard]] const DiscRule& rule_z() const noexcept { return rule_z_; }
  [[nodiscard]] const ChartConfig& chart() const noexcept { return chart_; }
  [[nodiscard]] DiagonalPolicy diagonal_policy() const noexcept { return DiagonalPolicy::moebius_chart; }

  /// Number of w nodes attached to each z node.
  [[nodiscard]] std::size_t pairs_per_z() const noexcept { return core_.size() + cap_per_ring_; }
  [[nodiscard]] std::size_t pair_count() const noexcept { return rule_z_.size() * pairs_per_z(); }

  [[nodiscard]] std::string provenance() const {
    std::ostringstream os;
    os << "bidisc:" << rule_z_.radial_count() << 'x' << rule_z_.angular_count() << ":g" << rule_z_.grading_exponent()
       << ":chart" << chart_.core_radial << 'x' << chart_.core_angular << '+' << chart_.cap_radial << 'x'
       << chart_.cap_angular << ":k" << chart_.origin_grading;
    return os.str();
  }

  /// Calls visit(pair, weight_mu, weight_dm) for every w node attached to z node iz.
  /// weight_mu is the d mu weight, weight_dm the dm(z) dm(w) weight.
  template <class Visit>
  void for_each_w(std::size_t iz, Visit&& visit) const {
    const DiscNode& zn = rule_z_.node(iz);
    const std::size_t ring = iz / rule_z_.angular_count();
    const double delta = zn.dist;
    const double s = delta * (2.0 - delta);  // 1 - |z|^2
    const double r = 1.0 - delta;
    const complex xi = zn.z / std::abs(zn.z);
    const complex zc = std::conj(zn.z);
    const double base_mu = zn.weight / (s * s);

    const auto emit = [&](complex zeta, complex c, double one_minus_zeta2, double wz) {
      const complex dz = zeta * s / c;
      const complex w = zn.z - dz;
      const double c2 = std::norm(c);
      const double one_minus_w2 = s * one_minus_zeta2 / c2;
      const double dist_w = one_minus_w2 / (1.0 + std::abs(w));
      visit(PairNode{zn.z, w, dz, delta, dist_w}, base_mu * wz, zn.weight * wz * s * s / (c2 * c2));
    };
    for (const detail::CoreNode& n : core_) {
      const complex zeta = xi * n.zeta;
      emit(zeta, 1.0 - zc * zeta, n.one_minus_abs2, n.weight);
    }
    const detail::CapNode* cap = caps_.data() + ring * cap_per_ring_;
    for (std::size_t k = 0; k < cap_per_ring_; ++k) {
      const detail::CapNode& n = cap[k];
      // 1 - conj(z) zeta = 1 - r (1 - eta) = delta + r eta.
      emit(xi * (1.0 - n.eta), delta + r * n.eta, n.one_minus_abs2, n.weight);
    }
  }

 private:
  void build_core() {
    const GaussLegendreRule gl = gauss_legendre(chart_.core_radial);
    const double k = chart_.origin_grading;
    const double R = detail::kCoreOuter;
    const double dpsi = 2.0 * std::numbers::pi / static_cast<double>(chart_.core_angular);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double u = 0.5 * (gl.nodes[i] + 1.0);
      const double rho = R * std::pow(u, k);
      const double drho = R * k * std::pow(u, k - 1.0) * 0.5 * gl.weights[i];
      const double wr = rho * drho * detail::smooth_cutoff(rho, detail::kCoreInner, detail::kCoreOuter) * dpsi;
      if (wr == 0.0) continue;
      for (std::size_t j = 0; j < chart_.core_angular; ++j) {
        const double psi = (static_cast<double>(j) + 0.5) * dpsi;
        core_.push_back({std::polar(rho, psi), 1.0 - rho * rho, wr});
      }
    }
  }

  // Cap chart: zeta = xi (1 - t e^{i theta}), theta in (-pi/2, pi/2),
  // t in (t_lo, 2 cos theta), Gauss-Legendre in log t. The piece t < t_lo
  // maps to a w-neighbourhood of -xi of relative size 1e-4 and is dropped.
  void build_caps() {
    const GaussLegendreRule gt = gauss_legendre(chart_.cap_radial);
    const GaussLegendreRule ga = gauss_legendre(chart_.cap_angular);
    cap_per_ring_ = chart_.cap_radial * chart_.cap_angular;
    caps_.reserve(rule_z_.ring_count() * cap_per_ring_);
    for (std::size_t ring = 0; ring < rule_z_.ring_count(); ++ring) {
      const double t_lo = 1e-4 * std::min(1.0, rule_z_.ring_dist(ring));
      for (std::size_t a = 0; a < ga.nodes.size(); ++a) {
        const double theta = 0.5 * std::numbers::pi * ga.nodes[a];
        const double wtheta = 0.5 * std::numbers::pi * ga.weights[a];
        const double cth = std::cos(theta);
        const double T = 2.0 * cth;
        const double lo = std::min(t_lo, 0.5 * T);
        const double L0 = std::log(lo), L1 = std::log(T);
        for (std::size_t b = 0; b < gt.nodes.size(); ++b) {
          const double l = L0 + (L1 - L0) * 0.5 * (gt.nodes[b] + 1.0);
          const double dl = (L1 - L0) * 0.5 * gt.weights[b];
          const double t = std::exp(l);
          const complex eta = std::polar(t, theta);
          const double abs_zeta = std::abs(1.0 - eta);
          const double part = 1.0 - detail::smooth_cutoff(abs_zeta, detail::kCoreInner, detail::kCoreOuter);
          // 1 - |1 - eta|^2 = t (2 cos theta - t)
          caps_.push_back({eta, t * (T - t), t * t * dl * wtheta * part});
        }
      }
    }
  }

  DiscRule rule_z_;
  ChartConfig chart_;
  std::vector<detail::CoreNode> core_;
  std::vector<detail::CapNode> caps_;
  std::size_t cap_per_ring_ = 0;
};

/// The default bidisc rule: z on a radial x angular graded disc rule, chart
/// counts derived from the same numbers.
inline BidiscRule make_bidisc_rule(std::size_t radial_count, std::size_t angular_count, double grading_exponent,
                                   double origin_grading = 5.0) {
  return BidiscRule(make_disc_rule(radial_count, angular_count, grading_exponent, half_step_offset(angular_count)),
                    ChartConfig::for_grid(radial_count, angular_count, origin_grading));
}

namespace detail {

template <class G>
double call_pair_integrand(G& g, const PairNode& n) {
  if constexpr (std::is_invocable_v<G&, const PairNode&>)
    return static_cast<double>(g(n));
  else
    return static_cast<double>(g(n.z, n.w));
}

inline EvaluationError non_finite_pair(const char* where, complex z, complex w, double value) {
  std::ostringstream os;
  os.precision(17);
  os << where << ": non-finite integrand value " << value << " at (z, w) = (" << format_point(z) << ", "
     << format_point(w) << ")";
  return EvaluationError(os.str());
}

// dm selects dm dm weights instead of d mu; factor(pair) multiplies.
template <class G, class Factor>
double pair_integral(const char* where, const BidiscRule& rule, G& g, bool dm, Factor&& factor) {
  CompensatedSum outer;
  for (std::size_t iz = 0; iz < rule.rule_z().size(); ++iz) {
    CompensatedSum inner;
    rule.for_each_w(iz, [&](const PairNode& n, double w_mu, double w_dm) {
      const double v = call_pair_integrand(g, n);
      if (!std::isfinite(v)) throw non_finite_pair(where, n.z, n.w, v);
      inner.add((dm ? w_dm : w_mu) * factor(n) * v);
    });
    outer.add(inner.value());
  }
  const double total = outer.value();
  if (!std::isfinite(total)) throw EvaluationError(std::string(where) + ": non-finite sum");
  return total;
}

}  // namespace detail

/// Double integral of g(z, w) dm(z) dm(w). g takes a PairNode or (z, w).
template <class G>
double integrate_bidisc(const BidiscRule& rule, G&& g) {
  return detail::pair_integral("integrate_bidisc", rule, g, true, [](const PairNode&) { return 1.0; });
}

/// Integral of g against d mu(z, w) = |1 - conj(w) z|^{-4} dm(z) dm(w).
template <class G>
double integrate_mu(const BidiscRule& rule, G&& g) {
  return detail::pair_integral("integrate_mu", rule, g, false, [](const PairNode&) { return 1.0; });
}

/// (1 - |w|)^2 (1 - |a|)^2 / |1 - conj(w) a|^4, the part of d mu_a beyond d mu.
inline double mu_a_w_factor(complex w, double dist_w, const MoebiusPoint& a) {
  const double q = std::norm(1.0 - std::conj(w) * a.a);
  const double da = 1.0 - std::abs(a.a);
  return dist_w * dist_w * da * da / (q * q);
}

/// Integral of g against d mu_a.
template <class G>
double integrate_mu_a(const BidiscRule& rule, const MoebiusPoint& a, G&& g) {
  return detail::pair_integral("integrate_mu_a", rule, g, false,
                               [&a](const PairNode& n) { return mu_a_w_factor(n.w, n.dist_w, a); });
}

/// One summand family for pair sums: the pair value is
///   exp(log_z[i]) * (|f(z_i) - f(w)| + softening)^diff_exponent
/// integrated against d mu (and d mu_a).
struct PairTerm {
  std::vector<double> log_z;
  double diff_exponent = 0.0;
  double softening = 0.0;
};

/// Totals of pair terms: mu[t] and mu_a[t][k] for a_grid[k].
struct PairTotals {
  std::vector<double> mu;
  std::vector<std::vector<double>> mu_a;
};

namespace detail {

// f(z) - f(w) = (z - w) q_z(w) with q_z the quotient of synthetic division of
// f by (x - z); avoids cancellation when w is close to z.
class DividedDifference {
 public:
  explicit DividedDifference(const TaylorFunction& f) : a_(f.coefficients().begin(), f.coefficients().end()) {
    q_.resize(a_.size() > 1 ? a_.size() - 1 : 1);
  }

  void set_z(complex z) {
    const std::size_t n = a_.size() - 1;
    if (n == 0) {
      q_.assign(1, complex{0.0, 0.0});
      return;
    }
    q_.resize(n);
    q_[n - 1] = a_[n];
    for (std::size_t k = n - 1; k >= 1; --k) q_[k - 1] = a_[k] + z * q_[k];
  }

  [[nodiscard]] complex operator()(complex dz, complex w) const {
    double re = q_.back().real(), im = q_.back().imag();
    const double wr = w.real(), wi = w.imag();
    for (std::size_t k = q_.size() - 1; k-- > 0;) {
      const double nr = re * wr - im * wi + q_[k].real();
      im = re * wi + im * wr + q_[k].imag();
      re = nr;
    }
    return dz * complex{re, im};
  }

 private:
  std::vector<complex> a_;
  std::vector<complex> q_;
};

// Terms grouped by (diff_exponent, softening): the w sum is shared.
struct TermClasses {
  std::vector<std::pair<double, double>> keys;  // (exponent, softening)
  std::vector<std::size_t> of_term;
  std::vector<double> softenings;       // distinct softenings of classes with exponent != 0
  std::vector<std::size_t> softening_of;  // per class

  explicit TermClasses(std::span<const PairTerm> terms) : of_term(terms.size()) {
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::pair<double, double> key{terms[t].diff_exponent,
                                          terms[t].diff_exponent == 0.0 ? 0.0 : terms[t].softening};
      std::size_t c = 0;
      while (c < keys.size() && keys[c] != key) ++c;
      if (c == keys.size()) keys.push_back(key);
      of_term[t] = c;
    }
    softening_of.assign(keys.size(), 0);
    for (std::size_t c = 0; c < keys.size(); ++c) {
      if (keys[c].first == 0.0) continue;
      std::size_t e = 0;
      while (e < softenings.size() && softenings[e] != keys[c].second) ++e;
      if (e == softenings.size()) softenings.push_back(keys[c].second);
      softening_of[c] = e;
    }
  }
};

// Stored per-pair data for repeated evaluation (search).
struct PairRecord {
  complex w;
  double abs_df;
  double dist_w;
  double weight_mu;
};

class PairAccumulator {
 public:
  PairAccumulator(const BidiscRule& rule, std::span<const PairTerm> terms, std::span<const MoebiusPoint> a_grid,
                  bool want_mu)
      : rule_(rule), terms_(terms), a_grid_(a_grid), want_mu_(want_mu), classes_(terms) {
    for (const PairTerm& t : terms)
      if (t.log_z.size() != rule.rule_z().size()) throw ConfigError("pair sums: log_z size mismatch");
    const std::size_t nc = classes_.keys.size(), na = a_grid.size();
    inner_mu_.resize(nc);
    inner_a_.resize(nc * na);
    outer_mu_.resize(terms.size());
    outer_a_.resize(terms.size() * na);
    af_.resize(na);
    logd_.resize(classes_.softenings.size());
    for (const MoebiusPoint& a : a_grid) {
      const double da = 1.0 - std::abs(a.a);
      a_re_.push_back(a.a.real());
      a_im_.push_back(a.a.imag());
      a_c_.push_back(da * da);
    }
  }

  void begin_z() {
    std::fill(inner_mu_.begin(), inner_mu_.end(), 0.0);
    std::fill(inner_a_.begin(), inner_a_.end(), 0.0);
  }

  // Inner sums run over one z node's w nodes; every summand is positive, so
  // plain accumulation is accurate there. Outer sums are compensated.
  void add_pair(const complex& w, double abs_df, double dist_w, double weight_mu, complex z) {
    const std::size_t na = a_grid_.size();
    // mu_a_w_factor with the a-only parts hoisted.
    const double wr = w.real(), wi = w.imag(), d2 = dist_w * dist_w;
    for (std::size_t k = 0; k < na; ++k) {
      const double re = 1.0 - (wr * a_re_[k] + wi * a_im_[k]);
      const double im = wr * a_im_[k] - wi * a_re_[k];
      const double q = re * re + im * im;
      af_[k] = d2 * a_c_[k] / (q * q);
    }
    for (std::size_t e = 0; e < classes_.softenings.size(); ++e) logd_[e] = std::log(abs_df + classes_.softenings[e]);
    for (std::size_t c = 0; c < classes_.keys.size(); ++c) {
      const double q = classes_.keys[c].first;
      const double v = q == 0.0 ? weight_mu : weight_mu * std::exp(q * logd_[classes_.softening_of[c]]);
      if (!std::isfinite(v)) throw non_finite_pair("pair sum", z, w, v);
      if (want_mu_) inner_mu_[c] += v;
      double* row = inner_a_.data() + c * na;
      for (std::size_t k = 0; k < na; ++k) row[k] += v * af_[k];
    }
  }

  void end_z(std::size_t iz) {
    const std::size_t na = a_grid_.size();
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      const double lz = terms_[t].log_z[iz];
      const std::size_t c = classes_.of_term[t];
      const double ez = std::exp(lz);
      if (std::isnan(lz) || ez == HUGE_VAL)
        throw non_finite_pair("pair sum", rule_.rule_z().node(iz).z, rule_.rule_z().node(iz).z, ez);
      if (ez == 0.0) continue;
      if (want_mu_) outer_mu_[t].add(ez * inner_mu_[c]);
      for (std::size_t k = 0; k < na; ++k) outer_a_[t * na + k].add(ez * inner_a_[c * na + k]);
    }
  }

  [[nodiscard]] PairTotals totals() const {
    const std::size_t na = a_grid_.size();
    PairTotals out;
    out.mu.resize(terms_.size(), 0.0);
    out.mu_a.assign(terms_.size(), std::vector<double>(na, 0.0));
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      if (want_mu_) out.mu[t] = finite(outer_mu_[t].value());
      for (std::size_t k = 0; k < na; ++k) out.mu_a[t][k] = finite(outer_a_[t * na + k].value());
    }
    return out;
  }

 private:
  static double finite(double v) {
    if (!std::isfinite(v)) throw EvaluationError("pair sum: non-finite total");
    return v;
  }

  const BidiscRule& rule_;
  std::span<const PairTerm> terms_;
  std::span<const MoebiusPoint> a_grid_;
  bool want_mu_;
  TermClasses classes_;
  std::vector<double> inner_mu_, inner_a_;
  std::vector<CompensatedSum> outer_mu_, outer_a_;
  std::vector<double> af_, logd_;
  std::vector<double> a_re_, a_im_, a_c_;
};

}  // namespace detail

/// Integrates every term against d mu (if want_mu) and against d mu_a for
/// each a in a_grid, in one pass over the pairs of the rule.
inline PairTotals pair_sums(const BidiscRule& rule, const TaylorFunction& f, std::span<const PairTerm> terms,
                            std::span<const MoebiusPoint> a_grid, bool want_mu) {
  detail::PairAccumulator acc(rule, terms, a_grid, want_mu);
  detail::DividedDifference dd(f);
  for (std::size_t iz = 0; iz < rule.rule_z().size(); ++iz) {
    dd.set_z(rule.rule_z().node(iz).z);
    acc.begin_z();
    rule.for_each_w(iz, [&](const PairNode& n, double w_mu, double) {
      acc.add_pair(n.w, std::abs(dd(n.dz, n.w)), n.dist_w, w_mu, n.z);
    });
    acc.end_z(iz);
  }
  return acc.totals();
}

/// Pair data of one function on one rule, kept for repeated pair sums with
/// different terms (weight search). Memory is 40 bytes per pair.
class PairCache {
 public:
  PairCache(const BidiscRule& rule, const TaylorFunction& f) : rule_(&rule), per_z_(rule.pairs_per_z()) {
    records_.reserve(rule.pair_count());
    detail::DividedDifference dd(f);
    for (std::size_t iz = 0; iz < rule.rule_z().size(); ++iz) {
      dd.set_z(rule.rule_z().node(iz).z);
      rule.for_each_w(iz, [&](const PairNode& n, double w_mu, double) {
        records_.push_back({n.w, std::abs(dd(n.dz, n.w)), n.dist_w, w_mu});
      });
    }
  }

  [[nodiscard]] PairTotals sums(std::span<const PairTerm> terms, std::span<const MoebiusPoint> a_grid,
                                bool want_mu) const {
    detail::PairAccumulator acc(*rule_, terms, a_grid, want_mu);
    const auto& zs = rule_->rule_z().nodes();
    for (std::size_t iz = 0; iz < zs.size(); ++iz) {
      acc.begin_z();
      const detail::PairRecord* r = records_.data() + iz * per_z_;
      for (std::size_t k = 0; k < per_z_; ++k) acc.add_pair(r[k].w, r[k].abs_df, r[k].dist_w, r[k].weight_mu, zs[iz].z);
      acc.end_z(iz);
    }
    return acc.totals();
  }

  [[nodiscard]] const BidiscRule& rule() const noexcept { return *rule_; }

 private:
  const BidiscRule* rule_;
  std::size_t per_z_;
  std::vector<detail::PairRecord> records_;
};

}  // namespace fsdisc

#endif  // FSDISC_BIDISC_HPP
