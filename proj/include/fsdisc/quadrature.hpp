#ifndef FSDISC_QUADRATURE_HPP
#define FSDISC_QUADRATURE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "fsdisc/errors.hpp"
#include "fsdisc/gauss_legendre.hpp"
#include "fsdisc/summation.hpp"
#include "fsdisc/taylor.hpp"

namespace fsdisc {

/// A quadrature node on the disc. `dist` is 1 - |z| carried at full relative
/// precision; integrands should prefer it over recomputing 1 - abs(z).
struct DiscNode {
  complex z;
  double dist;
  double weight;
};

/// Graded polar product rule for area measure dm on the unit disc.
///
/// Radial nodes come from a Gauss-Legendre rule in u on (0, 1) mapped by
/// r = 1 - (1 - u^k)^g (g = grading exponent, k = origin grading, k = 1 by
/// default), Jacobian folded into the weights. Angular nodes are equispaced,
/// theta_j = offset + 2 pi j / M. Nodes are stored ring by ring, node index =
/// ring * M + j.
class DiscRule {
 public:
  DiscRule(std::size_t radial_count, std::size_t angular_count, double grading_exponent, double angular_offset,
           double origin_grading = 1.0)
      : radial_count_(radial_count),
        angular_count_(angular_count),
        grading_(grading_exponent),
        offset_(angular_offset),
        origin_grading_(origin_grading) {
    if (radial_count < 4 || angular_count < 4)
      throw ConfigError("make_disc_rule: radial_count and angular_count must be >= 4");
    if (!(grading_exponent >= 1.0) || !std::isfinite(grading_exponent))
      throw ConfigError("make_disc_rule: grading exponent must be >= 1");
    if (!(angular_offset >= 0.0) || !(angular_offset < 2.0 * std::numbers::pi))
      throw ConfigError("make_disc_rule: angular offset must lie in [0, 2pi)");
    if (!(origin_grading >= 1.0) || !std::isfinite(origin_grading))
      throw ConfigError("make_disc_rule: origin grading must be >= 1");

    const GaussLegendreRule gl = gauss_legendre(radial_count);
    const double angular_weight = 2.0 * std::numbers::pi / static_cast<double>(angular_count);
    for (std::size_t i = 0; i < radial_count; ++i) {
      const double u = 0.5 * (gl.nodes[i] + 1.0);
      const double one_minus_u = 0.5 * (1.0 - gl.nodes[i]);
      const double wu = 0.5 * gl.weights[i];
      const double t = origin_grading == 1.0 ? u : std::pow(u, origin_grading);
      const double one_minus_t = origin_grading == 1.0 ? one_minus_u : 1.0 - t;
      const double dt = origin_grading == 1.0 ? 1.0 : origin_grading * std::pow(u, origin_grading - 1.0);
      const double dist = std::pow(one_minus_t, grading_exponent);
      // Rings this close to the circle cannot be told apart from |z| = 1.
      if (dist < 1e-13) continue;
      // 1 - (1 - t)^g without cancellation for t near 0.
      const double r = -std::expm1(grading_exponent * std::log1p(-t));
      const double dr = grading_exponent * std::pow(one_minus_t, grading_exponent - 1.0) * dt;
      radii_.push_back(r);
      dists_.push_back(dist);
      ring_weights_.push_back(wu * dr * r * angular_weight);
    }
    nodes_.reserve(radii_.size() * angular_count);
    for (std::size_t i = 0; i < radii_.size(); ++i) {
      for (std::size_t j = 0; j < angular_count; ++j) {
        const double theta = offset_ + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(angular_count);
        nodes_.push_back({std::polar(radii_[i], theta), dists_[i], ring_weights_[i]});
      }
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
  [[nodiscard]] const DiscNode& node(std::size_t i) const noexcept { return nodes_[i]; }
  [[nodiscard]] const std::vector<DiscNode>& nodes() const noexcept { return nodes_; }

  /// Number of rings kept (may be below the requested radial count, see above).
  [[nodiscard]] std::size_t ring_count() const noexcept { return radii_.size(); }
  [[nodiscard]] double ring_radius(std::size_t i) const noexcept { return radii_[i]; }
  [[nodiscard]] double ring_dist(std::size_t i) const noexcept { return dists_[i]; }
  [[nodiscard]] double ring_weight(std::size_t i) const noexcept { return ring_weights_[i]; }

  [[nodiscard]] std::size_t radial_count() const noexcept { return radial_count_; }
  [[nodiscard]] std::size_t angular_count() const noexcept { return angular_count_; }
  [[nodiscard]] double grading_exponent() const noexcept { return grading_; }
  [[nodiscard]] double angular_offset() const noexcept { return offset_; }
  [[nodiscard]] double origin_grading() const noexcept { return origin_grading_; }

  /// Short identifier of the grid, used as provenance in reports.
  [[nodiscard]] std::string provenance() const {
    std::ostringstream os;
    os << "disc:" << radial_count_ << 'x' << angular_count_ << ":g" << grading_;
    if (origin_grading_ != 1.0) os << ":k" << origin_grading_;
    os << ":o" << offset_ * static_cast<double>(angular_count_) / std::numbers::pi << "pi/M";
    return os.str();
  }

 private:
  std::size_t radial_count_;
  std::size_t angular_count_;
  double grading_;
  double offset_;
  double origin_grading_;
  std::vector<double> radii_;
  std::vector<double> dists_;
  std::vector<double> ring_weights_;
  std::vector<DiscNode> nodes_;
};

inline DiscRule make_disc_rule(std::size_t radial_count, std::size_t angular_count, double grading_exponent,
                               double angular_offset, double origin_grading = 1.0) {
  return DiscRule(radial_count, angular_count, grading_exponent, angular_offset, origin_grading);
}

/// Half an angular step; the default offset for single-disc rules.
inline double half_step_offset(std::size_t angular_count) {
  return std::numbers::pi / static_cast<double>(angular_count);
}

namespace detail {

template <class G>
double call_disc_integrand(G& g, const DiscNode& n) {
  if constexpr (std::is_invocable_v<G&, const DiscNode&>)
    return static_cast<double>(g(n));
  else
    return static_cast<double>(g(n.z));
}

inline EvaluationError non_finite_at(const char* where, complex z, double value) {
  std::ostringstream os;
  os.precision(17);
  os << where << ": non-finite integrand value " << value << " at node z = " << format_point(z);
  return EvaluationError(os.str());
}

}  // namespace detail

/// Sum of weight * g(node). `g` takes a DiscNode or a complex point.
template <class G>
double integrate_disc(const DiscRule& rule, G&& g) {
  CompensatedSum acc;
  for (const DiscNode& n : rule.nodes()) {
    const double v = detail::call_disc_integrand(g, n);
    if (!std::isfinite(v)) throw detail::non_finite_at("integrate_disc", n.z, v);
    acc.add(n.weight * v);
  }
  return acc.value();
}

/// Nontangential approach region at a boundary point xi:
/// { z : |z - xi| < aperture * (1 - |z|) }.
struct StolzRegion {
  complex xi;
  double aperture;

  static StolzRegion make(complex xi, double aperture) {
    if (std::abs(std::abs(xi) - 1.0) > 1e-14) throw DomainError("StolzRegion: |xi| must equal 1");
    if (!(aperture > 1.0)) throw DomainError("StolzRegion: aperture must exceed 1");
    return {xi, aperture};
  }
};

/// Membership with 1 - |z| supplied by the caller (exact on rule nodes).
inline bool stolz_contains(const StolzRegion& region, complex z, double dist) noexcept {
  return std::abs(z - region.xi) < region.aperture * dist;
}

inline bool stolz_contains(const StolzRegion& region, complex z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("stolz_contains: z must lie in the unit disc");
  return stolz_contains(region, z, 1.0 - std::abs(z));
}

template <class G>
double integrate_stolz(const DiscRule& rule, const StolzRegion& region, G&& g) {
  CompensatedSum acc;
  for (const DiscNode& n : rule.nodes()) {
    if (!stolz_contains(region, n.z, n.dist)) continue;
    const double v = detail::call_disc_integrand(g, n);
    if (!std::isfinite(v)) throw detail::non_finite_at("integrate_stolz", n.z, v);
    acc.add(n.weight * v);
  }
  return acc.value();
}

/// Points e^{2 pi i k / n}, k = 0..n-1.
inline std::vector<complex> circle_nodes(std::size_t angular_count) {
  std::vector<complex> xs(angular_count);
  for (std::size_t k = 0; k < angular_count; ++k)
    xs[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(angular_count));
  return xs;
}

/// Trapezoidal mean of h over the circle (normalized measure, total mass 1).
template <class H>
double integrate_circle(std::size_t angular_count, H&& h) {
  if (angular_count < 4) throw ConfigError("integrate_circle: angular_count must be >= 4");
  CompensatedSum acc;
  for (const complex& xi : circle_nodes(angular_count)) {
    const double v = static_cast<double>(h(xi));
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "integrate_circle: non-finite value at xi = " << detail::format_point(xi);
      throw EvaluationError(os.str());
    }
    acc.add(v);
  }
  return acc.value() / static_cast<double>(angular_count);
}

}  // namespace fsdisc

#endif  // FSDISC_QUADRATURE_HPP
