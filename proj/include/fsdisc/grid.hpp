#ifndef FSDISC_GRID_HPP
#define FSDISC_GRID_HPP

#include <algorithm>
#include <cstddef>
#include <memory>

#include <nlohmann/json.hpp>

#include "fsdisc/bidisc.hpp"
#include "fsdisc/dual.hpp"
#include "fsdisc/errors.hpp"
#include "fsdisc/quadrature.hpp"

namespace fsdisc {

/// {"radial": n, "angular": m, "grading": g, "bidisc": {"radial": n2, "angular": m2}, "circle": c}
struct GridConfig {
  std::size_t radial = 96;
  std::size_t angular = 128;
  double grading = 3.0;
  std::size_t bidisc_radial = 48;
  std::size_t bidisc_angular = 64;
  /// Circle nodes for Hardy means and Stolz-cone functionals.
  std::size_t circle = 256;

  /// Every count multiplied by k.
  [[nodiscard]] GridConfig scaled(std::size_t k) const {
    if (k < 1) throw ConfigError("grid scale must be >= 1");
    GridConfig g = *this;
    g.radial *= k;
    g.angular *= k;
    g.bidisc_radial *= k;
    g.bidisc_angular *= k;
    g.circle *= k;
    return g;
  }

  /// `min_angular` raises the angular count (never lowers it).
  [[nodiscard]] DiscRule disc_rule(double origin_grading = 1.0, std::size_t min_angular = 0) const {
    const std::size_t m = std::max(angular, min_angular);
    return make_disc_rule(radial, m, grading, half_step_offset(m), origin_grading);
  }

  /// `min_angular` raises the angular count of the z rule only; the w chart
  /// keeps the counts derived from the nominal grid.
  [[nodiscard]] BidiscRule bidisc_rule(double origin_grading = 5.0, std::size_t min_angular = 0) const {
    const std::size_t m = std::max(bidisc_angular, min_angular);
    return BidiscRule(make_disc_rule(bidisc_radial, m, grading, half_step_offset(m)),
                      ChartConfig::for_grid(bidisc_radial, bidisc_angular, origin_grading));
  }

  /// Rules for the dual problem of a function of degree `degree`. Origin
  /// gradings follow alpha (see chart_origin_grading); the z rules get at
  /// least 2 * degree angles so rings do not alias the top coefficients.
  [[nodiscard]] DualRules dual_rules(const DualParams& params, std::vector<MoebiusPoint> a_grid,
                                     std::size_t degree = 0) const {
    DualRules r;
    r.circle_count = circle;
    r.a_grid = std::move(a_grid);
    const std::size_t min_angular = 2 * degree;
    if (is_two_point(params.theorem))
      r.bidisc = std::make_shared<const BidiscRule>(bidisc_rule(chart_origin_grading(params.alpha), min_angular));
    else
      // Dual integrands carry |F|^{-s alpha}, singular at the zero of F at 0.
      r.disc = std::make_shared<const DiscRule>(disc_rule(chart_origin_grading(params.alpha), min_angular));
    return r;
  }
};

inline GridConfig grid_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("grid config must be a JSON object");
  GridConfig g;
  try {
    g.radial = j.value("radial", g.radial);
    g.angular = j.value("angular", g.angular);
    g.grading = j.value("grading", g.grading);
    g.circle = j.value("circle", g.circle);
    if (j.contains("bidisc")) {
      const auto& b = j.at("bidisc");
      g.bidisc_radial = b.value("radial", g.bidisc_radial);
      g.bidisc_angular = b.value("angular", g.bidisc_angular);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("grid config: ") + e.what());
  }
  if (g.radial < 4 || g.angular < 4 || g.bidisc_radial < 4 || g.bidisc_angular < 4 || g.circle < 4)
    throw ConfigError("grid config: node counts must be >= 4");
  if (!(g.grading >= 1.0)) throw ConfigError("grid config: grading must be >= 1");
  return g;
}

inline nlohmann::json to_json(const GridConfig& g) {
  return {{"radial", g.radial},
          {"angular", g.angular},
          {"grading", g.grading},
          {"bidisc", {{"radial", g.bidisc_radial}, {"angular", g.bidisc_angular}}},
          {"circle", g.circle}};
}

}  // namespace fsdisc

#endif  // FSDISC_GRID_HPP
