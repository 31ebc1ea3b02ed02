#ifndef FSDISC_SEARCH_HPP
#define FSDISC_SEARCH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsdisc/dual.hpp"
#include "fsdisc/errors.hpp"

namespace fsdisc {

struct SearchConfig {
  /// Start exponents; empty (or "paper") means the explicit test weight ((0, 0, 0) for S1).
  std::optional<WeightExponents> start;
  std::vector<double> epsilons{0.0, 1e-6, 1e-3};
  std::size_t budget = 200;
  std::uint64_t seed = 7;
};

/// {"start": "paper" | {"u", "v", "s"}, "epsilons": [...], "budget": n, "seed": n}
inline SearchConfig search_config_from_json(const nlohmann::json& j) {
  SearchConfig c;
  if (!j.is_object()) throw ConfigError("search config must be a JSON object");
  try {
    if (j.contains("start")) {
      const auto& s = j.at("start");
      if (s.is_string()) {
        if (s.get<std::string>() != "paper") throw ConfigError("search config: start must be \"paper\" or an object");
      } else {
        c.start = WeightExponents{s.value("u", 0.0), s.value("v", 0.0), s.value("s", 0.0)};
      }
    }
    if (j.contains("epsilons")) c.epsilons = j.at("epsilons").get<std::vector<double>>();
    c.budget = j.value("budget", c.budget);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("search config: ") + e.what());
  }
  if (c.budget < 1) throw ConfigError("search config: budget must be >= 1");
  if (c.epsilons.empty()) throw ConfigError("search config: epsilons must be non-empty");
  for (double e : c.epsilons)
    if (!(e >= 0.0) || !std::isfinite(e)) throw ConfigError("search config: epsilons must be >= 0");
  return c;
}

struct SearchResult {
  /// Best feasible normalized weight; empty when no candidate was feasible.
  std::optional<DualEvaluation> best;
  std::size_t evaluations = 0;
  std::size_t feasible_candidates = 0;
  /// Why nothing was found (empty on success).
  std::string failure;
};

/// Start exponents of the search for a theorem.
inline WeightExponents default_search_start(const TaylorFunction& F, const DualParams& params) {
  switch (params.theorem) {
    case Theorem::S1_hardy: return {0.0, 0.0, 0.0};
    case Theorem::S2_bergman: return test_weight_S2(F, params).exponents;
    default: return test_weight_S3(F, params).exponents;
  }
}

/// True when every power in the constraint and dual integrands is locally
/// integrable: at the circle, at zeros of F and F', and on the diagonal.
inline bool exponents_admissible(const WeightExponents& e, const DualParams& d) {
  if (d.theorem == Theorem::S1_hardy) return d.s - 1.0 - e.v > -1.0 && d.s - e.u > -2.0 && e.s > -2.0;
  const double a = d.alpha, ac = d.alpha_conj, p = d.p;
  const double c_df = ac * (p - 1.0 - e.u), c_dist = ac * (p - e.v), c_r = e.s * ac;
  const double d_df = a * (1.0 + e.u), d_dist = a * e.v, d_r = -e.s * a;
  if (c_df <= -2.0 || d_df <= -2.0 || c_r <= -2.0 || d_r <= -2.0) return false;
  if (!is_two_point(d.theorem)) return c_dist > -1.0 && d_dist > -1.0;
  // Near the diagonal the w integral behaves like (1-|z|)^{min(q, 2) - 2}.
  const auto ok = [](double dist_exp, double q) { return dist_exp > -1.0 && dist_exp + std::min(q - 2.0, 0.0) > -1.0; };
  return ok(c_dist, c_r) && ok(d_dist, d_r);
}

namespace detail {

class SearchRun {
 public:
  SearchRun(const DualProblem& problem, std::size_t budget) : problem_(problem), budget_(budget) {}

  [[nodiscard]] bool exhausted() const noexcept { return used_ >= budget_; }
  [[nodiscard]] std::size_t used() const noexcept { return used_; }

  // log of the normalized dual, +inf when infeasible. Counts against the budget.
  double objective(const std::array<double, 3>& x, double eps) {
    ++used_;
    const WeightExponents e{x[0], x[1], x[2]};
    if (!exponents_admissible(e, problem_.params())) return inf();
    const Arity arity = is_two_point(problem_.params().theorem) ? Arity::two_point : Arity::one_point;
    try {
      const DualEvaluation ev = problem_.normalize(WeightSpec::make(arity, e, eps));
      if (!ev.feasible || !(ev.dual_value > 0.0) || !std::isfinite(ev.dual_value)) return inf();
      ++feasible_;
      if (!best_ || ev.dual_value < best_->dual_value) best_ = ev;
      return std::log(ev.dual_value);
    } catch (const std::runtime_error&) {
      return inf();
    } catch (const std::invalid_argument&) {
      return inf();
    }
  }

  // Nelder-Mead from x0 until `stop` evaluations have been used in total.
  void nelder_mead(std::array<double, 3> x0, double eps, std::size_t stop, std::mt19937_64& rng) {
    using P = std::array<double, 3>;
    struct Vertex {
      P x;
      double f;
    };
    std::vector<Vertex> simplex;
    if (used_ >= stop) return;
    simplex.push_back({x0, objective(x0, eps)});
    std::uniform_int_distribution<int> coin(0, 1);
    for (std::size_t i = 0; i < 3 && used_ < stop; ++i) {
      P x = x0;
      x[i] += coin(rng) ? kStep : -kStep;
      simplex.push_back({x, objective(x, eps)});
    }
    if (simplex.size() < 4) return;
    const auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    while (used_ < stop) {
      std::stable_sort(simplex.begin(), simplex.end(), by_value);
      P c{0.0, 0.0, 0.0};
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) c[k] += simplex[i].x[k] / 3.0;
      const auto along = [&](double t) {
        P x;
        for (std::size_t k = 0; k < 3; ++k) x[k] = c[k] + t * (simplex[3].x[k] - c[k]);
        return x;
      };
      const P xr = along(-1.0);
      const double fr = objective(xr, eps);
      if (fr < simplex[0].f) {
        if (used_ >= stop) {
          simplex[3] = {xr, fr};
          break;
        }
        const P xe = along(-2.0);
        const double fe = objective(xe, eps);
        simplex[3] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        continue;
      }
      if (fr < simplex[2].f) {
        simplex[3] = {xr, fr};
        continue;
      }
      if (used_ >= stop) break;
      const bool outside = fr < simplex[3].f;
      const P xc = along(outside ? -0.5 : 0.5);
      const double fc = objective(xc, eps);
      if (fc < std::min(fr, simplex[3].f)) {
        simplex[3] = {xc, fc};
        continue;
      }
      for (std::size_t i = 1; i < 4 && used_ < stop; ++i) {
        for (std::size_t k = 0; k < 3; ++k) simplex[i].x[k] = simplex[0].x[k] + 0.5 * (simplex[i].x[k] - simplex[0].x[k]);
        simplex[i].f = objective(simplex[i].x, eps);
      }
    }
  }

  [[nodiscard]] const std::optional<DualEvaluation>& best() const noexcept { return best_; }
  [[nodiscard]] std::size_t feasible() const noexcept { return feasible_; }

 private:
  static constexpr double kStep = 0.25;
  static double inf() { return std::numeric_limits<double>::infinity(); }

  const DualProblem& problem_;
  std::size_t budget_;
  std::size_t used_ = 0;
  std::size_t feasible_ = 0;
  std::optional<DualEvaluation> best_;
};

}  // namespace detail

/// Derivative-free search for the smallest normalized dual over the weight
/// family. Each softening gets an equal share of the budget (the first takes
/// the remainder) and starts from the best exponents found so far; the first
/// evaluation is the start point with the first softening.
inline SearchResult infimum_search(const DualProblem& problem, const SearchConfig& config) {
  if (config.budget < 1) throw ConfigError("infimum_search: budget must be >= 1");
  if (config.epsilons.empty()) throw ConfigError("infimum_search: epsilons must be non-empty");
  const WeightExponents s0 = config.start ? *config.start : default_search_start(problem.function(), problem.params());
  std::mt19937_64 rng(config.seed);
  detail::SearchRun run(problem, config.budget);
  const std::size_t k = config.epsilons.size();
  const std::size_t share = config.budget / k;
  std::size_t stop = config.budget - share * (k - 1);
  std::array<double, 3> x{s0.u, s0.v, s0.s};
  for (std::size_t i = 0; i < k; ++i) {
    run.nelder_mead(x, config.epsilons[i], stop, rng);
    if (run.best()) {
      const WeightExponents& e = run.best()->weight.exponents;
      x = {e.u, e.v, e.s};
    }
    stop += share;
  }
  SearchResult r;
  r.best = run.best();
  r.evaluations = run.used();
  r.feasible_candidates = run.feasible();
  if (!r.best) r.failure = "no feasible candidate within budget " + std::to_string(config.budget);
  return r;
}

}  // namespace fsdisc

#endif  // FSDISC_SEARCH_HPP
