#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "fsdisc/bidisc.hpp"
#include "fsdisc/norms.hpp"

namespace {

using fsdisc::BidiscRule;
using fsdisc::complex;
using fsdisc::MoebiusPoint;
using fsdisc::PairNode;
constexpr double pi = std::numbers::pi;

// Reference values below come from tests/oracles/pair_integrals.py (1D/2D
// radial reductions computed with scipy).
constexpr double kMuA0Total = 3.81257252662;     // int int d mu_0 = 2 pi^2 (ln 2 - 1/2)
constexpr double kMuAHalfTotal = 1.54381600076;  // int int d mu_a, |a| = 0.5
constexpr double kMuSeparable = 0.18988462186;   // int int (1-|z|)^2 (1-|w|)^3 d mu
constexpr double kT0 = 2.65849658598;            // int int (1-|z|)^0.75 |z-w|^2.25 d mu
constexpr double kT1 = 8.85345532717;            // int int (1-|z|)^4.8 |z-w|^-1.8 d mu
constexpr double kT2 = 1.56811317879;            // int int (1-|z|)^3 d mu

const BidiscRule& rule() {
  static const BidiscRule r = fsdisc::make_bidisc_rule(48, 64, 3.0);
  return r;
}

const BidiscRule& fine_rule() {
  static const BidiscRule r = fsdisc::make_bidisc_rule(96, 128, 3.0);
  return r;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(BidiscRule, Shape) {
  const BidiscRule& r = rule();
  EXPECT_EQ(r.diagonal_policy(), fsdisc::DiagonalPolicy::moebius_chart);
  EXPECT_EQ(r.pairs_per_z(), 12u * 16u + 40u * 24u);
  EXPECT_EQ(r.pair_count(), r.rule_z().size() * r.pairs_per_z());
  EXPECT_EQ(r.provenance(), "bidisc:48x64:g3:chart12x16+40x24:k5");
}

TEST(BidiscRule, PairWeightsNonnegativeAndPointsDistinct) {
  const BidiscRule& r = rule();
  for (std::size_t iz = 0; iz < r.rule_z().size(); iz += 97) {
    r.for_each_w(iz, [&](const PairNode& n, double w_mu, double w_dm) {
      // Cap nodes inside the core cutoff carry weight exactly 0.
      ASSERT_GE(w_mu, 0.0);
      ASSERT_GE(w_dm, 0.0);
      ASSERT_EQ(w_mu == 0.0, w_dm == 0.0);
      ASSERT_LT(std::abs(n.w), 1.0);
      ASSERT_GT(std::abs(n.dz), 0.0);
      ASSERT_LT(std::abs(n.dz - (n.z - n.w)), 1e-12);
    });
  }
}

TEST(IntegrateBidisc, ProductClosedForms) {
  EXPECT_LT(rel(fsdisc::integrate_bidisc(rule(), [](complex, complex) { return 1.0; }), pi * pi), 5e-4);
  EXPECT_LT(rel(fsdisc::integrate_bidisc(rule(), [](complex z, complex w) { return std::norm(z) * std::norm(w); }),
                pi * pi / 4),
            5e-4);
}

TEST(IntegrateBidisc, InverseDistanceStableUnderRefinement) {
  const auto g = [](const PairNode& n) { return 1.0 / std::abs(n.dz); };
  const double coarse = fsdisc::integrate_bidisc(rule(), g);
  const double fine = fsdisc::integrate_bidisc(fine_rule(), g);
  EXPECT_TRUE(std::isfinite(coarse));
  EXPECT_LT(rel(coarse, fine), 3e-2);
}

TEST(IntegrateBidisc, NonFiniteNamesPair) {
  try {
    fsdisc::integrate_bidisc(rule(), [](complex, complex) { return std::nan(""); });
    FAIL() << "expected EvaluationError";
  } catch (const fsdisc::EvaluationError& e) {
    EXPECT_NE(std::string(e.what()).find("(z, w)"), std::string::npos);
  }
}

TEST(IntegrateMuA, TotalMass) {
  const auto one = [](complex, complex) { return 1.0; };
  EXPECT_LT(rel(fsdisc::integrate_mu_a(rule(), MoebiusPoint{0.0}, one), kMuA0Total), 1e-3);
  EXPECT_LT(rel(fsdisc::integrate_mu_a(rule(), MoebiusPoint{0.5}, one), kMuAHalfTotal), 1e-3);
  EXPECT_EQ(fsdisc::integrate_mu_a(rule(), MoebiusPoint{0.3}, [](complex, complex) { return 0.0; }), 0.0);
}

TEST(IntegrateMuA, DependsOnlyOnModulus) {
  const auto one = [](complex, complex) { return 1.0; };
  const double ref = fsdisc::integrate_mu_a(rule(), MoebiusPoint{0.5}, one);
  for (complex a : {complex(0.0, 0.5), std::polar(0.5, 0.7), std::polar(0.5, 2.0)})
    EXPECT_LT(rel(fsdisc::integrate_mu_a(rule(), MoebiusPoint{a}, one), ref), 1e-4);
}

TEST(IntegrateMu, ClosedFormsAndOracles) {
  EXPECT_EQ(fsdisc::integrate_mu(rule(), [](complex, complex) { return 0.0; }), 0.0);
  const auto tempered = [](const PairNode& n) { return std::pow(n.dist_z, 2) * std::pow(n.dist_w, 3); };
  EXPECT_LT(rel(fsdisc::integrate_mu(rule(), tempered), kMuSeparable), 5e-3);
  // z integral first: int (1-|w|^2)^2 pi/(1-|w|^2)^2 dm(w) = pi^2.
  const auto reduced = [](const PairNode& n) { return std::pow(n.dist_w * (2.0 - n.dist_w), 2); };
  EXPECT_LT(rel(fsdisc::integrate_mu(rule(), reduced), pi * pi), 1e-3);
}

TEST(IntegrateMu, DiagonalPowers) {
  const auto T = [](double e, double q) {
    return [=](const PairNode& n) { return std::pow(n.dist_z, e) * std::pow(std::abs(n.dz), q); };
  };
  EXPECT_LT(rel(fsdisc::integrate_mu(rule(), T(0.75, 2.25)), kT0), 1e-3);
  EXPECT_LT(rel(fsdisc::integrate_mu(rule(), T(4.8, -1.8)), kT1), 2e-3);
  EXPECT_LT(rel(fsdisc::integrate_mu(rule(), T(3.0, 0.0)), kT2), 3e-3);
}

TEST(IntegrateMu, RefinementConverges) {
  const auto g = [](const PairNode& n) { return std::pow(n.dist_z, 4.8) * std::pow(std::abs(n.dz), -1.8); };
  const auto tempered = [](const PairNode& n) { return std::pow(n.dist_z, 2) * std::pow(n.dist_w, 3); };
  EXPECT_LT(rel(fsdisc::integrate_mu(fine_rule(), g), kT1), 2e-4);
  EXPECT_LT(rel(fsdisc::integrate_mu(fine_rule(), tempered), kMuSeparable), 1e-3);
  EXPECT_LT(rel(fsdisc::integrate_bidisc(fine_rule(), [](complex, complex) { return 1.0; }), pi * pi), 1e-4);
}

TEST(PairSums, MatchDirectIntegration) {
  const fsdisc::TaylorFunction f({0.0, 1.0, 0.3, -0.2});
  const fsdisc::NodeMagnitudes zn(f, rule().rule_z());
  const std::vector<fsdisc::PairTerm> terms{fsdisc::detail::kwon_pair_term(zn, rule().rule_z(), 3.0, 1.5),
                                            fsdisc::detail::kwon_pair_term(zn, rule().rule_z(), 3.0, 4.8)};
  const std::vector<MoebiusPoint> a_grid{MoebiusPoint{0.0}, MoebiusPoint{complex(0.3, 0.4)}};
  const fsdisc::PairTotals sums = fsdisc::pair_sums(rule(), f, terms, a_grid, true);
  const fsdisc::TaylorFunction df = fsdisc::derivative(f);
  for (std::size_t t = 0; t < 2; ++t) {
    const double beta = t == 0 ? 1.5 : 4.8;
    const auto g = [&](const PairNode& n) {
      // f(z) - f(w) = dz * sum_n a_n sum_k z^k w^(n-1-k), free of cancellation near the diagonal.
      complex q = 0.0;
      for (std::size_t m = 1; m <= f.degree(); ++m) {
        complex s = 0.0;
        for (std::size_t k = 0; k < m; ++k)
          s += std::pow(n.z, static_cast<double>(k)) * std::pow(n.w, static_cast<double>(m - 1 - k));
        q += f.coefficient(m) * s;
      }
      return std::pow(std::abs(n.dz * q), 3.0 - beta) *
             std::pow(std::abs(df.evaluate_unchecked(n.z)) * n.dist_z, beta);
    };
    EXPECT_LT(rel(sums.mu[t], fsdisc::integrate_mu(rule(), g)), 1e-6);
    for (std::size_t k = 0; k < a_grid.size(); ++k)
      EXPECT_LT(rel(sums.mu_a[t][k], fsdisc::integrate_mu_a(rule(), a_grid[k], g)), 1e-6);
  }
  const fsdisc::PairCache cache(rule(), f);
  const fsdisc::PairTotals cached = cache.sums(terms, a_grid, true);
  for (std::size_t t = 0; t < 2; ++t) {
    EXPECT_LT(rel(cached.mu[t], sums.mu[t]), 1e-12);
    for (std::size_t k = 0; k < a_grid.size(); ++k) EXPECT_LT(rel(cached.mu_a[t][k], sums.mu_a[t][k]), 1e-12);
  }
}

TEST(MoebiusPoint, Validation) {
  EXPECT_THROW(MoebiusPoint::make(1.0), fsdisc::DomainError);
  EXPECT_EQ(fsdisc::default_a_grid().size(), 25u);
  EXPECT_EQ(fsdisc::doubled_a_grid().size(), 97u);
}

TEST(ChartConfig, OriginGradingFollowsAlpha) {
  EXPECT_DOUBLE_EQ(fsdisc::chart_origin_grading(1.8), 5.0);
  EXPECT_DOUBLE_EQ(fsdisc::chart_origin_grading(1.2), 1.25);
  EXPECT_DOUBLE_EQ(fsdisc::chart_origin_grading(0.5), 1.0);
}

}  // namespace
