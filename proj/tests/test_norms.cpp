#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "fsdisc/corpus.hpp"
#include "fsdisc/norms.hpp"

namespace {

using fsdisc::BidiscRule;
using fsdisc::complex;
using fsdisc::DiscRule;
using fsdisc::MoebiusPoint;
using fsdisc::TaylorFunction;
constexpr double pi = std::numbers::pi;

const DiscRule& disc() {
  static const DiscRule r = fsdisc::make_disc_rule(96, 128, 3.0, fsdisc::half_step_offset(128));
  return r;
}

const BidiscRule& bidisc() {
  static const BidiscRule r = fsdisc::make_bidisc_rule(48, 64, 3.0);
  return r;
}

const BidiscRule& fine_bidisc() {
  static const BidiscRule r = fsdisc::make_bidisc_rule(96, 128, 3.0);
  return r;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const TaylorFunction z = TaylorFunction::monomial(1);
const TaylorFunction zero;

TEST(Bloch, Examples) {
  EXPECT_DOUBLE_EQ(fsdisc::bloch_norm(z, disc()).value, 1.0);
  EXPECT_NEAR(fsdisc::bloch_norm(TaylorFunction::monomial(2), disc()).value, 0.5, 1e-3);
  EXPECT_DOUBLE_EQ(fsdisc::bloch_norm(fsdisc::scale(z, 3.0), disc()).value, 3.0);
  EXPECT_LE(fsdisc::bloch_norm(TaylorFunction::monomial(2), disc()).value, 0.5);
}

TEST(Bp, Examples) {
  EXPECT_LT(rel(fsdisc::bp_norm_p(z, 2.0, disc()).value, pi), 1e-6);
  EXPECT_EQ(fsdisc::bp_norm_p(zero, 2.0, disc()).value, 0.0);
  EXPECT_LT(rel(fsdisc::bp_norm_p(z, 3.0, disc()).value, pi / 3), 1e-6);
  EXPECT_THROW(fsdisc::bp_norm_p(z, 1.0, disc()), fsdisc::DomainError);
}

TEST(Bergman, Examples) {
  EXPECT_LT(rel(fsdisc::bergman_norm_p(z, 2.0, disc()).value, pi / 2), 1e-6);
  EXPECT_LT(rel(fsdisc::bergman_norm_p(z, 3.0, disc()).value, 2 * pi / 5), 1e-6);
  EXPECT_EQ(fsdisc::bergman_norm_p(zero, 2.0, disc()).value, 0.0);
}

TEST(Hardy, Examples) {
  EXPECT_NEAR(fsdisc::hardy_norm_p(z, 4.0).value, 1.0, 1e-9);
  EXPECT_LT(rel(fsdisc::hardy_norm_p(TaylorFunction({0.0, 1.0, 0.0, 2.0}), 2.0).value, 5.0), 1e-6);
  EXPECT_EQ(fsdisc::hardy_norm_p(zero, 2.0).value, 0.0);
}

TEST(Hardy, ParsevalOverPolynomialCorpus) {
  for (const auto& e : fsdisc::make_corpus(fsdisc::CorpusConfig::defaults())) {
    if (!e.polynomial) continue;
    EXPECT_LT(rel(fsdisc::hardy_norm_p(e.function, 2.0).value, fsdisc::coefficient_energy(e.function)), 1e-6)
        << e.label;
  }
}

TEST(Lusin, ZeroAndRotation) {
  EXPECT_EQ(fsdisc::lusin_functional(zero, 2.0, 1.0, 2.0, disc(), 128).value, 0.0);
  const double a = fsdisc::lusin_functional(z, 2.0, 1.0, 2.0, disc(), 128).value;
  const double b = fsdisc::lusin_functional(fsdisc::rotate(z, 0.77), 2.0, 1.0, 2.0, disc(), 128).value;
  EXPECT_GT(a, 0.0);
  EXPECT_LT(rel(b, a), 1e-10);
}

TEST(KwonAst, Examples) {
  const TaylorFunction F({0.0, 0.4, complex(0.1, -0.3), 0.2});
  EXPECT_EQ(fsdisc::kwon_ast_rhs(F, 3.0, 0.0, disc()).value, fsdisc::bergman_norm_p(F, 3.0, disc()).value);
  EXPECT_LT(rel(fsdisc::kwon_ast_rhs(z, 2.0, 2.0, disc()).value, pi / 6), 1e-6);
  EXPECT_LT(rel(fsdisc::kwon_ast_rhs(z, 2.0, 1.0, disc()).value, pi / 6), 1e-6);
}

TEST(KwonAst, Errors) {
  EXPECT_THROW(fsdisc::kwon_ast_rhs(z, 2.0, -0.1, disc()), fsdisc::DomainError);
  EXPECT_THROW(fsdisc::kwon_ast_rhs(z, 2.0, 4.0, disc()), fsdisc::DomainError);
  EXPECT_THROW(fsdisc::kwon_ast_rhs(TaylorFunction({1.0, 1.0}), 2.0, 1.0, disc()), fsdisc::DomainError);
}

TEST(ScalingLaws, SingleDisc) {
  const TaylorFunction F({0.0, 0.4, complex(0.1, -0.3), 0.2});
  const complex lambda(1.3, -0.8);
  const double m = std::abs(lambda);
  const TaylorFunction G = fsdisc::scale(F, lambda);
  EXPECT_LT(rel(fsdisc::bergman_norm_p(G, 2.5, disc()).value, std::pow(m, 2.5) * fsdisc::bergman_norm_p(F, 2.5, disc()).value), 1e-10);
  EXPECT_LT(rel(fsdisc::bloch_norm(G, disc()).value, m * fsdisc::bloch_norm(F, disc()).value), 1e-10);
  EXPECT_LT(rel(fsdisc::kwon_ast_rhs(G, 3.0, 1.5, disc()).value, std::pow(m, 3.0) * fsdisc::kwon_ast_rhs(F, 3.0, 1.5, disc()).value), 1e-10);
}

TEST(KwonBloch, ZeroAndHomogeneity) {
  const std::vector<MoebiusPoint> grid{MoebiusPoint{0.0}, MoebiusPoint{complex(0.0, 0.6)}};
  EXPECT_EQ(fsdisc::kwon_bloch_functional(zero, 3.0, 3.0, grid, bidisc()).value, 0.0);
  const TaylorFunction f({0.0, 1.0, 0.5});
  const double a = fsdisc::kwon_bloch_functional(f, 3.0, 0.0, grid, bidisc()).value;
  const double b = fsdisc::kwon_bloch_functional(fsdisc::scale(f, 2.0), 3.0, 0.0, grid, bidisc()).value;
  EXPECT_LT(rel(b, 8.0 * a), 1e-10);
}

TEST(KwonBloch, IdentityAtBetaEqualP) {
  // a = 0 term for f = z, beta = p = 3: int int (1-|z|)^3 d mu_0, tests/oracles/pair_integrals.py.
  const double oracle = 0.18988462186;
  const std::vector<MoebiusPoint> at_zero{MoebiusPoint{0.0}};
  EXPECT_LT(rel(fsdisc::kwon_bloch_functional(z, 3.0, 3.0, at_zero, bidisc()).value, oracle), 5e-3);
  const std::vector<MoebiusPoint> grid{MoebiusPoint{0.0}, MoebiusPoint{0.6}, MoebiusPoint{complex(0.0, -0.85)}};
  const double coarse = fsdisc::kwon_bloch_functional(z, 3.0, 3.0, grid, bidisc()).value;
  const double fine = fsdisc::kwon_bloch_functional(z, 3.0, 3.0, grid, fine_bidisc()).value;
  EXPECT_TRUE(std::isfinite(coarse));
  EXPECT_LT(rel(coarse, fine), 3e-2);
}

TEST(KwonBp, Examples) {
  EXPECT_EQ(fsdisc::kwon_bp_functional(zero, 2.0, 2.0, bidisc()).value, 0.0);
  // int int (1-|z|)^2 |1 - conj(w) z|^{-4} dm dm = pi int (1+|z|)^{-2} dm = 2 pi^2 (ln 2 - 1/2).
  const double exact = 2 * pi * pi * (std::log(2.0) - 0.5);
  const double coarse = fsdisc::kwon_bp_functional(z, 2.0, 2.0, bidisc()).value;
  const double fine = fsdisc::kwon_bp_functional(z, 2.0, 2.0, fine_bidisc()).value;
  EXPECT_LT(rel(coarse, exact), 3e-3);
  EXPECT_LT(rel(fine, coarse), 3e-2);
  const TaylorFunction f({0.0, 1.0, -0.4});
  EXPECT_LT(rel(fsdisc::kwon_bp_functional(fsdisc::scale(f, 2.0), 2.5, 0.0, bidisc()).value,
                std::pow(2.0, 2.5) * fsdisc::kwon_bp_functional(f, 2.5, 0.0, bidisc()).value),
            1e-10);
  EXPECT_THROW(fsdisc::kwon_bp_functional(z, 1.0, 0.5, bidisc()), fsdisc::DomainError);
}

TEST(NormValue, Contract) {
  EXPECT_THROW(fsdisc::NormValue::make(-1.0, fsdisc::NormKind::bloch, {}, "g"), fsdisc::EvaluationError);
  EXPECT_THROW(fsdisc::NormValue::make(1.0, fsdisc::NormKind::kwon_ast, {{"p", 2.0}}, "g"), fsdisc::ConfigError);
  const auto v = fsdisc::bergman_norm_p(z, 2.0, disc());
  const auto j = fsdisc::to_json(v);
  EXPECT_EQ(j.at("kind"), "bergman_p");
  EXPECT_EQ(j.at("params").at("p"), 2.0);
  EXPECT_EQ(j.at("grid"), disc().provenance());
  EXPECT_DOUBLE_EQ(j.at("value").get<double>(), v.value);
  EXPECT_EQ(fsdisc::norm_kind_from_string("kwon_bp"), fsdisc::NormKind::kwon_bp);
  EXPECT_THROW(fsdisc::norm_kind_from_string("sobolev"), fsdisc::ConfigError);
}

}  // namespace
