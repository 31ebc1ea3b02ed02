#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "fsdisc/taylor.hpp"

namespace {

using fsdisc::complex;
using fsdisc::TaylorFunction;

TaylorFunction z_plus_2z3() { return TaylorFunction({0.0, 1.0, 0.0, 2.0}); }

double rel(complex a, complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

TaylorFunction random_function(std::mt19937_64& rng, std::size_t degree) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<complex> c(degree + 1);
  for (auto& x : c) x = {U(rng), U(rng)};
  return TaylorFunction(c);
}

TEST(Eval, IdentityMap) { EXPECT_EQ(fsdisc::eval(TaylorFunction::monomial(1), 0.5), complex(0.5, 0.0)); }

TEST(Eval, SquareAtImaginaryPoint) {
  EXPECT_NEAR(std::abs(fsdisc::eval(TaylorFunction::monomial(2), complex(0.0, 0.5)) - complex(-0.25, 0.0)), 0.0,
              1e-16);
}

TEST(Eval, CubicPolynomial) { EXPECT_DOUBLE_EQ(fsdisc::eval(z_plus_2z3(), 0.5).real(), 0.75); }

TEST(Eval, OutsideDiscIsDomainError) {
  EXPECT_THROW(fsdisc::eval(z_plus_2z3(), 1.0), fsdisc::DomainError);
  EXPECT_THROW(fsdisc::eval(z_plus_2z3(), complex(0.8, 0.8)), fsdisc::DomainError);
}

TEST(Derivative, PowerRule) {
  EXPECT_EQ(fsdisc::derivative(TaylorFunction::monomial(1)), TaylorFunction({1.0}));
  EXPECT_EQ(fsdisc::derivative(TaylorFunction::monomial(3)), TaylorFunction({0.0, 0.0, 3.0}));
  EXPECT_EQ(fsdisc::derivative(z_plus_2z3()), TaylorFunction({1.0, 0.0, 6.0}));
}

TEST(Derivative, OfConstantIsZeroOfDegreeZero) {
  const TaylorFunction d = fsdisc::derivative(TaylorFunction({3.0}));
  EXPECT_EQ(d.degree(), 0u);
  EXPECT_TRUE(d.is_zero());
}

TEST(FractionalDerivative, OrderZeroIsIdentity) {
  EXPECT_EQ(fsdisc::fractional_derivative(z_plus_2z3(), 0.0), z_plus_2z3());
}

TEST(FractionalDerivative, CoefficientLaw) {
  EXPECT_EQ(fsdisc::fractional_derivative(TaylorFunction::monomial(2), 1.0).coefficient(2), complex(3.0, 0.0));
  EXPECT_EQ(fsdisc::fractional_derivative(TaylorFunction::monomial(1), 2.0).coefficient(1), complex(4.0, 0.0));
}

TEST(FractionalDerivative, NegativeOrderIsDomainError) {
  EXPECT_THROW(fsdisc::fractional_derivative(z_plus_2z3(), -0.5), fsdisc::DomainError);
}

TEST(FractionalDerivative, Composition) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const TaylorFunction f = random_function(rng, 30);
    const double t = 0.1 * trial, s = 0.37 + 0.05 * trial;
    const TaylorFunction lhs = fsdisc::fractional_derivative(fsdisc::fractional_derivative(f, s), t);
    const TaylorFunction rhs = fsdisc::fractional_derivative(f, t + s);
    for (std::size_t n = 0; n <= f.degree(); ++n) EXPECT_LT(rel(lhs.coefficient(n), rhs.coefficient(n)), 1e-12);
  }
}

TEST(Linearity, DerivativeAndFractionalDerivative) {
  std::mt19937_64 rng(12);
  const TaylorFunction f = random_function(rng, 20), g = random_function(rng, 25);
  const TaylorFunction d_sum = fsdisc::derivative(f + g);
  const TaylorFunction sum_d = fsdisc::derivative(f) + fsdisc::derivative(g);
  const TaylorFunction t_sum = fsdisc::fractional_derivative(f + g, 1.3);
  const TaylorFunction sum_t = fsdisc::fractional_derivative(f, 1.3) + fsdisc::fractional_derivative(g, 1.3);
  for (std::size_t n = 0; n <= 25; ++n) {
    EXPECT_LE(std::abs(d_sum.coefficient(n) - sum_d.coefficient(n)), 1e-12 * std::abs(sum_d.coefficient(n)));
    EXPECT_LE(std::abs(t_sum.coefficient(n) - sum_t.coefficient(n)), 1e-12 * std::abs(sum_t.coefficient(n)));
  }
}

TEST(Rotation, EvalCommutes) {
  std::mt19937_64 rng(13);
  const TaylorFunction f = random_function(rng, 40);
  for (double theta : {0.3, 1.0, 2.5}) {
    const TaylorFunction g = fsdisc::rotate(f, theta);
    for (complex z : {complex(0.3, 0.2), complex(-0.7, 0.1), complex(0.0, 0.95)})
      EXPECT_LT(rel(fsdisc::eval(g, z), fsdisc::eval(f, std::polar(1.0, theta) * z)), 1e-12);
  }
}

TEST(Scale, Examples) {
  const TaylorFunction f = z_plus_2z3();
  EXPECT_EQ(fsdisc::scale(f, 1.0), f);
  EXPECT_TRUE(fsdisc::scale(f, 0.0).is_zero());
  EXPECT_EQ(fsdisc::scale(TaylorFunction::monomial(1), 2.0), TaylorFunction::monomial(1, 2.0));
}

TEST(TaylorFunction, NonFiniteCoefficientRejected) {
  EXPECT_THROW(TaylorFunction({0.0, std::nan("")}), fsdisc::DomainError);
}

TEST(TaylorFunction, Predicates) {
  EXPECT_TRUE(z_plus_2z3().vanishes_at_zero());
  EXPECT_FALSE(TaylorFunction({1.0, 1.0}).vanishes_at_zero());
  EXPECT_TRUE(TaylorFunction({2.0, 0.0}).is_constant());
  EXPECT_FALSE(z_plus_2z3().is_constant());
  EXPECT_DOUBLE_EQ(fsdisc::coefficient_energy(z_plus_2z3()), 5.0);
}

}  // namespace
