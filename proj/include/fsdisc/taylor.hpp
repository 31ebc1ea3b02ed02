#ifndef FSDISC_TAYLOR_HPP
#define FSDISC_TAYLOR_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fsdisc/errors.hpp"

namespace fsdisc {

using complex = std::complex<double>;

/// Analytic function on the unit disc held as a finite Taylor polynomial
/// a_0 + a_1 z + ... + a_N z^N. Immutable once built.
class TaylorFunction {
 public:
  /// The zero function (degree 0).
  TaylorFunction() : coeffs_(1, complex{0.0, 0.0}) {}

  explicit TaylorFunction(std::vector<complex> coefficients) : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) coeffs_.assign(1, complex{0.0, 0.0});
    for (const complex& c : coeffs_) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw DomainError("TaylorFunction: non-finite coefficient");
    }
  }

  /// z^n.
  static TaylorFunction monomial(std::size_t n, complex coefficient = 1.0) {
    std::vector<complex> c(n + 1, complex{0.0, 0.0});
    c[n] = coefficient;
    return TaylorFunction(std::move(c));
  }

  [[nodiscard]] std::span<const complex> coefficients() const noexcept { return coeffs_; }
  [[nodiscard]] std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  [[nodiscard]] complex coefficient(std::size_t n) const noexcept {
    return n < coeffs_.size() ? coeffs_[n] : complex{0.0, 0.0};
  }
  [[nodiscard]] bool vanishes_at_zero() const noexcept { return coeffs_[0] == complex{0.0, 0.0}; }

  [[nodiscard]] bool is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const complex& c) { return c == complex{0.0, 0.0}; });
  }

  /// True when every coefficient past a_0 is zero.
  [[nodiscard]] bool is_constant() const noexcept {
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(),
                       [](const complex& c) { return c == complex{0.0, 0.0}; });
  }

  /// Horner evaluation without the |z| < 1 check; used on quadrature nodes.
  [[nodiscard]] complex evaluate_unchecked(complex z) const noexcept {
    complex acc = coeffs_.back();
    for (std::size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * z + coeffs_[k];
    return acc;
  }

  friend bool operator==(const TaylorFunction&, const TaylorFunction&) = default;

 private:
  std::vector<complex> coeffs_;
};

/// f(z) for |z| < 1.
inline complex eval(const TaylorFunction& f, complex z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("eval: point " + detail::format_point(z) + " is not inside the unit disc");
  return f.evaluate_unchecked(z);
}

/// f'; the derivative of a constant is the zero function of degree 0.
inline TaylorFunction derivative(const TaylorFunction& f) {
  const auto a = f.coefficients();
  if (a.size() == 1) return TaylorFunction();
  std::vector<complex> b(a.size() - 1);
  for (std::size_t n = 0; n < b.size(); ++n) b[n] = static_cast<double>(n + 1) * a[n + 1];
  return TaylorFunction(std::move(b));
}

/// D^t f = sum (n+1)^t a_n z^n. t = 0 returns f unchanged.
inline TaylorFunction fractional_derivative(const TaylorFunction& f, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("fractional_derivative: order t must be >= 0");
  if (t == 0.0) return f;
  const auto a = f.coefficients();
  std::vector<complex> b(a.begin(), a.end());
  for (std::size_t n = 0; n < b.size(); ++n) b[n] *= std::pow(static_cast<double>(n + 1), t);
  return TaylorFunction(std::move(b));
}

inline TaylorFunction scale(const TaylorFunction& f, complex lambda) {
  const auto a = f.coefficients();
  std::vector<complex> b(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) b[n] = lambda * a[n];
  return TaylorFunction(std::move(b));
}

/// z -> f(e^{i theta} z), i.e. coefficients a_n e^{i n theta}.
inline TaylorFunction rotate(const TaylorFunction& f, double theta) {
  const auto a = f.coefficients();
  std::vector<complex> b(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) b[n] = a[n] * std::polar(1.0, static_cast<double>(n) * theta);
  return TaylorFunction(std::move(b));
}

inline TaylorFunction operator+(const TaylorFunction& f, const TaylorFunction& g) {
  const std::size_t n = std::max(f.degree(), g.degree()) + 1;
  std::vector<complex> c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = f.coefficient(k) + g.coefficient(k);
  return TaylorFunction(std::move(c));
}

/// sum |a_n|^2, the squared H^2 norm of a polynomial.
inline double coefficient_energy(const TaylorFunction& f) {
  double s = 0.0;
  for (const complex& c : f.coefficients()) s += std::norm(c);
  return s;
}

}  // namespace fsdisc

#endif  // FSDISC_TAYLOR_HPP
