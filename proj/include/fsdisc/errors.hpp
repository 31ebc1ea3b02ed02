#ifndef FSDISC_ERRORS_HPP
#define FSDISC_ERRORS_HPP

#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fsdisc {

/// Argument outside the domain of an operation (|z| >= 1, t < 0, beta out of range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or unsupported configuration (grid counts, corpus families, JSON).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A quadrature sum met a non-finite integrand value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Weight normalization impossible (zero or non-finite constraint).
class NormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string format_point(std::complex<double> z) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i)";
  return os.str();
}

}  // namespace detail
}  // namespace fsdisc

#endif  // FSDISC_ERRORS_HPP
