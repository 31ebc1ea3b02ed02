#ifndef FSDISC_CORPUS_HPP
#define FSDISC_CORPUS_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsdisc/errors.hpp"
#include "fsdisc/taylor.hpp"

namespace fsdisc {

enum class Provenance { closed_form, high_resolution_oracle };

inline const char* to_string(Provenance p) {
  return p == Provenance::closed_form ? "closed-form" : "high-resolution-oracle";
}

struct ReferenceValue {
  double value = 0.0;
  Provenance provenance = Provenance::closed_form;
};

struct CorpusEntry {
  TaylorFunction function;
  std::string label;
  std::map<std::string, double> family_params;
  std::map<std::string, ReferenceValue> reference_values;
  /// Exact polynomial (not a truncated infinite series).
  bool polynomial = false;
  /// Truncation of a series with a boundary singularity; bands may be wider.
  bool boundary_singular = false;
};

struct FamilySpec {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
};

struct CorpusConfig {
  std::vector<FamilySpec> families;
  std::size_t degree = 64;
  std::uint64_t seed = 7;

  /// The default corpus: every family at its default parameters.
  static CorpusConfig defaults() {
    CorpusConfig c;
    for (const char* name : {"monomials", "random_polynomials", "lacunary", "truncated_log", "blaschke"})
      c.families.push_back({name, nlohmann::json::object()});
    return c;
  }
};

namespace detail {

inline std::vector<double> number_or_list(const nlohmann::json& params, const char* key,
                                          std::vector<double> fallback) {
  if (!params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) return v.get<std::vector<double>>();
  throw ConfigError(std::string("corpus: parameter '") + key + "' must be a number or an array");
}

inline std::string format_param(double x) {
  std::string s = std::to_string(x);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

// Closed forms valid for any polynomial: H^2 = sum |a_n|^2,
// int |F|^2 dm = pi sum |a_n|^2/(n+1), int |F'|^2 dm = pi sum n |a_n|^2.
inline void attach_polynomial_references(CorpusEntry& e) {
  const auto a = e.function.coefficients();
  double h2 = 0.0, a2 = 0.0, b2 = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const double m = std::norm(a[n]);
    h2 += m;
    a2 += m / static_cast<double>(n + 1);
    b2 += static_cast<double>(n) * m;
  }
  e.reference_values["hardy_2"] = {h2, Provenance::closed_form};
  e.reference_values["bergman_2"] = {std::numbers::pi * a2, Provenance::closed_form};
  e.reference_values["bp_2"] = {std::numbers::pi * b2, Provenance::closed_form};
}

inline std::vector<complex> parse_literal_coefficients(const nlohmann::json& arr) {
  if (!arr.is_array()) throw ConfigError("corpus: literal coefficients must be an array of [re, im] pairs");
  std::vector<complex> c;
  c.reserve(arr.size());
  for (const auto& pair : arr) {
    if (pair.is_number()) {
      c.emplace_back(pair.get<double>(), 0.0);
    } else if (pair.is_array() && pair.size() == 2) {
      c.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    } else {
      throw ConfigError("corpus: literal coefficient must be [re, im]");
    }
  }
  return c;
}

}  // namespace detail

/// Coefficients of z(a - z)/(1 - conj(a) z) up to z^degree.
inline std::vector<complex> blaschke_type_coefficients(complex a, std::size_t degree) {
  std::vector<complex> c(degree + 1, complex{0.0, 0.0});
  if (degree >= 1) c[1] = a;
  const complex ab = std::conj(a);
  complex power = 1.0;  // conj(a)^(n-2)
  for (std::size_t n = 2; n <= degree; ++n) {
    c[n] = power * (std::norm(a) - 1.0);
    power *= ab;
  }
  return c;
}

/// Builds the test corpus. Every generated entry has F(0) = 0.
inline std::vector<CorpusEntry> make_corpus(const CorpusConfig& config) {
  if (config.degree < 1) throw ConfigError("corpus: degree must be >= 1");
  const std::size_t N = config.degree;
  std::vector<CorpusEntry> out;
  std::mt19937_64 rng(config.seed);

  for (const FamilySpec& fam : config.families) {
    const nlohmann::json& P = fam.params.is_null() ? nlohmann::json::object() : fam.params;
    if (fam.name == "monomials") {
      const int lo = P.value("min", 1);
      const int hi = P.value("max", 6);
      if (lo < 1 || hi < lo) throw ConfigError("corpus: monomials needs 1 <= min <= max");
      for (int n = lo; n <= hi; ++n) {
        CorpusEntry e{TaylorFunction::monomial(static_cast<std::size_t>(n)), "z^" + std::to_string(n)};
        e.family_params["n"] = n;
        e.polynomial = true;
        detail::attach_polynomial_references(e);
        // sup n r^(n-1) (1-r) is attained at r = (n-1)/n.
        const double nd = n;
        e.reference_values["bloch"] = {n == 1 ? 1.0 : std::pow((nd - 1.0) / nd, nd - 1.0), Provenance::closed_form};
        out.push_back(std::move(e));
      }
    } else if (fam.name == "random_polynomials") {
      const int count = P.value("count", 3);
      const int deg = P.value("degree", 8);
      if (count < 0 || deg < 1) throw ConfigError("corpus: random_polynomials needs count >= 0, degree >= 1");
      std::uniform_real_distribution<double> U(-1.0, 1.0);
      for (int k = 0; k < count; ++k) {
        std::vector<complex> c(static_cast<std::size_t>(deg) + 1);
        for (auto& x : c) {
          const double re = U(rng);
          const double im = U(rng);
          x = {re, im};
        }
        c[0] = 0.0;
        CorpusEntry e{TaylorFunction(std::move(c)), "random_" + std::to_string(k)};
        e.family_params["degree"] = deg;
        e.family_params["index"] = k;
        e.polynomial = true;
        detail::attach_polynomial_references(e);
        out.push_back(std::move(e));
      }
    } else if (fam.name == "lacunary") {
      for (double lambda : detail::number_or_list(P, "lambda", {0.5, 0.9})) {
        std::vector<complex> c(N + 1, complex{0.0, 0.0});
        double w = 1.0;
        for (std::size_t m = 1; m <= N; m *= 2, w *= lambda) c[m] = w;
        CorpusEntry e{TaylorFunction(std::move(c)), "lacunary_" + detail::format_param(lambda)};
        e.family_params["lambda"] = lambda;
        detail::attach_polynomial_references(e);
        out.push_back(std::move(e));
      }
    } else if (fam.name == "truncated_log") {
      std::vector<complex> c(N + 1, complex{0.0, 0.0});
      for (std::size_t n = 1; n <= N; ++n) c[n] = 1.0 / static_cast<double>(n);
      CorpusEntry e{TaylorFunction(std::move(c)), "log"};
      e.boundary_singular = true;
      detail::attach_polynomial_references(e);
      out.push_back(std::move(e));
    } else if (fam.name == "blaschke") {
      for (double a : detail::number_or_list(P, "a", {0.3, 0.7})) {
        if (!(std::abs(a) < 1.0)) throw ConfigError("corpus: blaschke parameter must satisfy |a| < 1");
        CorpusEntry e{TaylorFunction(blaschke_type_coefficients(a, N)), "blaschke_" + detail::format_param(a)};
        e.family_params["a"] = a;
        detail::attach_polynomial_references(e);
        out.push_back(std::move(e));
      }
    } else if (fam.name == "literal") {
      if (!P.contains("coefficients")) throw ConfigError("corpus: literal family needs 'coefficients'");
      CorpusEntry e{TaylorFunction(detail::parse_literal_coefficients(P.at("coefficients"))),
                    P.value("label", std::string("literal_") + std::to_string(out.size()))};
      e.polynomial = true;
      detail::attach_polynomial_references(e);
      out.push_back(std::move(e));
    } else {
      throw ConfigError("corpus: unknown family '" + fam.name + "'");
    }
  }
  return out;
}

/// {"families": [{"name": ..., "params": {...}}], "degree": N, "seed": s}
inline CorpusConfig corpus_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("corpus config must be a JSON object");
  CorpusConfig c;
  try {
    c.degree = j.value("degree", std::size_t{64});
    c.seed = j.value("seed", std::uint64_t{7});
    if (j.contains("families")) {
      for (const auto& f : j.at("families")) {
        FamilySpec fs;
        fs.name = f.at("name").get<std::string>();
        if (f.contains("params")) fs.params = f.at("params");
        c.families.push_back(std::move(fs));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("corpus config: ") + e.what());
  }
  return c;
}

}  // namespace fsdisc

#endif  // FSDISC_CORPUS_HPP
