#pragma once

// Weight distributions mu(beta) on [0, 1] and their text grammar:
//   discrete:ALPHA[,AJ:BJ]*   constant   poly:C0,C1,...

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fracevo/error.hpp"

namespace fracevo {

struct DiscreteWeight {
  double alpha = 0.5;
  std::vector<std::pair<double, double>> terms;  // (alpha_j, b_j)

  /// Smallest exponent present.
  double alpha_min() const { return terms.empty() ? alpha : terms.back().first; }
  friend bool operator==(const DiscreteWeight&, const DiscreteWeight&) = default;
};

/// mu(beta) = c0 + c1 beta + ... on [0, 1].
struct PolynomialWeight {
  std::vector<double> coeffs;
  friend bool operator==(const PolynomialWeight&, const PolynomialWeight&) = default;
};

/// mu == 1, kept apart from poly:1 because of its closed forms.
struct ConstantWeight {
  friend bool operator==(const ConstantWeight&, const ConstantWeight&) = default;
};

using WeightSpec = std::variant<DiscreteWeight, PolynomialWeight, ConstantWeight>;

enum class ProblemKind { Caputo, RiemannLiouville };

inline bool is_discrete(const WeightSpec& w) { return std::holds_alternative<DiscreteWeight>(w); }

inline double polynomial_density(const std::vector<double>& c, double beta) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * beta + c[k];
  return v;
}

/// mu(beta) for continuous weights.
inline double density(const WeightSpec& w, double beta) {
  if (std::holds_alternative<ConstantWeight>(w)) return 1.0;
  if (const auto* p = std::get_if<PolynomialWeight>(&w)) return polynomial_density(p->coeffs, beta);
  throw DomainError("density: discrete weights have no density");
}

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity;
  std::string message;
};

inline bool has_errors(const std::vector<Diagnostic>& d) {
  return std::any_of(d.begin(), d.end(), [](const Diagnostic& x) { return x.severity == Diagnostic::Severity::Error; });
}

inline std::vector<Diagnostic> validate(const WeightSpec& w) {
  using S = Diagnostic::Severity;
  std::vector<Diagnostic> out;
  if (const auto* d = std::get_if<DiscreteWeight>(&w)) {
    if (!std::isfinite(d->alpha) || !(d->alpha > 0.0 && d->alpha < 1.0))
      out.push_back({S::Error, "alpha must lie in (0, 1)"});
    double prev = d->alpha;
    for (std::size_t j = 0; j < d->terms.size(); ++j) {
      const auto [aj, bj] = d->terms[j];
      if (!std::isfinite(aj) || !(aj > 0.0)) out.push_back({S::Error, "alpha_" + std::to_string(j + 1) + " must be positive"});
      if (!(aj < prev))
        out.push_back({S::Error, "ordering violated: need 1 > alpha > alpha_1 > ... > alpha_m > 0 (term " +
                                     std::to_string(j + 1) + ")"});
      if (!std::isfinite(bj) || !(bj > 0.0)) out.push_back({S::Error, "b_" + std::to_string(j + 1) + " must be positive"});
      prev = aj;
    }
    return out;
  }
  if (std::holds_alternative<ConstantWeight>(w)) return out;

  const auto& c = std::get<PolynomialWeight>(w).coeffs;
  if (c.empty() || std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; })) {
    out.push_back({S::Error, "density is identically zero"});
    return out;
  }
  if (std::any_of(c.begin(), c.end(), [](double v) { return !std::isfinite(v); })) {
    out.push_back({S::Error, "density coefficients must be finite"});
    return out;
  }
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  bool negative = false;
  for (int i = 0; i <= 2000 && !negative; ++i) negative = polynomial_density(c, i / 2000.0) < -1e-14 * scale;
  if (negative) out.push_back({S::Error, "density must be nonnegative on [0, 1]"});

  if (polynomial_density(c, 1.0) == 0.0)
    out.push_back({S::Warning, "mu(1)=0: the endpoint condition mu(1)!=0 is not met; complete monotonicity is not guaranteed"});
  if (c[0] == 0.0) {
    std::size_t nu = 0;
    while (nu < c.size() && c[nu] == 0.0) ++nu;
    out.push_back({S::Warning, "mu(0)=0: relying on the condition mu(beta)=a*beta^nu as beta->0 with nu=" +
                                   std::to_string(nu) + ", a=" + std::to_string(c[nu])});
  }
  return out;
}

/// Throws ParameterError carrying every error diagnostic.
inline void require_valid(const WeightSpec& w) {
  std::string msg;
  for (const auto& d : validate(w))
    if (d.severity == Diagnostic::Severity::Error) msg += (msg.empty() ? "" : "; ") + d.message;
  if (!msg.empty()) throw ParameterError("invalid weight: " + msg);
}

namespace detail {

inline double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParameterError("cannot parse " + what + " '" + text + "'");
  }
  if (used != text.size()) throw ParameterError("cannot parse " + what + " '" + text + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // shortest round-trip representation
  for (int prec = 1; prec <= 17; ++prec) {
    char tmp[64];
    std::snprintf(tmp, sizeof tmp, "%.*g", prec, v);
    if (std::stod(tmp) == v) return tmp;
  }
  return buf;
}

}  // namespace detail

/// Parses the weight grammar. Does not validate invariants.
inline WeightSpec parse_weight(const std::string& text) {
  if (text == "constant") return ConstantWeight{};
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParameterError("unknown weight spec '" + text + "'");
  const std::string head = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  if (head == "discrete") {
    const auto parts = detail::split(body, ',');
    if (parts.empty() || parts[0].empty()) throw ParameterError("discrete weight needs ALPHA");
    DiscreteWeight d;
    d.alpha = detail::parse_number(parts[0], "alpha");
    for (std::size_t i = 1; i < parts.size(); ++i) {
      const auto ab = detail::split(parts[i], ':');
      if (ab.size() != 2) throw ParameterError("discrete term '" + parts[i] + "' must be AJ:BJ");
      d.terms.emplace_back(detail::parse_number(ab[0], "alpha_j"), detail::parse_number(ab[1], "b_j"));
    }
    return d;
  }
  if (head == "poly") {
    PolynomialWeight p;
    for (const auto& part : detail::split(body, ',')) p.coeffs.push_back(detail::parse_number(part, "coefficient"));
    if (p.coeffs.empty()) throw ParameterError("poly weight needs coefficients");
    return p;
  }
  throw ParameterError("unknown weight spec '" + text + "'");
}

inline std::string to_string(const WeightSpec& w) {
  if (std::holds_alternative<ConstantWeight>(w)) return "constant";
  std::string out;
  if (const auto* d = std::get_if<DiscreteWeight>(&w)) {
    out = "discrete:" + detail::format_number(d->alpha);
    for (const auto& [a, b] : d->terms) out += "," + detail::format_number(a) + ":" + detail::format_number(b);
    return out;
  }
  out = "poly:";
  const auto& c = std::get<PolynomialWeight>(w).coeffs;
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + detail::format_number(c[i]);
  return out;
}

inline std::string to_string(ProblemKind k) { return k == ProblemKind::Caputo ? "caputo" : "rl"; }

inline ProblemKind parse_kind(const std::string& s) {
  if (s == "caputo" || s == "c") return ProblemKind::Caputo;
  if (s == "rl" || s == "riemann-liouville") return ProblemKind::RiemannLiouville;
  throw ParameterError("unknown problem kind '" + s + "' (expected caputo or rl)");
}

}  // namespace fracevo
