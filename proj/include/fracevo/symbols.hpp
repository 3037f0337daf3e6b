#pragma once

// Laplace symbols h(s), g1 = h, g2 = s/h, their Taylor jets, and the sector bound on arg g.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <variant>
#include <vector>

#include "fracevo/error.hpp"
#include "fracevo/jet.hpp"
#include "fracevo/quadrature.hpp"
#include "fracevo/weight.hpp"

namespace fracevo {

using cplx = std::complex<double>;

namespace detail {

inline void check_symbol_domain(cplx s) {
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw DomainError("symbol evaluated at a non-finite point");
  if (s.imag() == 0.0 && s.real() <= 0.0) throw DomainError("symbol evaluated on the branch cut (-inf, 0]");
}

/// (s-1)/log s, with the removable point at s = 1 filled by its series.
inline cplx constant_h(cplx s) {
  const cplx u = s - 1.0;
  if (std::abs(u) < 1e-4) {
    // 1/(log(1+u)/u) with log(1+u)/u = 1 - u/2 + u^2/3 - u^3/4 + u^4/5
    const cplx q = 1.0 + u * (-0.5 + u * (1.0 / 3.0 + u * (-0.25 + u * 0.2)));
    return 1.0 / q;
  }
  return u / std::log(s);
}

/// int_0^1 p(beta) e^{beta L} d beta by composite Gauss-Legendre; panels scale with |L|.
inline cplx polynomial_h(const std::vector<double>& c, cplx logs) {
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(logs) / 3.0)));
  return quad::composite_gauss<20>(
      [&](double beta) { return polynomial_density(c, beta) * std::exp(beta * logs); }, 0.0, 1.0, panels);
}

}  // namespace detail

inline cplx h_eval(const WeightSpec& w, cplx s) {
  detail::check_symbol_domain(s);
  if (const auto* d = std::get_if<DiscreteWeight>(&w)) {
    const cplx L = std::log(s);
    cplx h = std::exp(d->alpha * L);
    for (const auto& [a, b] : d->terms) h += b * std::exp(a * L);
    return h;
  }
  if (std::holds_alternative<ConstantWeight>(w)) return detail::constant_h(s);
  return detail::polynomial_h(std::get<PolynomialWeight>(w).coeffs, std::log(s));
}

inline cplx g_from_h(ProblemKind kind, cplx s, cplx h) {
  if (kind == ProblemKind::Caputo) return h;
  if (h == 0.0) throw SingularError("h(s) = 0; g2 = s/h(s) undefined");
  return s / h;
}

inline cplx g_eval(const WeightSpec& w, ProblemKind kind, cplx s) { return g_from_h(kind, s, h_eval(w, s)); }

inline double g_eval(const WeightSpec& w, ProblemKind kind, double s) { return g_eval(w, kind, cplx(s, 0.0)).real(); }

/// Jet of g(s0 (1 + x)) in the variable x: coefficient k is g^(k)(s0) s0^k / k!.
/// Working in x keeps magnitudes O(1) at high order for any s0.
inline series::Coeffs g_series_scaled(const WeightSpec& w, ProblemKind kind, double s0, int order) {
  series::check_order(order);
  if (!(s0 > 0.0) || !std::isfinite(s0)) throw DomainError("g_jet needs a finite positive point");
  const std::size_t n = static_cast<std::size_t>(order) + 1;
  series::Coeffs h(n, 0.0);
  if (const auto* d = std::get_if<DiscreteWeight>(&w)) {
    auto add_power = [&](double beta, double b) {
      const auto c = series::binomial_series(beta, order);
      const double base = b * std::pow(s0, beta);
      for (std::size_t k = 0; k < n; ++k) h[k] += base * c[k];
    };
    add_power(d->alpha, 1.0);
    for (const auto& [a, b] : d->terms) add_power(a, b);
  } else {
    // Coefficients int mu(beta) C(beta, k) s0^beta d beta by Gauss-Legendre over beta.
    const auto& rule = quad::gauss_legendre<40>();
    const int panels = 8;
    const double width = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double beta = width * (p + 0.5 * (1.0 + rule.nodes[i]));
        const double weight = 0.5 * width * rule.weights[i] * density(w, beta) * std::pow(s0, beta);
        const auto c = series::binomial_series(beta, order);
        for (std::size_t k = 0; k < n; ++k) h[k] += weight * c[k];
      }
    }
  }
  if (kind == ProblemKind::Caputo) return h;
  return series::div(series::linear(s0, s0, order), h);
}

/// Taylor coefficients of g at s through `order`.
inline Jet g_jet(const WeightSpec& w, ProblemKind kind, double s, int order) {
  auto c = g_series_scaled(w, kind, s, order);
  double scale = 1.0;
  for (auto& v : c) {
    v *= scale;
    scale /= s;
  }
  return {s, std::move(c)};
}

/// Exponent gamma with |arg g(s)| <= gamma |arg s| on the slit plane.
/// Caputo discrete: alpha. RL discrete: 1 - alpha_m, since arg(s/h) lies between
/// (1 - alpha) arg s and (1 - alpha_m) arg s. Continuous weights: 1.
inline double sector_exponent(const WeightSpec& w, ProblemKind kind) {
  if (const auto* d = std::get_if<DiscreteWeight>(&w))
    return kind == ProblemKind::Caputo ? d->alpha : 1.0 - d->alpha_min();
  return 1.0;
}

/// theta_0 = min{(1/gamma - 1) pi/2, pi/2} - eps.
inline double subordination_angle(const WeightSpec& w, ProblemKind kind, double eps = 0.01) {
  const double gamma = sector_exponent(w, kind);
  return std::min((1.0 / gamma - 1.0) * std::numbers::pi / 2.0, std::numbers::pi / 2.0) - eps;
}

struct SectorReport {
  bool passed = true;
  double exponent = 1.0;            // bound actually asserted
  double max_excess = -std::numeric_limits<double>::infinity();    // max of |arg g| - exponent |arg s|; <= tol means pass
  double min_slack = std::numeric_limits<double>::infinity();     // min of exponent |arg s| - |arg g|
  cplx worst_sample{};
  std::size_t samples = 0;
};

inline SectorReport sector_angle_check(const WeightSpec& w, ProblemKind kind, const std::vector<cplx>& samples,
                                       double exponent, double tol = 1e-12) {
  SectorReport r;
  r.exponent = exponent;
  for (const cplx s : samples) {
    const double lhs = std::abs(std::arg(g_eval(w, kind, s)));
    const double bound = exponent * std::abs(std::arg(s));
    const double excess = lhs - bound;
    if (excess > r.max_excess) {
      r.max_excess = excess;
      r.worst_sample = s;
    }
    r.min_slack = std::min(r.min_slack, bound - lhs);
    ++r.samples;
  }
  r.passed = r.samples == 0 || r.max_excess <= tol;
  return r;
}

/// Checks against sector_exponent(w, kind).
inline SectorReport sector_angle_check(const WeightSpec& w, ProblemKind kind, const std::vector<cplx>& samples) {
  return sector_angle_check(w, kind, samples, sector_exponent(w, kind));
}

}  // namespace fracevo
