#pragma once

// Fixed Gauss-Legendre rules and thin wrappers over the Boost double-exponential
// integrators used by the kernel and solver modules.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracevo/error.hpp"

namespace fracevo::quad {

/// N-point Gauss-Legendre nodes and weights on [-1, 1].
template <std::size_t N>
struct GaussLegendre {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};
};

namespace detail {

template <std::size_t N>
GaussLegendre<N> build_gauss_legendre() {
  GaussLegendre<N> rule;
  const std::size_t half = (N + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Newton iteration on P_N from the Tricomi initial guess.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(N) + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= N; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if constexpr (N == 1) p1 = x;
      dp = static_cast<double>(N) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= N; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = pk;
    }
    dp = static_cast<double>(N) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[N - 1 - i] = x;
    rule.weights[N - 1 - i] = w;
  }
  return rule;
}

}  // namespace detail

template <std::size_t N>
const GaussLegendre<N>& gauss_legendre() {
  static const GaussLegendre<N> rule = detail::build_gauss_legendre<N>();
  return rule;
}

/// Composite N-point Gauss-Legendre over `panels` equal panels of [a, b].
/// Works for real- or complex-valued f.
template <std::size_t N, class F>
auto composite_gauss(F&& f, double a, double b, int panels = 1) {
  const auto& rule = gauss_legendre<N>();
  using R = decltype(f(a));
  R total{};
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    const double half = 0.5 * width;
    R part{};
    for (std::size_t i = 0; i < N; ++i) part += rule.weights[i] * f(mid + half * rule.nodes[i]);
    total += half * part;
  }
  return total;
}

/// Adaptive tanh-sinh on a finite interval; handles integrable endpoint singularities.
/// The rule runs on [-1, 1] in Boost's two-argument form, so abscissae near either end
/// are rebuilt from their exact distance to that end and never round onto it.
template <class F>
double tanh_sinh(F&& f, double a, double b, double tol = 1e-13) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  const double half = 0.5 * (b - a);
  auto g = [&](double x, double xc) {
    // xc = -1 - x left of the origin, 1 - x right of it
    return f(x < 0.0 ? a - half * xc : b - half * xc);
  };
  double error = 0.0;
  double l1 = 0.0;
  const double value = half * integrator.integrate(g, -1.0, 1.0, tol, &error, &l1);
  if (!std::isfinite(value)) throw QuadratureError("tanh_sinh: non-finite result");
  return value;
}

/// Adaptive exp-sinh on [a, inf).
template <class F>
double exp_sinh(F&& f, double a, double tol = 1e-13) {
  thread_local boost::math::quadrature::exp_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(f, a, std::numeric_limits<double>::infinity(), tol, &error, &l1);
  if (!std::isfinite(value)) throw QuadratureError("exp_sinh: non-finite result");
  return value;
}

}  // namespace fracevo::quad
