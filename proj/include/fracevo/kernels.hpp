#pragma once

// Volterra kernels k1 = L^{-1}[1/h] (Caputo) and k2 = L^{-1}[h/s] (Riemann-Liouville),
// their primitives, the spectral density K(r) of k1, and numeric checks of k1*k2 = 1 and
// complete monotonicity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "fracevo/error.hpp"
#include "fracevo/laplace.hpp"
#include "fracevo/quadrature.hpp"
#include "fracevo/special.hpp"
#include "fracevo/symbols.hpp"
#include "fracevo/weight.hpp"

namespace fracevo {

enum class KernelId { K1, K2 };

inline std::string to_string(KernelId id) { return id == KernelId::K1 ? "k1" : "k2"; }

inline KernelId kernel_for(ProblemKind kind) { return kind == ProblemKind::Caputo ? KernelId::K1 : KernelId::K2; }

namespace detail {

inline void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("kernel evaluated at t = " + std::to_string(t) + "; need t > 0");
}

// int_0^1 mu(beta) f(beta) d beta for continuous weights; f smooth, panels scale with |log t|.
template <class F>
double beta_quadrature(const WeightSpec& w, double log_scale, F&& f) {
  const int panels = 1 + static_cast<int>(std::abs(log_scale) / 3.0);
  return quad::composite_gauss<20>([&](double beta) { return density(w, beta) * f(beta); }, 0.0, 1.0, panels);
}

}  // namespace detail

inline double k2_eval(const WeightSpec& w, double t) {
  detail::check_time(t);
  if (const auto* d = std::get_if<DiscreteWeight>(&w)) {
    double v = std::pow(t, -d->alpha) * rgamma(1.0 - d->alpha);
    for (const auto& [a, b] : d->terms) v += b * std::pow(t, -a) * rgamma(1.0 - a);
    return v;
  }
  const double L = std::log(t);
  return detail::beta_quadrature(w, L, [&](double beta) { return std::exp(-beta * L) * rgamma(1.0 - beta); });
}

/// K2(t) = int_0^t k2 = int mu(beta) t^{1-beta} / Gamma(2-beta) d beta.
inline double k2_primitive(const WeightSpec& w, double t) {
  if (t == 0.0) return 0.0;
  detail::check_time(t);
  if (const auto* d = std::get_if<DiscreteWeight>(&w)) {
    double v = std::pow(t, 1.0 - d->alpha) * rgamma(2.0 - d->alpha);
    for (const auto& [a, b] : d->terms) v += b * std::pow(t, 1.0 - a) * rgamma(2.0 - a);
    return v;
  }
  const double L = std::log(t);
  return detail::beta_quadrature(w, L, [&](double beta) { return std::exp((1.0 - beta) * L) * rgamma(2.0 - beta); });
}

/// K(r) = (1/pi) B / (A^2 + B^2), A = sum b_j r^{a_j} cos(a_j pi), B = sum b_j r^{a_j} sin(a_j pi).
inline double k1_spectral_density(const WeightSpec& w, double r) {
  const auto* d = std::get_if<DiscreteWeight>(&w);
  if (!d) throw DomainError("spectral density is only available for discrete weights");
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("spectral density needs r > 0");
  // Factor out r^alpha so neither A nor B overflows for extreme r.
  double A = detail::cospi(d->alpha), B = detail::sinpi(d->alpha);
  for (const auto& [a, b] : d->terms) {
    const double rel = b * std::pow(r, a - d->alpha);
    A += rel * detail::cospi(a);
    B += rel * detail::sinpi(a);
  }
  return B / (std::numbers::pi * (A * A + B * B)) * std::pow(r, -d->alpha);
}

/// k1(t) = int_0^inf e^{-rt} K(r) dr = (1/t) int_0^inf e^{-x} K(x/t) dx, any discrete weight.
inline double k1_spectral(const WeightSpec& w, double t, double tol = 1e-12) {
  detail::check_time(t);
  auto f = [&](double x) {
    const double e = std::exp(-x);
    const double r = x / t;
    if (!(r > 0.0) || e == 0.0 || !std::isfinite(r)) return 0.0;
    return e * k1_spectral_density(w, r);
  };
  // x^{-alpha_m} endpoint at 0: substitute x = v^{1/(1-am)} on [0, 1].
  const double am = std::get<DiscreteWeight>(w).alpha_min();
  const double g = 1.0 - am;
  auto near = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double x = std::pow(v, 1.0 / g);
    return f(x) * x / (g * v);
  };
  const double head = quad::tanh_sinh(near, 0.0, 1.0, tol);
  const double tail = quad::exp_sinh(f, 1.0, tol);
  return (head + tail) / t;
}

inline double k1_eval(const WeightSpec& w, double t) {
  detail::check_time(t);
  if (const auto* d = std::get_if<DiscreteWeight>(&w)) {
    if (d->terms.empty()) return std::pow(t, d->alpha - 1.0) * rgamma(d->alpha);
    if (d->terms.size() == 1) {
      const auto [a1, b1] = d->terms.front();
      const double gap = d->alpha - a1;
      return std::pow(t, d->alpha - 1.0) * mittag_leffler({gap, d->alpha}, -b1 * std::pow(t, gap));
    }
    return k1_spectral(w, t);
  }
  return invert_scalar([&](cplx s) { return 1.0 / h_eval(w, s); }, t);
}

/// k1'(t) for t > 0, from the transform s/h(s).
inline double k1_derivative(const WeightSpec& w, double t) {
  detail::check_time(t);
  return invert_scalar([&](cplx s) { return s / h_eval(w, s); }, t);
}

/// K1(t) = int_0^t k1 = L^{-1}[1/(s h(s))].
inline double k1_primitive(const WeightSpec& w, double t) {
  if (t == 0.0) return 0.0;
  detail::check_time(t);
  if (const auto* d = std::get_if<DiscreteWeight>(&w)) {
    if (d->terms.empty()) return std::pow(t, d->alpha) * rgamma(1.0 + d->alpha);
    if (d->terms.size() == 1) {
      const auto [a1, b1] = d->terms.front();
      const double gap = d->alpha - a1;
      return std::pow(t, d->alpha) * mittag_leffler({gap, d->alpha + 1.0}, -b1 * std::pow(t, gap));
    }
  }
  return invert_scalar([&](cplx s) { return 1.0 / (s * h_eval(w, s)); }, t);
}

inline double kernel_eval(const WeightSpec& w, KernelId id, double t) {
  return id == KernelId::K1 ? k1_eval(w, t) : k2_eval(w, t);
}

inline double kernel_primitive(const WeightSpec& w, KernelId id, double t) {
  return id == KernelId::K1 ? k1_primitive(w, t) : k2_primitive(w, t);
}

/// int_0^t k1(t - tau) k2(tau) d tau, which should be 1.
inline double convolution_identity_check(const WeightSpec& w, double t) {
  detail::check_time(t);
  const double half = 0.5 * t;
  if (const auto* d = std::get_if<DiscreteWeight>(&w)) {
    // [0, t/2]: k2 ~ tau^{-alpha}; tau = (t/2) u^{1/(1-alpha)}.
    const double ga = 1.0 - d->alpha;
    auto left = [&](double u) {
      if (u <= 0.0) return 0.0;
      const double tau = half * std::pow(u, 1.0 / ga);
      if (tau == 0.0) return 0.0;  // integrand ~ tau^{1-alpha}
      return k1_eval(w, t - tau) * k2_eval(w, tau) * tau / (ga * u);
    };
    // [t/2, t]: k1(sigma) ~ sigma^{alpha-1} with sigma = t - tau = (t/2) u^{1/alpha}.
    const double gb = d->alpha;
    auto right = [&](double u) {
      if (u <= 0.0) return 0.0;
      const double sigma = half * std::pow(u, 1.0 / gb);
      if (sigma == 0.0) return 0.0;  // integrand ~ sigma^alpha
      return k1_eval(w, sigma) * k2_eval(w, t - sigma) * sigma / (gb * u);
    };
    return quad::tanh_sinh(left, 0.0, 1.0, 1e-12) + quad::tanh_sinh(right, 0.0, 1.0, 1e-12);
  }
  // Continuous weights: k2 ~ 1/(tau log^2 tau) near 0 is integrated by parts against K2,
  //   int_0^{t/2} k1(t-tau) k2(tau) = k1(t/2) K2(t/2) + int_0^{t/2} k1'(t-tau) K2(tau) d tau,
  // and k1 has only a logarithmic singularity on [t/2, t].
  auto left = [&](double tau) { return tau <= 0.0 ? 0.0 : k1_derivative(w, t - tau) * k2_primitive(w, tau); };
  auto right = [&](double sigma) {
    if (sigma < 1e-200) return 0.0;
    return k1_eval(w, sigma) * k2_eval(w, t - sigma);
  };
  return k1_eval(w, half) * k2_primitive(w, half) + quad::tanh_sinh(left, 0.0, half, 1e-11) +
         quad::tanh_sinh(right, 0.0, half, 1e-11);
}

struct CMReport {
  bool passed = true;
  bool nonnegative = true;
  bool spectral_positive = true;  // only checked for K1 with discrete weights
  int failed_order = -1;          // first divided-difference order with a sign violation
  double worst_violation = 0.0;   // most negative (-1)^k D_k relative to its scale
  std::size_t points = 0;
  std::string message;
};

/// Signs of divided differences up to order 4 on the grid, plus K(r) > 0 for discrete K1.
inline CMReport cm_check(const WeightSpec& w, KernelId id, const std::vector<double>& grid, double rel_tol = 1e-8) {
  CMReport rep;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw DomainError("cm_check grid must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("cm_check grid must be increasing");
  }
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = kernel_eval(w, id, grid[i]);
  rep.points = grid.size();
  for (double v : f) rep.nonnegative = rep.nonnegative && v >= 0.0;

  // Divided-difference table with a parallel table of magnitudes for the tolerance.
  std::vector<double> D = f, S(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) S[i] = std::abs(f[i]);
  for (int k = 1; k <= 4 && static_cast<std::size_t>(k) < grid.size(); ++k) {
    const double sign = k % 2 ? -1.0 : 1.0;
    for (std::size_t i = 0; i + k < grid.size(); ++i) {
      const double dx = grid[i + k] - grid[i];
      D[i] = (D[i + 1] - D[i]) / dx;
      S[i] = (S[i + 1] + S[i]) / dx;
      const double rel = sign * D[i] / S[i];
      if (rel < -rel_tol) {
        if (rep.failed_order < 0) rep.failed_order = k;
        rep.worst_violation = std::min(rep.worst_violation, rel);
      }
    }
    D.pop_back();
    S.pop_back();
  }

  if (id == KernelId::K1 && is_discrete(w)) {
    for (int i = 0; i <= 200; ++i) {
      const double r = std::pow(10.0, -8.0 + 16.0 * i / 200.0);
      if (!(k1_spectral_density(w, r) > 0.0)) rep.spectral_positive = false;
    }
  }
  rep.passed = rep.nonnegative && rep.spectral_positive && rep.failed_order < 0;
  if (!rep.nonnegative) rep.message = "negative kernel value";
  else if (!rep.spectral_positive) rep.message = "spectral density not positive";
  else if (rep.failed_order > 0) rep.message = "divided difference of order " + std::to_string(rep.failed_order) + " has the wrong sign";
  else rep.message = "ok";
  return rep;
}

}  // namespace fracevo
