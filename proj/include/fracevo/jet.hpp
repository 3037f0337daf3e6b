#pragma once

// Truncated Taylor series. Coefficient k holds f^(k)(center)/k!.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "fracevo/error.hpp"

namespace fracevo {

inline constexpr int kMaxJetOrder = 63;  // 64 coefficients

struct Jet {
  double center = 1.0;
  std::vector<double> coeffs;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator[](std::size_t k) const { return coeffs[k]; }
  /// k-th derivative at the center.
  double derivative(int k) const {
    double f = 1.0;
    for (int j = 2; j <= k; ++j) f *= j;
    return coeffs.at(static_cast<std::size_t>(k)) * f;
  }
};

namespace series {

using Coeffs = std::vector<double>;

inline void check_order(int order) {
  if (order < 0) throw ParameterError("jet order must be nonnegative");
  if (order > kMaxJetOrder)
    throw CapabilityError("jet order " + std::to_string(order) + " exceeds the cap of " + std::to_string(kMaxJetOrder));
}

inline Coeffs constant(double c, int order) {
  Coeffs r(static_cast<std::size_t>(order) + 1, 0.0);
  r[0] = c;
  return r;
}

/// c0 + c1 x
inline Coeffs linear(double c0, double c1, int order) {
  Coeffs r = constant(c0, order);
  if (order >= 1) r[1] = c1;
  return r;
}

inline Coeffs add(const Coeffs& a, const Coeffs& b) {
  Coeffs r(std::min(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Coeffs sub(const Coeffs& a, const Coeffs& b) {
  Coeffs r(std::min(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Coeffs scale(Coeffs a, double c) {
  for (auto& v : a) v *= c;
  return a;
}

inline Coeffs mul(const Coeffs& a, const Coeffs& b) {
  const std::size_t n = std::min(a.size(), b.size());
  Coeffs r(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline Coeffs div(const Coeffs& a, const Coeffs& b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) return {};
  if (b[0] == 0.0) throw SingularError("jet division by a series with zero constant term");
  Coeffs r(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = a[k];
    for (std::size_t j = 1; j <= k; ++j) acc -= b[j] * r[k - j];
    r[k] = acc / b[0];
  }
  return r;
}

/// d/dx; drops one order.
inline Coeffs deriv(const Coeffs& a) {
  if (a.size() <= 1) return {};
  Coeffs r(a.size() - 1);
  for (std::size_t k = 0; k + 1 < a.size(); ++k) r[k] = static_cast<double>(k + 1) * a[k + 1];
  return r;
}

inline Coeffs truncate(Coeffs a, int order) {
  a.resize(std::min(a.size(), static_cast<std::size_t>(order) + 1));
  return a;
}

/// Generalized binomial coefficients C(beta, k), k = 0..order: the series of (1+x)^beta.
inline Coeffs binomial_series(double beta, int order) {
  Coeffs r(static_cast<std::size_t>(order) + 1);
  r[0] = 1.0;
  for (int k = 1; k <= order; ++k) r[k] = r[k - 1] * (beta - (k - 1)) / k;
  return r;
}

/// Series of log(1+x).
inline Coeffs log1p_series(int order) {
  Coeffs r(static_cast<std::size_t>(order) + 1, 0.0);
  for (int k = 1; k <= order; ++k) r[k] = (k % 2 ? 1.0 : -1.0) / k;
  return r;
}

inline double evaluate(const Coeffs& a, double x) {
  double v = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) v = v * x + a[k];
  return v;
}

}  // namespace series

inline Jet make_jet(double center, series::Coeffs c) { return Jet{center, std::move(c)}; }

inline Jet operator+(const Jet& a, const Jet& b) { return {a.center, series::add(a.coeffs, b.coeffs)}; }
inline Jet operator-(const Jet& a, const Jet& b) { return {a.center, series::sub(a.coeffs, b.coeffs)}; }
inline Jet operator*(const Jet& a, const Jet& b) { return {a.center, series::mul(a.coeffs, b.coeffs)}; }
inline Jet operator/(const Jet& a, const Jet& b) { return {a.center, series::div(a.coeffs, b.coeffs)}; }
inline Jet operator*(double c, const Jet& a) { return {a.center, series::scale(a.coeffs, c)}; }

/// Jet of f' at the same center (one order lower).
inline Jet derivative(const Jet& a) { return {a.center, series::deriv(a.coeffs)}; }

/// Jet of s^beta at `center`.
inline Jet power_jet(double center, double beta, int order) {
  series::check_order(order);
  if (!(center > 0.0)) throw DomainError("power jet needs a positive center");
  auto c = series::binomial_series(beta, order);
  const double base = std::pow(center, beta);
  double scale = base;
  for (int k = 0; k <= order; ++k) {
    c[k] *= scale;
    scale /= center;
  }
  return {center, std::move(c)};
}

/// Jet of log s at `center`.
inline Jet log_jet(double center, int order) {
  series::check_order(order);
  if (!(center > 0.0)) throw DomainError("log jet needs a positive center");
  auto c = series::log1p_series(order);
  double scale = 1.0;
  for (int k = 1; k <= order; ++k) {
    scale /= center;
    c[k] *= scale;
  }
  c[0] = std::log(center);
  return {center, std::move(c)};
}

/// Re-expand a truncated series about center + delta. Exact for the truncated polynomial.
inline Jet reexpand(const Jet& a, double delta) {
  const std::size_t n = a.coeffs.size();
  std::vector<double> r(n, 0.0);
  // Horner-style synthetic division repeated n times.
  std::vector<double> work = a.coeffs;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = n - 1; k > j; --k) work[k - 1] += delta * work[k];
    r[j] = work[j];
  }
  return {a.center + delta, std::move(r)};
}

}  // namespace fracevo
