#pragma once

// Finite-dimensional generators with nonpositive spectrum: resolvent solves, exact semigroup
// action, and the Hille-Yosida bound. Text grammar: scalar:L, diag:L1,L2,..., laplacian:N,H.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "fracevo/error.hpp"
#include "fracevo/weight.hpp"

namespace fracevo {

using cplx = std::complex<double>;
using Vec = std::vector<double>;
using CVec = std::vector<cplx>;

struct ScalarGenerator {
  double lambda = 0.0;
  friend bool operator==(const ScalarGenerator&, const ScalarGenerator&) = default;
};

struct DiagonalGenerator {
  std::vector<double> lambdas;
  friend bool operator==(const DiagonalGenerator&, const DiagonalGenerator&) = default;
};

/// (1/spacing^2) tridiag(1, -2, 1) with Dirichlet ends.
struct DirichletLaplacian1D {
  int n = 2;
  double spacing = 1.0;
  friend bool operator==(const DirichletLaplacian1D&, const DirichletLaplacian1D&) = default;
};

using Generator = std::variant<ScalarGenerator, DiagonalGenerator, DirichletLaplacian1D>;

inline std::size_t dimension(const Generator& A) {
  if (std::holds_alternative<ScalarGenerator>(A)) return 1;
  if (const auto* d = std::get_if<DiagonalGenerator>(&A)) return d->lambdas.size();
  return static_cast<std::size_t>(std::get<DirichletLaplacian1D>(A).n);
}

inline void validate_generator(const Generator& A) {
  if (const auto* s = std::get_if<ScalarGenerator>(&A)) {
    if (!std::isfinite(s->lambda) || s->lambda > 0.0) throw ParameterError("scalar generator needs lambda <= 0");
  } else if (const auto* d = std::get_if<DiagonalGenerator>(&A)) {
    if (d->lambdas.empty()) throw ParameterError("diagonal generator needs at least one entry");
    for (double l : d->lambdas)
      if (!std::isfinite(l) || l > 0.0) throw ParameterError("diagonal generator needs all lambdas <= 0");
  } else {
    const auto& L = std::get<DirichletLaplacian1D>(A);
    if (L.n < 2) throw ParameterError("laplacian needs n >= 2");
    if (!(L.spacing > 0.0) || !std::isfinite(L.spacing)) throw ParameterError("laplacian needs spacing > 0");
  }
}

/// Eigenvalues; the Laplacian ones are -(4/h^2) sin^2(k pi / (2(n+1))), k = 1..n.
inline std::vector<double> eigenvalues(const Generator& A) {
  if (const auto* s = std::get_if<ScalarGenerator>(&A)) return {s->lambda};
  if (const auto* d = std::get_if<DiagonalGenerator>(&A)) return d->lambdas;
  const auto& L = std::get<DirichletLaplacian1D>(A);
  std::vector<double> ev(L.n);
  for (int k = 1; k <= L.n; ++k) {
    const double sn = std::sin(k * std::numbers::pi / (2.0 * (L.n + 1)));
    ev[k - 1] = -4.0 / (L.spacing * L.spacing) * sn * sn;
  }
  return ev;
}

/// Orthonormal sine eigenvector k (1-based) of the Laplacian: sqrt(2/(n+1)) sin(j k pi/(n+1)).
inline Vec laplacian_eigenvector(const DirichletLaplacian1D& L, int k) {
  Vec v(L.n);
  const double c = std::sqrt(2.0 / (L.n + 1));
  for (int j = 1; j <= L.n; ++j) v[j - 1] = c * std::sin(j * k * std::numbers::pi / (L.n + 1));
  return v;
}

namespace detail {

inline void check_size(const Generator& A, std::size_t size) {
  if (size != dimension(A))
    throw ParameterError("vector of length " + std::to_string(size) + " does not match generator dimension " +
                         std::to_string(dimension(A)));
}

}  // namespace detail

/// y = A x, for real or complex x.
template <class T>
std::vector<T> apply(const Generator& A, const std::vector<T>& x) {
  detail::check_size(A, x.size());
  if (const auto* s = std::get_if<ScalarGenerator>(&A)) return {s->lambda * x[0]};
  std::vector<T> y(x.size());
  if (const auto* d = std::get_if<DiagonalGenerator>(&A)) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = d->lambdas[i] * x[i];
    return y;
  }
  const auto& L = std::get<DirichletLaplacian1D>(A);
  const double c = 1.0 / (L.spacing * L.spacing);
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    T v = -2.0 * x[i];
    if (i > 0) v += x[i - 1];
    if (i + 1 < n) v += x[i + 1];
    y[i] = c * v;
  }
  return y;
}

/// Solves (z I - A) x = b. T is double or std::complex<double>.
template <class T>
std::vector<T> resolvent_apply(const Generator& A, T z, const std::vector<T>& b) {
  detail::check_size(A, b.size());
  auto singular = [] { throw SingularError("z is an eigenvalue of A; resolvent undefined"); };
  if (const auto* s = std::get_if<ScalarGenerator>(&A)) {
    const T d = z - s->lambda;
    if (d == T(0)) singular();
    return {b[0] / d};
  }
  std::vector<T> x(b.size());
  if (const auto* dg = std::get_if<DiagonalGenerator>(&A)) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      const T d = z - dg->lambdas[i];
      if (d == T(0)) singular();
      x[i] = b[i] / d;
    }
    return x;
  }
  // Thomas elimination on z + 2c on the diagonal and -c off it.
  const auto& L = std::get<DirichletLaplacian1D>(A);
  const double c = 1.0 / (L.spacing * L.spacing);
  const std::size_t n = b.size();
  const T diag = z + 2.0 * c;
  const double off = -c;
  std::vector<T> cp(n);
  T denom = diag;
  if (denom == T(0)) singular();
  cp[0] = off / denom;
  x[0] = b[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag - off * cp[i - 1];
    if (std::abs(denom) <= 1e-300) singular();
    cp[i] = off / denom;
    x[i] = (b[i] - off * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
  for (const auto& v : x)
    if (!std::isfinite(std::abs(v))) singular();
  return x;
}

inline CVec to_complex(const Vec& v) { return CVec(v.begin(), v.end()); }

/// e^{tA} a.
inline Vec semigroup_apply(const Generator& A, double t, const Vec& a) {
  detail::check_size(A, a.size());
  if (!(t >= 0.0)) throw DomainError("semigroup needs t >= 0");
  if (t == 0.0) return a;
  if (const auto* s = std::get_if<ScalarGenerator>(&A)) return {std::exp(t * s->lambda) * a[0]};
  Vec y(a.size(), 0.0);
  if (const auto* d = std::get_if<DiagonalGenerator>(&A)) {
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = std::exp(t * d->lambdas[i]) * a[i];
    return y;
  }
  const auto& L = std::get<DirichletLaplacian1D>(A);
  const auto ev = eigenvalues(A);
  for (int k = 1; k <= L.n; ++k) {
    const double decay = std::exp(t * ev[k - 1]);
    if (decay == 0.0) continue;
    const Vec v = laplacian_eigenvector(L, k);
    double coef = 0.0;
    for (int j = 0; j < L.n; ++j) coef += v[j] * a[j];
    coef *= decay;
    for (int j = 0; j < L.n; ++j) y[j] += coef * v[j];
  }
  return y;
}

inline double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

struct HilleYosidaReport {
  bool passed = true;
  double max_ratio = 0.0;   // max over (s, n) of ||R(s,A)^n|| s^n
  double worst_s = 0.0;
  int worst_n = 0;
  double max_power_gap = 0.0;  // power-iteration estimate minus the spectral value, relative
};

/// ||R(s,A)^n||_2 <= 1/s^n for n <= n_max. The norm is max_k |s - lambda_k|^{-n} since A is
/// normal; a power iteration on R^n gives an independent lower estimate.
inline HilleYosidaReport hille_yosida_check(const Generator& A, const std::vector<double>& s_grid, int n_max,
                                            double tol = 1e-10) {
  HilleYosidaReport rep;
  const auto ev = eigenvalues(A);
  const std::size_t dim = dimension(A);
  for (double s : s_grid) {
    if (!(s > 0.0)) throw DomainError("hille_yosida_check needs s > 0");
    double r1 = 0.0;
    for (double l : ev) r1 = std::max(r1, 1.0 / std::abs(s - l));
    for (int n = 1; n <= n_max; ++n) {
      const double norm = std::pow(r1, n);
      // power iteration on R^n
      Vec x(dim);
      for (std::size_t i = 0; i < dim; ++i) x[i] = 1.0 + 0.1 * static_cast<double>(i % 7);
      double est = 0.0;
      for (int it = 0; it < 200; ++it) {
        const double nx = norm2(x);
        for (auto& v : x) v /= nx;
        Vec y = x;
        for (int p = 0; p < n; ++p) y = resolvent_apply(A, s, y);
        est = norm2(y);
        x = y;
      }
      rep.max_power_gap = std::max(rep.max_power_gap, (est - norm) / norm);
      const double ratio = norm * std::pow(s, n);
      const double ratio_est = est * std::pow(s, n);
      if (std::max(ratio, ratio_est) > rep.max_ratio) {
        rep.max_ratio = std::max(ratio, ratio_est);
        rep.worst_s = s;
        rep.worst_n = n;
      }
      if (std::max(norm, est) > std::pow(s, -n) + tol) rep.passed = false;
    }
  }
  return rep;
}

inline Generator parse_generator(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "zero") return ScalarGenerator{0.0};
  if (colon == std::string::npos) throw ParameterError("unknown generator spec '" + text + "'");
  const auto parts = detail::split(body, ',');
  Generator g;
  if (head == "scalar") {
    if (parts.size() != 1) throw ParameterError("scalar generator is scalar:LAMBDA");
    g = ScalarGenerator{detail::parse_number(parts[0], "lambda")};
  } else if (head == "diag") {
    DiagonalGenerator d;
    for (const auto& p : parts) d.lambdas.push_back(detail::parse_number(p, "lambda"));
    g = d;
  } else if (head == "laplacian") {
    if (parts.empty() || parts.size() > 2) throw ParameterError("laplacian generator is laplacian:N[,SPACING]");
    const double n = detail::parse_number(parts[0], "n");
    if (n != std::floor(n)) throw ParameterError("laplacian n must be an integer");
    g = DirichletLaplacian1D{static_cast<int>(n), parts.size() == 2 ? detail::parse_number(parts[1], "spacing") : 1.0};
  } else {
    throw ParameterError("unknown generator spec '" + text + "'");
  }
  validate_generator(g);
  return g;
}

inline std::string to_string(const Generator& A) {
  if (const auto* s = std::get_if<ScalarGenerator>(&A)) return "scalar:" + detail::format_number(s->lambda);
  if (const auto* d = std::get_if<DiagonalGenerator>(&A)) {
    std::string out = "diag:";
    for (std::size_t i = 0; i < d->lambdas.size(); ++i) out += (i ? "," : "") + detail::format_number(d->lambdas[i]);
    return out;
  }
  const auto& L = std::get<DirichletLaplacian1D>(A);
  return "laplacian:" + std::to_string(L.n) + "," + detail::format_number(L.spacing);
}

}  // namespace fracevo
