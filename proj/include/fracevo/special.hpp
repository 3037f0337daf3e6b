#pragma once

// Scalar special functions: Gamma, its reciprocal, and the two-parameter
// Mittag-Leffler function E_{a,b}(z) for real argument.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>


#include "fracevo/error.hpp"
#include "fracevo/quadrature.hpp"

namespace fracevo {

namespace detail {

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

/// sin(pi x) with exact argument reduction, so zeros at integers are exact.
inline double sinpi(double x) {
  double r = std::remainder(x, 2.0);  // exact, r in [-1, 1]
  double sign = 1.0;
  if (r < 0.0) {
    r = -r;
    sign = -1.0;
  }
  if (r > 0.5) r = 1.0 - r;  // sin(pi (1 - r)) = sin(pi r), exact for r in [0.5, 1]
  return sign * std::sin(std::numbers::pi * r);
}

inline double cospi(double x) { return sinpi(x + 0.5); }

// Lanczos approximation, g = 7, nine terms.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,      -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};

inline constexpr double kGammaOverflow = 171.6243769563027;

// Gamma for x >= 0.5.
inline double gamma_lanczos(double x) {
  const double z = x - 1.0;
  double series = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) series += kLanczosCoeffs[i] / (z + static_cast<double>(i));
  const double t = z + kLanczosG + 0.5;
  // t^(z+1/2) split in two halves so that x up to the overflow bound stays finite.
  const double half_power = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * series * half_power * (half_power * std::exp(-t));
}

// Stirling series for x >= 10; x enters pow and exp exactly, which keeps the
// relative error at a few ulp up to the overflow bound.
inline double gamma_stirling(double x) {
  static constexpr std::array<double, 8> kBernoulliTerms = {
      1.0 / 12.0,           -1.0 / 360.0,   1.0 / 1260.0,      -1.0 / 1680.0,
      1.0 / 1188.0,         -691.0 / 360360.0, 1.0 / 156.0,    -3617.0 / 122400.0};
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double correction = kBernoulliTerms.back();
  for (int i = static_cast<int>(kBernoulliTerms.size()) - 2; i >= 0; --i) correction = correction * inv2 + kBernoulliTerms[i];
  correction *= inv;
  const double half_power = std::pow(x, 0.5 * (x - 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * std::exp(correction) * half_power * (half_power * std::exp(-x));
}

inline double gamma_positive(double x) { return x >= 10.0 ? gamma_stirling(x) : gamma_lanczos(x); }

}  // namespace detail

/// Gamma function. Relative error about 1e-15 on [1e-3, 170].
inline double gamma(double x) {
  if (!std::isfinite(x)) throw DomainError("gamma: argument is not finite");
  if (detail::is_nonpositive_integer(x)) {
    std::ostringstream os;
    os << "gamma: pole at non-positive integer " << x;
    throw PoleError(os.str());
  }
  if (x > detail::kGammaOverflow) {
    std::ostringstream os;
    os << "gamma: overflow for argument " << x;
    throw OverflowError(os.str());
  }
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    const double one_minus = 1.0 - x;
    if (one_minus > detail::kGammaOverflow) return 0.0 * detail::sinpi(x);  // underflows to signed zero
    return std::numbers::pi / (detail::sinpi(x) * detail::gamma_positive(one_minus));
  }
  return detail::gamma_positive(x);
}

/// 1/Gamma(x): entire, zero at the non-positive integers, never throws for
/// finite x (may return +-inf for very negative non-integer x).
inline double rgamma(double x) {
  if (!std::isfinite(x)) throw DomainError("rgamma: argument is not finite");
  if (detail::is_nonpositive_integer(x)) return 0.0;
  if (x > detail::kGammaOverflow) return std::exp(-std::lgamma(x));
  if (x < 0.5) {
    const double one_minus = 1.0 - x;
    if (one_minus > detail::kGammaOverflow)
      return detail::sinpi(x) * std::exp(std::lgamma(one_minus)) / std::numbers::pi;
    return detail::sinpi(x) * detail::gamma_positive(one_minus) / std::numbers::pi;
  }
  return 1.0 / detail::gamma_positive(x);
}

namespace detail {

/// log|1/Gamma(x)| together with the sign of 1/Gamma(x); sign 0 at poles.
inline std::pair<double, double> log_abs_rgamma(double x) {
  if (is_nonpositive_integer(x)) return {0.0, -std::numeric_limits<double>::infinity()};
  if (x > 0.0) return {1.0, -std::lgamma(x)};
  const double s = sinpi(x);
  return {s > 0.0 ? 1.0 : -1.0, std::lgamma(1.0 - x) + std::log(std::abs(s)) - std::log(std::numbers::pi)};
}

}  // namespace detail

/// Parameters (alpha, beta) of E_{alpha,beta}.
struct MLParams {
  double alpha = 1.0;
  double beta = 1.0;
};

enum class MLMethod { Closed, Series, Integral, Asymptotic };

struct MLEvaluation {
  double value = 0.0;
  MLMethod method = MLMethod::Series;
  /// false when (alpha, beta, z) lies outside the regime where the
  /// accuracy target has been validated.
  bool validated = true;
};

namespace ml {

// Regime thresholds for negative argument, 0 < alpha < 1.
inline constexpr double kSeriesRadius = 1.0;
inline constexpr double kAsymptoticRadius = 50.0;
inline constexpr double kValidatedRadius = 1e6;
inline constexpr int kMaxSeriesTerms = 200000;

inline double series(const MLParams& p, double z) {
  // Terms are accumulated in long double; for |z| <= 1 the cancellation is mild.
  long double sum = 0.0L;
  long double zk = 1.0L;
  long double previous_abs = std::numeric_limits<long double>::infinity();
  int small_run = 0;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    const double arg = p.alpha * k + p.beta;
    long double term;
    if (arg > detail::kGammaOverflow) {
      // Past the Gamma overflow bound the term is formed in log space.
      const double log_mag = static_cast<double>(k) * std::log(std::abs(z)) - std::lgamma(arg);
      term = std::exp(log_mag) * ((z < 0.0 && (k % 2 == 1)) ? -1.0L : 1.0L);
    } else {
      term = zk * rgamma(arg);
    }
    sum += term;
    const long double mag = std::abs(term);
    if (mag <= 1e-20L * std::abs(sum) && mag <= previous_abs) {
      if (++small_run >= 3) break;
    } else {
      small_run = 0;
    }
    if (mag != 0.0L) previous_abs = mag;
    zk *= z;
  }
  return static_cast<double>(sum);
}

// Hankel-contour collapse: E_{a,b}(-x) = t^{-b} int_0^inf e^{-u} K(u/t) du,
// t = x^{1/a}, valid for 0 < a < 1 and b < 1 + a.
inline double integral(const MLParams& p, double x) {
  const double a = p.alpha;
  const double b = p.beta;
  const double t = std::pow(x, 1.0 / a);
  const double sin_b = detail::sinpi(b);
  const double sin_ba = detail::sinpi(b - a);
  const double cos_a = detail::cospi(a);
  // K(r) = r^{a-b} k(r); the power is integrated out on the first segment.
  auto regular = [&](double r) {
    const double ra = std::pow(r, a);
    const double denom = ra * ra + 2.0 * ra * cos_a + 1.0;
    return (ra * sin_b + sin_ba) / (std::numbers::pi * denom);
  };
  auto integrand = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double r = u / t;
    return std::exp(-u) * std::pow(r, a - b) * regular(r);
  };

  std::vector<double> breaks = {1.0};
  if (cos_a < 0.0) {
    const double peak = std::pow(-cos_a, 1.0 / a) * t;  // where the denominator is smallest
    if (peak > 1e-8 && peak < 600.0) breaks.push_back(peak);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const double tol = 1e-14;

  // On [0, breaks[0]] substitute u = v^{1/g}, g = 1 + a - b, which removes u^{a-b}.
  const double g = 1.0 + a - b;
  const double scale = std::pow(t, b - a) / g;
  auto near_origin = [&](double v) {
    if (v <= 0.0) return scale * regular(0.0);
    const double u = std::pow(v, 1.0 / g);
    return scale * std::exp(-u) * regular(u / t);
  };
  double total = quad::tanh_sinh(near_origin, 0.0, std::pow(breaks.front(), g), tol);
  for (std::size_t i = 1; i < breaks.size(); ++i) total += quad::tanh_sinh(integrand, breaks[i - 1], breaks[i], tol);
  total += quad::exp_sinh(integrand, breaks.back(), tol);
  return std::pow(t, -b) * total;
}

// E_{a,b}(z) ~ -sum_{k>=1} z^{-k} / Gamma(b - a k), z -> -inf, truncated at the smallest term.
inline double asymptotic(const MLParams& p, double z) {
  const double log_abs_z = std::log(std::abs(z));
  double sum = 0.0;
  double last_mag = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 2000; ++k) {
    const auto [sign, log_rg] = detail::log_abs_rgamma(p.beta - p.alpha * k);
    if (sign == 0.0) continue;
    const double log_mag = log_rg - k * log_abs_z;
    const double mag = std::exp(log_mag);
    if (mag > last_mag) break;  // optimal truncation
    const double z_sign = (k % 2 == 1 && z < 0.0) ? -1.0 : 1.0;
    sum -= sign * z_sign * mag;
    last_mag = mag;
    if (mag < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace ml

/// Mittag-Leffler function with method and regime report.
inline MLEvaluation mittag_leffler_eval(const MLParams& p, double z) {
  if (!std::isfinite(p.alpha) || !std::isfinite(p.beta)) throw ParameterError("mittag_leffler: non-finite parameter");
  if (p.alpha <= 0.0) throw ParameterError("mittag_leffler: alpha must be positive");
  if (!std::isfinite(z)) throw DomainError("mittag_leffler: argument is not finite");

  const bool primary = z <= 0.0 && p.alpha <= 1.0 && p.beta >= p.alpha && -z <= ml::kValidatedRadius;
  if (z == 0.0) return {rgamma(p.beta), MLMethod::Closed, true};
  if (p.alpha == 1.0 && p.beta == 1.0) return {std::exp(z), MLMethod::Closed, true};

  const double x = -z;
  if (z > 0.0 || p.alpha >= 1.0 || x <= ml::kSeriesRadius) {
    return {ml::series(p, z), MLMethod::Series, primary || (z > 0.0 && z <= 5.0)};
  }
  if (x > ml::kAsymptoticRadius) return {ml::asymptotic(p, z), MLMethod::Asymptotic, primary};

  if (p.beta < 1.0 + p.alpha) return {ml::integral(p, x), MLMethod::Integral, primary};
  // Shift beta down: E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z.
  int shifts = 0;
  double b = p.beta;
  while (b >= 1.0 + p.alpha) {
    b -= p.alpha;
    ++shifts;
  }
  double value = ml::integral({p.alpha, b}, x);
  for (int j = 0; j < shifts; ++j) {
    value = (value - rgamma(b)) / z;
    b += p.alpha;
  }
  return {value, MLMethod::Integral, primary};
}

inline double mittag_leffler(const MLParams& p, double z) { return mittag_leffler_eval(p, z).value; }

}  // namespace fracevo
