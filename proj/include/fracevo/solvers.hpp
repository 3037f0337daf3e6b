#pragma once

// Four solution paths for u = a + k * Au: contour inversion of (g/s) R(g, A) a, subordination
// to the semigroup e^{tA}, Post-Widder inversion from derivatives at s = n/t, and product
// integration of the Volterra equation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fracevo/error.hpp"
#include "fracevo/generators.hpp"
#include "fracevo/jet.hpp"
#include "fracevo/kernels.hpp"
#include "fracevo/laplace.hpp"
#include "fracevo/parallel.hpp"
#include "fracevo/quadrature.hpp"
#include "fracevo/symbols.hpp"
#include "fracevo/weight.hpp"

namespace fracevo {

enum class Method { Resolvent, Subordination, PostWidder, Volterra };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::Resolvent: return "resolvent";
    case Method::Subordination: return "subordination";
    case Method::PostWidder: return "postwidder";
    case Method::Volterra: return "volterra";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  for (Method m : {Method::Resolvent, Method::Subordination, Method::PostWidder, Method::Volterra})
    if (to_string(m) == s) return m;
  throw ParameterError("unknown method '" + s + "' (expected resolvent, subordination, postwidder or volterra)");
}

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  ProblemKind kind = ProblemKind::Caputo;
  std::string method;
  std::map<std::string, std::string> metadata;
};

namespace detail {

inline void check_problem(const WeightSpec& w, const Generator& A, const Vec& a) {
  require_valid(w);
  validate_generator(A);
  check_size(A, a.size());
}

inline void check_times(const std::vector<double>& times) {
  if (times.empty()) throw ParameterError("time grid is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) throw DomainError("times must be finite and >= 0");
    if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("times must be strictly increasing");
  }
}

// Trajectory on `times` with (0, a) prepended; eval(t) fills the states at t > 0.
template <class Eval>
Trajectory evaluate_on_grid(const std::vector<double>& times, const Vec& a, ProblemKind kind, std::string method,
                            Eval&& eval) {
  check_times(times);
  Trajectory tr;
  tr.kind = kind;
  tr.method = std::move(method);
  if (times.front() > 0.0) tr.times.push_back(0.0);
  tr.times.insert(tr.times.end(), times.begin(), times.end());
  tr.states.assign(tr.times.size(), a);
  parallel_for(tr.times.size(), [&](std::size_t i) {
    if (tr.times[i] > 0.0) tr.states[i] = eval(tr.times[i]);
  });
  return tr;
}

inline void common_metadata(Trajectory& tr, const WeightSpec& w, const Generator& A) {
  tr.metadata["weight"] = to_string(w);
  tr.metadata["kind"] = to_string(tr.kind);
  tr.metadata["generator"] = to_string(A);
  tr.metadata["method"] = tr.method;
  if (is_discrete(w)) tr.metadata["theta0"] = detail::format_number(subordination_angle(w, tr.kind));
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Contour inversion of the transformed solution.

/// u(t) = L^{-1}[(g(s)/s) R(g(s), A) a](t).
inline Trajectory solve_resolvent(const WeightSpec& w, ProblemKind kind, const Generator& A, const Vec& a,
                                  const std::vector<double>& times, const ContourSpec& c = default_contour()) {
  detail::check_problem(w, A, a);
  const CVec ac = to_complex(a);
  auto tr = detail::evaluate_on_grid(times, a, kind, "resolvent", [&](double t) {
    return invert_vector(
        [&](cplx s) {
          const cplx g = g_eval(w, kind, s);
          auto x = resolvent_apply(A, g, ac);
          for (auto& v : x) v *= g / s;
          return x;
        },
        t, c);
  });
  detail::common_metadata(tr, w, A);
  tr.metadata["contour"] = contour_name(c);
  return tr;
}

// ---------------------------------------------------------------------------------------------
// Subordination density phi(t, tau) = L^{-1}[(g(s)/s) e^{-tau g(s)}](t).

/// Hankel angle for the density: pi/2 + theta0/2, so that |arg g| stays below pi/2 on the rays
/// while e^{st} still decays. Continuous weights have no positive theta0 and use 0.55 pi.
inline double density_angle(const WeightSpec& w, ProblemKind kind) {
  const double theta0 = subordination_angle(w, kind);
  return std::numbers::pi / 2 + std::max(0.5 * theta0, 0.05 * std::numbers::pi);
}

/// phi(t, .) for fixed t.
///
/// Default mode integrates over the Hankel path |s| = 1/t, arg s = +-density_angle with panels
/// chosen per tau: the path is scanned once, and each scan segment gets enough 16-point panels
/// for the phase of e^{st - tau g} to turn at most 6 radians and its log-magnitude to move at
/// most 10 per panel. The ray is cut where the integrand drops below e^{-40}. Node values of g
/// are cached per (segment, refinement level), so an instance must not be shared across
/// threads. With an explicit contour the nodes are fixed.
class SubordinationDensity {
 public:
  SubordinationDensity(const WeightSpec& w, ProblemKind kind, double t, const ContourSpec& c)
      : w_(w), kind_(kind), t_(t) {
    require_valid(w);
    for (const auto& n : contour_nodes(c, t)) {
      const cplx g = g_eval(w, kind, n.s);
      const cplx pre = n.w * std::exp(n.s * t) * g / n.s;
      if (!detail::finite(pre) || !detail::finite(g)) detail::node_failure(c, n.s);
      if (pre == 0.0) continue;
      fixed_.push_back({pre, g});
    }
    scale_ = 1.0 / g_eval(w, kind, 1.0 / t);
    adaptive_ = false;
  }

  SubordinationDensity(const WeightSpec& w, ProblemKind kind, double t) : w_(w), kind_(kind), t_(t) {
    require_valid(w);
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("subordination density needs t > 0");
    scale_ = 1.0 / g_eval(w, kind, 1.0 / t);
    const double theta = density_angle(w, kind);
    const double rho = 1.0 / t;
    const cplx dir = std::polar(1.0, theta);
    const double r_max = rho + 40.0 / (t * std::abs(std::cos(theta)));
    // Arc: s = rho e^{i psi}, ds = i s d psi. Ray: s = r e^{i theta}, ds = e^{i theta} dr.
    const int arc_scan = 24, ray_scan = 48;
    for (int j = 0; j < arc_scan; ++j) {
      const double a = theta * j / arc_scan, b = theta * (j + 1) / arc_scan;
      segments_.push_back({a, b, true, sample(std::polar(rho, a)), sample(std::polar(rho, b)), {}});
    }
    for (int j = 0; j < ray_scan; ++j) {
      const double a = rho * std::pow(r_max / rho, static_cast<double>(j) / ray_scan);
      const double b = rho * std::pow(r_max / rho, static_cast<double>(j + 1) / ray_scan);
      segments_.push_back({a, b, false, sample(a * dir), sample(b * dir), {}});
    }
    theta_ = theta;
    rho_ = rho;
  }

  double operator()(double tau) const {
    if (!(tau >= 0.0)) throw DomainError("subordination density needs tau >= 0");
    double sum = 0.0;
    if (!adaptive_) {
      for (const auto& n : fixed_) sum += (n.pre * std::exp(-tau * n.g)).real();
      return sum;
    }
    // Last ray segment whose end still carries mass.
    std::size_t last = segments_.size();
    for (std::size_t k = segments_.size(); k-- > 0;) {
      const auto& sg = segments_[k];
      if (std::max(log_mag(sg.lo, tau), log_mag(sg.hi, tau)) > -40.0 || sg.arc) {
        last = k + 1;
        break;
      }
    }
    const auto& rule = quad::gauss_legendre<16>();
    const cplx minus_i_over_pi(0.0, -1.0 / std::numbers::pi);
    const cplx dir = std::polar(1.0, theta_);
    for (std::size_t k = 0; k < last; ++k) {
      const auto& sg = segments_[k];
      const double dphase = std::abs(phase(sg.hi, tau) - phase(sg.lo, tau));
      const double dmag = std::abs(log_mag(sg.hi, tau) - log_mag(sg.lo, tau));
      if (std::max(log_mag(sg.hi, tau), log_mag(sg.lo, tau)) < -60.0) continue;
      int level = 0;
      while ((1 << level) < std::max(dphase / 6.0, dmag / 10.0) && level < kMaxLevel) ++level;
      const auto& gs = node_values(k, level);
      const int panels = 1 << level;
      const double width = (sg.b - sg.a) / panels;
      for (int p = 0; p < panels; ++p) {
        const double mid = sg.a + (p + 0.5) * width;
        for (std::size_t i = 0; i < 16; ++i) {
          const double u = mid + 0.5 * width * rule.nodes[i];
          const double wt = 0.5 * width * rule.weights[i];
          const cplx s = sg.arc ? std::polar(rho_, u) : u * dir;
          const cplx ds = sg.arc ? cplx(0.0, 1.0) * s * wt : dir * wt;
          const cplx g = gs[p * 16 + i];
          sum += (minus_i_over_pi * ds * std::exp(s * t_ - tau * g) * g / s).real();
        }
      }
    }
    return sum;
  }

  double t() const { return t_; }
  /// 1/g(1/t): where the bulk of phi(t, .) sits.
  double scale() const { return scale_; }

 private:
  static constexpr int kMaxLevel = 10;

  struct Sample {
    cplx s, g;
  };
  struct Segment {
    double a, b;
    bool arc;
    Sample lo, hi;
    mutable std::map<int, std::vector<cplx>> cache;
  };
  struct Fixed {
    cplx pre, g;
  };

  Sample sample(cplx s) const {
    const cplx g = g_eval(w_, kind_, s);
    if (!detail::finite(g)) throw ContourError("non-finite symbol on the density contour");
    return {s, g};
  }
  double log_mag(const Sample& x, double tau) const {
    return (x.s * t_ - tau * x.g).real() + std::log(std::abs(x.g) + 1e-300);
  }
  double phase(const Sample& x, double tau) const { return (x.s * t_ - tau * x.g).imag(); }

  const std::vector<cplx>& node_values(std::size_t k, int level) const {
    const auto& sg = segments_[k];
    auto it = sg.cache.find(level);
    if (it != sg.cache.end()) return it->second;
    const auto& rule = quad::gauss_legendre<16>();
    const int panels = 1 << level;
    const double width = (sg.b - sg.a) / panels;
    const cplx dir = std::polar(1.0, theta_);
    std::vector<cplx> gs;
    gs.reserve(16 * panels);
    for (int p = 0; p < panels; ++p) {
      const double mid = sg.a + (p + 0.5) * width;
      for (std::size_t i = 0; i < 16; ++i) {
        const double u = mid + 0.5 * width * rule.nodes[i];
        gs.push_back(sample(sg.arc ? std::polar(rho_, u) : u * dir).g);
      }
    }
    return sg.cache.emplace(level, std::move(gs)).first->second;
  }

  WeightSpec w_;
  ProblemKind kind_;
  double t_;
  double scale_ = 1.0;
  bool adaptive_ = true;
  double theta_ = 0.0, rho_ = 1.0;
  std::vector<Segment> segments_;
  std::vector<Fixed> fixed_;
};

inline double subordination_density(const WeightSpec& w, ProblemKind kind, double t, double tau, const ContourSpec& c) {
  return SubordinationDensity(w, kind, t, c)(tau);
}

inline double subordination_density(const WeightSpec& w, ProblemKind kind, double t, double tau) {
  return SubordinationDensity(w, kind, t)(tau);
}

struct TauQuadrature {
  std::vector<double> nodes, weights, phi;
  double tau_max = 0.0;
  double tail_bound = 0.0;  // estimated mass of phi beyond tau_max
  double mass = 0.0;        // sum of weights * phi
};

struct TauGridOptions {
  double tail_tol = 1e-10;
  int max_panels = 600;
};

/// Composite Gauss-Legendre in tau: geometric panels near 0, uniform bulk, then panels growing
/// by 15% until the tail estimate m r/(1 - r) from consecutive panel masses drops below
/// tail_tol.
inline TauQuadrature subordination_tau_grid(const SubordinationDensity& phi, const TauGridOptions& opt = {}) {
  const auto& rule = quad::gauss_legendre<20>();
  const double sc = phi.scale();
  TauQuadrature q;
  auto panel = [&](double a, double b) {
    double m = 0.0;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double tau = mid + half * rule.nodes[i];
      const double wt = half * rule.weights[i];
      const double f = phi(tau);
      q.nodes.push_back(tau);
      q.weights.push_back(wt);
      q.phi.push_back(f);
      m += wt * f;
    }
    q.mass += m;
    return m;
  };
  double edge = 0.0;
  int panels = 0;
  for (int e = -8; e <= -1; ++e) {
    const double next = sc * std::pow(10.0, e);
    panel(edge, next);
    edge = next;
    ++panels;
  }
  while (edge < 2.0 * sc - 1e-12 * sc) {
    const double next = std::min(2.0 * sc, edge + 0.25 * sc);
    panel(edge, next);
    edge = next;
    ++panels;
  }
  double width = 0.25 * sc, prev = -1.0;
  for (;;) {
    if (panels >= opt.max_panels)
      throw TailNotConvergedError("subordination tail mass did not fall below " + detail::format_number(opt.tail_tol) +
                                  " by tau = " + detail::format_number(edge) + " (t = " + detail::format_number(phi.t()) + ")");
    const double m = panel(edge, edge + width);
    edge += width;
    ++panels;
    width *= 1.15;
    if (prev > 0.0 && m >= 0.0) {
      const double r = m / prev;
      if (r < 0.95) {
        const double tail = m * r / (1.0 - r);
        if (tail < opt.tail_tol) {
          q.tail_bound = tail;
          break;
        }
      }
    }
    prev = m;
  }
  q.tau_max = edge;
  return q;
}

/// int_0^inf phi(t, tau) d tau on the composite grid.
inline double subordination_mass(const WeightSpec& w, ProblemKind kind, double t) {
  return subordination_tau_grid(SubordinationDensity(w, kind, t)).mass;
}

/// u(t) = int_0^inf phi(t, tau) e^{tau A} a d tau.
inline Trajectory solve_subordination(const WeightSpec& w, ProblemKind kind, const Generator& A, const Vec& a,
                                      const std::vector<double>& times, const TauGridOptions& opt = {}) {
  detail::check_problem(w, A, a);
  double worst_tail = 0.0, tau_max = 0.0;
  std::mutex m;
  auto tr = detail::evaluate_on_grid(times, a, kind, "subordination", [&](double t) {
    const SubordinationDensity phi(w, kind, t);
    const auto q = subordination_tau_grid(phi, opt);
    Vec u(a.size(), 0.0);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const double c = q.weights[i] * q.phi[i];
      if (c == 0.0) continue;
      const auto T = semigroup_apply(A, q.nodes[i], a);
      for (std::size_t j = 0; j < u.size(); ++j) u[j] += c * T[j];
    }
    std::lock_guard lock(m);
    worst_tail = std::max(worst_tail, q.tail_bound);
    tau_max = std::max(tau_max, q.tau_max);
    return u;
  });
  detail::common_metadata(tr, w, A);
  tr.metadata["tail_tol"] = detail::format_number(opt.tail_tol);
  tr.metadata["tail_bound"] = detail::format_number(worst_tail);
  tr.metadata["tau_max"] = detail::format_number(tau_max);
  return tr;
}

// ---------------------------------------------------------------------------------------------
// Post-Widder: u(t) = lim (-1)^n/n! (n/t)^{n+1} H^{(n)}(n/t) a.
//
// Jets are taken in x = (s - s0)/s0 with G = g/g0, so a~_{k,p} = s0^k g0^{-p} a_{k,p}. The
// entries then factor as b_{n,k,p} = n! s0^{-(n+1)} g0^{p+1} w_{k,p} with
//   w_{k,p} = (-1)^{n+p} (p!/k!) Q_{n-k} a~_{k,p}(0),   Q = (g/s)(s0(1+x)) / (g0/s0),
// the weights sum to 1, and the solution is sum_{k,p} w_{k,p} (g0 R(g0, A))^{p+1} a.

inline constexpr int kMaxPostWidderOrder = 40;

using IndexPair = std::pair<int, int>;

namespace detail {

inline void check_pw_order(int n) {
  if (n < 1) throw ParameterError("Post-Widder order must be >= 1");
  if (n > kMaxPostWidderOrder)
    throw CapabilityError("Post-Widder order " + std::to_string(n) + " exceeds the cap of " +
                          std::to_string(kMaxPostWidderOrder));
}

// a~[k][p] as jets of order n - k, for 0 <= p <= k <= n.
inline std::vector<std::vector<series::Coeffs>> pw_recurrence(const series::Coeffs& G, int n) {
  const auto Gp = series::truncate(series::deriv(G), n);
  std::vector<std::vector<series::Coeffs>> A(n + 1);
  A[0].push_back(series::constant(1.0, n));
  for (int k = 0; k < n; ++k) {
    const int order = n - k - 1;
    A[k + 1].assign(k + 2, series::constant(0.0, order));
    for (int p = 1; p <= k + 1; ++p) {
      series::Coeffs v = series::truncate(series::mul(A[k][p - 1], Gp), order);
      if (p <= k) v = series::add(v, series::truncate(series::deriv(A[k][p]), order));
      A[k + 1][p] = std::move(v);
    }
  }
  return A;
}

struct PWScaled {
  double g0 = 0.0;
  std::map<IndexPair, double> weights;
};

inline PWScaled pw_scaled(const WeightSpec& w, ProblemKind kind, double s0, int n) {
  check_pw_order(n);
  if (!(s0 > 0.0) || !std::isfinite(s0)) throw DomainError("Post-Widder needs s > 0");
  auto G = g_series_scaled(w, kind, s0, n + 1);
  const double g0 = G[0];
  G = series::scale(G, 1.0 / g0);
  const auto Q = series::div(G, series::linear(1.0, 1.0, n + 1));
  const auto A = pw_recurrence(G, n);
  PWScaled out;
  out.g0 = g0;
  for (int k = 0; k <= n; ++k) {
    // p!/k! accumulated as a product to stay in range
    for (int p = (k == 0 ? 0 : 1); p <= k; ++p) {
      double ratio = 1.0;
      for (int j = p + 1; j <= k; ++j) ratio /= j;
      const double sign = (n + p) % 2 ? -1.0 : 1.0;
      out.weights[{k, p}] = sign * ratio * Q[n - k] * A[k][p][0];
    }
  }
  return out;
}

}  // namespace detail

/// a_{k,p}(s) for 1 <= p <= k <= n (and a_{0,0} = 1), unscaled.
inline std::map<IndexPair, double> postwidder_a(const WeightSpec& w, ProblemKind kind, double s, int n) {
  detail::check_pw_order(n);
  auto G = g_series_scaled(w, kind, s, n + 1);
  const double g0 = G[0];
  G = series::scale(G, 1.0 / g0);
  const auto A = detail::pw_recurrence(G, n);
  std::map<IndexPair, double> out;
  for (int k = 0; k <= n; ++k)
    for (int p = (k == 0 ? 0 : 1); p <= k; ++p)
      out[{k, p}] = A[k][p][0] * std::pow(g0, p) * std::pow(s, -k);
  return out;
}

struct PWTable {
  int n = 0;
  double s = 0.0;
  double g = 0.0;                          // g(s)
  std::map<IndexPair, double> entries;     // b_{n,k,p}(s)
  std::map<IndexPair, double> weights;     // b / (n! s^{-(n+1)} g^{p+1})

  double max_entry() const {
    double m = 0.0;
    for (const auto& [key, v] : entries) m = std::max(m, std::abs(v));
    return m;
  }
  double min_relative_entry() const {
    const double m = max_entry();
    double lo = 0.0;
    for (const auto& [key, v] : entries) lo = std::min(lo, v / m);
    return lo;
  }
};

/// b_{n,k,p}(s) = (-1)^{n+p} C(n,k) (g/s)^{(n-k)}(s) a_{k,p}(s) p!, including the k = p = 0 term
/// (-1)^n (g/s)^{(n)}(s).
inline PWTable postwidder_coeffs(const WeightSpec& w, ProblemKind kind, double s, int n) {
  require_valid(w);
  const auto sc = detail::pw_scaled(w, kind, s, n);
  PWTable tab;
  tab.n = n;
  tab.s = s;
  tab.g = sc.g0;
  tab.weights = sc.weights;
  const double log_base = std::lgamma(n + 1.0) - (n + 1.0) * std::log(s);
  for (const auto& [key, wt] : sc.weights)
    tab.entries[key] = wt * std::exp(log_base + (key.second + 1.0) * std::log(sc.g0));
  return tab;
}

namespace detail {

// sum_p W_p (g0 R(g0, A))^{p+1} a with W_p = sum_k w_{k,p}
inline Vec pw_apply(const PWScaled& sc, int n, const Generator& A, const Vec& a) {
  std::vector<double> W(n + 1, 0.0);
  for (const auto& [key, wt] : sc.weights) W[key.second] += wt;
  Vec u(a.size(), 0.0), v = a;
  for (int p = 0; p <= n; ++p) {
    v = resolvent_apply(A, sc.g0, v);
    for (auto& x : v) x *= sc.g0;
    for (std::size_t j = 0; j < u.size(); ++j) u[j] += W[p] * v[j];
  }
  return u;
}

}  // namespace detail

/// H^{(n)}(s) a, H(s) = (g/s) R(g, A).
inline Vec postwidder_derivative(const WeightSpec& w, ProblemKind kind, const Generator& A, const Vec& a, double s, int n) {
  detail::check_problem(w, A, a);
  const auto sc = detail::pw_scaled(w, kind, s, n);
  auto u = detail::pw_apply(sc, n, A, a);
  const double f = (n % 2 ? -1.0 : 1.0) * std::exp(std::lgamma(n + 1.0) - (n + 1.0) * std::log(s));
  for (auto& x : u) x *= f;
  return u;
}

inline Vec solve_postwidder(const WeightSpec& w, ProblemKind kind, const Generator& A, const Vec& a, double t, int n) {
  detail::check_problem(w, A, a);
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("Post-Widder needs t > 0");
  return detail::pw_apply(detail::pw_scaled(w, kind, n / t, n), n, A, a);
}

inline Trajectory solve_postwidder(const WeightSpec& w, ProblemKind kind, const Generator& A, const Vec& a,
                                   const std::vector<double>& times, int n) {
  detail::check_problem(w, A, a);
  detail::check_pw_order(n);
  auto tr = detail::evaluate_on_grid(times, a, kind, "postwidder",
                                     [&](double t) { return solve_postwidder(w, kind, A, a, t, n); });
  detail::common_metadata(tr, w, A);
  tr.metadata["order"] = std::to_string(n);
  return tr;
}

// ---------------------------------------------------------------------------------------------
// Product integration of u = a + k * Au with piecewise-constant u on a uniform grid.

/// omega_m = K((m+1) dt) - K(m dt), K the primitive of k1 (Caputo) or k2 (RL).
inline std::vector<double> volterra_weights(const WeightSpec& w, ProblemKind kind, double dt, int steps) {
  const KernelId id = kernel_for(kind);
  std::vector<double> K(steps + 1);
  parallel_for(K.size(), [&](std::size_t m) { K[m] = kernel_primitive(w, id, m * dt); });
  std::vector<double> omega(steps);
  for (int m = 0; m < steps; ++m) omega[m] = K[m + 1] - K[m];
  return omega;
}

/// Each step solves (I - omega_0 A) u_n = a + sum_{m=1}^{n-1} omega_m A u_{n-m} as
/// (1/omega_0) R(1/omega_0, A) rhs.
inline Trajectory solve_volterra(const WeightSpec& w, ProblemKind kind, const Generator& A, const Vec& a, double t_end,
                                 int steps) {
  detail::check_problem(w, A, a);
  if (steps < 2) throw ParameterError("Volterra stepper needs steps >= 2");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("Volterra stepper needs t_end > 0");
  const double dt = t_end / steps;
  const auto omega = volterra_weights(w, kind, dt, steps);
  if (!(omega[0] > 0.0)) throw SingularError("first convolution weight is not positive");
  const double z = 1.0 / omega[0];

  Trajectory tr;
  tr.kind = kind;
  tr.method = "volterra";
  tr.times.resize(steps + 1);
  tr.states.resize(steps + 1);
  tr.times[0] = 0.0;
  tr.states[0] = a;
  std::vector<Vec> Au(steps + 1);
  for (int n = 1; n <= steps; ++n) {
    Vec rhs = a;
    for (int m = 1; m < n; ++m) {
      const Vec& v = Au[n - m];
      for (std::size_t j = 0; j < rhs.size(); ++j) rhs[j] += omega[m] * v[j];
    }
    Vec u = resolvent_apply(A, z, rhs);
    for (auto& x : u) x *= z;
    Au[n] = fracevo::apply(A, u);
    tr.times[n] = n * dt;
    tr.states[n] = std::move(u);
  }
  detail::common_metadata(tr, w, A);
  tr.metadata["steps"] = std::to_string(steps);
  return tr;
}

}  // namespace fracevo
