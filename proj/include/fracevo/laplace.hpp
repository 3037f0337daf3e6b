#pragma once

// Numerical inverse Laplace transform on contours in the left-opening sector.
// Only the upper half of each contour is evaluated; F(conj s) = conj F(s) is required.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "fracevo/error.hpp"
#include "fracevo/quadrature.hpp"

namespace fracevo {

using cplx = std::complex<double>;

/// Abate-Valko fixed Talbot contour. The scale r = 2 min(N, kTalbotScaleCap) / (5t) stops growing
/// past kTalbotScaleCap nodes; extra nodes refine the same contour. Uncapped, rounding error grows
/// like eps e^{0.4 N}.
struct FixedTalbot {
  int nodes = 32;
};

inline constexpr int kTalbotScaleCap = 16;

struct BromwichLine {
  double abscissa = 1.0;
  double halfheight = 200.0;
  int nodes = 1024;
};

/// Arc |s| = rho for |arg s| <= theta joined to the rays arg s = +-theta out to |s| = ray_cutoff.
struct HankelSector {
  double rho = 1.0;
  double theta = 5.0 * std::numbers::pi / 6.0;
  int arc_nodes = 32;
  int ray_nodes = 160;
  double ray_cutoff = 50.0;
};

using ContourSpec = std::variant<FixedTalbot, BromwichLine, HankelSector>;

inline std::string contour_name(const ContourSpec& c) {
  if (std::holds_alternative<FixedTalbot>(c)) return "talbot(" + std::to_string(std::get<FixedTalbot>(c).nodes) + ")";
  if (std::holds_alternative<BromwichLine>(c)) return "bromwich";
  return "hankel";
}

/// HankelSector with rho = 1/t and a cutoff where e^{st} has decayed below 1e-17.
inline HankelSector hankel_for(double t, double theta = 5.0 * std::numbers::pi / 6.0, int arc_nodes = 32,
                               int ray_nodes = 160) {
  HankelSector h;
  h.rho = 1.0 / t;
  h.theta = theta;
  h.arc_nodes = arc_nodes;
  h.ray_nodes = ray_nodes;
  h.ray_cutoff = h.rho + 40.0 / (t * std::abs(std::cos(theta)));
  return h;
}

inline void validate_contour(const ContourSpec& c) {
  if (const auto* f = std::get_if<FixedTalbot>(&c)) {
    if (f->nodes < 4) throw ParameterError("FixedTalbot needs at least 4 nodes");
  } else if (const auto* b = std::get_if<BromwichLine>(&c)) {
    if (b->nodes < 4) throw ParameterError("BromwichLine needs at least 4 nodes");
    if (!(b->abscissa > 0.0) || !(b->halfheight > 0.0)) throw ParameterError("BromwichLine needs positive abscissa and height");
  } else {
    const auto& h = std::get<HankelSector>(c);
    if (h.arc_nodes < 4 || h.ray_nodes < 4) throw ParameterError("HankelSector needs at least 4 nodes per piece");
    if (!(h.rho > 0.0)) throw ParameterError("HankelSector needs rho > 0");
    if (!(h.theta > std::numbers::pi / 2 && h.theta < std::numbers::pi))
      throw ParameterError("HankelSector theta must lie in (pi/2, pi)");
    if (!(h.ray_cutoff > h.rho)) throw ParameterError("HankelSector ray_cutoff must exceed rho");
  }
}

/// f(t) ~ sum_k Re(w_k e^{s_k t} F(s_k)) over the upper half of the contour.
struct ContourNode {
  cplx s;
  cplx w;
};

namespace detail {

// Gauss-Legendre panels of 16 points covering `count` nodes (rounded up to whole panels).
template <class Emit>
void gauss_panels(double a, double b, int count, Emit&& emit) {
  const auto& rule = quad::gauss_legendre<16>();
  const int panels = std::max(1, (count + 15) / 16);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    for (std::size_t i = 0; i < 16; ++i) emit(mid + 0.5 * width * rule.nodes[i], 0.5 * width * rule.weights[i]);
  }
}

}  // namespace detail

inline std::vector<ContourNode> contour_nodes(const ContourSpec& c, double t) {
  validate_contour(c);
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("inverse transform needs t > 0");
  std::vector<ContourNode> nodes;
  const double pi = std::numbers::pi;
  if (const auto* ft = std::get_if<FixedTalbot>(&c)) {
    const int M = ft->nodes;
    const double r = 2.0 * std::min(M, kTalbotScaleCap) / (5.0 * t);
    nodes.push_back({cplx(r, 0.0), cplx(0.5 * r / M, 0.0)});
    for (int k = 1; k < M; ++k) {
      const double th = k * pi / M;
      const double cot = std::cos(th) / std::sin(th);
      const double sigma = th + (th * cot - 1.0) * cot;
      nodes.push_back({r * th * cplx(cot, 1.0), (r / M) * cplx(1.0, sigma)});
    }
  } else if (const auto* bl = std::get_if<BromwichLine>(&c)) {
    detail::gauss_panels(0.0, bl->halfheight, bl->nodes, [&](double y, double w) {
      nodes.push_back({cplx(bl->abscissa, y), cplx(w / pi, 0.0)});
    });
  } else {
    const auto& h = std::get<HankelSector>(c);
    const cplx minus_i_over_pi(0.0, -1.0 / pi);
    detail::gauss_panels(0.0, h.theta, h.arc_nodes, [&](double psi, double w) {
      const cplx s = std::polar(h.rho, psi);
      nodes.push_back({s, minus_i_over_pi * cplx(0.0, 1.0) * s * w});
    });
    const cplx dir = std::polar(1.0, h.theta);
    detail::gauss_panels(h.rho, h.ray_cutoff, h.ray_nodes, [&](double r, double w) {
      nodes.push_back({r * dir, minus_i_over_pi * dir * w});
    });
  }
  return nodes;
}

namespace detail {

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

[[noreturn]] inline void node_failure(const ContourSpec& c, cplx s) {
  throw ContourError("non-finite transform value at s = (" + std::to_string(s.real()) + ", " + std::to_string(s.imag()) +
                     ") on contour " + contour_name(c) + "; try a different contour (e.g. HankelSector or more nodes)");
}

inline void symmetry_failure(cplx s) {
  throw ContourError("transform fails conjugate symmetry F(conj s) = conj F(s) near s = (" + std::to_string(s.real()) +
                     ", " + std::to_string(s.imag()) + ")");
}

inline cplx probe_point(const std::vector<ContourNode>& nodes) {
  // an interior node with nonzero imaginary part
  for (std::size_t k = nodes.size() / 3; k < nodes.size(); ++k)
    if (nodes[k].s.imag() != 0.0) return nodes[k].s;
  return {1.0, 1.0};
}

}  // namespace detail

template <class F>
double invert_scalar(F&& f, double t, const ContourSpec& c) {
  const auto nodes = contour_nodes(c, t);
  {
    const cplx s = detail::probe_point(nodes);
    const cplx a = f(s), b = f(std::conj(s));
    if (detail::finite(a) && std::abs(b - std::conj(a)) > 1e-8 * std::abs(a)) detail::symmetry_failure(s);
  }
  double sum = 0.0;
  for (const auto& n : nodes) {
    const cplx v = f(n.s);
    if (!detail::finite(v)) detail::node_failure(c, n.s);
    const cplx term = n.w * std::exp(n.s * t) * v;
    if (detail::finite(term)) sum += term.real();
    else detail::node_failure(c, n.s);
  }
  return sum;
}

inline FixedTalbot default_contour() { return FixedTalbot{32}; }

template <class F>
double invert_scalar(F&& f, double t) {
  return invert_scalar(std::forward<F>(f), t, default_contour());
}

/// Componentwise inversion; one evaluation of F per node.
template <class F>
std::vector<double> invert_vector(F&& f, double t, const ContourSpec& c) {
  const auto nodes = contour_nodes(c, t);
  {
    const cplx s = detail::probe_point(nodes);
    const std::vector<cplx> a = f(s), b = f(std::conj(s));
    double diff = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      diff = std::max(diff, std::abs(b[i] - std::conj(a[i])));
      norm = std::max(norm, std::abs(a[i]));
    }
    if (diff > 1e-8 * norm) detail::symmetry_failure(s);
  }
  std::vector<double> sum;
  for (const auto& n : nodes) {
    const std::vector<cplx> v = f(n.s);
    if (sum.empty()) sum.assign(v.size(), 0.0);
    const cplx e = n.w * std::exp(n.s * t);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!detail::finite(v[i])) detail::node_failure(c, n.s);
      const cplx term = e * v[i];
      if (!detail::finite(term)) detail::node_failure(c, n.s);
      sum[i] += term.real();
    }
  }
  return sum;
}

}  // namespace fracevo
