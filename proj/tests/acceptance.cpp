// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fracevo/fracevo.hpp"

using namespace fracevo;

namespace {

constexpr ProblemKind C = ProblemKind::Caputo;
constexpr ProblemKind RL = ProblemKind::RiemannLiouville;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(a * std::pow(b / a, static_cast<double>(i) / (n - 1)));
  return g;
}

double rel_diff(const Vec& a, const Vec& b) {
  double d = 0.0, n = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += (a[i] - b[i]) * (a[i] - b[i]);
    n += b[i] * b[i];
  }
  return std::sqrt(d / n);
}

Vec bump(std::size_t n) {
  Vec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(std::numbers::pi * (i + 1.0) / (n + 1.0)) + 0.1;
  return v;
}

const WeightSpec kHalf = DiscreteWeight{0.5, {}};
const WeightSpec kTwoTerm = DiscreteWeight{0.7, {{0.2, 1.5}}};
const WeightSpec kConst = ConstantWeight{};

// 1
void convolution_identity(Outcome& o) {
  double worst_d = 0.0, worst_c = 0.0;
  for (const auto& w : {kHalf, kTwoTerm, kConst})
    for (double t : {0.1, 1.0, 10.0}) {
      const double e = std::abs(convolution_identity_check(w, t) - 1.0);
      (is_discrete(w) ? worst_d : worst_c) = std::max(is_discrete(w) ? worst_d : worst_c, e);
    }
  o.detail << "max |k1*k2 - 1| discrete " << sci(worst_d) << ", constant " << sci(worst_c);
  o.require(worst_d <= 1e-6, "discrete > 1e-6");
  o.require(worst_c <= 1e-5, "constant > 1e-5");
}

// 2
void double_term_oracle(Outcome& o) {
  double worst = 0.0;
  const struct {
    double a, a1, b1;
  } cases[] = {{0.7, 0.2, 1.5}, {0.5, 0.25, 1.0}, {0.95, 0.05, 3.0}, {0.4, 0.35, 0.1}};
  for (const auto& c : cases) {
    const WeightSpec w = DiscreteWeight{c.a, {{c.a1, c.b1}}};
    for (double t : log_grid(1e-2, 1e2, 20)) {
      const double want = std::pow(t, c.a - 1.0) * mittag_leffler({c.a - c.a1, c.a}, -c.b1 * std::pow(t, c.a - c.a1));
      worst = std::max(worst, std::abs(k1_spectral(w, t) - want) / std::abs(want));
    }
  }
  o.detail << "max relative error of spectral k1 vs two-parameter ML " << sci(worst);
  o.require(worst <= 1e-8, "error > 1e-8");
}

// 3
void spectral_positivity(Outcome& o) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double min_k = INFINITY;
  int cm_fail = 0;
  for (int i = 0; i < 5; ++i) {
    DiscreteWeight w;
    w.alpha = 0.05 + 0.9 * u(rng);
    double top = w.alpha;
    const int m = 1 + i % 3;
    for (int j = 0; j < m; ++j) {
      top *= 0.2 + 0.7 * u(rng);
      w.terms.push_back({top, 0.1 + 4.9 * u(rng)});
    }
    require_valid(w);
    for (double r : log_grid(1e-6, 1e6, 100)) min_k = std::min(min_k, k1_spectral_density(w, r));
    const auto grid = log_grid(1e-2, 1e2, 40);
    for (KernelId id : {KernelId::K1, KernelId::K2})
      if (!cm_check(w, id, grid).passed) ++cm_fail;
  }
  o.detail << "min K(r) = " << sci(min_k) << " over 5 weights x 100 r; CM order-4 failures " << cm_fail << "/10";
  o.require(min_k > 0.0, "K(r) <= 0");
  o.require(cm_fail == 0, "CM check");
}

// 4
void talbot_pairs(Outcome& o) {
  std::vector<std::pair<std::function<cplx(cplx)>, std::function<double(double)>>> pairs;
  for (double beta : {0.3, 1.0, 1.5, 2.0})
    pairs.push_back({[beta](cplx s) { return std::pow(s, -beta); },
                     [beta](double t) { return std::pow(t, beta - 1) / fracevo::gamma(beta); }});
  const struct {
    double a, b, lam;
  } ml[] = {{0.5, 1.0, 1.0}, {0.8, 1.0, 2.0}, {0.3, 0.6, 1.0}, {0.9, 0.9, 0.5}, {0.6, 1.6, 1.0}};
  for (const auto& m : ml)
    pairs.push_back({[m](cplx s) { return std::pow(s, m.a - m.b) / (std::pow(s, m.a) + m.lam); },
                     [m](double t) { return std::pow(t, m.b - 1) * mittag_leffler({m.a, m.b}, -m.lam * std::pow(t, m.a)); }});
  double worst = 0.0;
  for (const auto& [F, f] : pairs)
    for (double t : log_grid(0.01, 100.0, 25))
      worst = std::max(worst, std::abs(invert_scalar(F, t, FixedTalbot{32}) - f(t)) / std::abs(f(t)));
  o.detail << "max relative error " << sci(worst) << " over " << pairs.size() << " pairs x 25 t";
  o.require(worst <= 1e-8, "error > 1e-8");
}

struct Case {
  ProblemKind kind;
  WeightSpec w;
};

const std::vector<Case> kCross = {{C, kHalf}, {RL, kHalf}, {C, DiscreteWeight{0.8, {{0.4, 1.0}}}}, {RL, kConst}};
const std::vector<Generator> kGens = {ScalarGenerator{-1.0}, DirichletLaplacian1D{16, 1.0}};

Vec datum_for(const Generator& A) { return dimension(A) == 1 ? Vec{1.0} : bump(dimension(A)); }

// 5
void cross_method(Outcome& o) {
  double sub = 0.0, vol = 0.0;
  for (const auto& cs : kCross)
    for (const auto& A : kGens) {
      const Vec a = datum_for(A);
      const std::vector<double> ts = {0.25, 0.5, 1.0};
      const auto r = solve_resolvent(cs.w, cs.kind, A, a, ts);
      const auto s = solve_subordination(cs.w, cs.kind, A, a, ts);
      const auto v = solve_volterra(cs.w, cs.kind, A, a, 1.0, 1024);
      for (std::size_t i = 1; i < r.states.size(); ++i) sub = std::max(sub, rel_diff(s.states[i], r.states[i]));
      vol = std::max({vol, rel_diff(v.states[256], r.states[1]), rel_diff(v.states[512], r.states[2]),
                      rel_diff(v.states[1024], r.states[3])});
    }
  o.detail << "subordination vs resolvent " << sci(sub) << ", Volterra(1024) vs resolvent " << sci(vol);
  o.require(sub <= 1e-5, "subordination > 1e-5");
  o.require(vol <= 2e-3, "Volterra > 2e-3");
}

// 6
void scalar_exact(Outcome& o) {
  double worst = 0.0;
  for (double alpha : {0.3, 0.5, 0.75})
    for (double lambda : {-0.5, -1.0, -2.0}) {
      const std::vector<double> ts = {0.5, 1.0, 2.0};
      const auto c = solve_resolvent(DiscreteWeight{alpha, {}}, C, ScalarGenerator{lambda}, {1.0}, ts);
      const auto r = solve_resolvent(DiscreteWeight{alpha, {}}, RL, ScalarGenerator{lambda}, {1.0}, ts);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        worst = std::max(worst, std::abs(c.states[i + 1][0] - mittag_leffler({alpha, 1.0}, lambda * std::pow(ts[i], alpha))));
        worst = std::max(worst,
                         std::abs(r.states[i + 1][0] - mittag_leffler({1.0 - alpha, 1.0}, lambda * std::pow(ts[i], 1.0 - alpha))));
      }
    }
  o.detail << "max |u - E(lambda t^gamma)| " << sci(worst);
  o.require(worst <= 1e-8, "error > 1e-8");
}

// 7
void postwidder(Outcome& o) {
  double jet = 0.0, neg = 0.0, leib = 0.0;
  for (const auto& w : {kHalf, kTwoTerm, kConst})
    for (auto kind : {C, RL}) {
      const auto g = g_jet(w, kind, 1.7, 3);
      const auto a = postwidder_a(w, kind, 1.7, 2);
      jet = std::max({jet, std::abs(a.at({2, 1}) - 2 * g[2]) / std::abs(2 * g[2]),
                      std::abs(a.at({2, 2}) - g[1] * g[1]) / (g[1] * g[1])});
      for (double s : {0.1, 1.0, 10.0})
        for (int n = 1; n <= 16; ++n) {
          const auto t = postwidder_coeffs(w, kind, s, n);
          neg = std::min(neg, t.min_relative_entry());
          if (n > 12) continue;
          double acc = 0.0;
          for (const auto& [key, b] : t.entries) acc += b * std::pow(t.g, -(key.second + 1.0));
          leib = std::max(leib, std::abs(acc / std::exp(std::lgamma(n + 1.0) - (n + 1.0) * std::log(s)) - 1.0));
        }
    }
  const double ref = solve_resolvent(kHalf, C, ScalarGenerator{-1.0}, {1.0}, {1.0}).states[1][0];
  std::vector<double> errs;
  bool monotone = true;
  for (int n : {4, 8, 16, 32}) {
    errs.push_back(std::abs(solve_postwidder(kHalf, C, ScalarGenerator{-1.0}, {1.0}, 1.0, n)[0] - ref));
    if (errs.size() > 1 && !(errs.back() < errs[errs.size() - 2])) monotone = false;
  }
  o.detail << "jet identity " << sci(jet) << ", min b/max|b| " << sci(neg) << ", Leibniz " << sci(leib) << ", errors n=4..32:";
  for (double e : errs) o.detail << " " << sci(e);
  o.require(jet <= 1e-12, "jet identity");
  o.require(neg >= -1e-12, "negative entry");
  o.require(leib <= 1e-9, "Leibniz");
  o.require(monotone, "not monotone");
}

// 8
void density(Outcome& o) {
  double lo = 0.0, mass = 0.0, closed = 0.0;
  for (const auto& w : {kHalf, kConst})
    for (auto kind : {C, RL})
      for (double t : {0.1, 1.0, 10.0}) {
        const SubordinationDensity phi(w, kind, t);
        const auto q = subordination_tau_grid(phi);
        for (double f : q.phi) lo = std::min(lo, f);
        for (int i = 0; i <= 100; ++i) lo = std::min(lo, phi(q.tau_max * i / 100.0));
        mass = std::max(mass, std::abs(q.mass - 1.0));
        if (kind == C && is_discrete(w))
          for (int i = 0; i <= 50; ++i) {
            const double tau = 8.0 * std::sqrt(t) * i / 50.0;
            closed = std::max(closed, std::abs(phi(tau) - std::exp(-tau * tau / (4 * t)) / std::sqrt(std::numbers::pi * t)));
          }
      }
  o.detail << "min phi " << sci(lo) << ", max |mass - 1| " << sci(mass) << ", half-order closed form " << sci(closed);
  o.require(lo >= -1e-9, "phi < -1e-9");
  o.require(mass <= 1e-6, "mass");
  o.require(closed <= 1e-7, "closed form");
}

// 9
void contraction_positivity(Outcome& o) {
  double excess = -INFINITY, lo = INFINITY;
  for (const auto& cs : kCross)
    for (const auto& A : kGens) {
      const Vec a = datum_for(A);
      const std::vector<double> ts = {0.1, 0.5, 1.0, 3.0};
      std::vector<Trajectory> trs = {solve_resolvent(cs.w, cs.kind, A, a, ts), solve_subordination(cs.w, cs.kind, A, a, ts),
                                     solve_postwidder(cs.w, cs.kind, A, a, ts, 16), solve_volterra(cs.w, cs.kind, A, a, 3.0, 768)};
      for (const auto& tr : trs)
        for (const auto& u : tr.states) {
          excess = std::max(excess, norm2(u) - norm2(a));
          if (dimension(A) > 1)
            for (double x : u) lo = std::min(lo, x);
        }
    }
  o.detail << "max ||u(t)|| - ||a|| = " << sci(excess) << ", min Laplacian component " << sci(lo) << " (4 methods)";
  o.require(excess <= 1e-8, "norm growth");
  o.require(lo >= -1e-7, "negative component");
}

// 10
void sector(Outcome& o) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lr(-3.0, 3.0), ar(-1.0, 1.0);
  std::vector<cplx> samples;
  for (int i = 0; i < 500; ++i) samples.push_back(std::polar(std::pow(10.0, lr(rng)), std::numbers::pi * ar(rng)));
  double worst = -INFINITY;
  for (const auto& w : {kHalf, kTwoTerm, WeightSpec{DiscreteWeight{0.9, {{0.6, 2.0}, {0.1, 0.5}}}}, kConst})
    for (auto kind : {C, RL}) {
      const auto rep = sector_angle_check(w, kind, samples, sector_exponent(w, kind), 1e-12);
      worst = std::max(worst, rep.max_excess);
      o.require(rep.passed, to_string(w) + " " + to_string(kind));
    }
  o.detail << "max(|arg g| - gamma |arg s|) = " << sci(worst)
           << "; gamma = alpha (Caputo), 1 - alpha_m (RL, since arg(s/h) reaches (1 - alpha_m)|arg s|), 1 (constant)";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria = {
      {"convolution identity", convolution_identity},
      {"double-term kernel oracle", double_term_oracle},
      {"spectral positivity and complete monotonicity", spectral_positivity},
      {"Talbot transform pairs", talbot_pairs},
      {"cross-method agreement", cross_method},
      {"scalar Mittag-Leffler solutions", scalar_exact},
      {"Post-Widder coefficients and convergence", postwidder},
      {"subordination density", density},
      {"contraction and positivity", contraction_positivity},
      {"sector bound", sector},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.str().c_str(),
                secs);
  }
  return failures;
}
