#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fracevo/symbols.hpp"

namespace {

using namespace fracevo;
using std::numbers::pi;

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::vector<WeightSpec> sample_weights() {
  return {DiscreteWeight{0.5, {}}, DiscreteWeight{0.8, {{0.4, 0.5}}}, DiscreteWeight{0.7, {{0.2, 1.5}}},
          DiscreteWeight{0.9, {{0.6, 2.0}, {0.1, 0.3}}}, ConstantWeight{}, PolynomialWeight{{1.0, 2.0, 0.5}}};
}

// ---- jets

TEST(Jet, ArithmeticMatchesClosedForms) {
  // (1+x)^0.5 * (1+x)^0.5 = 1 + x
  const auto a = series::binomial_series(0.5, 10);
  const auto sq = series::mul(a, a);
  EXPECT_NEAR(sq[0], 1.0, 1e-15);
  EXPECT_NEAR(sq[1], 1.0, 1e-15);
  for (int k = 2; k <= 10; ++k) EXPECT_NEAR(sq[k], 0.0, 1e-15) << k;
  // division inverts multiplication
  const auto b = series::binomial_series(-0.3, 10);
  const auto back = series::div(series::mul(a, b), b);
  for (int k = 0; k <= 10; ++k) EXPECT_NEAR(back[k], a[k], 1e-14) << k;
  EXPECT_THROW(series::div(a, series::constant(0.0, 10)), SingularError);
}

TEST(Jet, PowerAndLogJets) {
  const auto p = power_jet(2.0, 3.0, 5);
  const double want[] = {8, 12, 6, 1, 0, 0};
  for (int k = 0; k <= 5; ++k) EXPECT_NEAR(p[k], want[k], 1e-13) << k;
  const auto l = log_jet(2.0, 4);
  EXPECT_NEAR(l[0], std::log(2.0), 1e-15);
  EXPECT_NEAR(l[1], 0.5, 1e-15);
  EXPECT_NEAR(l[2], -0.125, 1e-15);
  EXPECT_NEAR(l[3], 1.0 / 24.0, 1e-15);
  EXPECT_NEAR(derivative(l).derivative(1), -0.25, 1e-15);
}

TEST(Jet, OrderCap) {
  EXPECT_NO_THROW(power_jet(1.0, 0.5, kMaxJetOrder));
  EXPECT_THROW(power_jet(1.0, 0.5, kMaxJetOrder + 1), CapabilityError);
  EXPECT_THROW(g_jet(ConstantWeight{}, ProblemKind::Caputo, 1.0, 64), CapabilityError);
}

TEST(Jet, ReexpansionIsExactForPolynomials) {
  const Jet p{0.0, {1.0, -2.0, 3.0, 0.5}};
  const auto q = reexpand(p, 1.5);
  for (double x : {-0.7, 0.0, 0.3, 2.0}) {
    EXPECT_NEAR(series::evaluate(q.coeffs, x), series::evaluate(p.coeffs, x + 1.5), 1e-12);
  }
}

// ---- weights

TEST(Weight, ValidateExamples) {
  EXPECT_TRUE(validate(DiscreteWeight{0.5, {}}).empty());
  const auto bad = validate(DiscreteWeight{0.5, {{0.7, 1.0}}});
  ASSERT_FALSE(bad.empty());
  EXPECT_TRUE(has_errors(bad));
  EXPECT_NE(bad[0].message.find("ordering violated"), std::string::npos);

  const auto nu = validate(PolynomialWeight{{0.0, 1.0}});
  EXPECT_FALSE(has_errors(nu));
  bool found = false;
  for (const auto& d : nu) found = found || (d.message.find("beta^nu") != std::string::npos && d.message.find("nu=1") != std::string::npos);
  EXPECT_TRUE(found);

  EXPECT_TRUE(has_errors(validate(DiscreteWeight{1.0, {}})));
  EXPECT_TRUE(has_errors(validate(DiscreteWeight{0.5, {{0.2, -1.0}}})));
  EXPECT_TRUE(has_errors(validate(PolynomialWeight{{0.0, 0.0}})));
  EXPECT_TRUE(has_errors(validate(PolynomialWeight{{1.0, -3.0}})));
  // mu(1) = 0 only warns
  const auto end0 = validate(PolynomialWeight{{1.0, -1.0}});
  EXPECT_FALSE(has_errors(end0));
  EXPECT_FALSE(end0.empty());
  EXPECT_TRUE(validate(ConstantWeight{}).empty());
  EXPECT_THROW(require_valid(DiscreteWeight{0.5, {{0.7, 1.0}}}), ParameterError);
}

TEST(Weight, GrammarRoundTrip) {
  for (const char* text : {"discrete:0.5", "discrete:0.8,0.4:0.5", "discrete:0.9,0.6:2,0.1:0.3", "constant", "poly:0,1",
                           "poly:1,2,0.5"}) {
    const auto w = parse_weight(text);
    EXPECT_EQ(to_string(w), text);
    EXPECT_EQ(parse_weight(to_string(w)), w);
  }
  EXPECT_THROW(parse_weight("discrete:"), ParameterError);
  EXPECT_THROW(parse_weight("discrete:0.5,0.2"), ParameterError);
  EXPECT_THROW(parse_weight("discrete:abc"), ParameterError);
  EXPECT_THROW(parse_weight("lognormal:1"), ParameterError);
  EXPECT_THROW(parse_weight("poly:1,,2"), ParameterError);
  EXPECT_EQ(parse_kind("rl"), ProblemKind::RiemannLiouville);
  EXPECT_THROW(parse_kind("grunwald"), ParameterError);
}

// ---- h and g

TEST(Symbols, HExamples) {
  EXPECT_NEAR(h_eval(DiscreteWeight{0.5, {}}, 4.0).real(), 2.0, 1e-15);
  EXPECT_NEAR(h_eval(ConstantWeight{}, std::numbers::e).real(), std::numbers::e - 1.0, 1e-15);
  EXPECT_NEAR(h_eval(DiscreteWeight{0.8, {{0.4, 1.0}}}, 1.0).real(), 2.0, 1e-15);
  EXPECT_NEAR(h_eval(ConstantWeight{}, 1.0).real(), 1.0, 1e-15);
  EXPECT_THROW(h_eval(ConstantWeight{}, -1.0), DomainError);
  EXPECT_THROW(h_eval(DiscreteWeight{0.5, {}}, 0.0), DomainError);
}

TEST(Symbols, ConstantWeightContinuousThroughRemovablePoint) {
  for (double eps : {1e-3, 1e-4 * 0.999, 1e-5, 1e-8}) {
    for (cplx d : {cplx(eps, 0), cplx(-eps, 0), cplx(0, eps), cplx(eps, eps) / std::sqrt(2.0)}) {
      const cplx s = 1.0 + d;
      // h(1+u) = 1 + u/2 - u^2/12 + u^3/24 - ...
      const cplx want = 1.0 + d / 2.0 - d * d / 12.0 + d * d * d / 24.0;
      EXPECT_LT(std::abs(h_eval(ConstantWeight{}, s) - want), 1e-12) << s;
    }
  }
}

TEST(Symbols, PolynomialQuadratureMatchesClosedForms) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mod(-6.0, 9.0), arg(-3.1, 3.1);
  for (int i = 0; i < 200; ++i) {
    const cplx s = std::polar(std::exp(mod(rng)), arg(rng));
    const cplx L = std::log(s);
    const cplx constant = h_eval(ConstantWeight{}, s);
    EXPECT_LT(std::abs(h_eval(PolynomialWeight{{1.0}}, s) - constant), 1e-12 * std::abs(constant)) << s;
    // int beta s^beta = s/L - (s-1)/L^2
    const cplx lin = s / L - (s - 1.0) / (L * L);
    EXPECT_LT(std::abs(h_eval(PolynomialWeight{{0.0, 1.0}}, s) - lin), 1e-12 * std::abs(lin)) << s;
  }
}

TEST(Symbols, GExamples) {
  const auto rl = ProblemKind::RiemannLiouville;
  EXPECT_NEAR(g_eval(DiscreteWeight{0.5, {}}, rl, 4.0), 2.0, 1e-15);
  for (double s : {0.3, 2.0, 50.0}) {
    EXPECT_LT(rel_err(g_eval(ConstantWeight{}, rl, s), s * std::log(s) / (s - 1.0)), 1e-14);
  }
  EXPECT_NEAR(g_eval(DiscreteWeight{0.6, {{0.3, 0.5}, {0.1, 2.0}}}, ProblemKind::Caputo, 1.0), 3.5, 1e-14);
}

// ---- g jets

TEST(GJet, TrivialCases) {
  const double a = 0.37;
  const auto j = g_jet(DiscreteWeight{a, {}}, ProblemKind::Caputo, 1.0, 2);
  EXPECT_NEAR(j[0], 1.0, 1e-15);
  EXPECT_NEAR(j[1], a, 1e-15);
  EXPECT_NEAR(j[2], a * (a - 1) / 2, 1e-15);
  for (const auto& w : sample_weights()) {
    for (auto kind : {ProblemKind::Caputo, ProblemKind::RiemannLiouville}) {
      for (double s : {0.2, 1.0, 7.0}) {
        const auto z = g_jet(w, kind, s, 0);
        ASSERT_EQ(z.order(), 0);
        EXPECT_LT(rel_err(z[0], g_eval(w, kind, s)), 1e-12);
      }
    }
  }
}

TEST(GJet, DiscreteRLMatchesTaylorOracle) {
  const double want[] = {0.83303653561283442078,  0.12908727069647773053,   -0.025590371292879261104,
                         0.0075183620873440032524, -0.0025747902249253192317, 0.0009582125505984620944,
                         -0.00037582024269082252063, 0.0001528459573972895513, -0.000063839658826527865649};
  const auto j = g_jet(DiscreteWeight{0.8, {{0.4, 0.5}}}, ProblemKind::RiemannLiouville, 2.0, 8);
  for (int k = 0; k <= 8; ++k) EXPECT_LT(rel_err(j[k], want[k]), 1e-12) << k;
}

// Central differences of order k (O(h^2)), Richardson-extrapolated to O(h^4).
double central_derivative(const std::function<double(double)>& f, double s, int k, double h) {
  auto d = [&](double step) {
    double acc = 0.0, binom = 1.0;
    for (int j = 0; j <= k; ++j) {
      acc += (j % 2 ? -1.0 : 1.0) * binom * f(s + (0.5 * k - j) * step);
      binom = binom * (k - j) / (j + 1);
    }
    return acc / std::pow(step, k);
  };
  return (4.0 * d(h / 2) - d(h)) / 3.0;
}

TEST(GJet, DiscreteRLMatchesFiniteDifferences) {
  const WeightSpec w = DiscreteWeight{0.8, {{0.4, 0.5}}};
  const auto kind = ProblemKind::RiemannLiouville;
  const auto j = g_jet(w, kind, 2.0, 5);
  const std::function<double(double)> g = [&](double s) { return g_eval(w, kind, s); };
  double factorial = 1.0;
  for (int k = 1; k <= 5; ++k) {
    factorial *= k;
    EXPECT_NEAR(j[k], central_derivative(g, 2.0, k, 0.1) / factorial, 1e-6) << k;
  }
}

TEST(GJet, ConstantWeightMatchesTaylorOracle) {
  const struct {
    double s;
    double c[8];
  } cases[] = {
      {0.5,
       {0.72134752044448170368, 0.63867394011664439051, -0.23854552870301250661, 0.2440382864660710612,
        -0.3131974716923292528, 0.44916210138097724648, -0.68844009349876614076, 1.103070856983709598}},
      {1.0, {1, 0.5, -1.0 / 12, 1.0 / 24, -0.026388888888888888889, 0.01875, -0.01426917989417989418, 0.011367394179894179894}},
      {3.0,
       {1.8204784532536747872, 0.35788226016668869736, -0.016526662829172328643, 0.0026544330461990071449,
        -0.0005484171318750577117, 0.00012793029043621885491, -0.000032075786200928860387, 8.4373960275405730441e-6}},
  };
  for (const auto& c : cases) {
    const auto j = g_jet(ConstantWeight{}, ProblemKind::Caputo, c.s, 7);
    for (int k = 0; k <= 7; ++k) EXPECT_LT(rel_err(j[k], c.c[k]), 1e-12) << "s=" << c.s << " k=" << k;
  }
}

TEST(GJet, Order40MatchesTaylorOracle) {
  const struct {
    WeightSpec w;
    ProblemKind kind;
    double s;
    double c[5];  // coefficients 0, 10, 20, 30, 40
  } cases[] = {
      {ConstantWeight{}, ProblemKind::Caputo, 0.1,
       {0.39086503371292664489, -30351490.890350080237, -122479844049890367.0, -7.278491487907839529e+26,
        -5.0501787874341113909e+36}},
      {ConstantWeight{}, ProblemKind::Caputo, 100,
       {21.497576854210965469, -6.9741803294860236705e-22, -2.2443897981981624789e-42, -1.1776215120253125663e-62,
        -7.5026513197485503483e-83}},
      {DiscreteWeight{0.8, {{0.4, 0.5}}}, ProblemKind::RiemannLiouville, 0.1,
       {0.27968671377621023108, -32072476.611000944728, -107933975852472096.29, -5.6937719593786340781e+26,
        -3.6130508932868803483e+36}},
      {DiscreteWeight{0.8, {{0.4, 0.5}}}, ProblemKind::RiemannLiouville, 100,
       {2.3274485623926076596, -3.1222999834423457147e-22, -1.3630170863806021303e-42, -8.3680203881187782683e-63,
        -5.9058942643388774437e-83}},
  };
  for (const auto& c : cases) {
    const auto j = g_jet(c.w, c.kind, c.s, 40);
    for (int i = 0; i < 5; ++i) EXPECT_LT(rel_err(j[10 * i], c.c[i]), 1e-9) << to_string(c.w) << " s=" << c.s << " k=" << 10 * i;
  }
}

TEST(GJet, ReexpansionSelfConsistency) {
  for (const auto& w : sample_weights()) {
    for (auto kind : {ProblemKind::Caputo, ProblemKind::RiemannLiouville}) {
      const int order = 12;
      const double s = 2.0;
      const auto base = g_jet(w, kind, s, order);
      for (double delta : {0.1, 0.05}) {
        const auto shifted = reexpand(base, delta);
        const auto direct = g_jet(w, kind, s + delta, order);
        // truncation error of coefficient k is O(delta^(order+1-k))
        for (int k = 0; k <= 4; ++k) {
          EXPECT_NEAR(shifted[k], direct[k], 10 * std::pow(delta / s, order + 1 - k) * std::abs(direct[0]) + 1e-13)
              << to_string(w) << " k=" << k;
        }
      }
    }
  }
}

// ---- structural properties of g

TEST(GProperties, BernsteinSampling) {
  for (const auto& w : sample_weights()) {
    for (auto kind : {ProblemKind::Caputo, ProblemKind::RiemannLiouville}) {
      for (double s = 1e-3; s <= 1e3; s *= 1.5) {
        const auto j = g_jet(w, kind, s, 6);
        EXPECT_GT(j[0], 0.0);
        // g' completely monotone: (-1)^k g^(k+1) >= 0
        for (int k = 0; k <= 5; ++k) {
          const double sign = k % 2 ? -1.0 : 1.0;
          EXPECT_GE(sign * j.derivative(k + 1), -1e-8 * std::abs(j.derivative(k + 1)))
              << to_string(w) << " " << to_string(kind) << " s=" << s << " k=" << k;
        }
      }
    }
  }
}

TEST(GProperties, FourthOrderDifferencesOfDerivative) {
  for (const auto& w : sample_weights()) {
    for (auto kind : {ProblemKind::Caputo, ProblemKind::RiemannLiouville}) {
      auto gp = [&](double s) { return g_jet(w, kind, s, 1).derivative(1); };
      for (double s = 1e-3; s <= 1e3; s *= 3.0) {
        const double h = 0.05 * s;
        const double f[5] = {gp(s), gp(s + h), gp(s + 2 * h), gp(s + 3 * h), gp(s + 4 * h)};
        const double scale = std::abs(f[0]);
        const double d1 = f[1] - f[0];
        const double d2 = f[2] - 2 * f[1] + f[0];
        const double d3 = f[3] - 3 * f[2] + 3 * f[1] - f[0];
        const double d4 = f[4] - 4 * f[3] + 6 * f[2] - 4 * f[1] + f[0];
        EXPECT_LE(d1, 1e-8 * scale);
        EXPECT_GE(d2, -1e-8 * scale);
        EXPECT_LE(d3, 1e-8 * scale);
        EXPECT_GE(d4, -1e-8 * scale);
      }
    }
  }
}

TEST(GProperties, GOverSIsCompletelyMonotone) {
  for (const auto& w : sample_weights()) {
    for (auto kind : {ProblemKind::Caputo, ProblemKind::RiemannLiouville}) {
      for (double s : {0.01, 0.3, 1.0, 4.0, 100.0}) {
        const auto g = g_jet(w, kind, s, 12);
        const auto q = series::div(g.coeffs, series::linear(s, 1.0, 12));
        for (int k = 0; k <= 12; ++k) {
          const double sign = k % 2 ? -1.0 : 1.0;
          EXPECT_GT(sign * q[k], 0.0) << to_string(w) << " " << to_string(kind) << " s=" << s << " k=" << k;
        }
      }
    }
  }
}

// ---- sector bound

std::vector<cplx> random_sector_samples(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mod(-6.0, 6.0), arg(-pi * 0.999, pi * 0.999);
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) out.push_back(std::polar(std::exp(mod(rng)), arg(rng)));
  return out;
}

TEST(Sector, SingleTermEquality) {
  const auto r = sector_angle_check(DiscreteWeight{0.5, {}}, ProblemKind::Caputo, {cplx(0, 1)}, 0.5);
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(std::arg(g_eval(DiscreteWeight{0.5, {}}, ProblemKind::Caputo, cplx(0, 1))), pi / 4, 1e-15);
  EXPECT_NEAR(r.min_slack, 0.0, 1e-15);
  EXPECT_TRUE(sector_angle_check(DiscreteWeight{0.5, {}}, ProblemKind::RiemannLiouville, {cplx(0, 1)}, 0.5).passed);
}

TEST(Sector, RandomSamplesWithinBound) {
  const auto samples = random_sector_samples(500, 11);
  for (const auto& w : sample_weights()) {
    for (auto kind : {ProblemKind::Caputo, ProblemKind::RiemannLiouville}) {
      const auto r = sector_angle_check(w, kind, samples);
      EXPECT_TRUE(r.passed) << to_string(w) << " " << to_string(kind) << " excess " << r.max_excess;
    }
  }
  const auto c = sector_angle_check(ConstantWeight{}, ProblemKind::Caputo, random_sector_samples(100, 5), 1.0);
  EXPECT_TRUE(c.passed);
}

// For RL the exponent alpha does not bound arg g2 when 1 - alpha_m > alpha:
// g2 = s^0.7 for discrete:0.3, so arg g2(i) = 0.35 pi > 0.3 * pi/2.
TEST(Sector, RiemannLiouvilleNeedsExponentOneMinusAlphaMin) {
  const WeightSpec w = DiscreteWeight{0.3, {}};
  const auto alpha_bound = sector_angle_check(w, ProblemKind::RiemannLiouville, {cplx(0, 1)}, 0.3);
  EXPECT_FALSE(alpha_bound.passed);
  EXPECT_NEAR(alpha_bound.max_excess, 0.4 * pi / 2, 1e-14);
  EXPECT_DOUBLE_EQ(sector_exponent(w, ProblemKind::RiemannLiouville), 0.7);
  EXPECT_TRUE(sector_angle_check(w, ProblemKind::RiemannLiouville, random_sector_samples(200, 2)).passed);
}

TEST(Sector, SubordinationAngle) {
  EXPECT_NEAR(subordination_angle(DiscreteWeight{0.5, {}}, ProblemKind::Caputo), pi / 2 - 0.01, 1e-15);
  EXPECT_NEAR(subordination_angle(DiscreteWeight{0.8, {}}, ProblemKind::Caputo), 0.25 * pi / 2 - 0.01, 1e-15);
  EXPECT_NEAR(subordination_angle(ConstantWeight{}, ProblemKind::Caputo), -0.01, 1e-15);
}

}  // namespace
