#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <numbers>

#include "bernergy.hpp"
#include "oracles.hpp"

using namespace bernergy;

namespace {

// Independent reference for (1/|Gamma(-s)|) int_0^inf (e^{-rt} - w_l(rt)) r^{-s-1} dr
// with a different quadrature family (double exponential on (0, inf)).
double pow_oracle(double s, int ell, double t) {
  boost::math::quadrature::exp_sinh<double> q;
  auto f = [&](double r) {
    if (!(r > 0.0) || !std::isfinite(r)) return 0.0;
    const double x = r * t;
    if (x < 0.5) {
      // (e^{-x} - w_l(x)) / r^l as a series in r, times r^{l-s-1}
      double term = 1.0, sum = 0.0;
      for (int j = 1; j <= ell; ++j) term *= -t / j;
      for (int j = ell; j < ell + 40; ++j) {
        sum += term;
        term *= -x / (j + 1);
      }
      return sum * std::pow(r, ell - s - 1.0);
    }
    double w = 0.0, term = 1.0;
    for (int j = 0; j < ell; ++j) {
      w += term;
      term *= -x / (j + 1);
    }
    return (std::exp(-x) - w) * std::pow(r, -s - 1.0);
  };
  return q.integrate(f, 1e-13) / std::abs(std::tgamma(-s));
}

}  // namespace

TEST(Closed, Examples) {
  EXPECT_EQ(eval_closed(make_sqrt(), 4.0), 2.0);
  EXPECT_DOUBLE_EQ(eval_closed(make_pow(3.0), 4.0), 8.0);
  EXPECT_EQ(eval_closed(make_log1p(), 0.0), 0.0);
  EXPECT_THROW(eval_closed(make_sqrt(), -1.0), domain_error);
  EXPECT_THROW(eval_closed(make_log1p(), NAN), domain_error);
}

TEST(Closed, SignConvention) {
  // (-1)^l t^{a/2}
  EXPECT_DOUBLE_EQ(eval_closed(make_pow(5.0), 4.0), -32.0);
  EXPECT_DOUBLE_EQ(eval_closed(make_pow(4.0), 3.0), 9.0);
  EXPECT_DOUBLE_EQ(eval_closed(make_pow(6.0), 2.0), -8.0);
  EXPECT_DOUBLE_EQ(eval_closed(make_tlogt(2), std::numbers::e), std::numbers::e);
  EXPECT_EQ(make_pow(3.0).ell, 2);
  EXPECT_EQ(make_pow(5.0).ell, 3);
  EXPECT_EQ(make_pow(1.0).ell, 1);
  EXPECT_EQ(make_pow(1.0).conv, convention::bernstein);
  EXPECT_EQ(make_pow(3.0).conv, convention::completely_monotone);
}

TEST(Representation, SqrtLaplaceIdentity) {
  // -sqrt(t) = 1/(2 sqrt(pi)) int (e^{-rt} - 1) r^{-3/2} dr, at t = 1
  boost::math::quadrature::exp_sinh<double> q;
  const double i = q.integrate([](double r) { return std::expm1(-r) * std::pow(r, -1.5); }, 1e-13);
  EXPECT_NEAR(i / (2.0 * std::sqrt(std::numbers::pi)), -1.0, 1e-10);
  EXPECT_NEAR(eval_by_representation(make_sqrt(), 1.0, 1e-10), 1.0, 1e-9);
}

TEST(Representation, Cm2LaplaceIdentity) {
  // t^{a/2} = a(a-2) / (4 Gamma(2 - a/2)) int (e^{-rt} - 1 + rt) r^{-(a/2+1)} dr, a = 3, t = 1
  const double a = 3.0;
  const double c = a * (a - 2.0) / (4.0 * std::tgamma(2.0 - a / 2.0));
  EXPECT_NEAR(c, 1.0 / std::abs(std::tgamma(-a / 2.0)), 1e-15);
  boost::math::quadrature::exp_sinh<double> q;
  const double i = q.integrate([&](double r) {
    if (!(r > 0.0) || !std::isfinite(r)) return 0.0;
    if (r < 1e-3) return (0.5 - r / 6 + r * r / 24) * std::pow(r, 1 - a / 2);
    return (std::expm1(-r) + r) * std::pow(r, -(a / 2 + 1));
  }, 1e-13);
  EXPECT_NEAR(c * i, 1.0, 1e-10);
  EXPECT_NEAR(eval_by_representation(make_pow(3.0), 1.0, 1e-10), 1.0, 1e-9);
}

TEST(Representation, MatchesIndependentQuadrature) {
  for (double a : {0.5, 1.0, 1.5, 3.0, 5.0}) {
    const double s = a / 2;
    const int ell = static_cast<int>(std::ceil(s));
    for (double t : {0.01, 0.3, 1.0, 7.0, 50.0}) {
      const double ref = pow_oracle(s, ell, t);
      const auto psi = make_pow(a);
      const double got = eval_by_representation(psi, t, 1e-10 * (1 + std::pow(t, ell)));
      EXPECT_NEAR(got, psi.sign() * ref, 1e-8 * (1 + std::abs(ref))) << "a=" << a << " t=" << t;
    }
  }
}

TEST(Representation, GridAgainstClosedForm) {
  for (const char* name : {"sqrt", "log1p", "pow:0.5", "pow:1.5", "pow:3", "pow:0.7", "pow:5", "pow:4", "linear"}) {
    const auto psi = find_psi(name);
    for (double t : oracle::log_grid()) {
      const double tol = 1e-9 * (1 + std::pow(t, psi.ell));
      const auto r = integrate_representation(psi, t, tol);
      const double closed = eval_closed(psi, t);
      EXPECT_TRUE(r.converged);
      EXPECT_LE(std::abs(r.value - closed), std::max(1e-6 * std::abs(closed), 1e-8)) << name << " t=" << t;
      EXPECT_LE(std::abs(r.value - closed), r.abs_error + 1e-12 * std::abs(closed)) << name << " t=" << t << " (error bound)";
    }
  }
}

TEST(Representation, BranchesAgree) {
  for (const char* name : {"sqrt", "log1p", "pow:1.5", "pow:3", "pow:5"}) {
    const auto psi = find_psi(name);
    for (double t : {0.01, 1.0, 30.0}) {
      const double tol = 1e-10 * (1 + std::pow(t, psi.ell));
      const double s = eval_by_representation(psi, t, tol, representation_branch::smooth);
      const double g = eval_by_representation(psi, t, tol, representation_branch::general);
      EXPECT_NEAR(s, g, 4 * tol) << name << " t=" << t;
    }
  }
}

TEST(Representation, AtZeroOnlyPolynomialPart) {
  for (const auto& psi : catalog()) {
    if (!psi.has_representation()) continue;
    EXPECT_EQ(eval_by_representation(psi, 0.0, 1e-10, representation_branch::smooth), psi.sign() * psi.poly_coeffs[0] * psi.sign())
        << psi.name;
  }
}

TEST(Representation, ClosedOnlyEntriesRefuse) {
  EXPECT_THROW(integrate_representation(make_loglog1p(), 1.0, 1e-8), domain_error);
  EXPECT_THROW(integrate_representation(make_tlogt(2), 1.0, 1e-8), domain_error);
  EXPECT_FALSE(make_exp(1.0).has_representation());
}

TEST(Representation, UnreachableToleranceRaisesQuadratureError) {
  try {
    eval_by_representation(make_sqrt(), 2.0, 1e-300);
    FAIL() << "expected quadrature_error";
  } catch (const quadrature_error& e) {
    EXPECT_TRUE(std::isfinite(e.estimate()));
    EXPECT_NEAR(e.estimate(), std::sqrt(2.0), 1e-8);
    EXPECT_GT(e.abs_error(), 0.0);
  }
}

TEST(Quadrature, KnownIntegrals) {
  auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-13);
  EXPECT_NEAR(r.value, 2.0, 1e-13);
  r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9);
  EXPECT_NEAR(r.value, 2.0, 1e-8);
  EXPECT_TRUE(r.converged);
}

TEST(Helpers, OmegaAndEll) {
  EXPECT_EQ(omega(0, 3.0), 0.0);
  EXPECT_EQ(e_ell(1, 0.0), 1.0);
  EXPECT_EQ(e_ell(3, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(omega(3, 2.0), 1.0 - 2.0 + 2.0);
  EXPECT_NEAR(exp_minus_omega(2, 1e-4), std::expm1(-1e-4) + 1e-4, 1e-18);
  EXPECT_NEAR(one_minus_e_ell(2, 0.3), 1.0 - std::exp(-0.3) * 1.3, 1e-16);
}

TEST(Helpers, SignStructure) {
  for (int ell = 1; ell <= 4; ++ell)
    for (double x = 0.0; x <= 60.0; x += 0.037) {
      const double sg = ell % 2 == 0 ? 1.0 : -1.0;
      EXPECT_GE(sg * exp_minus_omega(ell, x), 0.0) << "l=" << ell << " x=" << x;
    }
}

TEST(Helpers, ChangeEnvelope) {
  EXPECT_EQ(change_envelope(1, 2.0, 0.0), 1.0);
  EXPECT_EQ(change_envelope(1, 0.5, 3.0), 2.0);
  std::vector<double> rs, ts;
  for (int i = -16; i <= 16; ++i) rs.push_back(std::pow(10.0, i / 4.0));
  for (int i = 0; i <= 200; ++i) ts.push_back(i * 0.5);
  for (int ell = 1; ell <= 3; ++ell) {
    const double m = fit_change_constant(ell, rs, ts);
    EXPECT_TRUE(std::isfinite(m));
    EXPECT_LT(m, 10.0);
    EXPECT_GT(m, 0.0);
  }
}

TEST(Catalog, Contents) {
  const auto cat = catalog();
  bool has_sqrt = false;
  for (const auto& p : cat) {
    if (p.name == "sqrt") has_sqrt = p.ell == 1;
    const double lead = p.poly_coeffs.at(static_cast<std::size_t>(p.ell));
    EXPECT_GE((p.ell % 2 == 0 ? 1.0 : -1.0) * lead, 0.0) << p.name;
    if (p.smooth_at_zero) {
      EXPECT_EQ(p.closed_form(0.0), p.poly_coeffs[0]) << p.name;
    }
    if (p.levy) {
      EXPECT_TRUE(p.levy->integrable(p.ell)) << p.name;
    }
    EXPECT_EQ(find_psi(p.name).name, p.name);
  }
  EXPECT_TRUE(has_sqrt);
  EXPECT_THROW(find_psi("cosh"), domain_error);
  EXPECT_THROW(find_psi("pow:-1"), domain_error);
  EXPECT_THROW(find_psi("pow:x"), domain_error);
}

TEST(Catalog, PowOneIsSqrt) {
  const auto a = make_pow(1.0), b = make_sqrt();
  for (double t : oracle::log_grid()) EXPECT_NEAR(a.closed_form(t), b.closed_form(t), 1e-15 * b.closed_form(t));
}

TEST(Catalog, GrowthBounded) {
  for (const auto& p : catalog()) {
    double worst = 0.0;
    for (double t = 0.0; t <= 1e6; t = t < 1 ? t + 0.01 : t * 1.05) worst = std::max(worst, std::abs(p.closed_form(t)) / (1 + std::pow(t, p.ell)));
    EXPECT_LT(worst, 10.0) << p.name;
  }
}

TEST(Catalog, BernsteinEntriesMonotoneConcave) {
  for (const auto& p : catalog()) {
    if (p.conv != convention::bernstein || p.closed_form(0.0) != 0.0) continue;
    const double h = 0.01;
    for (double t = 0.0; t < 50.0; t += h) {
      const double a = p.closed_form(t), b = p.closed_form(t + h), c = p.closed_form(t + 2 * h);
      EXPECT_GE(b - a, -1e-14) << p.name;
      EXPECT_LE(c - 2 * b + a, 1e-12) << p.name;
    }
  }
}
