#include <gtest/gtest.h>

#include <cmath>

#include "bernergy.hpp"
#include "oracles.hpp"

using namespace bernergy;

TEST(Point, HyperboloidRenormalizes) {
  counter_rng rng(3);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> c{rng.normal() * 3, rng.normal() * 3};
    const auto p = point::hyperboloid(c, 17.0);  // deliberately off the sheet
    EXPECT_NEAR(p.t() * p.t() - p.squared_norm(), 1.0, 1e-12);
  }
}

TEST(Point, SphereNormalizesAndRejectsZero) {
  const auto p = point::sphere({3.0, 4.0});
  EXPECT_NEAR(p.squared_norm(), 1.0, 1e-12);
  EXPECT_THROW(point::sphere({0.0, 0.0}), domain_error);
}

TEST(Point, NonFiniteCoordinatesThrow) {
  EXPECT_THROW(point::euclidean({1.0, NAN}), domain_error);
  EXPECT_THROW(point::euclidean({INFINITY}), domain_error);
  EXPECT_THROW(point::euclidean({}), domain_error);
}

TEST(Kernel, Examples) {
  const auto e = cnd_kernel::euclidean_squared();
  EXPECT_EQ(eval_kernel(e, point::euclidean({0}), point::euclidean({1})), 1.0);
  EXPECT_EQ(eval_kernel(cnd_kernel::euclidean_squared(0.5), point::euclidean({2}), point::euclidean({2})), 0.5);

  const auto h = cnd_kernel::hyperbolic();
  const auto x = point::hyperboloid({std::sinh(1.0)}, std::cosh(1.0));
  const auto o = point::hyperboloid({0.0}, 1.0);
  EXPECT_EQ(eval_kernel(h, x, x), 0.0);
  EXPECT_NEAR(eval_kernel(h, x, o), 1.0, 1e-15);
}

TEST(Kernel, LorentzProductExamples) {
  const auto o = point::hyperboloid({0.0}, 1.0);
  const auto x = point::hyperboloid({std::sinh(1.0)}, std::cosh(1.0));
  const auto y = point::hyperboloid({-std::sinh(1.0)}, std::cosh(1.0));
  EXPECT_DOUBLE_EQ(lorentz_product(o, o), 1.0);
  EXPECT_NEAR(lorentz_product(x, o), 1.5430806348, 1e-10);
  EXPECT_NEAR(lorentz_product(x, y), std::cosh(2.0), 1e-14);
  EXPECT_THROW(lorentz_product(point::euclidean({0.0}), o), space_mismatch);
}

TEST(Kernel, SpaceMismatch) {
  EXPECT_THROW(eval_kernel(cnd_kernel::hyperbolic(), point::euclidean({0}), point::euclidean({1})), space_mismatch);
  EXPECT_THROW(eval_kernel(cnd_kernel::euclidean_squared(), point::euclidean({0}), point::euclidean({1, 2})), space_mismatch);
}

TEST(Kernel, ExactSymmetryAndNonnegativity) {
  for (auto s : {space_kind::euclidean, space_kind::hyperboloid, space_kind::sphere}) {
    const auto k = s == space_kind::euclidean ? cnd_kernel::euclidean_squared()
                   : s == space_kind::hyperboloid ? cnd_kernel::hyperbolic()
                                                  : cnd_kernel::sphere_geodesic();
    const auto pts = random_points(s, 40, 3, 11);
    for (const auto& x : pts)
      for (const auto& y : pts) {
        EXPECT_EQ(eval_kernel(k, x, y), eval_kernel(k, y, x));
        EXPECT_GE(eval_kernel(k, x, y), 0.0);
      }
    for (const auto& x : pts) EXPECT_EQ(eval_kernel(k, x, x), 0.0);
  }
}

TEST(Kernel, SphereGeodesicNearAntipodes) {
  const auto a = point::sphere({1.0, 0.0});
  const auto b = point::sphere({-1.0, 1e-9});
  EXPECT_NEAR(sphere_distance(a, b), std::numbers::pi - 1e-9, 1e-15);
  EXPECT_NEAR(sphere_distance(a, point::sphere({1.0, 1e-9})), 1e-9, 1e-22);
}

TEST(Kernel, ParseRoundTrip) {
  EXPECT_EQ(cnd_kernel::parse("euclidean_squared").name(), "euclidean_squared:0");
  EXPECT_EQ(cnd_kernel::parse("euclidean_squared:0.5").shift(), 0.5);
  EXPECT_EQ(cnd_kernel::parse("hyperbolic").space(), space_kind::hyperboloid);
  EXPECT_EQ(cnd_kernel::parse("sphere_geodesic").space(), space_kind::sphere);
  EXPECT_THROW(cnd_kernel::parse("manhattan"), domain_error);
  EXPECT_THROW(cnd_kernel::parse("euclidean_squared:-1"), domain_error);
}

TEST(Kernel, TriangleForMetricForms) {
  for (auto s : {space_kind::euclidean, space_kind::hyperboloid, space_kind::sphere}) {
    const auto k = s == space_kind::euclidean ? cnd_kernel::euclidean_squared()
                   : s == space_kind::hyperboloid ? cnd_kernel::hyperbolic()
                                                  : cnd_kernel::sphere_geodesic();
    const auto pts = random_points(s, 100, 3, 5);
    const auto r = check_triangle([&](const point& x, const point& y) { return kernel_metric(k, x, y); }, pts, 100000, 1);
    EXPECT_TRUE(r.pass) << k.name() << " worst " << r.worst;
  }
}

TEST(Series, Examples) {
  EXPECT_NEAR(arccosh_series(2.0, 0).value, std::log(4.0), 1e-15);
  EXPECT_EQ(arccosh_series_coefficient(1), 0.25);
  const auto r = arccosh_series(2.0, 8);
  EXPECT_LE(std::abs(r.value - std::acosh(2.0)), r.tail_bound);
  EXPECT_NEAR(r.value, 1.3169579, 1e-6);
  EXPECT_THROW(arccosh_series(1.0, 3), domain_error);
  EXPECT_THROW(arccosh_series(0.5, 3), domain_error);
}

TEST(Series, CoefficientsMatchFactorialFormula) {
  for (int k = 1; k <= 10; ++k) {
    const double f = std::tgamma(2.0 * k + 1) / (std::pow(4.0, k) * std::pow(std::tgamma(k + 1.0), 2) * 2.0 * k);
    EXPECT_NEAR(arccosh_series_coefficient(k), f, 1e-15 * f);
  }
}

TEST(Series, MonotoneInTermsAndConvergent) {
  for (double t : {1.1, 1.5, 2.0, 10.0, 1e4}) {
    double prev = arccosh_series(t, 0).value;
    for (int k = 1; k <= 40; ++k) {
      const auto r = arccosh_series(t, k);
      EXPECT_LE(r.value, prev);
      EXPECT_LE(std::abs(r.value - std::acosh(t)), r.tail_bound) << "t=" << t << " K=" << k;
      prev = r.value;
    }
  }
}

TEST(Gram, Examples) {
  const auto e = cnd_kernel::euclidean_squared();
  std::vector<point> a{point::euclidean({0}), point::euclidean({1})};
  const auto g = gram(e, a);
  EXPECT_EQ(g.values(0, 0), 0.0);
  EXPECT_EQ(g.values(0, 1), 1.0);
  EXPECT_EQ(g.values(1, 0), 1.0);
  std::vector<point> b{point::euclidean({0, 0}), point::euclidean({3, 4})};
  EXPECT_EQ(gram(e, b).values(1, 0), 25.0);
  std::vector<point> one{point::euclidean({2})};
  EXPECT_EQ(gram(cnd_kernel::euclidean_squared(1.5), one).values(0, 0), 1.5);
  EXPECT_EQ(g.kernel, "euclidean_squared:0");
  EXPECT_EQ(g.points_hash, hash_points(a));
  EXPECT_NE(g.points_hash, hash_points(b));
}

TEST(Gram, MixedSpacesThrow) {
  std::vector<point> a{point::euclidean({0}), point::euclidean({1, 2})};
  EXPECT_THROW(gram(cnd_kernel::euclidean_squared(), a), space_mismatch);
}

TEST(Gram, IndependentOfThreadCount) {
  const auto pts = random_points(space_kind::hyperboloid, 120, 4, 9);
  setenv("BERNERGY_THREADS", "1", 1);
  const auto g1 = gram(cnd_kernel::hyperbolic(), pts);
  setenv("BERNERGY_THREADS", "7", 1);
  const auto g7 = gram(cnd_kernel::hyperbolic(), pts);
  unsetenv("BERNERGY_THREADS");
  EXPECT_TRUE(g1.values == g7.values);
}

TEST(Rng, CounterAddressable) {
  counter_rng a(42, 3), b(42, 3), c(42, 4);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
  }
  EXPECT_EQ(a.counter(), 100u);
  // frozen draws (cross-checked against a Python transcription of the
  // algorithm); a change here silently changes every seeded p-value
  counter_rng z(0, 0);
  EXPECT_EQ(z.next_u64(), 18234092126783654676ULL);
  EXPECT_EQ(z.next_u64(), 17376767606553080ULL);
  EXPECT_EQ(counter_rng(12345, 7).below(1000), 845u);
  EXPECT_DOUBLE_EQ(counter_rng(1, 2).normal(), 0.62531043668112718);
  counter_rng u(1);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(u.below(7), 7u);
}
