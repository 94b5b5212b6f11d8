// Energy distance between two small clouds, a permutation test, and the
// hyperbolic series bound.

#include <cstdio>

#include "bernergy.hpp"

using namespace bernergy;

int main() {
  std::vector<point> xs, ys;
  counter_rng rng(7);
  for (int i = 0; i < 40; ++i) xs.push_back(point::euclidean({rng.normal(), rng.normal()}));
  for (int i = 0; i < 40; ++i) ys.push_back(point::euclidean({rng.normal() + 1.0, rng.normal()}));

  const auto k = cnd_kernel::euclidean_squared();
  const sample_set x(xs, "x"), y(ys, "y");
  for (const char* name : {"sqrt", "log1p", "pow:0.5"}) {
    const auto psi = find_psi(name);
    std::printf("%-8s I(P-Q,P-Q) = %.6f\n", name, energy_statistic(x, y, k, psi));
  }
  const auto res = permutation_test(x, y, k, make_sqrt(), 199, 0);
  std::printf("permutation p = %.4f (B = %zu)\n", res.p_value, res.permutations);

  // -int int d_H for a balanced measure on the hyperboloid
  signed_measure eta;
  eta.add(point::hyperboloid({0.0, 0.0}), 1.0);
  eta.add(point::hyperboloid({1.0, 0.5}), -0.5);
  eta.add(point::hyperboloid({-0.3, 2.0}), -0.5);
  const auto h = inner_product_hyperbolic(eta, eta, 12);
  std::printf("-int int d_H = %.8f, log term %.8f, series bound %.3e\n", h.value, h.log_term, h.series_lower_bound);
  return 0;
}
