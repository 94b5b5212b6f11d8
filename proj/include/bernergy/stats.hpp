#pragma once

// Two-sample energy statistic and its permutation test.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "bernergy/cmfun.hpp"
#include "bernergy/energy.hpp"
#include "bernergy/error.hpp"
#include "bernergy/parallel.hpp"
#include "bernergy/random.hpp"
#include "bernergy/spaces.hpp"

namespace bernergy {

struct sample_set {
  std::vector<point> points;
  std::string label;

  sample_set() = default;
  sample_set(std::vector<point> pts, std::string lbl = {}) : points(std::move(pts)), label(std::move(lbl)) {
    if (points.empty()) throw domain_error("sample set '" + label + "' is empty");
    require_homogeneous(points);
  }

  std::size_t size() const noexcept { return points.size(); }
};

inline void require_compatible(const sample_set& x, const sample_set& y) {
  if (x.points.empty() || y.points.empty()) throw domain_error("energy statistic: empty sample");
  if (!x.points.front().same_space(y.points.front())) throw space_mismatch("samples live in different spaces");
}

/// I(P - Q, P - Q) for the empirical measures, as the V-statistic
///   2/(nm) sum psi(xy) - 1/n^2 sum psi(xx') - 1/m^2 sum psi(yy')
/// (written through phi = cm_value, so CM_l entries use the same code).
/// For l >= 2 the samples must have equal means (see center_means).
inline double energy_statistic(const sample_set& x, const sample_set& y, const cnd_kernel& k, const psi_function& psi,
                               double tol = 1e-10) {
  require_compatible(x, y);
  if (psi.ell > 1) {
    const auto p = signed_measure::empirical(x.points);
    const auto q = signed_measure::empirical(y.points);
    require_constraints(difference(p, q), psi.ell, default_center(k, x.points.front().dim()), tol, "P - Q");
  }
  auto mean_phi = [&](const std::vector<point>& a, const std::vector<point>& b) {
    std::vector<double> rows(a.size());
    parallel_for(a.size(), [&](std::size_t i) {
      double s = 0.0;
      for (const auto& v : b) s += psi.cm_value(eval_kernel(k, a[i], v));
      rows[i] = s;
    }, 8);
    double s = 0.0;
    for (double r : rows) s += r;
    return s / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
  };
  return mean_phi(x.points, x.points) + mean_phi(y.points, y.points) - 2.0 * mean_phi(x.points, y.points);
}

/// Copies of x and y translated to zero mean (Euclidean only). Used before
/// l >= 2 statistics; not prescribed by the theory.
inline std::pair<sample_set, sample_set> center_means(const sample_set& x, const sample_set& y) {
  auto shift = [](const sample_set& s) {
    if (s.points.front().space() != space_kind::euclidean) throw space_mismatch("mean centering needs Euclidean samples");
    const auto v = vector_mean(signed_measure::empirical(s.points));
    std::vector<point> out;
    out.reserve(s.size());
    for (const auto& p : s.points) {
      std::vector<double> c(p.coords().begin(), p.coords().end());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] -= v[i];
      out.push_back(point::euclidean(std::move(c)));
    }
    return sample_set(std::move(out), s.label);
  };
  return {shift(x), shift(y)};
}

struct test_result {
  double statistic = 0.0;
  std::size_t permutations = 0;
  double p_value = 1.0;
  std::uint64_t seed = 0;
  std::string psi;
  std::string kernel;
  std::string rng = counter_rng::algorithm;
  std::size_t n = 0, m = 0;
  std::size_t exceed = 0;  // #{b : T_b >= T_obs}
};

namespace detail {

// Statistic for the labeling whose first n entries of `order` form X.
inline double labeled_statistic(const Eigen::MatrixXd& phi, const std::vector<double>& row_sum, double total,
                                const std::vector<std::size_t>& order, std::size_t n) {
  const std::size_t m = order.size() - n;
  double sxx = 0.0, sx_all = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const auto i = static_cast<Eigen::Index>(order[a]);
    sx_all += row_sum[order[a]];
    for (std::size_t b = 0; b < n; ++b) sxx += phi(i, static_cast<Eigen::Index>(order[b]));
  }
  const double sxy = sx_all - sxx;
  const double syy = total - 2.0 * sxy - sxx;
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  return sxx / (dn * dn) + syy / (dm * dm) - 2.0 * sxy / (dn * dm);
}

}  // namespace detail

/// Permutation test with p = (1 + #{T_b >= T_obs}) / (B + 1). The pooled
/// matrix phi(gamma(z_i, z_j)) is built once; replica b shuffles with
/// counter_rng(seed, b) (Fisher-Yates), so replicas are independent of the
/// thread schedule. Ties are counted with a relative slack of 1e-12 of the
/// mean |phi| so that exactly tied labelings do not depend on rounding.
inline test_result permutation_test(const sample_set& x, const sample_set& y, const cnd_kernel& k, const psi_function& psi,
                                    std::size_t b_count, std::uint64_t seed) {
  if (b_count < 1) throw domain_error("permutation_test: B must be >= 1");
  require_compatible(x, y);
  test_result res;
  res.permutations = b_count;
  res.seed = seed;
  res.psi = psi.name;
  res.kernel = k.name();
  res.n = x.size();
  res.m = y.size();
  res.statistic = energy_statistic(x, y, k, psi);

  std::vector<point> pooled = x.points;
  pooled.insert(pooled.end(), y.points.begin(), y.points.end());
  const std::size_t total_n = pooled.size();
  const auto g = gram(k, pooled);
  Eigen::MatrixXd phi(g.values.rows(), g.values.cols());
  for (Eigen::Index i = 0; i < phi.rows(); ++i)
    for (Eigen::Index j = 0; j < phi.cols(); ++j) phi(i, j) = psi.cm_value(g.values(i, j));
  std::vector<double> row_sum(total_n);
  double total = 0.0, mean_abs = 0.0;
  for (std::size_t i = 0; i < total_n; ++i) {
    row_sum[i] = phi.row(static_cast<Eigen::Index>(i)).sum();
    total += row_sum[i];
    mean_abs += phi.row(static_cast<Eigen::Index>(i)).cwiseAbs().sum();
  }
  mean_abs /= static_cast<double>(total_n * total_n);
  const double slack = 1e-12 * mean_abs;

  std::vector<double> stats(b_count);
  parallel_for(b_count, [&](std::size_t b) {
    counter_rng rng(seed, b);
    std::vector<std::size_t> order(total_n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = total_n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    stats[b] = detail::labeled_statistic(phi, row_sum, total, order, x.size());
  }, 4);
  for (double s : stats)
    if (s >= res.statistic - slack) ++res.exceed;
  res.p_value = static_cast<double>(1 + res.exceed) / static_cast<double>(b_count + 1);
  return res;
}

}  // namespace bernergy
