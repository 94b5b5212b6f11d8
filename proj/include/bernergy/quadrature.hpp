#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace bernergy {

struct quad_result {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
  bool converged = false;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> gk15_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> gk15_kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gk15_gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct gk_segment {
  double a, b, value, error;
  bool operator<(const gk_segment& o) const { return error < o.error; }
};

template <typename F>
gk_segment gk15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double gauss = fc * gk15_gauss_weights[3];
  double kronrod = fc * gk15_kronrod_weights[7];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * gk15_nodes[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    const double s = f1[j] + f2[j];
    kronrod += gk15_kronrod_weights[j] * s;
    abs_sum += gk15_kronrod_weights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += gk15_gauss_weights[j / 2] * s;
  }
  const double mean = 0.5 * kronrod;
  double asc = gk15_kronrod_weights[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) asc += gk15_kronrod_weights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double h = std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  asc *= h;
  abs_sum *= h;
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * abs_sum, err);
  return {a, b, kronrod * half, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b]: the segment
/// with the largest error estimate is bisected until the summed estimate is
/// at most abs_tol or max_intervals is reached.
template <typename F>
quad_result integrate_adaptive(F&& f, double a, double b, double abs_tol, std::size_t max_intervals = 4000) {
  std::priority_queue<detail::gk_segment> heap;
  auto first = detail::gk15(f, a, b);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  std::size_t count = 1;
  while (total_err > abs_tol && count < max_intervals) {
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval cannot be split further
    heap.pop();
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // re-sum to shed the drift of the running updates
  total = 0.0;
  total_err = 0.0;
  std::vector<detail::gk_segment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  for (const auto& s : segs) {
    total += s.value;
    total_err += s.error;
  }
  return {total, total_err, count, total_err <= abs_tol};
}

}  // namespace bernergy
