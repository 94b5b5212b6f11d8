#pragma once

// Point types for Euclidean space, the hyperboloid model of real hyperbolic
// space and the unit sphere, together with the conditionally negative
// definite (CND) kernels used throughout the library.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bernergy/error.hpp"
#include "bernergy/parallel.hpp"

namespace bernergy {

enum class space_kind { euclidean, hyperboloid, sphere };

inline std::string_view to_string(space_kind s) {
  switch (s) {
    case space_kind::euclidean: return "euclidean";
    case space_kind::hyperboloid: return "hyperboloid";
    case space_kind::sphere: return "sphere";
  }
  return "unknown";
}

/// An element of one of the supported spaces.
///
/// Hyperboloid points are stored in ambient coordinates (x, t) with
/// t^2 - |x|^2 = 1; the time coordinate is always recomputed from x on
/// construction, so the constraint holds up to one rounding of t. Sphere
/// points are divided by their norm on construction.
class point {
 public:
  static point euclidean(std::vector<double> coords) {
    check_coords(coords, 1);
    return point(space_kind::euclidean, std::move(coords), 0.0);
  }

  static point hyperboloid(std::vector<double> coords) {
    check_coords(coords, 1);
    return point(space_kind::hyperboloid, std::move(coords), 0.0).renormalized();
  }

  // (x, t) as read from a file; t only has to be a positive finite number.
  static point hyperboloid(std::vector<double> coords, double t) {
    if (!std::isfinite(t) || t <= 0.0) throw domain_error("hyperboloid point requires finite t > 0");
    return hyperboloid(std::move(coords));
  }

  static point sphere(std::vector<double> coords) {
    check_coords(coords, 1);
    double nrm = 0.0;
    for (double c : coords) nrm += c * c;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0)) throw domain_error("sphere point requires a nonzero vector");
    for (double& c : coords) c /= nrm;
    return point(space_kind::sphere, std::move(coords), 0.0);
  }

  space_kind space() const noexcept { return space_; }
  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  // Time coordinate; meaningful for hyperboloid points only.
  double t() const noexcept { return t_; }

  double squared_norm() const noexcept {
    double s = 0.0;
    for (double c : coords_) s += c * c;
    return s;
  }

  bool same_space(const point& o) const noexcept { return space_ == o.space_ && dim() == o.dim(); }

 private:
  point(space_kind s, std::vector<double> c, double t) : space_(s), coords_(std::move(c)), t_(t) {}

  point renormalized() && {
    t_ = std::sqrt(1.0 + squared_norm());
    return std::move(*this);
  }

  static void check_coords(const std::vector<double>& c, std::size_t min_dim) {
    if (c.size() < min_dim) throw domain_error("point dimension must be at least 1");
    for (double v : c)
      if (!std::isfinite(v)) throw domain_error("non-finite coordinate");
  }

  space_kind space_;
  std::vector<double> coords_;
  double t_;
};

inline double dot(const point& x, const point& y) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += x[i] * y[i];
  return s;
}

/// Lorentz product [x, y] = t_x t_y - <x, y> on the hyperboloid; equals
/// cosh of the hyperbolic distance and is >= 1 up to rounding.
inline double lorentz_product(const point& x, const point& y) {
  if (x.space() != space_kind::hyperboloid || y.space() != space_kind::hyperboloid)
    throw space_mismatch("lorentz_product requires hyperboloid points");
  if (x.dim() != y.dim()) throw space_mismatch("lorentz_product: dimension mismatch");
  return x.t() * y.t() - dot(x, y);
}

/// arccosh(max(1, [x, y])). Close to the diagonal acosh(1 + e) ~ sqrt(2e)
/// turns rounding in [x, y] into errors of order 1e-8, so for [x, y] < 2 the
/// same quantity is taken as 2 asinh(q / 2) with q^2 = |x - y|^2 - (t_x - t_y)^2
/// = 2([x, y] - 1), and t_x - t_y = <x - y, x + y> / (t_x + t_y).
inline double hyperbolic_distance(const point& x, const point& y) {
  const double c = lorentz_product(x, y);
  if (c >= 2.0) return std::acosh(c);
  double d2 = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double a = x[i] - y[i];
    d2 += a * a;
    cross += a * (x[i] + y[i]);
  }
  const double dt = cross / (x.t() + y.t());
  const double q2 = d2 - dt * dt;
  return q2 > 0.0 ? 2.0 * std::asinh(0.5 * std::sqrt(q2)) : 0.0;
}

// Great-circle distance; 2 atan2(|x - y|, |x + y|) stays accurate near 0 and pi.
inline double sphere_distance(const point& x, const point& y) {
  double dm = 0.0, dp = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double a = x[i] - y[i];
    const double b = x[i] + y[i];
    dm += a * a;
    dp += b * b;
  }
  return 2.0 * std::atan2(std::sqrt(dm), std::sqrt(dp));
}

/// A continuous CND kernel gamma together with the space it lives on.
class cnd_kernel {
 public:
  enum class kind { euclidean_squared, hyperbolic, sphere_geodesic };

  // gamma(x, y) = |x - y|^2 + shift
  static cnd_kernel euclidean_squared(double shift = 0.0) {
    if (!std::isfinite(shift) || shift < 0.0) throw domain_error("euclidean_squared shift must be >= 0");
    return cnd_kernel(kind::euclidean_squared, shift);
  }
  // gamma = d_H
  static cnd_kernel hyperbolic() { return cnd_kernel(kind::hyperbolic, 0.0); }
  // gamma = geodesic distance on the sphere
  static cnd_kernel sphere_geodesic() { return cnd_kernel(kind::sphere_geodesic, 0.0); }

  // "euclidean_squared", "euclidean_squared:0.5", "hyperbolic", "sphere_geodesic"
  static cnd_kernel parse(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string_view head = spec.substr(0, colon);
    if (head == "euclidean_squared") {
      double c = 0.0;
      if (colon != std::string_view::npos) {
        const std::string_view arg = spec.substr(colon + 1);
        auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), c);
        if (ec != std::errc() || p != arg.data() + arg.size()) throw domain_error("bad kernel shift in '" + std::string(spec) + "'");
      }
      return euclidean_squared(c);
    }
    if (colon == std::string_view::npos) {
      if (head == "hyperbolic") return hyperbolic();
      if (head == "sphere_geodesic") return sphere_geodesic();
    }
    throw domain_error("unknown kernel '" + std::string(spec) + "'");
  }

  kind type() const noexcept { return kind_; }
  double shift() const noexcept { return shift_; }

  space_kind space() const noexcept {
    switch (kind_) {
      case kind::euclidean_squared: return space_kind::euclidean;
      case kind::hyperbolic: return space_kind::hyperboloid;
      case kind::sphere_geodesic: return space_kind::sphere;
    }
    return space_kind::euclidean;
  }

  // Declared value of gamma(x, x); constant for every supported kernel.
  double diagonal() const noexcept { return kind_ == kind::euclidean_squared ? shift_ : 0.0; }

  // gamma is itself a metric (as opposed to the square of one).
  bool is_metric() const noexcept { return kind_ != kind::euclidean_squared; }

  std::string name() const {
    switch (kind_) {
      case kind::euclidean_squared: {
        char buf[64];
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, shift_);
        return "euclidean_squared:" + std::string(buf, p);
      }
      case kind::hyperbolic: return "hyperbolic";
      case kind::sphere_geodesic: return "sphere_geodesic";
    }
    return "unknown";
  }

  friend bool operator==(const cnd_kernel&, const cnd_kernel&) = default;

 private:
  cnd_kernel(kind k, double c) : kind_(k), shift_(c) {}

  kind kind_;
  double shift_;
};

/// gamma(x, y). The expression is symmetric term by term, so
/// eval_kernel(k, x, y) == eval_kernel(k, y, x) bit for bit.
inline double eval_kernel(const cnd_kernel& k, const point& x, const point& y) {
  if (x.space() != k.space() || y.space() != k.space())
    throw space_mismatch("kernel " + k.name() + " expects " + std::string(to_string(k.space())) + " points");
  if (x.dim() != y.dim()) throw space_mismatch("points of different dimension");
  switch (k.type()) {
    case cnd_kernel::kind::euclidean_squared: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.dim(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
      }
      return s + k.shift();
    }
    case cnd_kernel::kind::hyperbolic: return hyperbolic_distance(x, y);
    case cnd_kernel::kind::sphere_geodesic: return sphere_distance(x, y);
  }
  return 0.0;
}

// The metric naturally attached to the kernel: gamma itself for hyperbolic
// and sphere kernels, sqrt(gamma - shift) (the Euclidean norm) otherwise.
inline double kernel_metric(const cnd_kernel& k, const point& x, const point& y) {
  const double g = eval_kernel(k, x, y);
  return k.is_metric() ? g : std::sqrt(std::max(0.0, g - k.shift()));
}

// ---------------------------------------------------------------------------
// arccosh(t) = log 2 + log t - sum_{k>=1} c_k t^{-2k},
// c_k = (2k)! / (2^{2k} (k!)^2 2k)

inline double arccosh_series_coefficient(int k) {
  if (k < 1) throw domain_error("series coefficient index must be >= 1");
  double central = 1.0;  // (2k)! / (4^k (k!)^2)
  for (int j = 1; j <= k; ++j) central *= (2.0 * j - 1.0) / (2.0 * j);
  return central / (2.0 * k);
}

struct arccosh_series_result {
  double value;
  // c_{K+1} t^{-2(K+1)}
  double first_omitted;
  // Bound on |value - arccosh(t)|: the omitted terms are positive and their
  // coefficients decrease, so the tail is at most first_omitted / (1 - t^-2).
  // A floating-point allowance of 8 eps times the summed magnitudes is added.
  double tail_bound;
};

inline arccosh_series_result arccosh_series(double t, int terms) {
  if (!(t > 1.0) || !std::isfinite(t)) throw domain_error("arccosh series requires finite t > 1");
  if (terms < 0) throw domain_error("number of series terms must be >= 0");
  const double inv2 = 1.0 / (t * t);
  const double head = std::numbers::ln2 + std::log(t);
  double sum = 0.0;
  double central = 1.0;
  double power = 1.0;
  for (int k = 1; k <= terms; ++k) {
    central *= (2.0 * k - 1.0) / (2.0 * k);
    power *= inv2;
    sum += central / (2.0 * k) * power;
  }
  const int next = terms + 1;
  central *= (2.0 * next - 1.0) / (2.0 * next);
  power *= inv2;
  const double omitted = central / (2.0 * next) * power;
  const double rounding = 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(head) + sum);
  return {head - sum, omitted, omitted / (1.0 - inv2) + rounding};
}

// ---------------------------------------------------------------------------
// Gram matrices

struct gram_matrix {
  Eigen::MatrixXd values;
  std::string kernel;         // provenance: kernel name
  std::uint64_t points_hash;  // provenance: FNV-1a over the coordinates

  Eigen::Index size() const noexcept { return values.rows(); }
};

inline std::uint64_t hash_points(std::span<const point> pts) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& p : pts) {
    feed(static_cast<double>(p.space()));
    for (double c : p.coords()) feed(c);
  }
  return h;
}

inline void require_homogeneous(std::span<const point> pts) {
  for (const auto& p : pts)
    if (!p.same_space(pts.front())) throw space_mismatch("point list mixes spaces or dimensions");
}

/// G[i][j] = gamma(pts[i], pts[j]); rows are filled in parallel.
inline gram_matrix gram(const cnd_kernel& k, std::span<const point> pts) {
  if (pts.empty()) throw domain_error("gram: empty point list");
  require_homogeneous(pts);
  const auto n = static_cast<Eigen::Index>(pts.size());
  gram_matrix g{Eigen::MatrixXd(n, n), k.name(), hash_points(pts)};
  // validate the space once so worker threads never throw
  (void)eval_kernel(k, pts.front(), pts.front());
  parallel_for(pts.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < pts.size(); ++j)
      g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = eval_kernel(k, pts[i], pts[j]);
  }, 4);
  return g;
}

}  // namespace bernergy
