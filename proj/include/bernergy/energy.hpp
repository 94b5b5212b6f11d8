#pragma once

// Discrete signed measures and the bilinear forms
//
//   I(mu, nu) = sum_i sum_j w_i v_j  phi(gamma(x_i, y_j))
//
// where phi is the CM_l function attached to psi (phi = -psi for Bernstein
// psi, so for l = 1 this is -int int psi(gamma) dmu dnu).

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bernergy/cmfun.hpp"
#include "bernergy/error.hpp"
#include "bernergy/parallel.hpp"
#include "bernergy/spaces.hpp"

namespace bernergy {

/// Weighted list of atoms. Duplicate atoms are kept as given; every sum in
/// this header is linear in the weights, so they act as if coalesced.
class signed_measure {
 public:
  signed_measure() = default;

  signed_measure(std::vector<point> atoms, std::vector<double> weights) : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (atoms_.size() != weights_.size()) throw domain_error("measure: atom and weight counts differ");
    for (double w : weights_)
      if (!std::isfinite(w)) throw domain_error("measure: non-finite weight");
    if (!atoms_.empty()) require_homogeneous(atoms_);
  }

  // (1/n) sum delta_{x_i}
  static signed_measure empirical(std::vector<point> pts) {
    const double w = pts.empty() ? 0.0 : 1.0 / static_cast<double>(pts.size());
    std::vector<double> ws(pts.size(), w);
    return signed_measure(std::move(pts), std::move(ws));
  }

  void add(point x, double w) {
    if (!std::isfinite(w)) throw domain_error("measure: non-finite weight");
    if (!atoms_.empty() && !x.same_space(atoms_.front())) throw space_mismatch("measure: atom from a different space");
    atoms_.push_back(std::move(x));
    weights_.push_back(w);
  }

  std::span<const point> atoms() const noexcept { return atoms_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }

  std::optional<space_kind> space() const {
    if (atoms_.empty()) return std::nullopt;
    return atoms_.front().space();
  }

  double mass() const noexcept {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
  }

  double total_variation() const noexcept {
    double s = 0.0;
    for (double w : weights_) s += std::abs(w);
    return s;
  }

  // max |x| over atoms (Euclidean coordinates)
  double max_norm() const noexcept {
    double m = 0.0;
    for (const auto& a : atoms_) m = std::max(m, std::sqrt(a.squared_norm()));
    return m;
  }

  signed_measure scaled(double c) const {
    signed_measure out = *this;
    for (double& w : out.weights_) w *= c;
    return out;
  }

 private:
  std::vector<point> atoms_;
  std::vector<double> weights_;
};

inline void require_same_space(const signed_measure& a, const signed_measure& b) {
  if (a.empty() || b.empty()) return;
  if (!a.atoms().front().same_space(b.atoms().front())) throw space_mismatch("measures live in different spaces");
}

/// a mu + b nu, as a concatenated atom list.
inline signed_measure combine(double a, const signed_measure& mu, double b, const signed_measure& nu) {
  require_same_space(mu, nu);
  std::vector<point> atoms(mu.atoms().begin(), mu.atoms().end());
  atoms.insert(atoms.end(), nu.atoms().begin(), nu.atoms().end());
  std::vector<double> w;
  w.reserve(atoms.size());
  for (double x : mu.weights()) w.push_back(a * x);
  for (double x : nu.weights()) w.push_back(b * x);
  return signed_measure(std::move(atoms), std::move(w));
}

/// P - Q: atoms concatenated, weights (w_P, -w_Q).
inline signed_measure difference(const signed_measure& p, const signed_measure& q) { return combine(1.0, p, -1.0, q); }

/// sum_i sum_j w_i v_j f(x_i, y_j). Rows are reduced independently and then
/// summed in index order, so the result does not depend on the thread count.
template <typename F>
double double_sum(const signed_measure& mu, const signed_measure& nu, F&& f) {
  require_same_space(mu, nu);
  const auto xs = mu.atoms();
  const auto ys = nu.atoms();
  const auto wx = mu.weights();
  const auto wy = nu.weights();
  std::vector<double> rows(xs.size(), 0.0);
  parallel_for(xs.size(), [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < ys.size(); ++j) s += wy[j] * f(xs[i], ys[j]);
    rows[i] = wx[i] * s;
  }, 8);
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

// ---------------------------------------------------------------------------
// Centering transform

/// K_{-gamma} built from a Lagrange basis (xi_k, p_k) of a finite dimensional
/// function space P:
///
///   K_{-gamma}(x, y) = -gamma(x, y) + sum_k p_k(x) gamma(xi_k, y)
///                      + sum_l p_l(y) gamma(x, xi_l) - sum_{k,l} p_k(x) p_l(y) gamma(xi_k, xi_l)
///
/// gamma is P-CND exactly when K_{-gamma} is positive definite.
class centered_kernel {
 public:
  using basis_fn = std::function<double(const point&)>;

  centered_kernel(cnd_kernel base, std::vector<point> basis_points, std::vector<basis_fn> basis_functions, double tol = 1e-10)
      : base_(base), xi_(std::move(basis_points)), p_(std::move(basis_functions)) {
    if (xi_.size() != p_.size()) throw domain_error("centered_kernel: basis sizes differ");
    if (xi_.empty()) throw domain_error("centered_kernel: empty basis");
    for (std::size_t i = 0; i < p_.size(); ++i)
      for (std::size_t j = 0; j < xi_.size(); ++j) {
        const double want = i == j ? 1.0 : 0.0;
        const double got = p_[i](xi_[j]);
        if (!(std::abs(got - want) <= tol))
          throw constraint_error("lagrange", got - want, tol,
                                 "degenerate basis: p_" + std::to_string(i) + "(xi_" + std::to_string(j) + ") = " + std::to_string(got));
      }
    const std::size_t m = xi_.size();
    gxi_.assign(m * m, 0.0);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l) gxi_[k * m + l] = eval_kernel(base_, xi_[k], xi_[l]);
  }

  /// P = constants, p = 1, single basis point xi.
  static centered_kernel constant(const cnd_kernel& base, point xi) {
    return centered_kernel(base, {std::move(xi)}, {[](const point&) { return 1.0; }});
  }

  const cnd_kernel& base() const noexcept { return base_; }
  std::span<const point> basis_points() const noexcept { return xi_; }
  std::span<const basis_fn> basis_functions() const noexcept { return p_; }

  // K_{-gamma}(x, y)
  double operator()(const point& x, const point& y) const {
    const std::size_t m = xi_.size();
    double s = -eval_kernel(base_, x, y);
    std::vector<double> px(m), py(m);
    for (std::size_t k = 0; k < m; ++k) {
      px[k] = p_[k](x);
      py[k] = p_[k](y);
      s += px[k] * eval_kernel(base_, xi_[k], y) + py[k] * eval_kernel(base_, x, xi_[k]);
    }
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l) s -= px[k] * py[l] * gxi_[k * m + l];
    return s;
  }

 private:
  cnd_kernel base_;
  std::vector<point> xi_;
  std::vector<basis_fn> p_;
  std::vector<double> gxi_;
};

/// Canonical base point of the kernel's space: the origin, the hyperboloid
/// vertex (0, 1), or the first basis vector on the sphere.
inline point base_point(const cnd_kernel& k, std::size_t dim) {
  std::vector<double> c(dim, 0.0);
  switch (k.space()) {
    case space_kind::euclidean: return point::euclidean(std::move(c));
    case space_kind::hyperboloid: return point::hyperboloid(std::move(c));
    case space_kind::sphere: c[0] = 1.0; return point::sphere(std::move(c));
  }
  return point::euclidean(std::move(c));
}

inline centered_kernel center_kernel(const cnd_kernel& k, std::vector<point> basis_points,
                                     std::vector<centered_kernel::basis_fn> basis_functions) {
  return centered_kernel(k, std::move(basis_points), std::move(basis_functions));
}

inline centered_kernel default_center(const cnd_kernel& k, std::size_t dim) { return centered_kernel::constant(k, base_point(k, dim)); }

// ---------------------------------------------------------------------------
// Moments and constraints

/// Entries sum_i w_i x_i^{a_1} ... x_i^{a_j} over multi-indices a_1 <= ... <= a_j
/// (symmetric storage, C(m + j - 1, j) entries).
inline std::vector<double> tensor_moment(const signed_measure& mu, int order) {
  if (mu.empty()) return {};
  if (mu.space() != space_kind::euclidean) throw space_mismatch("tensor moments need a Euclidean measure");
  const std::size_t m = mu.atoms().front().dim();
  std::vector<double> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(order), 0);
  while (true) {
    double s = 0.0;
    for (std::size_t a = 0; a < mu.size(); ++a) {
      double prod = mu.weights()[a];
      for (std::size_t i : idx) prod *= mu.atoms()[a][i];
      s += prod;
    }
    out.push_back(s);
    // next nondecreasing index tuple
    int pos = order - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - 1) --pos;
    if (pos < 0) break;
    const std::size_t v = idx[static_cast<std::size_t>(pos)] + 1;
    for (int q = pos; q < order; ++q) idx[static_cast<std::size_t>(q)] = v;
  }
  return out;
}

// Vector mean v_mu = sum_i w_i x_i.
inline std::vector<double> vector_mean(const signed_measure& mu) { return tensor_moment(mu, 1); }

struct moment_report {
  double mass = 0.0;
  std::optional<std::vector<double>> mean;                // Euclidean only
  std::vector<std::vector<double>> tensors;               // orders 2..l-1, Euclidean only
  std::vector<double> centered_powers;                    // j = 1..l-1: sum sum w w K_{-gamma}^j
};

inline constexpr int max_supported_ell = 3;

inline moment_report compute_moments(const signed_measure& mu, int ell, const centered_kernel& center) {
  if (ell < 1) throw domain_error("moment report requires l >= 1");
  if (ell > max_supported_ell) throw domain_error("l > 3 is not supported");
  moment_report rep;
  rep.mass = mu.mass();
  if (!mu.empty() && mu.space() == space_kind::euclidean) {
    rep.mean = vector_mean(mu);
    for (int j = 2; j <= ell - 1; ++j) rep.tensors.push_back(tensor_moment(mu, j));
  }
  for (int j = 1; j <= ell - 1; ++j)
    rep.centered_powers.push_back(double_sum(mu, mu, [&](const point& x, const point& y) { return std::pow(center(x, y), j); }));
  return rep;
}

struct constraint_report {
  int level = 1;
  double mass = 0.0;
  double mass_tolerance = 0.0;
  std::vector<double> centered_powers;
  std::vector<double> power_tolerances;
  bool satisfied = true;
  std::string violated;  // empty when satisfied
  double violation = 0.0;
};

/// Checks mass = 0 and sum sum w w K_{-gamma}^j = 0 for j < level, with
/// tolerances tol * TV and tol * TV^2 * max|K|^j.
inline constraint_report check_constraints(const signed_measure& mu, int level, const centered_kernel& center, double tol = 1e-10) {
  if (level > max_supported_ell) throw domain_error("l > 3 is not supported");
  constraint_report rep;
  rep.level = level;
  rep.mass = mu.mass();
  const double tv = mu.total_variation();
  rep.mass_tolerance = tol * tv;
  if (std::abs(rep.mass) > rep.mass_tolerance) {
    rep.satisfied = false;
    rep.violated = "mass";
    rep.violation = rep.mass;
  }
  if (level >= 2) {
    double kmax = 0.0;
    for (const auto& x : mu.atoms())
      for (const auto& y : mu.atoms()) kmax = std::max(kmax, std::abs(center(x, y)));
    for (int j = 1; j <= level - 1; ++j) {
      const double v = double_sum(mu, mu, [&](const point& x, const point& y) { return std::pow(center(x, y), j); });
      const double t = tol * tv * tv * std::pow(kmax, j);
      rep.centered_powers.push_back(v);
      rep.power_tolerances.push_back(t);
      if (rep.satisfied && std::abs(v) > t) {
        rep.satisfied = false;
        rep.violated = "centered_power:" + std::to_string(j);
        rep.violation = v;
      }
    }
  }
  return rep;
}

inline void require_constraints(const signed_measure& mu, int level, const centered_kernel& center, double tol, const char* which) {
  const auto rep = check_constraints(mu, level, center, tol);
  if (!rep.satisfied) {
    const double t = rep.violated == "mass" ? rep.mass_tolerance : rep.power_tolerances.at(std::stoul(rep.violated.substr(15)) - 1);
    throw constraint_error(rep.violated, rep.violation, t,
                           std::string(which) + " violates constraint " + rep.violated + " (value " + std::to_string(rep.violation) + ")");
  }
}

inline std::size_t measure_dim(const signed_measure& a, const signed_measure& b) {
  if (!a.empty()) return a.atoms().front().dim();
  if (!b.empty()) return b.atoms().front().dim();
  return 1;
}

// ---------------------------------------------------------------------------
// Inner products

/// -sum sum w_i v_j psi(gamma(x_i, y_j)) for a Bernstein psi on balanced
/// measures (for a CM_1 entry stored as-is, +sum sum phi).
inline double inner_product_bernstein(const signed_measure& mu, const signed_measure& nu, const cnd_kernel& k,
                                      const psi_function& psi, double tol = 1e-10) {
  if (psi.ell != 1) throw domain_error("inner_product_bernstein requires a psi with l = 1");
  require_same_space(mu, nu);
  if (std::abs(mu.mass()) > tol * mu.total_variation())
    throw constraint_error("mass", mu.mass(), tol * mu.total_variation(), "first measure is not balanced");
  if (std::abs(nu.mass()) > tol * nu.total_variation())
    throw constraint_error("mass", nu.mass(), tol * nu.total_variation(), "second measure is not balanced");
  return double_sum(mu, nu, [&](const point& x, const point& y) { return psi.cm_value(eval_kernel(k, x, y)); });
}

/// sum sum w_i v_j phi(gamma(x_i, y_j)) for phi in CM_l, on measures with
/// zero mass and vanishing centered powers of order < l. Results for the
/// hyperbolic kernel with l >= 2 are experimental (see is_experimental).
inline double inner_product_ell(const signed_measure& mu, const signed_measure& nu, const cnd_kernel& k, const psi_function& psi,
                                double tol = 1e-10) {
  if (psi.ell < 1 || psi.ell > max_supported_ell) throw domain_error("inner_product_ell supports 1 <= l <= 3");
  require_same_space(mu, nu);
  const auto center = default_center(k, measure_dim(mu, nu));
  for (const auto* m : {&mu, &nu})
    for (const auto& x : m->atoms())
      if (std::abs(eval_kernel(k, x, x) - k.diagonal()) > tol * std::max(1.0, k.diagonal()))
        throw constraint_error("diagonal", eval_kernel(k, x, x) - k.diagonal(), tol, "kernel diagonal is not constant");
  require_constraints(mu, psi.ell, center, tol, "first measure");
  require_constraints(nu, psi.ell, center, tol, "second measure");
  return double_sum(mu, nu, [&](const point& x, const point& y) { return psi.cm_value(eval_kernel(k, x, y)); });
}

inline bool is_experimental(const cnd_kernel& k, const psi_function& psi) { return psi.ell >= 2 && k.type() != cnd_kernel::kind::euclidean_squared; }

struct hyperbolic_inner_product {
  double value;               // -sum sum w v d_H
  double series_lower_bound;  // sum_{k=1}^{K} c_k sum sum w v [x, y]^{-2k}
  double log_term;            // -sum sum w v log [x, y]
  double first_omitted;       // c_{K+1} sum sum w v [x, y]^{-2(K+1)}
};

/// -int int d_H dmu dnu together with the pieces of the expansion
/// arccosh(t) = log 2 + log t - sum c_k t^{-2k}. For balanced measures the
/// log 2 term drops out and value = log_term + full series; each truncated
/// series is a lower bound when mu = nu because every term is positive.
inline hyperbolic_inner_product inner_product_hyperbolic(const signed_measure& mu, const signed_measure& nu, int terms = 12,
                                                         double tol = 1e-10) {
  for (const auto* m : {&mu, &nu})
    if (!m->empty() && m->space() != space_kind::hyperboloid) throw space_mismatch("inner_product_hyperbolic requires hyperboloid measures");
  if (terms < 0) throw domain_error("series terms must be >= 0");
  if (std::abs(mu.mass()) > tol * mu.total_variation())
    throw constraint_error("mass", mu.mass(), tol * mu.total_variation(), "first measure is not balanced");
  if (std::abs(nu.mass()) > tol * nu.total_variation())
    throw constraint_error("mass", nu.mass(), tol * nu.total_variation(), "second measure is not balanced");
  hyperbolic_inner_product out{};
  out.value = -double_sum(mu, nu, [](const point& x, const point& y) { return hyperbolic_distance(x, y); });
  out.log_term = -double_sum(mu, nu, [](const point& x, const point& y) { return std::log(std::max(1.0, lorentz_product(x, y))); });
  std::vector<double> coef(static_cast<std::size_t>(terms) + 1);
  for (int k = 1; k <= terms + 1; ++k) coef[static_cast<std::size_t>(k - 1)] = arccosh_series_coefficient(k);
  out.series_lower_bound = double_sum(mu, nu, [&](const point& x, const point& y) {
    const double inv2 = 1.0 / std::pow(std::max(1.0, lorentz_product(x, y)), 2);
    double s = 0.0, p = 1.0;
    for (int k = 1; k <= terms; ++k) {
      p *= inv2;
      s += coef[static_cast<std::size_t>(k - 1)] * p;
    }
    return s;
  });
  out.first_omitted = coef.back() * double_sum(mu, nu, [&](const point& x, const point& y) {
    return std::pow(std::max(1.0, lorentz_product(x, y)), -2.0 * (terms + 1));
  });
  return out;
}

struct energy_identity {
  double lhs;  // -sum sum w w gamma
  double rhs;  // sum sum w w K_{-gamma}
};

/// For eta annihilating the basis functions, -int int gamma deta deta equals
/// int int K_{-gamma} deta deta.
inline energy_identity energy_equals_centered_mmd(const signed_measure& eta, const centered_kernel& center, double tol = 1e-10) {
  const auto& k = center.base();
  const double tv = eta.total_variation();
  for (std::size_t b = 0; b < center.basis_functions().size(); ++b) {
    const auto& p = center.basis_functions()[b];
    double s = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
      const double v = p(eta.atoms()[i]);
      s += eta.weights()[i] * v;
      scale = std::max(scale, std::abs(v));
    }
    if (std::abs(s) > tol * tv * std::max(1.0, scale))
      throw constraint_error("basis:" + std::to_string(b), s, tol * tv * std::max(1.0, scale),
                             "measure does not annihilate basis function " + std::to_string(b));
  }
  return {-double_sum(eta, eta, [&](const point& x, const point& y) { return eval_kernel(k, x, y); }),
          double_sum(eta, eta, [&](const point& x, const point& y) { return center(x, y); })};
}

// ---------------------------------------------------------------------------
// Even powers of the Euclidean distance

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

/// C(n, 2l) C(2l, l) 2^{n-2l} for l = 0..floor(n/2).
inline std::vector<double> even_power_coefficients(int n) {
  std::vector<double> c;
  for (int l = 0; 2 * l <= n; ++l) c.push_back(binomial(n, 2 * l) * binomial(2 * l, l) * std::ldexp(1.0, n - 2 * l));
  return c;
}

struct even_power_result {
  double lhs;                        // (-1)^n sum sum w w |x - y|^{2n}
  double rhs;                        // sum_l coef_l sum sum w w <x,y>^{n-2l} |x|^{2l} |y|^{2l}
  std::vector<double> lower_powers;  // sum sum w w |x - y|^{2m}, m = 0..n-1
  double scale;                      // TV^2 max|x|^{2n}
};

/// Requires sum sum w w <x, y>^k = 0 for 0 <= k <= n - 1.
inline even_power_result even_power_identity(const signed_measure& mu, int n, double tol = 1e-10) {
  if (n < 1) throw domain_error("even_power_identity requires n >= 1");
  if (!mu.empty() && mu.space() != space_kind::euclidean) throw space_mismatch("even_power_identity requires a Euclidean measure");
  const double tv = mu.total_variation();
  const double r = mu.max_norm();
  for (int k = 0; k < n; ++k) {
    const double v = double_sum(mu, mu, [&](const point& x, const point& y) { return std::pow(dot(x, y), k); });
    const double t = tol * tv * tv * std::pow(std::max(r, 1e-300), 2 * k);
    if (std::abs(v) > t)
      throw constraint_error("inner_moment:" + std::to_string(k), v, t,
                             "moment condition k = " + std::to_string(k) + " fails (value " + std::to_string(v) + ")");
  }
  const auto coef = even_power_coefficients(n);
  even_power_result out{};
  const double sg = n % 2 == 0 ? 1.0 : -1.0;
  out.lhs = sg * double_sum(mu, mu, [&](const point& x, const point& y) {
    double d = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) d += (x[i] - y[i]) * (x[i] - y[i]);
    return std::pow(d, n);
  });
  out.rhs = double_sum(mu, mu, [&](const point& x, const point& y) {
    const double ip = dot(x, y);
    const double nx = x.squared_norm(), ny = y.squared_norm();
    double s = 0.0;
    for (int l = 0; 2 * l <= n; ++l) s += coef[static_cast<std::size_t>(l)] * std::pow(ip, n - 2 * l) * std::pow(nx * ny, l);
    return s;
  });
  for (int m = 0; m < n; ++m)
    out.lower_powers.push_back(double_sum(mu, mu, [&](const point& x, const point& y) {
      double d = 0.0;
      for (std::size_t i = 0; i < x.dim(); ++i) d += (x[i] - y[i]) * (x[i] - y[i]);
      return std::pow(d, m);
    }));
  out.scale = tv * tv * std::pow(2.0 * r, 2 * n);
  return out;
}

/// eta_t = t mu - t mu(X) delta_0 - (delta_{t v} - delta_{-t v}) / 2 with v the
/// vector mean of mu; eta_t has zero mass and zero vector mean. Correction atoms
/// with zero weight (mu(X) = 0, v = 0) are omitted.
inline signed_measure mean_cancel_augment(const signed_measure& mu, double t) {
  if (!(t > 0.0)) throw domain_error("mean_cancel_augment requires t > 0");
  if (mu.empty()) return mu;
  if (mu.space() != space_kind::euclidean) throw space_mismatch("mean_cancel_augment requires a Euclidean measure");
  const std::size_t dim = mu.atoms().front().dim();
  signed_measure out = mu.scaled(t);
  const double mass = mu.mass();
  if (mass != 0.0) out.add(point::euclidean(std::vector<double>(dim, 0.0)), -t * mass);
  const auto v = vector_mean(mu);
  if (std::any_of(v.begin(), v.end(), [](double c) { return c != 0.0; })) {
    std::vector<double> plus(dim), minus(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      plus[i] = t * v[i];
      minus[i] = -t * v[i];
    }
    out.add(point::euclidean(std::move(plus)), -0.5);
    out.add(point::euclidean(std::move(minus)), 0.5);
  }
  return out;
}

/// D(x, y) = psi(d(x, y)) where d is the kernel metric (gamma itself for the
/// hyperbolic and sphere kernels, |x - y| for euclidean_squared). Requires a
/// nonzero sublinear Bernstein psi with psi(0) = 0.
inline double psi_metric(const point& x, const point& y, const cnd_kernel& k, const psi_function& psi) {
  if (psi.conv != convention::bernstein || psi.ell != 1) throw domain_error("psi_metric requires a Bernstein function");
  if (psi.closed_form(0.0) != 0.0) throw domain_error("psi_metric requires psi(0) = 0");
  if (!psi.sublinear) throw domain_error("psi_metric requires psi(t)/t -> 0");
  return psi.closed_form(kernel_metric(k, x, y));
}

}  // namespace bernergy
