#pragma once

// Spectral and sampling checks of definiteness, metric axioms and strictness
// of the energy inner products on finite samples.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bernergy/cmfun.hpp"
#include "bernergy/energy.hpp"
#include "bernergy/error.hpp"
#include "bernergy/parallel.hpp"
#include "bernergy/random.hpp"
#include "bernergy/spaces.hpp"

namespace bernergy {

/// Outcome of one check. `worst` is the extreme observed quantity (minimum
/// eigenvalue, maximum triangle violation, minimum normalized energy) and
/// `margin` its signed slack against `threshold`; pass <=> margin >= 0.
struct verification_report {
  std::string check;
  bool pass = false;
  double worst = 0.0;
  double threshold = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> witness_indices;
  std::vector<double> witness_values;
  std::optional<signed_measure> witness_measure;
  std::vector<std::string> warnings;
};

namespace detail {

inline void require_finite(const Eigen::MatrixXd& g, const char* what) {
  if (!g.allFinite()) throw domain_error(std::string(what) + ": non-finite matrix entry");
}

// Scale used by the eigenvalue threshold: the largest diagonal entry, or the
// largest entry when the diagonal vanishes (e.g. -gamma with gamma(x, x) = 0).
inline double spectral_scale(const Eigen::MatrixXd& g) {
  double s = g.size() ? g.diagonal().cwiseAbs().maxCoeff() : 0.0;
  if (s == 0.0 && g.size()) s = g.cwiseAbs().maxCoeff();
  return s == 0.0 ? 1.0 : s;
}

inline Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& g) { return 0.5 * (g + g.transpose()); }

}  // namespace detail

/// Smallest eigenvalue against -tol * n * maxdiag.
inline verification_report check_psd(const Eigen::MatrixXd& g, double tol = 1e-10) {
  if (g.rows() != g.cols()) throw domain_error("check_psd: matrix is not square");
  detail::require_finite(g, "check_psd");
  verification_report r;
  r.check = "psd";
  r.tolerance = tol;
  r.samples = static_cast<std::size_t>(g.rows());
  if (g.rows() == 0) {
    r.pass = true;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::symmetrized(g));
  r.worst = es.eigenvalues()(0);
  r.threshold = -tol * static_cast<double>(g.rows()) * detail::spectral_scale(g);
  r.margin = r.worst - r.threshold;
  r.pass = r.margin >= 0.0;
  const Eigen::VectorXd v = es.eigenvectors().col(0);
  r.witness_values.assign(v.data(), v.data() + v.size());
  return r;
}

inline verification_report check_psd(const gram_matrix& g, double tol = 1e-10) { return check_psd(g.values, tol); }

/// Orthonormal basis of {c : C c = 0} from a full SVD of C (m x n); columns
/// beyond the numerical rank of C.
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& c, std::size_t* rank_out = nullptr) {
  const Eigen::Index n = c.cols();
  if (c.rows() == 0) {
    if (rank_out) *rank_out = 0;
    return Eigen::MatrixXd::Identity(n, n);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = s.size() ? s(0) * 1e-12 * static_cast<double>(std::max(c.rows(), n)) : 0.0;
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  if (rank_out) *rank_out = static_cast<std::size_t>(rank);
  return svd.matrixV().rightCols(n - rank);
}

/// P-conditional positive definiteness: g projected onto the null space of
/// the constraint rows constraints(k, i) = p_k(x_i).
inline verification_report check_cpd(const Eigen::MatrixXd& g, const Eigen::MatrixXd& constraints, double tol = 1e-10) {
  if (constraints.rows() == 0) return check_psd(g, tol);
  if (g.rows() != g.cols()) throw domain_error("check_cpd: matrix is not square");
  if (constraints.cols() != g.rows()) throw domain_error("check_cpd: constraint matrix has the wrong width");
  if (constraints.rows() >= constraints.cols()) throw domain_error("check_cpd: need fewer constraints than points");
  detail::require_finite(g, "check_cpd");
  detail::require_finite(constraints, "check_cpd");
  std::size_t rank = 0;
  const Eigen::MatrixXd basis = null_space(constraints, &rank);
  verification_report r;
  r.check = "cpd";
  r.tolerance = tol;
  r.samples = static_cast<std::size_t>(g.rows());
  if (rank < static_cast<std::size_t>(constraints.rows()))
    r.warnings.push_back("constraint matrix has rank " + std::to_string(rank) + " < " + std::to_string(constraints.rows()));
  r.threshold = -tol * static_cast<double>(g.rows()) * detail::spectral_scale(g);
  if (basis.cols() == 0) {
    r.pass = true;
    r.margin = -r.threshold;
    r.warnings.push_back("constraint null space is trivial");
    return r;
  }
  const Eigen::MatrixXd projected = basis.transpose() * detail::symmetrized(g) * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::symmetrized(projected));
  r.worst = es.eigenvalues()(0);
  r.margin = r.worst - r.threshold;
  r.pass = r.margin >= 0.0;
  const Eigen::VectorXd c = basis * es.eigenvectors().col(0);
  r.witness_values.assign(c.data(), c.data() + c.size());
  return r;
}

/// Rows p(x_i) for p = 1 and, with `with_coordinates`, p = coordinate maps.
inline Eigen::MatrixXd polynomial_constraints(std::span<const point> pts, int level) {
  if (pts.empty()) return {};
  const auto n = static_cast<Eigen::Index>(pts.size());
  const auto m = static_cast<Eigen::Index>(pts.front().dim());
  Eigen::Index rows = 1;
  if (level >= 2) rows += m;
  if (level >= 3) rows += m * (m + 1) / 2;
  if (level > 3) throw domain_error("constraint levels above 3 are not supported");
  Eigen::MatrixXd c(rows, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& x = pts[static_cast<std::size_t>(i)];
    Eigen::Index r = 0;
    c(r++, i) = 1.0;
    if (level >= 2)
      for (Eigen::Index a = 0; a < m; ++a) c(r++, i) = x[static_cast<std::size_t>(a)];
    if (level >= 3)
      for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = a; b < m; ++b) c(r++, i) = x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(b)];
  }
  return c;
}

/// e^{-r gamma} is PSD for every r in the grid.
inline verification_report check_schoenberg(const cnd_kernel& k, std::span<const point> pts, std::span<const double> r_grid,
                                            double tol = 1e-10) {
  for (double r : r_grid)
    if (!(r > 0.0)) throw domain_error("check_schoenberg: r must be positive");
  const auto g = gram(k, pts);
  verification_report out;
  out.check = "schoenberg";
  out.tolerance = tol;
  out.samples = pts.size() * r_grid.size();
  out.pass = true;
  out.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const Eigen::MatrixXd e = (-r_grid[i] * g.values.array()).exp().matrix();
    const auto rep = check_psd(e, tol);
    if (rep.margin < out.margin) {
      out.margin = rep.margin;
      out.worst = rep.worst;
      out.threshold = rep.threshold;
      out.witness_indices = {i};
      out.witness_values = {r_grid[i], rep.worst};
    }
    out.pass = out.pass && rep.pass;
  }
  return out;
}

using metric_fn = std::function<double(const point&, const point&)>;

/// Samples n_triples index triples (i, j, k) and reports the largest
/// D(x_i, x_j) - D(x_i, x_k) - D(x_k, x_j).
inline verification_report check_triangle(const metric_fn& d, std::span<const point> pts, std::size_t n_triples, std::uint64_t seed,
                                          double tol = 1e-12) {
  if (n_triples < 1) throw domain_error("check_triangle: need at least one triple");
  if (pts.empty()) throw domain_error("check_triangle: empty point list");
  counter_rng rng(seed);
  std::vector<std::size_t> idx(3 * n_triples);
  for (auto& v : idx) v = rng.below(pts.size());
  std::vector<double> viol(n_triples);
  parallel_for(n_triples, [&](std::size_t t) {
    const auto& x = pts[idx[3 * t]];
    const auto& y = pts[idx[3 * t + 1]];
    const auto& z = pts[idx[3 * t + 2]];
    viol[t] = d(x, y) - d(x, z) - d(z, y);
  }, 256);
  const std::size_t w = static_cast<std::size_t>(std::max_element(viol.begin(), viol.end()) - viol.begin());
  verification_report r;
  r.check = "triangle";
  r.tolerance = tol;
  r.samples = n_triples;
  r.seed = seed;
  r.worst = viol[w];
  r.threshold = tol;
  r.margin = tol - r.worst;
  r.pass = r.margin >= 0.0;
  r.witness_indices = {idx[3 * w], idx[3 * w + 1], idx[3 * w + 2]};
  const auto& x = pts[idx[3 * w]];
  const auto& y = pts[idx[3 * w + 1]];
  const auto& z = pts[idx[3 * w + 2]];
  r.witness_values = {d(x, y), d(x, z), d(z, y)};
  return r;
}

// ---------------------------------------------------------------------------
// Random inputs

/// Standard normal coordinates; lifted to the hyperboloid or normalized onto
/// the sphere. `dim` is the coordinate count of the stored point.
inline point random_point(space_kind s, std::size_t dim, counter_rng& rng) {
  std::vector<double> c(dim);
  for (auto& v : c) v = rng.normal();
  switch (s) {
    case space_kind::euclidean: return point::euclidean(std::move(c));
    case space_kind::hyperboloid: return point::hyperboloid(std::move(c));
    case space_kind::sphere:
      while (std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; }))
        for (auto& v : c) v = rng.normal();
      return point::sphere(std::move(c));
  }
  return point::euclidean(std::move(c));
}

inline std::vector<point> random_points(space_kind s, std::size_t n, std::size_t dim, std::uint64_t seed) {
  counter_rng rng(seed);
  std::vector<point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(random_point(s, dim, rng));
  return pts;
}

/// Atom count uniform on 2..10 (raised when the constraints need more
/// atoms), normal coordinates and weights, weights projected orthogonally onto
/// the constraint set of the given level (mass for 1, plus mean for 2, plus
/// second moments for 3; levels above 1 need Euclidean space).
inline signed_measure random_balanced_measure(space_kind s, std::size_t dim, int level, counter_rng& rng) {
  if (level < 1 || level > 3) throw domain_error("random_balanced_measure: level must be 1, 2 or 3");
  if (level > 1 && s != space_kind::euclidean) throw space_mismatch("moment constraints above level 1 need Euclidean space");
  std::size_t rows = 1;
  if (level >= 2) rows += dim;
  if (level >= 3) rows += dim * (dim + 1) / 2;
  const std::size_t lo = std::max<std::size_t>(2, rows + 1);
  const std::size_t hi = std::max<std::size_t>(10, rows + 2);
  for (;;) {
    const std::size_t n = lo + rng.below(hi - lo + 1);
    std::vector<point> atoms;
    atoms.reserve(n);
    for (std::size_t i = 0; i < n; ++i) atoms.push_back(random_point(s, dim, rng));
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.normal();
    const Eigen::MatrixXd basis = null_space(polynomial_constraints(atoms, level));
    const Eigen::VectorXd p = basis * (basis.transpose() * w);
    if (p.norm() <= 1e-8 * w.norm()) continue;  // practically never
    return signed_measure(std::move(atoms), std::vector<double>(p.data(), p.data() + p.size()));
  }
}

// ---------------------------------------------------------------------------
// Strict positivity of I(eta, eta)

struct probe_config {
  space_kind space = space_kind::euclidean;
  std::size_t dim = 2;
  std::size_t n_trials = 1000;
  std::uint64_t seed = 0;
  double tol = 1e-12;  // on I / (|w|^2 max|phi(gamma)|)
};

/// Draws n_trials random nonzero measures satisfying the constraints of level
/// l, evaluates I(eta, eta) with the closed form of psi and passes iff every
/// normalized value exceeds tol. For polynomial psi on euclidean_squared every
/// other trial is pushed one constraint level higher, which is where those
/// forms degenerate (psi = t gives I = 2|v|^2, zero on mean-zero measures).
inline verification_report probe_strong_negative_type(const cnd_kernel& k, const psi_function& psi, const probe_config& cfg) {
  if (cfg.space != k.space()) throw space_mismatch("probe: kernel " + k.name() + " is not defined on " + std::string(to_string(cfg.space)));
  if (psi.ell < 1 || psi.ell > 3) throw domain_error("probe: l must be 1, 2 or 3");
  if (psi.ell > 1 && k.type() != cnd_kernel::kind::euclidean_squared)
    throw domain_error("probe: l >= 2 constraints are only implemented for euclidean_squared");
  const bool degenerate_probe = psi.polynomial && k.type() == cnd_kernel::kind::euclidean_squared && psi.ell < 3;
  std::vector<double> normalized(cfg.n_trials);
  std::vector<double> raw(cfg.n_trials);
  std::vector<signed_measure> measures(cfg.n_trials);
  for (std::size_t t = 0; t < cfg.n_trials; ++t) {
    counter_rng rng(cfg.seed, t);
    const int level = degenerate_probe && (t % 2 == 1) ? psi.ell + 1 : psi.ell;
    measures[t] = random_balanced_measure(cfg.space, cfg.dim, level, rng);
  }
  parallel_for(cfg.n_trials, [&](std::size_t t) {
    const auto& mu = measures[t];
    const auto xs = mu.atoms();
    const auto ws = mu.weights();
    double scale = 0.0, w2 = 0.0, v = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      w2 += ws[i] * ws[i];
      double row = 0.0;
      for (std::size_t j = 0; j < xs.size(); ++j) {
        const double phi = psi.cm_value(eval_kernel(k, xs[i], xs[j]));
        scale = std::max(scale, std::abs(phi));
        row += ws[j] * phi;
      }
      v += ws[i] * row;
    }
    raw[t] = v;
    normalized[t] = v / (w2 * (scale > 0.0 ? scale : 1.0));
  }, 8);
  const std::size_t w = static_cast<std::size_t>(std::min_element(normalized.begin(), normalized.end()) - normalized.begin());
  verification_report r;
  r.check = "sntype";
  r.tolerance = cfg.tol;
  r.samples = cfg.n_trials;
  r.seed = cfg.seed;
  r.worst = normalized[w];
  r.threshold = cfg.tol;
  r.margin = r.worst - cfg.tol;
  r.pass = r.margin > 0.0;
  r.witness_indices = {w};
  r.witness_values = {raw[w], normalized[w]};
  r.witness_measure = measures[w];
  if (psi.polynomial) r.warnings.push_back("polynomial psi: degenerate constraint sets are probed");
  if (is_experimental(k, psi)) r.warnings.push_back("experimental: l >= 2 on a kernel without constant diagonal");
  return r;
}

}  // namespace bernergy
