#pragma once

// Bernstein functions and CM_l functions psi: closed forms, their integral
// representations
//
//   general: psi(t) = int (e^{-tr} - e_l(r) w_l(rt)) / r^l dlambda(r) + sum_k a_k t^k
//   smooth:  psi(t) = int (e^{-tr} -        w_l(rt)) / r^l deta(r)    + sum_k b_k t^k
//
// with w_l(s) = sum_{j<l} (-s)^j / j! and e_l(s) = e^{-s} sum_{j<l} s^j / j!,
// and quadrature evaluation of the representation.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bernergy/error.hpp"
#include "bernergy/quadrature.hpp"

namespace bernergy {

/// w_l(s) = sum_{j=0}^{l-1} (-1)^j s^j / j!; identically zero for l = 0.
inline double omega(int ell, double s) {
  double sum = 0.0, term = 1.0;
  for (int j = 0; j < ell; ++j) {
    sum += term;
    term *= -s / (j + 1);
  }
  return sum;
}

/// e_l(s) = e^{-s} sum_{j=0}^{l-1} s^j / j!
inline double e_ell(int ell, double s) {
  double sum = 0.0, term = 1.0;
  for (int j = 0; j < ell; ++j) {
    sum += term;
    term *= s / (j + 1);
  }
  return std::exp(-s) * sum;
}

/// e^{-x} - w_l(x) for x >= 0. For small x the tail sum_{j>=l} (-x)^j / j!
/// is summed directly to avoid cancellation.
inline double exp_minus_omega(int ell, double x) {
  if (ell <= 0) return std::exp(-x);
  if (x < 1.5) {
    double term = 1.0;
    for (int j = 1; j <= ell; ++j) term *= -x / j;
    double sum = 0.0;
    for (int j = ell; j < ell + 60; ++j) {
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
      term *= -x / (j + 1);
    }
    return sum;
  }
  return std::exp(-x) - omega(ell, x);
}

/// 1 - e_l(r) = e^{-r} sum_{j>=l} r^j / j!
inline double one_minus_e_ell(int ell, double r) {
  if (ell <= 0) return 1.0;
  if (r < 1.0) {
    double term = 1.0;
    for (int j = 1; j <= ell; ++j) term *= r / j;
    double sum = 0.0;
    for (int j = ell; j < ell + 60; ++j) {
      sum += term;
      if (term <= 1e-18 * sum) break;
      term *= r / (j + 1);
    }
    return std::exp(-r) * sum;
  }
  return 1.0 - e_ell(ell, r);
}

/// r^l (1 + t^l) min{1, r^{-l}} = min{r^l, 1} (1 + t^l): the envelope that
/// dominates |e^{-rt} - e_l(r) w_l(rt)| up to a constant depending on l only.
inline double change_envelope(int ell, double r, double t) {
  return std::min(std::pow(r, ell), 1.0) * (1.0 + std::pow(t, ell));
}

/// sup over the grid of |e^{-rt} - e_l(r) w_l(rt)| / change_envelope(l, r, t).
inline double fit_change_constant(int ell, std::span<const double> r_grid, std::span<const double> t_grid) {
  double best = 0.0;
  for (double r : r_grid)
    for (double t : t_grid) {
      const double num = std::abs(exp_minus_omega(ell, r * t) + one_minus_e_ell(ell, r) * omega(ell, r * t));
      best = std::max(best, num / change_envelope(ell, r, t));
    }
  return best;
}

/// Density c r^p e^{-k r} of the representing measure against dr on (0, inf).
struct levy_density {
  double coeff = 0.0;
  double power = 0.0;
  double rate = 0.0;

  double operator()(double r) const { return coeff * std::pow(r, power) * std::exp(-rate * r); }

  // Upper bound for int_0^eps density(r) dr.
  double lower_mass_bound(double eps) const {
    if (power <= -1.0) return std::numeric_limits<double>::infinity();
    return coeff * std::pow(eps, power + 1.0) / (power + 1.0);
  }

  // Upper bound for int_R^inf density(r) / r dr, R >= 1.
  double upper_tail_bound(double big_r) const {
    if (rate > 0.0) {
      if (power - 1.0 > 0.0) return std::numeric_limits<double>::infinity();
      return coeff * std::pow(big_r, power - 1.0) * std::exp(-rate * big_r) / rate;
    }
    if (power >= 0.0) return std::numeric_limits<double>::infinity();
    return coeff * std::pow(big_r, power) / (-power);
  }

  // int min{1, r^{-l}} density(r) dr < inf, decided from the exponents.
  bool integrable(int ell) const {
    if (coeff == 0.0) return true;
    if (power <= -1.0) return false;
    return rate > 0.0 || power - ell < -1.0;
  }
};

enum class convention {
  bernstein,            // psi is a Bernstein function; the CM_1 function is -psi
  completely_monotone,  // psi itself lies in CM_l
};

struct psi_function {
  std::string name;
  int ell = 1;
  convention conv = convention::completely_monotone;
  std::function<double(double)> closed_form;
  // Density of the representing measure (eta in the smooth form); absent for
  // closed-form-only entries.
  std::optional<levy_density> levy;
  // b_0..b_l of the CM_l function (so (-1)^l b_l >= 0).
  std::vector<double> poly_coeffs;
  bool smooth_at_zero = true;
  bool sublinear = false;   // psi(t)/t -> 0
  bool polynomial = false;

  // CM_l function = sign() * psi
  double sign() const noexcept { return conv == convention::bernstein ? -1.0 : 1.0; }
  double cm_value(double t) const { return sign() * closed_form(t); }
  bool has_representation() const noexcept { return levy.has_value() || polynomial; }
};

inline double eval_closed(const psi_function& psi, double t) {
  if (!(t >= 0.0)) throw domain_error("psi(" + std::to_string(t) + "): t must be >= 0");
  return psi.closed_form(t);
}

enum class representation_branch { automatic, smooth, general };

namespace detail {

inline double poly_eval(std::span<const double> c, double t) {
  double s = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) s = s * t + c[k];
  return s;
}

// Picks truncation points u_lo, u_hi (r in [e^{-u_lo}, e^{u_hi}]) so that the
// discarded tails are below budget, integrates f(r) over both halves in
// u = -log r and u = log r, and returns value and total error.
template <typename F>
quad_result integrate_half_lines(F&& f, const levy_density& eta, double lower_factor, double upper_factor, double tol) {
  const double budget = tol / 20.0;
  // past u = 700 the tails are as small as they will get in double precision
  double u_lo = 1.0;
  while (u_lo < 700.0 && lower_factor * eta.lower_mass_bound(std::exp(-u_lo)) > budget) u_lo += 0.5;
  double u_hi = 1.0;
  while (u_hi < 700.0 && upper_factor * eta.upper_tail_bound(std::exp(u_hi)) > budget) u_hi += 0.5;
  const double tails = lower_factor * eta.lower_mass_bound(std::exp(-u_lo)) + upper_factor * eta.upper_tail_bound(std::exp(u_hi));
  auto lower = integrate_adaptive([&](double u) { const double r = std::exp(-u); return f(r) * r; }, 0.0, u_lo, 0.4 * tol);
  auto upper = integrate_adaptive([&](double u) { const double r = std::exp(u); return f(r) * r; }, 0.0, u_hi, 0.4 * tol);
  quad_result out;
  out.value = lower.value + upper.value;
  out.abs_error = lower.abs_error + upper.abs_error + tails;
  out.intervals = lower.intervals + upper.intervals;
  out.converged = lower.converged && upper.converged && tails <= 2.0 * budget;
  return out;
}

inline double falling_sum(int ell, double t) {
  // sum_{j<l} t^j / j!
  double s = 0.0, term = 1.0;
  for (int j = 0; j < ell; ++j) {
    s += term;
    term *= t / (j + 1);
  }
  return s;
}

}  // namespace detail

/// Evaluates the representation of psi at t (in the stored convention, so
/// the result is comparable with eval_closed) and reports the error bound.
inline quad_result integrate_representation(const psi_function& psi, double t, double tol,
                                            representation_branch branch = representation_branch::automatic) {
  if (!(t >= 0.0)) throw domain_error("representation: t must be >= 0");
  if (!(tol > 0.0)) throw domain_error("representation: tol must be > 0");
  if (!psi.has_representation()) throw domain_error("psi '" + psi.name + "' has no integral representation");
  const int ell = psi.ell;
  if (ell < 1) throw domain_error("representation requires l >= 1");
  if (branch == representation_branch::automatic)
    branch = psi.smooth_at_zero ? representation_branch::smooth : representation_branch::general;

  std::vector<double> coeffs = psi.poly_coeffs;
  coeffs.resize(static_cast<std::size_t>(ell) + 1, 0.0);

  quad_result integral{0.0, 0.0, 0, true};
  if (psi.levy && psi.levy->coeff != 0.0) {
    const levy_density eta = *psi.levy;
    const double lower_factor = (std::pow(t, ell) + detail::falling_sum(ell, t)) / std::tgamma(ell + 1.0);
    const double upper_factor = 1.0 + detail::falling_sum(ell, t);

    if (branch == representation_branch::smooth) {
      if (t > 0.0) {
        integral = detail::integrate_half_lines(
            [&](double r) { return exp_minus_omega(ell, r * t) / std::pow(r, ell) * eta(r); }, eta, lower_factor, upper_factor, tol);
      }
    } else {
      // a_k = b_k - (-1)^k / k! int (1 - e_l(r)) r^{k-l} deta(r), k < l
      const double share = tol / (4.0 * ell);
      for (int k = 0; k < ell; ++k) {
        const double scale = std::max(1.0, std::pow(t, k));
        auto jk = detail::integrate_half_lines(
            [&](double r) { return one_minus_e_ell(ell, r) * std::pow(r, k - ell) * eta(r); }, eta,
            1.0 / std::tgamma(ell + 1.0), 1.0, share / scale);
        const double factor = (k % 2 == 0 ? 1.0 : -1.0) / std::tgamma(k + 1.0);
        coeffs[static_cast<std::size_t>(k)] -= factor * jk.value;
        integral.abs_error += std::abs(factor) * jk.abs_error * std::pow(t, k);
        integral.converged = integral.converged && jk.converged;
        integral.intervals += jk.intervals;
      }
      auto main = detail::integrate_half_lines(
          [&](double r) {
            const double x = r * t;
            return (exp_minus_omega(ell, x) + one_minus_e_ell(ell, r) * omega(ell, x)) / std::pow(r, ell) * eta(r);
          },
          eta, lower_factor, upper_factor, tol / 2.0);
      integral.value = main.value;
      integral.abs_error += main.abs_error;
      integral.converged = integral.converged && main.converged;
      integral.intervals += main.intervals;
    }
  }
  integral.value = psi.sign() * (integral.value + detail::poly_eval(coeffs, t));
  return integral;
}

/// psi(t) evaluated through its integral representation, to within tol.
inline double eval_by_representation(const psi_function& psi, double t, double tol,
                                     representation_branch branch = representation_branch::automatic) {
  const auto r = integrate_representation(psi, t, tol, branch);
  if (!r.converged || r.abs_error > tol)
    throw quadrature_error(r.value, r.abs_error, "representation of '" + psi.name + "' did not reach tolerance");
  return r.value;
}

// ---------------------------------------------------------------------------
// Catalog

/// t^{a/2}, with sign (-1)^l for l >= 2 where l = ceil(a/2). For l = 1 the
/// Bernstein function t^{a/2} itself is stored.
inline psi_function make_pow(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw domain_error("pow exponent must be > 0");
  const double s = a / 2.0;
  psi_function p;
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, a);
  p.name = "pow:" + std::string(buf, end);

  if (s == std::floor(s)) {
    const int j = static_cast<int>(s);
    p.ell = j;
    p.polynomial = true;
    p.poly_coeffs.assign(static_cast<std::size_t>(j) + 1, 0.0);
    if (j == 1) {
      p.conv = convention::bernstein;
      p.closed_form = [](double t) { return t; };
      p.poly_coeffs[1] = -1.0;
    } else {
      const double sg = (j % 2 == 0) ? 1.0 : -1.0;
      p.conv = convention::completely_monotone;
      p.closed_form = [sg, j](double t) { return sg * std::pow(t, j); };
      p.poly_coeffs[static_cast<std::size_t>(j)] = sg;
    }
    return p;
  }

  const int ell = static_cast<int>(std::ceil(s));
  p.ell = ell;
  p.poly_coeffs.assign(static_cast<std::size_t>(ell) + 1, 0.0);
  p.levy = levy_density{1.0 / std::abs(std::tgamma(-s)), ell - s - 1.0, 0.0};
  if (ell == 1) {
    p.conv = convention::bernstein;
    p.sublinear = true;
    p.closed_form = [s](double t) { return std::pow(t, s); };
  } else {
    const double sg = (ell % 2 == 0) ? 1.0 : -1.0;
    p.conv = convention::completely_monotone;
    p.closed_form = [sg, s](double t) { return sg * std::pow(t, s); };
  }
  return p;
}

inline psi_function make_sqrt() {
  psi_function p = make_pow(1.0);
  p.name = "sqrt";
  p.closed_form = [](double t) { return std::sqrt(t); };
  return p;
}

inline psi_function make_linear() {
  psi_function p = make_pow(2.0);
  p.name = "linear";
  return p;
}

// log(1 + t) = int (1 - e^{-rt}) e^{-r} / r dr
inline psi_function make_log1p() {
  psi_function p;
  p.name = "log1p";
  p.ell = 1;
  p.conv = convention::bernstein;
  p.closed_form = [](double t) { return std::log1p(t); };
  p.levy = levy_density{1.0, 0.0, 1.0};
  p.poly_coeffs = {0.0, 0.0};
  p.sublinear = true;
  return p;
}

// log(log(1 + t) + 1); a composition of Bernstein functions.
inline psi_function make_loglog1p() {
  psi_function p;
  p.name = "loglog1p";
  p.ell = 1;
  p.conv = convention::bernstein;
  p.closed_form = [](double t) { return std::log1p(std::log1p(t)); };
  p.poly_coeffs = {0.0, 0.0};
  p.sublinear = true;
  return p;
}

// (-1)^l t^{l-1} log t, l >= 2; lies in CM_l but is not C^{l-1} at 0.
inline psi_function make_tlogt(int ell) {
  if (ell < 2) throw domain_error("tlogt requires l >= 2");
  psi_function p;
  p.name = "tlogt:" + std::to_string(ell);
  p.ell = ell;
  p.conv = convention::completely_monotone;
  const double sg = (ell % 2 == 0) ? 1.0 : -1.0;
  p.closed_form = [sg, ell](double t) { return t == 0.0 ? 0.0 : sg * std::pow(t, ell - 1) * std::log(t); };
  p.poly_coeffs.assign(static_cast<std::size_t>(ell) + 1, 0.0);
  p.smooth_at_zero = false;
  return p;
}

// e^{-rt}: completely monotone, hence in CM_1 with b_0 = 1. The representing
// measure is a point mass, so the entry is closed-form only.
inline psi_function make_exp(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw domain_error("exp rate must be > 0");
  psi_function p;
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, rate);
  p.name = "exp:" + std::string(buf, end);
  p.ell = 1;
  p.conv = convention::completely_monotone;
  p.closed_form = [rate](double t) { return std::exp(-rate * t); };
  p.poly_coeffs = {1.0, 0.0};
  return p;
}

inline std::vector<psi_function> catalog() {
  return {make_sqrt(),    make_pow(0.5),   make_pow(0.7), make_pow(1.0), make_pow(1.5),
          make_linear(),  make_pow(3.0),   make_pow(5.0), make_log1p(),  make_loglog1p(),
          make_tlogt(2),  make_tlogt(3),   make_exp(1.0)};
}

/// "sqrt", "linear", "log1p", "loglog1p", "pow:<a>", "exp:<r>", "tlogt:<l>".
inline psi_function find_psi(std::string_view spec) {
  auto number = [&](std::string_view arg) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
    if (arg.empty() || ec != std::errc() || p != arg.data() + arg.size())
      throw domain_error("bad numeric argument in psi spec '" + std::string(spec) + "'");
    return v;
  };
  if (spec == "sqrt") return make_sqrt();
  if (spec == "linear") return make_linear();
  if (spec == "log1p") return make_log1p();
  if (spec == "loglog1p") return make_loglog1p();
  const auto colon = spec.find(':');
  if (colon != std::string_view::npos) {
    const auto head = spec.substr(0, colon);
    const auto arg = spec.substr(colon + 1);
    if (head == "pow") return make_pow(number(arg));
    if (head == "exp") return make_exp(number(arg));
    if (head == "tlogt") {
      const double l = number(arg);
      if (l != std::floor(l)) throw domain_error("tlogt order must be an integer");
      return make_tlogt(static_cast<int>(l));
    }
  }
  throw domain_error("unknown psi '" + std::string(spec) + "'");
}

}  // namespace bernergy
