// bernergy: energy distances, permutation tests and certification checks
// for weighted point clouds. Every command prints one JSON document.
//
// exit codes: 0 ok, 1 I/O, 2 CSV parse, 64 usage, 65 constraint/domain

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bernergy.hpp"
#include "bernergy/serialize.hpp"

namespace {

using bernergy::json;

enum exit_code : int { ok = 0, io = 1, parse = 2, usage = 64, constraint = 65 };

struct run_config {
  std::string command;
  std::string x_path, y_path, input_path, output_path;
  std::string kernel = "euclidean_squared";
  std::string psi;
  std::vector<std::string> checks;
  std::vector<double> ts, r_grid{0.1, 1.0, 10.0};
  std::string branch = "auto";
  std::size_t permutations = 199, n = 30, dim = 2, trials = 1000, triples = 100000;
  std::uint64_t seed = 0;
  double tol = 1e-10, quad_tol = 1e-9;
  bool center = false, weights = false, representation = false;
};

class usage_error : public bernergy::error {
 public:
  using bernergy::error::error;
};

json config_echo(const run_config& c) {
  json j;
  const auto& cmd = c.command;
  if (cmd == "dist" || cmd == "test") {
    j["x"] = c.x_path;
    j["y"] = c.y_path;
    j["kernel"] = c.kernel;
    j["psi"] = c.psi;
    j["center"] = c.center;
    if (cmd == "dist") {
      j["weights"] = c.weights;
      j["tol"] = c.tol;
    } else {
      j["B"] = c.permutations;
    }
  } else if (cmd == "verify") {
    j["kernel"] = c.kernel;
    j["checks"] = c.checks;
    j["input"] = c.input_path.empty() ? json(nullptr) : json(c.input_path);
    j["n"] = c.n;
    j["dim"] = c.dim;
    j["psi"] = c.psi.empty() ? json(nullptr) : json(c.psi);
    j["r"] = c.r_grid;
    j["trials"] = c.trials;
    j["triples"] = c.triples;
    j["tol"] = c.tol;
  } else if (cmd == "psi-eval") {
    j["psi"] = c.psi;
    j["t"] = c.ts;
    j["tol"] = c.quad_tol;
    j["branch"] = c.branch;
    j["representation"] = c.representation;
  }
  j["output"] = c.output_path.empty() ? json(nullptr) : json(c.output_path);
  return j;
}

json envelope(const run_config& c) {
  json j;
  j["version"] = bernergy::version;
  j["command"] = c.command;
  j["config"] = config_echo(c);
  j["seed"] = c.seed;
  return j;
}

bernergy::cnd_kernel parse_kernel(const std::string& s) {
  try {
    return bernergy::cnd_kernel::parse(s);
  } catch (const bernergy::error& e) {
    throw usage_error(e.what());
  }
}

bernergy::psi_function parse_psi(const std::string& s) {
  try {
    return bernergy::find_psi(s);
  } catch (const bernergy::error& e) {
    throw usage_error(e.what());
  }
}

// Shift a Euclidean measure so that its barycenter v / mass is the origin.
bernergy::signed_measure recenter(const bernergy::signed_measure& mu) {
  if (mu.space() != bernergy::space_kind::euclidean) throw bernergy::space_mismatch("--center needs Euclidean input");
  const double mass = mu.mass();
  if (mass == 0.0) throw bernergy::domain_error("--center needs a measure with nonzero mass");
  auto v = bernergy::vector_mean(mu);
  std::vector<bernergy::point> atoms;
  for (const auto& a : mu.atoms()) {
    std::vector<double> c(a.coords().begin(), a.coords().end());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= v[i] / mass;
    atoms.push_back(bernergy::point::euclidean(std::move(c)));
  }
  return {std::move(atoms), std::vector<double>(mu.weights().begin(), mu.weights().end())};
}

json cmd_dist(const run_config& c) {
  const auto k = parse_kernel(c.kernel);
  const auto psi = parse_psi(c.psi);
  const bernergy::csv_options opt{k.space(), c.weights};
  auto p = bernergy::load_point_cloud(c.x_path, opt).to_measure();
  auto q = bernergy::load_point_cloud(c.y_path, opt).to_measure();
  if (c.center) {
    p = recenter(p);
    q = recenter(q);
  }
  const auto eta = bernergy::difference(p, q);
  const auto dim = eta.atoms().front().dim();
  const auto rep = bernergy::check_constraints(eta, psi.ell, bernergy::default_center(k, dim), c.tol);
  if (!rep.satisfied) {
    const std::size_t j = rep.violated == "mass" ? 0 : std::stoul(rep.violated.substr(15));
    throw bernergy::constraint_error(rep.violated, rep.violation, j == 0 ? rep.mass_tolerance : rep.power_tolerances[j - 1],
                                     "P - Q violates " + rep.violated + (psi.ell > 1 && !c.center ? " (try --center)" : ""));
  }
  const double stat = bernergy::inner_product_ell(eta, eta, k, psi, c.tol);
  json out = envelope(c);
  out["statistic"] = stat;
  out["sqrt_statistic"] = std::sqrt(std::max(0.0, stat));
  out["kernel"] = k.name();
  out["psi"] = psi.name;
  out["ell"] = psi.ell;
  out["experimental"] = bernergy::is_experimental(k, psi);
  out["constraint_report"] = bernergy::to_json(rep);
  return out;
}

json cmd_test(const run_config& c) {
  const auto k = parse_kernel(c.kernel);
  const auto psi = parse_psi(c.psi);
  const bernergy::csv_options opt{k.space(), false};
  const auto xc = bernergy::load_point_cloud(c.x_path, opt);
  const auto yc = bernergy::load_point_cloud(c.y_path, opt);
  if (xc.weighted() || yc.weighted()) throw bernergy::domain_error("test takes unweighted samples");
  bernergy::sample_set x(xc.points, c.x_path), y(yc.points, c.y_path);
  if (c.center) std::tie(x, y) = bernergy::center_means(x, y);
  const auto res = bernergy::permutation_test(x, y, k, psi, c.permutations, c.seed);
  json out = envelope(c);
  out["result"] = bernergy::to_json(res);
  out["experimental"] = psi.ell > 1;
  return out;
}

json cmd_verify(const run_config& c) {
  const auto k = parse_kernel(c.kernel);
  std::vector<bernergy::point> pts;
  if (!c.input_path.empty())
    pts = bernergy::load_point_cloud(c.input_path, {k.space(), false}).points;
  else
    pts = bernergy::random_points(k.space(), c.n, c.dim, c.seed);
  const std::size_t dim = pts.front().dim();

  json reports = json::array();
  bool all = true;
  for (const auto& name : c.checks) {
    bernergy::verification_report r;
    if (name == "psd") {
      const auto kc = bernergy::default_center(k, dim);
      Eigen::MatrixXd g(pts.size(), pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) g(i, j) = kc(pts[i], pts[j]);
      r = bernergy::check_psd(g, c.tol);
    } else if (name == "cpd") {
      const auto psi = parse_psi(c.psi.empty() ? "linear" : c.psi);
      if (psi.ell > 1 && k.space() != bernergy::space_kind::euclidean)
        throw bernergy::domain_error("cpd with l >= 2 needs Euclidean points");
      const auto g = bernergy::gram(k, pts);
      const Eigen::MatrixXd phi = g.values.unaryExpr([&](double t) { return psi.cm_value(t); });
      r = bernergy::check_cpd(phi, bernergy::polynomial_constraints(pts, psi.ell), c.tol);
    } else if (name == "schoenberg") {
      r = bernergy::check_schoenberg(k, pts, c.r_grid, c.tol);
    } else if (name == "triangle") {
      bernergy::metric_fn d;
      if (c.psi.empty()) {
        d = [k](const bernergy::point& a, const bernergy::point& b) { return bernergy::kernel_metric(k, a, b); };
      } else {
        const auto psi = parse_psi(c.psi);
        (void)bernergy::psi_metric(pts.front(), pts.front(), k, psi);  // validates psi before the parallel loop
        d = [k, psi](const bernergy::point& a, const bernergy::point& b) { return bernergy::psi_metric(a, b, k, psi); };
      }
      r = bernergy::check_triangle(d, pts, c.triples, c.seed, 1e-12);
    } else {  // sntype
      const auto psi = parse_psi(c.psi.empty() ? "sqrt" : c.psi);
      bernergy::probe_config cfg;
      cfg.space = k.space();
      cfg.dim = dim;
      cfg.n_trials = c.trials;
      cfg.seed = c.seed;
      r = bernergy::probe_strong_negative_type(k, psi, cfg);
    }
    all = all && r.pass;
    reports.push_back(bernergy::to_json(r));
  }
  json out = envelope(c);
  out["kernel"] = k.name();
  out["points"] = pts.size();
  out["points_hash"] = bernergy::hash_points(pts);
  out["pass"] = all;
  out["reports"] = std::move(reports);
  return out;
}

json cmd_psi_eval(const run_config& c) {
  const auto psi = parse_psi(c.psi);
  bernergy::representation_branch br = bernergy::representation_branch::automatic;
  if (c.branch == "smooth") br = bernergy::representation_branch::smooth;
  if (c.branch == "general") br = bernergy::representation_branch::general;
  if (c.representation && !psi.has_representation())
    throw bernergy::domain_error("'" + psi.name + "' has no integral representation in the catalog");
  std::vector<double> ts = c.ts;
  if (ts.empty())
    for (int i = -6; i <= 6; ++i) ts.push_back(std::pow(10.0, i / 2.0));
  json rows = json::array();
  for (double t : ts) {
    json row;
    row["t"] = t;
    row["closed"] = bernergy::eval_closed(psi, t);
    if (psi.has_representation()) {
      const double tol = c.quad_tol * (1.0 + std::pow(t, psi.ell));
      const auto q = bernergy::integrate_representation(psi, t, tol, br);
      if (!q.converged) throw bernergy::quadrature_error(q.value, q.abs_error, "quadrature did not converge at t = " + std::to_string(t));
      row["by_representation"] = q.value;
      row["abs_err"] = std::abs(q.value - row["closed"].get<double>());
      row["error_estimate"] = q.abs_error;
      row["intervals"] = q.intervals;
    } else {
      row["by_representation"] = nullptr;
      row["abs_err"] = nullptr;
    }
    rows.push_back(std::move(row));
  }
  json out = envelope(c);
  out["psi"] = psi.name;
  out["ell"] = psi.ell;
  out["convention"] = psi.conv == bernergy::convention::bernstein ? "bernstein" : "completely_monotone";
  out["rows"] = std::move(rows);
  return out;
}

int emit(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return exit_code::ok;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) {
    std::cerr << "bernergy: cannot write '" << path << "'\n";
    return exit_code::io;
  }
  return exit_code::ok;
}

int fail(const run_config& c, int code, json err) {
  json out = envelope(c);
  out["error"] = std::move(err);
  std::cout << out.dump(2) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized energy distances on weighted point clouds"};
  app.set_version_flag("--version", std::string(bernergy::version));
  app.require_subcommand(1);
  run_config c;

  auto common = [&](CLI::App* s) {
    s->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    s->add_option("-o,--output", c.output_path, "write JSON here instead of stdout");
  };
  auto kernel_opt = [&](CLI::App* s) {
    s->add_option("--kernel", c.kernel, "euclidean_squared[:c] | hyperbolic | sphere_geodesic")->capture_default_str();
  };

  auto* dist = app.add_subcommand("dist", "energy distance I(P-Q, P-Q) between two CSV point clouds");
  dist->add_option("x", c.x_path, "first CSV")->required();
  dist->add_option("y", c.y_path, "second CSV")->required();
  kernel_opt(dist);
  dist->add_option("--psi", c.psi, "catalog entry (sqrt, log1p, pow:3, ...)")->default_val("sqrt");
  dist->add_flag("--weights", c.weights, "last CSV column holds atom weights");
  dist->add_flag("--center", c.center, "move each measure's barycenter to the origin");
  dist->add_option("--tol", c.tol, "relative constraint tolerance")->capture_default_str();
  common(dist);

  auto* test = app.add_subcommand("test", "permutation two-sample test");
  test->add_option("x", c.x_path, "first CSV")->required();
  test->add_option("y", c.y_path, "second CSV")->required();
  kernel_opt(test);
  test->add_option("--psi", c.psi, "catalog entry")->default_val("sqrt");
  test->add_option("--B", c.permutations, "number of permutations")->capture_default_str()->check(CLI::PositiveNumber);
  test->add_flag("--center", c.center, "subtract each sample's mean first (experimental, for l >= 2)");
  common(test);

  auto* verify = app.add_subcommand("verify", "definiteness, metric and negative-type checks");
  kernel_opt(verify);
  verify->add_option("--check", c.checks, "psd | cpd | schoenberg | triangle | sntype (repeatable)")
      ->required()
      ->delimiter(',')
      ->check(CLI::IsMember({"psd", "cpd", "schoenberg", "triangle", "sntype"}));
  verify->add_option("--input", c.input_path, "CSV of points (default: random)");
  verify->add_option("--n", c.n, "number of random points")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--dim", c.dim, "coordinates per random point")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--psi", c.psi, "psi for cpd (default linear), triangle (default none), sntype (default sqrt)");
  verify->add_option("--r", c.r_grid, "Schoenberg r grid")->delimiter(',')->capture_default_str();
  verify->add_option("--trials", c.trials, "sntype trials")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--triples", c.triples, "triangle triples")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--tol", c.tol, "spectral tolerance")->capture_default_str();
  common(verify);

  auto* peval = app.add_subcommand("psi-eval", "closed form vs integral representation");
  peval->add_option("--psi", c.psi, "catalog entry")->required();
  peval->add_option("--t", c.ts, "evaluation points (default: 13-point grid 1e-3..1e3)")->delimiter(',');
  peval->add_option("--tol", c.quad_tol, "quadrature tolerance, scaled by 1 + t^l")->capture_default_str();
  peval->add_option("--branch", c.branch, "auto | smooth | general")->capture_default_str()->check(CLI::IsMember({"auto", "smooth", "general"}));
  peval->add_flag("--representation", c.representation, "fail when psi has no representation");
  common(peval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    // human-readable on stderr, the usual JSON error on stdout
    std::cerr << e.what() << "\n";
    const auto subs = app.get_subcommands();
    c.command = subs.empty() ? "" : subs.front()->get_name();
    return fail(c, exit_code::usage, {{"kind", "usage"}, {"message", e.what()}});
  }

  c.command = app.get_subcommands().front()->get_name();
  try {
    json out;
    if (c.command == "dist") out = cmd_dist(c);
    else if (c.command == "test") out = cmd_test(c);
    else if (c.command == "verify") out = cmd_verify(c);
    else out = cmd_psi_eval(c);
    return emit(out, c.output_path);
  } catch (const usage_error& e) {
    return fail(c, exit_code::usage, {{"kind", "usage"}, {"message", e.what()}});
  } catch (const bernergy::io_error& e) {
    return fail(c, exit_code::io, {{"kind", "io"}, {"message", e.what()}});
  } catch (const bernergy::parse_error& e) {
    return fail(c, exit_code::parse, {{"kind", std::string(bernergy::to_string(e.kind()))}, {"line", e.line()}, {"message", e.what()}});
  } catch (const bernergy::constraint_error& e) {
    return fail(c, exit_code::constraint,
                {{"kind", "constraint"}, {"condition", e.condition()}, {"magnitude", e.magnitude()}, {"tolerance", e.tolerance()}, {"message", e.what()}});
  } catch (const bernergy::space_mismatch& e) {
    return fail(c, exit_code::constraint, {{"kind", "space_mismatch"}, {"message", e.what()}});
  } catch (const bernergy::quadrature_error& e) {
    return fail(c, exit_code::constraint,
                {{"kind", "quadrature"}, {"estimate", e.estimate()}, {"abs_error", e.abs_error()}, {"message", e.what()}});
  } catch (const bernergy::error& e) {
    return fail(c, exit_code::constraint, {{"kind", "domain"}, {"message", e.what()}});
  }
}
