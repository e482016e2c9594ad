#include "greencube/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "greencube/error.hpp"
#include "greencube/extremal.hpp"
#include "greencube/io.hpp"
#include "greencube/montecarlo.hpp"
#include "greencube/simd/kernels.hpp"
#include "greencube/statistics.hpp"

namespace greencube::cli {

using nlohmann::json;

namespace {

struct Options {
  int m = 2;
  std::uint64_t seed = 1;
  std::string output = "json";
  std::string out_file;
  int threads = 1;

  std::string family = "empty";
  std::optional<std::string> known_v;
  bool close = false;
  bool enumerate = false;
  std::string measure = "lebesgue";
  std::string method = "auto";
  std::string x;
  std::string xi;
  std::string eval_at;
  int grid_n = 0;
  std::string name;
  int p = 1;
  std::string input;
  bool rank_pit = false;
  std::string mode = "cov";
  std::size_t n = 400;
  std::size_t R = 5000;
  std::string stat = "Bhat";
  std::string V = "M";
};

struct Outcome {
  json config = json::object();
  json result = json::object();
  std::vector<std::pair<std::string, Eigen::MatrixXd>> tables;
};

SubsetMask parse_subset(const std::string& text, int m) {
  if (text == "M" || text == "all") return SubsetMask::full(m);
  std::string s;
  for (char c : text) {
    if (c != '{' && c != '}' && c != '[' && c != ']' && c != ' ') s += c;
  }
  std::vector<int> coords;
  if (!s.empty()) {
    for (double v : parse_point(s)) {
      if (v != static_cast<int>(v)) throw ValidationError("subset coordinates must be integers");
      coords.push_back(static_cast<int>(v));
    }
  }
  return SubsetMask::from_coordinates(coords, m);
}

std::vector<std::vector<double>> parse_points(const std::string& text) {
  std::vector<std::vector<double>> pts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (!item.empty()) pts.push_back(parse_point(item));
  }
  return pts;
}

MonotoneFamily resolve_family(const Options& o) {
  if (o.known_v) return family_for_known_margins(parse_subset(*o.known_v, o.m), o.m);
  return parse_family(o.family, o.m, o.close);
}

LambdaMethod parse_method(const std::string& s) {
  if (s == "auto") return LambdaMethod::kAuto;
  if (s == "closed") return LambdaMethod::kClosedForm;
  if (s == "quadrature") return LambdaMethod::kQuadrature;
  throw ValidationError("unknown method '" + s + "' (expected auto, closed, quadrature)");
}

json matrix_json(const Eigen::MatrixXd& a) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd rows_matrix(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd a(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) a(r, c) = rows[r][c];
  }
  return a;
}

void family_config(const Options& o, const MonotoneFamily& f, Outcome& out) {
  out.config["m"] = o.m;
  out.config["family"] = f.to_string();
}

Outcome cmd_family(const Options& o) {
  Outcome out;
  out.config["m"] = o.m;
  if (o.enumerate) {
    out.config["enumerate"] = true;
    json list = json::array();
    for (const auto& f : enumerate_monotone_families(o.m)) list.push_back(f.to_string());
    out.result["count"] = list.size();
    out.result["families"] = list;
    return out;
  }
  const MonotoneFamily f = resolve_family(o);
  family_config(o, f, out);
  out.result["family"] = f.to_string();
  out.result["members"] = family_to_json(f);
  out.result["size"] = f.size();
  return out;
}

Outcome cmd_coeffs(const Options& o) {
  Outcome out;
  const GreenKernel kernel(resolve_family(o));
  family_config(o, kernel.family(), out);
  out.result["a"] = coefficients_to_json(kernel);
  out.result["kernel"] = kernel_to_json(kernel);
  return out;
}

Outcome cmd_green_eval(const Options& o) {
  Outcome out;
  const GreenKernel kernel(resolve_family(o));
  family_config(o, kernel.family(), out);
  if (o.x.empty() || o.xi.empty()) throw ValidationError("green-eval needs --x and --xi");
  out.config["x"] = o.x;
  out.config["xi"] = o.xi;
  out.result["value"] = kernel(parse_point(o.x), parse_point(o.xi));
  return out;
}

Outcome cmd_lambda(const Options& o, bool efficiency) {
  Outcome out;
  const GreenKernel kernel(resolve_family(o));
  const MeasureSpec mu = parse_measure(o.measure, o.m);
  family_config(o, kernel.family(), out);
  out.config["measure"] = measure_to_json(mu);
  out.config["method"] = o.method;
  const double lam = lambda(kernel, mu, parse_method(o.method));
  if (efficiency) {
    if (!(lam > 0.0)) throw ValidationError("lambda is not positive; no efficiency index");
    out.result["coefficient"] = 1.0 / lam;
    out.result["lambda"] = lam;
  } else {
    out.result["lambda"] = lam;
    out.result["inverse"] = lam > 0.0 ? json(1.0 / lam) : json(nullptr);
  }
  return out;
}

Outcome cmd_solve(const Options& o) {
  Outcome out;
  const MonotoneFamily family = resolve_family(o);
  const MeasureSpec mu = parse_measure(o.measure, o.m);
  family_config(o, family, out);
  out.config["measure"] = measure_to_json(mu);
  out.config["method"] = o.method;
  const ExtremalSolution sol = solve(family, mu, parse_method(o.method));
  out.result["lambda"] = sol.lambda();
  out.result["norm_squared"] = minimal_norm_squared(sol);
  if (!o.eval_at.empty()) {
    out.config["eval-at"] = o.eval_at;
    std::vector<std::vector<double>> rows;
    json values = json::array();
    for (auto x : parse_points(o.eval_at)) {
      check_cube_point(x, o.m);
      const double omega = sol.omega(x);
      const double density = sol.omega_density(x);
      values.push_back({{"x", x}, {"omega", omega}, {"density", density}});
      x.push_back(omega);
      x.push_back(density);
      rows.push_back(std::move(x));
    }
    out.result["values"] = values;
    out.tables.emplace_back("omega", rows_matrix(rows));
  }
  return out;
}

Outcome cmd_eigen(const Options& o) {
  Outcome out;
  const GreenKernel kernel(resolve_family(o));
  family_config(o, kernel.family(), out);
  const int grid_n = o.grid_n > 0 ? o.grid_n : 16;
  out.config["grid-n"] = grid_n;
  out.config["threads"] = o.threads;
  const EigenEstimate e = principal_eigenvalue(kernel, grid_n, o.threads);
  out.result = {{"value", e.value},
                {"coarse", e.coarse},
                {"fine", e.fine},
                {"error_estimate", e.error_estimate},
                {"grid_n", e.grid_n},
                {"iterations", e.iterations}};
  return out;
}

Outcome cmd_stat(const Options& o) {
  Outcome out;
  if (o.input.empty()) throw ValidationError("stat needs --input");
  Dataset data = read_csv_file(o.input);
  if (o.rank_pit) data = rank_pit(data);
  const int m = data.dimension();
  out.config["name"] = o.name;
  out.config["input"] = o.input;
  out.config["rank-pit"] = o.rank_pit;
  json value;
  if (o.name == "B") {
    const SubsetMask v = parse_subset(o.V, m);
    const int grid_n = o.p == 1 ? 0 : (o.grid_n > 0 ? o.grid_n : default_stat_grid(m));
    out.config["V"] = v.to_string();
    out.config["p"] = o.p;
    if (o.p > 1) out.config["grid-n"] = grid_n;
    value = stat_B(data, v, o.p, grid_n);
  } else if (o.name == "Bhat") {
    const int grid_n = o.p == 1 ? 0 : (o.grid_n > 0 ? o.grid_n : default_stat_grid(m));
    out.config["p"] = o.p;
    if (o.p > 1) out.config["grid-n"] = grid_n;
    value = stat_Bhat(data, o.p, grid_n);
  } else if (o.name == "rho") {
    value = spearman_rho(data);
  } else if (o.name == "gini") {
    value = gini_coefficient(data);
  } else if (o.name == "footrule") {
    value = footrule(data);
  } else {
    throw ValidationError("unknown statistic '" + o.name +
                          "' (expected B, Bhat, rho, gini, footrule)");
  }
  out.result = {{"name", o.name}, {"n", data.size()}, {"m", m}, {"value", value}};
  return out;
}

SimConfig sim_config(const Options& o, Outcome& out) {
  SimConfig cfg;
  cfg.seed = o.seed;
  cfg.n = o.n;
  cfg.R = o.R;
  cfg.m = o.m;
  cfg.grid_n = o.grid_n > 0 ? o.grid_n : 4;
  cfg.threads = o.threads;
  if (!o.eval_at.empty()) {
    cfg.grid = PointSet::from_rows(parse_points(o.eval_at), o.m);
    out.config["eval-at"] = o.eval_at;
  } else {
    out.config["grid-n"] = cfg.grid_n;
  }
  out.config["seed"] = o.seed;
  out.config["n"] = o.n;
  out.config["R"] = o.R;
  out.config["m"] = o.m;
  out.config["threads"] = o.threads;
  return cfg;
}

void covariance_result(const CovarianceReport& rep, Outcome& out) {
  out.result["max_abs_dev"] = rep.max_abs_dev;
  out.result["max_dev_in_se"] = rep.max_dev_in_se;
  out.result["empirical"] = matrix_json(rep.empirical);
  out.result["theoretical"] = matrix_json(rep.theoretical);
  out.result["standard_error"] = matrix_json(rep.standard_error);
  out.tables.emplace_back("empirical", rep.empirical);
  out.tables.emplace_back("theoretical", rep.theoretical);
  out.tables.emplace_back("standard_error", rep.standard_error);
}

Outcome cmd_simulate(const Options& o) {
  Outcome out;
  out.config["mode"] = o.mode;
  SimConfig cfg = sim_config(o, out);
  if (o.mode == "cov") {
    cfg.known = parse_subset(o.V, o.m);
    out.config["V"] = cfg.known->to_string();
    covariance_result(simulate_null_covariance(cfg), out);
  } else if (o.mode == "tiedcov") {
    covariance_result(simulate_tied_down_covariance(cfg), out);
  } else if (o.mode == "field") {
    const GreenKernel kernel(resolve_family(o));
    out.config["family"] = kernel.family().to_string();
    out.config.erase("n");
    const PointSet grid = cfg.resolved_grid();
    const Eigen::MatrixXd draws = sample_gaussian_field(kernel, grid, o.R, o.seed, o.threads);
    const Eigen::MatrixXd gram = gram_matrix(kernel, grid);
    const Eigen::RowVectorXd mean = draws.colwise().mean();
    const Eigen::MatrixXd centred = draws.rowwise() - mean;
    const Eigen::RowVectorXd var = centred.colwise().squaredNorm() / double(draws.rows() - 1);
    json points = json::array();
    for (Eigen::Index k = 0; k < draws.cols(); ++k) {
      points.push_back({{"x", grid.point(k)},
                        {"mean", mean(k)},
                        {"variance", var(k)},
                        {"theoretical_variance", gram(k, k)}});
    }
    out.result["count"] = draws.rows();
    out.result["points"] = points;
    out.tables.emplace_back("draws", draws);
  } else if (o.mode == "nulldist") {
    cfg.known = parse_subset(o.V, o.m);
    out.config["stat"] = o.stat;
    if (o.stat == "B") out.config["V"] = cfg.known->to_string();
    const NullDistribution d = null_distribution(o.stat, cfg);
    out.result = {{"statistic", d.statistic},   {"mean", d.mean},
                  {"variance", d.variance},     {"mean_se", d.mean_se},
                  {"variance_se", d.variance_se}};
    json q = json::object();
    for (std::size_t i = 0; i < d.quantiles.size(); ++i) {
      char key[16];
      std::snprintf(key, sizeof key, "%g", d.probabilities[i]);
      q[key] = d.quantiles[i];
    }
    out.result["quantiles"] = q;
    out.tables.emplace_back("values", Eigen::Map<const Eigen::VectorXd>(d.values.data(),
                                                                        Eigen::Index(d.values.size())));
  } else {
    throw ValidationError("unknown mode '" + o.mode + "' (expected cov, tiedcov, field, nulldist)");
  }
  return out;
}

void write_scalar_csv(std::ostream& os, const json& result) {
  std::string header, row;
  for (const auto& [key, value] : result.items()) {
    if (value.is_structured()) continue;
    if (!header.empty()) {
      header += ',';
      row += ',';
    }
    header += key;
    if (value.is_number_float()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", value.get<double>());
      row += buf;
    } else if (value.is_string()) {
      row += value.get<std::string>();
    } else {
      row += value.dump();
    }
  }
  os << header << '\n' << row << '\n';
}

void emit(const std::string& command, const Options& o, const Outcome& out, double seconds,
          std::ostream& os) {
  json config = out.config;
  config["output"] = o.output;
  if (o.output == "csv") {
    os << "# " << json{{"command", command}, {"config", config}}.dump() << '\n';
    if (out.tables.empty()) {
      write_scalar_csv(os, out.result);
      return;
    }
    for (const auto& [name, table] : out.tables) {
      if (out.tables.size() > 1) os << "# " << name << '\n';
      write_matrix_csv(os, table);
    }
    return;
  }
  json report = {{"command", command},
                 {"config", config},
                 {"result", out.result},
                 {"version", GREENCUBE_VERSION},
                 {"timing", {{"wall_seconds", seconds}}}};
  os << report.dump(2) << '\n';
}

// Turns a report's config back into command-line arguments.
std::vector<std::string> replay_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  const json report = json::parse(in, nullptr, false);
  if (report.is_discarded() || !report.is_object() || !report.contains("command") ||
      !report.contains("config")) {
    throw ValidationError("config file is not a report with \"command\" and \"config\"");
  }
  std::vector<std::string> args{report["command"].get<std::string>()};
  for (const auto& [key, value] : report["config"].items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
      continue;
    }
    args.push_back("--" + key);
    args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  return args;
}

void error_line(std::ostream& err, const char* kind, const std::string& message) {
  err << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Green functions, extremal problems and rank statistics on the unit cube",
               "greencube"};
  app.set_version_flag("--version", std::string("greencube ") + GREENCUBE_VERSION + " (simd: " +
                                        std::string(simd::backend_name(simd::active_backend())) + ")");
  std::string config_file;
  app.add_option("--config", config_file, "Replay the configuration of a JSON report");

  Options o;
  auto shared = [&](CLI::App* sub) {
    sub->add_option("--m", o.m, "Dimension")->capture_default_str();
    sub->add_option("--output", o.output, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--out-file", o.out_file, "Write output to this file instead of stdout");
    sub->add_option("--threads", o.threads, "Worker threads (0: all cores)")->capture_default_str();
    sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  };
  auto family_opts = [&](CLI::App* sub, bool v_alias = true) {
    sub->add_option("--family", o.family,
                    "Family: empty, pillow, top, JSON [[1,2],...] or brace form [{1,2},...]")
        ->capture_default_str();
    sub->add_option(v_alias ? "--family-known-margins-V,--V" : "--family-known-margins-V", o.known_v,
                    "Use the family M_V for known margins V, e.g. \"1,3\" or \"\"");
    sub->add_flag("--close", o.close, "Replace the members by their upward closure");
  };
  auto measure_opts = [&](CLI::App* sub) {
    sub->add_option("--measure", o.measure,
                    "lebesgue, diagonal, antidiagonal, diag+anti or a JSON measure")
        ->capture_default_str();
    sub->add_option("--method", o.method, "lambda method: auto, closed, quadrature")
        ->capture_default_str();
  };

  auto* family = app.add_subcommand("family", "Validate and print a monotone family");
  shared(family);
  family_opts(family);
  family->add_flag("--enumerate", o.enumerate, "List every monotone family for m <= 5");

  auto* coeffs = app.add_subcommand("coeffs", "Integer coefficients of the Green function");
  shared(coeffs);
  family_opts(coeffs);

  auto* green = app.add_subcommand("green-eval", "Evaluate G(x, xi)");
  shared(green);
  family_opts(green);
  green->add_option("--x", o.x, "Point x, comma separated");
  green->add_option("--xi", o.xi, "Point xi, comma separated");

  auto* lam = app.add_subcommand("lambda", "Lagrange multiplier: double integral of G");
  shared(lam);
  family_opts(lam);
  measure_opts(lam);

  auto* sol = app.add_subcommand("solve", "Solve the extremal problem");
  shared(sol);
  family_opts(sol);
  measure_opts(sol);
  sol->add_option("--eval-at", o.eval_at, "Points \"x1,x2;y1,y2\" at which to evaluate Omega");

  auto* eff = app.add_subcommand("efficiency", "Efficiency-index coefficient 1/lambda");
  shared(eff);
  family_opts(eff);
  measure_opts(eff);

  auto* eig = app.add_subcommand("eigen", "Principal eigenvalue of the Green operator");
  shared(eig);
  family_opts(eig);
  eig->add_option("--grid-n", o.grid_n, "Gauss-Legendre nodes per axis on the coarse grid (16)");

  auto* st = app.add_subcommand("stat", "Rank statistics of a CSV dataset");
  shared(st);
  st->add_option("--name", o.name, "B, Bhat, rho, gini or footrule")->required();
  st->add_option("--input", o.input, "CSV file, one observation per row");
  st->add_option("--V", o.V, "Known margins for B, e.g. \"1,2\", \"\" or M")->capture_default_str();
  st->add_option("--p", o.p, "Power p")->capture_default_str();
  st->add_option("--grid-n", o.grid_n, "Quadrature nodes per axis for p >= 2");
  st->add_flag("--rank-pit", o.rank_pit, "Map data to R_ij / (n + 1) first");

  auto* sim = app.add_subcommand("simulate", "Seeded Monte Carlo");
  shared(sim);
  family_opts(sim, false);
  sim->add_option("--mode", o.mode, "cov, tiedcov, field or nulldist")->capture_default_str();
  sim->add_option("--V", o.V, "Known margins V (cov, nulldist with B)")->capture_default_str();
  sim->add_option("--n", o.n, "Sample size")->capture_default_str();
  sim->add_option("--R", o.R, "Replications (draws for field)")->capture_default_str();
  sim->add_option("--grid-n", o.grid_n, "Interior grid points per axis (4)");
  sim->add_option("--eval-at", o.eval_at, "Explicit grid \"x1,x2;y1,y2\"");
  sim->add_option("--stat", o.stat, "Statistic for nulldist: Bhat, B, rho, gini, footrule")
      ->capture_default_str();

  app.require_subcommand(0, 1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    error_line(err, "usage", e.what());
    return 2;
  }

  try {
    if (!config_file.empty()) {
      if (!app.get_subcommands().empty()) {
        throw ValidationError("--config cannot be combined with a subcommand");
      }
      return run(replay_args(config_file), out, err);
    }
    if (app.get_subcommands().empty()) {
      throw ValidationError("a subcommand is required (family, coeffs, green-eval, lambda, solve, "
                            "efficiency, eigen, stat, simulate)");
    }
    const std::string command = app.get_subcommands().front()->get_name();
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    if (command == "family") outcome = cmd_family(o);
    else if (command == "coeffs") outcome = cmd_coeffs(o);
    else if (command == "green-eval") outcome = cmd_green_eval(o);
    else if (command == "lambda") outcome = cmd_lambda(o, false);
    else if (command == "efficiency") outcome = cmd_lambda(o, true);
    else if (command == "solve") outcome = cmd_solve(o);
    else if (command == "eigen") outcome = cmd_eigen(o);
    else if (command == "stat") outcome = cmd_stat(o);
    else outcome = cmd_simulate(o);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (o.out_file.empty()) {
      emit(command, o, outcome, seconds, out);
    } else {
      std::ofstream file(o.out_file);
      if (!file) throw IoError("cannot open " + o.out_file + " for writing");
      emit(command, o, outcome, seconds, file);
      if (!file) throw IoError("failed writing " + o.out_file);
    }
    return 0;
  } catch (const ValidationError& e) {
    error_line(err, "validation", e.what());
    return 2;
  } catch (const IoError& e) {
    error_line(err, "io", e.what());
    return 1;
  } catch (const NumericalError& e) {
    error_line(err, "numerical", e.what());
    return 1;
  } catch (const json::exception& e) {
    error_line(err, "validation", e.what());
    return 2;
  }
}

}  // namespace greencube::cli
