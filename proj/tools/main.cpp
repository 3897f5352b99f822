// Command-line front end: simulate processes, evaluate likelihoods and
// Fredholm determinants, fit models, and run the likelihood-agreement
// convergence report.  All outputs are deterministic given the seed.
//
// Exit codes: 0 success, 2 usage / invalid argument, 3 numerical failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opgp/convergence.hpp"
#include "opgp/fredholm.hpp"
#include "opgp/gaussian.hpp"
#include "opgp/inference.hpp"
#include "opgp/likelihood.hpp"
#include "opgp/models.hpp"

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// shared option bundles
// ---------------------------------------------------------------------------

struct ModelOptions {
  std::string family = "mixed";
  double alpha = 1.0;
  double delta = 0.0;
  double lambda = 1.0;
  double horizon = 10.0;

  opgp::ModelParams build() const {
    switch (opgp::parse_family(family)) {
      case opgp::ModelFamily::mixed:
        return opgp::mixed_model(alpha, delta);
      case opgp::ModelFamily::bm_noise:
        return opgp::bm_noise_model(alpha, lambda);
      case opgp::ModelFamily::ou:
        return opgp::ou_model(alpha, lambda, horizon);
    }
    throw std::invalid_argument("unknown model family");
  }
};

void add_model_options(CLI::App* cmd, ModelOptions* opts,
                       bool with_horizon = false) {
  cmd->add_option("--model,--family", opts->family,
                  "model family: mixed, bm-noise" +
                      std::string(with_horizon ? ", ou" : ""))
      ->capture_default_str();
  cmd->add_option("--alpha", opts->alpha, "noise scale (> 0)")
      ->capture_default_str();
  cmd->add_option("--delta", opts->delta, "mixed level weight (>= 0)")
      ->capture_default_str();
  cmd->add_option("--lambda", opts->lambda, "signal scale / mean reversion")
      ->capture_default_str();
  if (with_horizon) {
    cmd->add_option("--horizon", opts->horizon, "ou time domain [0, horizon]")
        ->capture_default_str();
  }
}

std::vector<std::size_t> parse_schedule(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    if (piece.empty()) continue;
    const long v = std::stol(piece);
    if (v <= 0) throw std::invalid_argument("grid sizes must be positive");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw std::invalid_argument("empty grid schedule");
  return out;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

opgp::GridFunction load_embedded(const std::string& path, std::size_t n_embed) {
  const opgp::Samples s = opgp::read_samples_csv_file(path);
  return opgp::embed_piecewise_constant(s, n_embed);
}

std::size_t sample_count(const std::string& path) {
  return opgp::read_samples_csv_file(path).u.size();
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOptions {
  ModelOptions model;
  std::size_t n = 256;
  std::uint64_t seed = 0;
  std::size_t reps = 1;
  std::string out_prefix = "sim";
  std::string what = "observation";  // observation | path
};

void write_replicates(const SimulateOptions& opt, const char* header,
                      const std::vector<double>& times,
                      const std::vector<std::vector<double>>& draws,
                      json manifest) {
  manifest["n"] = opt.n;
  manifest["seed"] = opt.seed;
  manifest["reps"] = opt.reps;
  manifest["files"] = json::array();
  for (std::size_t r = 0; r < opt.reps; ++r) {
    const std::string fname =
        opt.out_prefix + "_r" + std::to_string(r) + ".csv";
    std::ofstream out(fname);
    if (!out) throw std::invalid_argument("cannot write file: " + fname);
    out << header << "\n";
    for (std::size_t i = 0; i < opt.n; ++i) {
      out << format_g17(times[i]) << "," << format_g17(draws[r][i]) << "\n";
    }
    manifest["files"].push_back(fname);
  }
  const std::string mname = opt.out_prefix + "_manifest.json";
  std::ofstream mout(mname);
  if (!mout) throw std::invalid_argument("cannot write file: " + mname);
  mout << manifest.dump(2) << "\n";
  std::cout << manifest.dump(2) << std::endl;
}

void run_simulate(const SimulateOptions& opt) {
  opgp::NoiseStream stream{opt.seed, 0};
  if (opt.what != "observation" && opt.what != "path") {
    throw std::invalid_argument("--what must be 'observation' or 'path'");
  }

  // "bm" is a pure Brownian path (variance lambda^2 min(s,t)), not one of
  // the likelihood families; handle it before family parsing.
  if (opt.model.family == "bm") {
    const opgp::OperatorSpec op =
        opgp::OperatorSpec::integral(opgp::forward_kernel(opt.model.lambda));
    const opgp::PathSample ps = opgp::sample_path(op, opt.n, stream, opt.reps);
    json manifest;
    manifest["family"] = "bm";
    manifest["lambda"] = opt.model.lambda;
    manifest["kind"] = "path";
    write_replicates(opt, "t,y", ps.times, ps.paths, std::move(manifest));
    return;
  }

  const opgp::ModelParams model = opt.model.build();
  bool is_path = opt.what == "path";
  if (model.family == opgp::ModelFamily::ou) is_path = true;

  std::vector<std::vector<double>> draws;
  std::vector<double> times(opt.n);
  if (is_path) {
    if (model.family == opgp::ModelFamily::mixed) {
      throw std::invalid_argument("mixed family has no path representation");
    }
    const opgp::OperatorSpec op =
        model.family == opgp::ModelFamily::ou
            ? opgp::to_operator(model)
            : opgp::OperatorSpec::integral(
                  opgp::forward_kernel(model.lambda));
    const opgp::PathSample ps =
        opgp::sample_path(op, opt.n, stream, opt.reps);
    draws = ps.paths;
    times = ps.times;
  } else {
    const opgp::FactoredMatrices fac =
        opgp::matrix_factors(opgp::to_operator(model), opt.n);
    draws = opgp::sample_gaussian_vector(fac.M, stream, opt.reps);
    for (std::size_t i = 0; i < opt.n; ++i) {
      times[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(opt.n);
    }
  }

  json manifest;
  manifest["family"] = opgp::family_name(model.family);
  manifest["alpha"] = model.alpha;
  if (model.family == opgp::ModelFamily::mixed) {
    manifest["delta"] = model.delta;
  } else {
    manifest["lambda"] = model.lambda;
  }
  if (model.family == opgp::ModelFamily::ou) {
    manifest["horizon"] = model.horizon;
  }
  manifest["kind"] = is_path ? "path" : "observation";
  write_replicates(opt, is_path ? "t,y" : "u,y", times, draws,
                   std::move(manifest));
}

// ---------------------------------------------------------------------------
// loglik
// ---------------------------------------------------------------------------

struct LoglikOptions {
  ModelOptions model;
  std::string data;
  std::size_t n_embed = 256;
  bool corrected = false;
  std::size_t n_pen = 0;  // 0: default to the sample count
};

void run_loglik(const LoglikOptions& opt) {
  const opgp::ModelParams model = opt.model.build();
  const opgp::GridFunction f = load_embedded(opt.data, opt.n_embed);
  std::size_t n_pen = opt.n_pen;
  if (opt.corrected && n_pen == 0) n_pen = sample_count(opt.data);
  const opgp::LoglikValue v =
      opgp::functional_loglik(f, model, opt.corrected, n_pen);

  json j;
  j["family"] = opgp::family_name(model.family);
  j["total"] = v.total;
  j["quad"] = v.quad;
  j["log_d_term"] = v.log_d_term;
  j["det_term"] = v.det_term;
  j["corrected"] = v.corrected;
  j["n_used"] = v.n_used;
  std::cout << j.dump(2) << std::endl;
}

// ---------------------------------------------------------------------------
// fredholm
// ---------------------------------------------------------------------------

struct FredholmOptions {
  std::string kernel = "ones";
  std::string route = "matrix";
  std::size_t n = 0;  // 0: route default (matrix 256, series 64)
  std::size_t k_max = 5;
};

void run_fredholm(const FredholmOptions& opt) {
  opgp::DetResult r;
  if (opt.route == "series") {
    const std::size_t n = opt.n == 0 ? 64 : opt.n;
    r = opgp::fredholm_det_series(opgp::parse_kernel(opt.kernel), n, opt.k_max);
  } else if (opt.route == "matrix") {
    const std::size_t n = opt.n == 0 ? 256 : opt.n;
    r = opgp::fredholm_det_matrix(opgp::parse_kernel(opt.kernel), n);
  } else if (opt.route == "analytic") {
    // Closed forms exist for the two likelihood families; map the kernel
    // spelling onto them.
    const opgp::Kernel k = opgp::parse_kernel(opt.kernel);
    if (k.name() == "ones") {
      r = opgp::fredholm_det_analytic(opgp::mixed_model(1.0, k(0.5, 0.5)));
    } else if (k.name() == "brownian") {
      // brownian(lambda) tabulates lambda^2 min(t,s); recover lambda at a
      // fixed point.
      const double lambda = std::sqrt(k(1.0, 1.0));
      r = opgp::fredholm_det_analytic(opgp::bm_noise_model(1.0, lambda));
    } else {
      throw std::invalid_argument("no closed-form determinant for kernel '" +
                                  k.name() + "'");
    }
  } else {
    throw std::invalid_argument("--route must be series, matrix or analytic");
  }

  json j;
  j["kernel"] = opt.kernel;
  j["route"] = opt.route;
  j["det"] = r.det;
  j["log_det"] = r.log_det;
  j["log_valid"] = r.log_valid;
  j["grid_n"] = r.grid_n;
  j["k_max"] = r.k_max;
  std::cout << j.dump(2) << std::endl;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitOptions {
  std::string family = "mixed";
  std::string route = "functional";
  std::string data;
  std::size_t n_embed = 256;
  std::size_t n_pen = 0;
  double tol = 0.0;  // 0: per-route default
  std::size_t max_iter = 200;
};

void run_fit(const FitOptions& opt) {
  opgp::FitResult r;
  const opgp::ModelFamily family = opgp::parse_family(opt.family);
  if (family == opgp::ModelFamily::mixed) {
    if (opt.route == "functional") {
      const double tol = opt.tol == 0.0 ? 1e-10 : opt.tol;
      r = opgp::fit_mixed_functional(load_embedded(opt.data, opt.n_embed), tol,
                                     opt.max_iter);
    } else if (opt.route == "mv") {
      const double tol = opt.tol == 0.0 ? 1e-10 : opt.tol;
      const opgp::Samples s = opgp::read_samples_csv_file(opt.data);
      r = opgp::fit_mixed_mv(s.y, tol, opt.max_iter);
    } else {
      throw std::invalid_argument("--route must be functional or mv");
    }
  } else if (family == opgp::ModelFamily::bm_noise) {
    if (opt.route != "functional") {
      throw std::invalid_argument("bm-noise fitting is functional-route only");
    }
    const double tol = opt.tol == 0.0 ? 1e-8 : opt.tol;
    std::size_t n_pen = opt.n_pen;
    if (n_pen == 0) n_pen = sample_count(opt.data);
    r = opgp::fit_bm_noise(load_embedded(opt.data, opt.n_embed), n_pen, tol,
                           opt.max_iter);
  } else {
    throw std::invalid_argument("fitting supports families mixed and bm-noise");
  }

  json j;
  j["family"] = opgp::family_name(r.params.family);
  j["alpha"] = r.params.alpha;
  if (r.params.family == opgp::ModelFamily::mixed) {
    j["delta"] = r.params.delta;
  } else {
    j["lambda"] = r.params.lambda;
  }
  j["loglik"] = r.loglik;
  j["route"] = r.route == opgp::FitRoute::functional ? "functional" : "mv";
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["at_bound"] = r.at_bound;
  j["objective_trace"] = r.objective_trace;
  std::cout << j.dump(2) << std::endl;
}

// ---------------------------------------------------------------------------
// converge
// ---------------------------------------------------------------------------

struct ConvergeOptions {
  ModelOptions model;
  std::string schedule = "32,64,128,256,512";
  std::string rule = "fixed";
  std::uint64_t seed = 0;
  std::string csv_path;
};

void run_converge(const ConvergeOptions& opt) {
  const opgp::ModelParams model = opt.model.build();
  const std::vector<std::size_t> schedule = parse_schedule(opt.schedule);

  opgp::DataRule rule;
  if (opt.rule == "fixed") {
    rule.kind = opgp::DataRule::Kind::fixed_function;
  } else if (opt.rule == "simulated") {
    rule.kind = opgp::DataRule::Kind::simulated;
  } else {
    throw std::invalid_argument("--rule must be fixed or simulated");
  }
  rule.seed = opt.seed;

  const opgp::ConvergenceReport report =
      opgp::run_convergence(model, schedule, rule);
  opgp::write_report_json(report, std::cout);
  if (!opt.csv_path.empty()) {
    std::ofstream out(opt.csv_path);
    if (!out) throw std::invalid_argument("cannot write file: " + opt.csv_path);
    opgp::write_report_csv(report, out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-defined Gaussian processes on the unit interval"};
  app.require_subcommand(1);

  SimulateOptions sim;
  CLI::App* c_sim = app.add_subcommand(
      "simulate", "draw observations or paths and write CSV replicates");
  add_model_options(c_sim, &sim.model, /*with_horizon=*/true);
  c_sim->add_option("--n", sim.n, "grid size")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "stream seed")->capture_default_str();
  c_sim->add_option("--reps", sim.reps, "number of replicates")
      ->capture_default_str();
  c_sim->add_option("--out", sim.out_prefix, "output file prefix")
      ->capture_default_str();
  c_sim->add_option("--what", sim.what,
                    "observation (vector draw) or path (pointwise)")
      ->capture_default_str();

  LoglikOptions ll;
  CLI::App* c_ll = app.add_subcommand(
      "loglik", "evaluate the functional log-likelihood on CSV data");
  add_model_options(c_ll, &ll.model);
  c_ll->add_option("--data", ll.data, "CSV file with columns u,y")->required();
  c_ll->add_option("--n-embed", ll.n_embed, "embedding grid size")
      ->capture_default_str();
  c_ll->add_flag("--corrected", ll.corrected,
                 "scale the determinant penalty by 1/n_pen");
  c_ll->add_option("--n-pen", ll.n_pen,
                   "penalty sample count (default: rows in --data)");

  FredholmOptions fr;
  CLI::App* c_fr = app.add_subcommand(
      "fredholm", "evaluate a Fredholm determinant by a chosen route");
  c_fr->add_option("--kernel", fr.kernel,
                   "kernel spelling, e.g. ones(0.5), brownian(2), bb")
      ->capture_default_str();
  c_fr->add_option("--route", fr.route, "series, matrix or analytic")
      ->capture_default_str();
  c_fr->add_option("--n", fr.n, "grid size (default: 64 series, 256 matrix)");
  c_fr->add_option("--kmax", fr.k_max, "series truncation order (<= 6)")
      ->capture_default_str();

  FitOptions fit;
  CLI::App* c_fit =
      app.add_subcommand("fit", "maximum-likelihood fit on CSV data");
  c_fit->add_option("--model,--family", fit.family, "mixed or bm-noise")
      ->capture_default_str();
  c_fit->add_option("--route", fit.route, "functional or mv (mixed only)")
      ->capture_default_str();
  c_fit->add_option("--data", fit.data, "CSV file with columns u,y")
      ->required();
  c_fit->add_option("--n-embed", fit.n_embed, "embedding grid size")
      ->capture_default_str();
  c_fit->add_option("--n-pen", fit.n_pen,
                    "penalty sample count (default: rows in --data)");
  c_fit->add_option("--tol", fit.tol, "convergence tolerance");
  c_fit->add_option("--max-iter", fit.max_iter, "iteration cap")
      ->capture_default_str();

  ConvergeOptions cv;
  CLI::App* c_cv = app.add_subcommand(
      "converge", "multivariate-vs-functional likelihood agreement report");
  add_model_options(c_cv, &cv.model);
  c_cv->add_option("--schedule", cv.schedule, "comma-separated grid sizes")
      ->capture_default_str();
  c_cv->add_option("--rule", cv.rule, "data rule: fixed or simulated")
      ->capture_default_str();
  c_cv->add_option("--seed", cv.seed, "stream seed (simulated rule)")
      ->capture_default_str();
  c_cv->add_option("--csv", cv.csv_path, "also write a flat CSV report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_sim->parsed()) run_simulate(sim);
    if (c_ll->parsed()) run_loglik(ll);
    if (c_fr->parsed()) run_fredholm(fr);
    if (c_fit->parsed()) run_fit(fit);
    if (c_cv->parsed()) run_converge(cv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  }
  return 0;
}
