// restriction_lab: evaluate, solve, fit and accept from the command line.
#include <unistd.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "CLI11.hpp"
#include "rlab/acceptance.hpp"
#include "rlab/fields.hpp"
#include "rlab/functional.hpp"
#include "rlab/phase.hpp"
#include "rlab/report_io.hpp"
#include "rlab/solver.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kValidation = 2, kNotConverged = 3, kAcceptanceFailed = 4 };

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// An output path is usable if its directory exists and is writable.
void check_writable(const std::string& path, const char* what) {
  if (path.empty() || path == "-") return;
  namespace fs = std::filesystem;
  fs::path dir = fs::path(path).parent_path();
  if (dir.empty()) dir = ".";
  if (!fs::is_directory(dir) || ::access(dir.c_str(), W_OK) != 0) {
    throw ValidationError(std::string(what) + ": directory of '" + path + "' is not writable");
  }
  if (fs::is_directory(path)) throw ValidationError(std::string(what) + ": '" + path + "' is a directory");
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

template <class Writer>
void emit_with(const std::string& path, Writer&& write) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
}

struct ResolutionOpts {
  rlab::Resolution r;

  void add(CLI::App* app) {
    app->add_option("--n-polar", r.n_polar, "Gauss-Legendre polar nodes")->capture_default_str();
    app->add_option("--n-azimuthal", r.n_azimuthal, "equispaced azimuths (even)")->capture_default_str();
    app->add_option("--n-radial", r.n_radial, "radial nodes of the ball grid")->capture_default_str();
    app->add_option("--n-circle", r.n_circle, "points on each convolution circle")->capture_default_str();
    app->add_option("-L,--band-limit", r.band_limit, "spherical harmonic band limit")->capture_default_str();
  }
};

rlab::Discretization build_discretization(const rlab::Resolution& r) {
  try {
    r.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  return rlab::Discretization::build(r);
}

rlab::FieldSource parse_source(const std::string& text, int band_limit) {
  try {
    rlab::FieldSource src = rlab::parse_field_source(text);
    rlab::check_field_source(src, band_limit);
    return src;
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

rlab::json envelope(const std::string& command, rlab::json config, rlab::json report) {
  return {{"command", command}, {"config", std::move(config)}, {"report", std::move(report)}, {"timestamp", timestamp()}};
}

// eval -------------------------------------------------------------------

struct EvalOpts {
  ResolutionOpts res;
  std::string field = "constant";
  bool oracle = false;
  double xi_max = 40.0;
  int n_xi = 96;
  std::string out;
  std::string ball_csv;
};

int run_eval(const EvalOpts& o) {
  if (!(o.xi_max > 0.0) || o.n_xi < 2) throw ValidationError("eval: need xi_max > 0 and n_xi >= 2");
  check_writable(o.out, "--out");
  check_writable(o.ball_csv, "--ball-csv");
  const rlab::FieldSource src = parse_source(o.field, o.res.r.band_limit);
  const rlab::Discretization d = build_discretization(o.res.r);

  const rlab::SphereField f = rlab::build_field(src, d);
  rlab::json report = rlab::to_json(rlab::evaluate_functional(f, d));
  if (o.oracle) {
    const rlab::OracleResult orc = rlab::lambda_oracle(f, d, o.xi_max, o.n_xi);
    report["oracle"] = rlab::to_json(orc);
  }
  rlab::json config = {{"field", o.field}, {"resolution", rlab::to_json(d.resolution)}, {"oracle", o.oracle}};
  if (o.oracle) {
    config["xi_max"] = o.xi_max;
    config["n_xi"] = o.n_xi;
  }
  if (!o.ball_csv.empty()) {
    const rlab::BallField b = d.convolve(f, f);
    emit_with(o.ball_csv, [&](std::ostream& os) { rlab::write_ball_field_csv(os, b); });
  }
  emit(o.out, envelope("eval", config, report).dump(2) + "\n");
  return kOk;
}

// solve ------------------------------------------------------------------

struct SolveOpts {
  ResolutionOpts res;
  rlab::SolverConfig cfg;
  std::string init = "constant";
  bool refine = false;
  std::string out;
  std::string history;
  std::string spectrum;
};

int run_solve(SolveOpts o) {
  o.cfg.resolution = o.res.r;
  try {
    o.cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  double amplitude = 0.0;
  if (o.init.rfind("perturbed:", 0) == 0) {
    const std::string a = o.init.substr(10);
    std::size_t used = 0;
    try {
      amplitude = std::stod(a, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != a.size()) throw ValidationError("--init: bad amplitude '" + a + "'");
  } else if (o.init != "constant") {
    throw ValidationError("--init must be 'constant' or 'perturbed:<amplitude>'");
  }
  if (amplitude != 0.0 && o.res.r.band_limit < 2) throw ValidationError("--init perturbed needs band limit >= 2");
  check_writable(o.out, "--out");
  check_writable(o.history, "--history");
  check_writable(o.spectrum, "--spectrum");
  const rlab::Discretization d = build_discretization(o.res.r);
  o.cfg.resolution = d.resolution;

  rlab::SphereField f0 = d.constant(1.0);
  if (amplitude != 0.0) f0 += amplitude * rlab::random_even_perturbation(o.cfg.seed, d);
  rlab::CriticalPointReport rep = rlab::power_iterate(f0, o.cfg, d);
  bool converged = rep.converged;
  if (o.refine) {
    rlab::CriticalPointReport refined = rlab::contraction_solve(rep.final_field, o.cfg, d);
    rep.contraction = refined.contraction;
    converged = converged && refined.contraction->stayed_in_ball;
  }

  rlab::json config = {{"init", o.init}, {"refine", o.refine}, {"solver", rlab::to_json(o.cfg)}};
  rlab::json report = rlab::to_json(rep);
  report["initial_q"] = rlab::q_value(f0, d);
  emit(o.out, envelope("solve", config, report).dump(2) + "\n");
  emit_with(o.history, [&](std::ostream& os) { rlab::write_history_csv(os, rep); });
  emit_with(o.spectrum, [&](std::ostream& os) {
    rlab::write_spectrum_csv(os, rlab::analyze(rep.final_field, d.band_limit()));
  });
  if (!converged) {
    std::cerr << "solve: not converged after " << rep.history.size() << " iterations (residual "
              << rep.history.back().residual << ")\n";
    return kNotConverged;
  }
  return kOk;
}

// phase ------------------------------------------------------------------

struct PhaseOpts {
  ResolutionOpts res;
  std::string field = "constant";
  double xi_max = 10.0;
  int n_coarse = 0;
  std::string out;
};

int run_phase(const PhaseOpts& o) {
  if (!(o.xi_max > 0.0)) throw ValidationError("phase: xi_max must be positive");
  if (o.n_coarse < 0) throw ValidationError("phase: n_coarse must be >= 0");
  check_writable(o.out, "--out");
  const rlab::FieldSource src = parse_source(o.field, o.res.r.band_limit);
  const rlab::Discretization d = build_discretization(o.res.r);
  const rlab::SphereField f = rlab::build_field(src, d);
  const rlab::CharacterFit fit = rlab::fit_character(f, o.xi_max, o.n_coarse);
  rlab::json config = {{"field", o.field}, {"resolution", rlab::to_json(d.resolution)}, {"xi_max", o.xi_max},
                       {"n_coarse", o.n_coarse}};
  emit(o.out, envelope("phase", config, rlab::to_json(fit)).dump(2) + "\n");
  return kOk;
}

// accept -----------------------------------------------------------------

struct AcceptOpts {
  bool quick = false;
  bool json = false;
  bool reference = false;
};

int run_accept(const AcceptOpts& o) {
  rlab::AcceptanceOptions opt;
  opt.quick = o.quick;
  opt.backend = o.reference ? rlab::Backend::reference : rlab::Backend::parallel;
  const auto results = rlab::run_acceptance(opt, [&](const rlab::CriterionResult& r) {
    if (!o.json) std::cout << rlab::format_result(r) << std::endl;
  });
  bool all = true;
  rlab::json rows = rlab::json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    rows.push_back(rlab::to_json(r));
  }
  if (o.json) {
    rlab::json config = {{"quick", o.quick}, {"backend", o.reference ? "reference" : "parallel"}};
    rlab::json report = {{"criteria", rows}, {"all_pass", all}};
    std::cout << envelope("accept", config, report).dump(2) << "\n";
  }
  return all ? kOk : kAcceptanceFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the Fourier extension functional on the sphere"};
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "worker thread cap (0: OpenMP default)")
      ->envname("RESTRICTION_LAB_THREADS")
      ->check(CLI::NonNegativeNumber);

  EvalOpts eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate q, Lambda, multiplier and residual of a field");
  eval.res.add(eval_cmd);
  eval_cmd->add_option("--field", eval.field, "constant | harmonic:l,m | modulated-constant:x,y,z | spectrum CSV")
      ->capture_default_str();
  eval_cmd->add_flag("--oracle", eval.oracle, "add the Fourier-side value and its tail bound");
  eval_cmd->add_option("--xi-max", eval.xi_max, "oracle frequency cutoff")->capture_default_str();
  eval_cmd->add_option("--n-xi", eval.n_xi, "oracle radial nodes")->capture_default_str();
  eval_cmd->add_option("-o,--out", eval.out, "JSON report path (default stdout)");
  eval_cmd->add_option("--ball-csv", eval.ball_csv, "dump f sigma * f sigma on the ball grid");

  SolveOpts solve;
  auto* solve_cmd = app.add_subcommand("solve", "power iteration, optionally refined by the contraction scheme");
  solve.res.add(solve_cmd);
  solve_cmd->add_option("--init", solve.init, "constant | perturbed:<amplitude>")->capture_default_str();
  solve_cmd->add_option("--seed", solve.cfg.seed, "perturbation seed")->capture_default_str();
  solve_cmd->add_option("--max-iters", solve.cfg.max_iters)->capture_default_str();
  solve_cmd->add_option("--tol", solve.cfg.tol_residual, "residual tolerance")->capture_default_str();
  solve_cmd->add_option("--eps-split", solve.cfg.eps_split, "smooth/rough split threshold")->capture_default_str();
  solve_cmd->add_option("--ball-exponent", solve.cfg.ball_radius_exponent)->capture_default_str();
  solve_cmd->add_flag("--refine", solve.refine, "run contraction_solve on the result");
  solve_cmd->add_option("-o,--out", solve.out, "JSON report path (default stdout)");
  solve_cmd->add_option("--history", solve.history, "CSV iter,residual,q,lambda");
  solve_cmd->add_option("--spectrum", solve.spectrum, "CSV l,m,re,im of the final field");

  PhaseOpts phase;
  auto* phase_cmd = app.add_subcommand("phase", "fit c exp(i x.xi) |f| to a field");
  phase.res.add(phase_cmd);
  phase_cmd->add_option("--field", phase.field, "as for eval")->capture_default_str();
  phase_cmd->add_option("--xi-max", phase.xi_max, "frequency search box")->capture_default_str();
  phase_cmd->add_option("--n-coarse", phase.n_coarse, "lattice half-width (0: 2 ceil(xi_max))")->capture_default_str();
  phase_cmd->add_option("-o,--out", phase.out, "JSON path (default stdout)");

  AcceptOpts accept;
  auto* accept_cmd = app.add_subcommand("accept", "run the acceptance criteria");
  accept_cmd->add_flag("--quick", accept.quick, "reduced resolutions and sample counts");
  accept_cmd->add_flag("--json", accept.json, "machine-readable output");
  accept_cmd->add_flag("--reference", accept.reference, "use the serial reference kernels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*eval_cmd) return run_eval(eval);
    if (*solve_cmd) return run_solve(solve);
    if (*phase_cmd) return run_phase(phase);
    if (*accept_cmd) return run_accept(accept);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
