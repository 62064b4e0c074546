#include "rlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rlab/functional.hpp"

namespace rlab {

namespace {

constexpr int kStagnationWindow = 25;
constexpr double kStagnationDecrease = 1e-15;

void fill_diagnostics(CriticalPointReport& rep, const Discretization& d) {
  const SphereField& f = rep.final_field;
  rep.spectrum_tail = analyze(f, d.band_limit()).degree_energies();
  const double nf = l2_norm(f);
  rep.evenness_defect = l2_norm(f - antipodal(f)) / nf;
  double lo = std::numeric_limits<double>::infinity();
  for (const cplx v : f.values()) lo = std::min(lo, v.real());
  rep.min_value = lo;
}

bool is_zero(const SphereField& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](cplx v) { return v == cplx{}; });
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("solver: max_iters must be >= 1");
  if (!(tol_residual > 0.0)) throw std::invalid_argument("solver: tol_residual must be positive");
  if (!(eps_split > 0.0 && eps_split <= 1.0)) throw std::invalid_argument("solver: eps_split must lie in (0, 1]");
  if (!(ball_radius_exponent > 0.0 && ball_radius_exponent < 1.0)) {
    throw std::invalid_argument("solver: ball_radius_exponent must lie in (0, 1)");
  }
  resolution.validate();
}

std::vector<double> CriticalPointReport::residual_history() const {
  std::vector<double> out;
  out.reserve(history.size());
  for (const auto& h : history) out.push_back(h.residual);
  return out;
}

double CriticalPointReport::tail_fraction() const {
  if (spectrum_tail.empty()) return 0.0;
  const int L = static_cast<int>(spectrum_tail.size()) - 1;
  double total = 0.0, tail = 0.0;
  for (int l = 0; l <= L; ++l) {
    total += spectrum_tail[l];
    if (2 * l >= L) tail += spectrum_tail[l];
  }
  return total > 0.0 ? tail / total : 0.0;
}

CriticalPointReport power_iterate(const SphereField& f0, const SolverConfig& cfg, const Discretization& d) {
  cfg.validate();
  const double n0 = l2_norm(f0);
  if (!(n0 > 0.0)) throw std::invalid_argument("power_iterate: initial field is zero");
  SphereField f = (1.0 / n0) * f0;

  CriticalPointReport rep;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    SphereField tf = d.cubic(f);
    const double nt = l2_norm(tf);
    if (!(nt > 1e-12)) throw std::runtime_error("power_iterate: T(f) vanished; degenerate start");
    const double lambda = inner(tf, f).real();
    double residual = std::numeric_limits<double>::infinity();
    if (lambda > 0.0) residual = el_residual(f, tf, lambda);
    rep.history.push_back({it, residual, q_value(f, d), lambda});
    if (residual < cfg.tol_residual) {
      rep.converged = true;
      break;
    }
    if (it > kStagnationWindow) {
      const double before = rep.history[it - 1 - kStagnationWindow].residual;
      if (!(residual < before * (1.0 - kStagnationDecrease))) break;
    }
    if (it == cfg.max_iters) break;
    f = (1.0 / nt) * tf;
  }
  rep.final_field = std::move(f);
  rep.lambda = rep.history.back().lambda;
  rep.q = rep.history.back().q;
  fill_diagnostics(rep, d);
  return rep;
}

CriticalPointReport contraction_solve(const SphereField& f, const SolverConfig& cfg, const Discretization& d) {
  cfg.validate();
  const double nf = l2_norm(f);
  if (!(nf > 0.0)) throw std::invalid_argument("contraction_solve: zero field");
  const double lambda = multiplier_estimate(f, d.cubic(f));
  if (!(lambda > 0.0)) throw std::runtime_error("contraction_solve: multiplier estimate is not positive");
  const double a = 1.0 / (lambda * nf * nf);

  ContractionDiagnostics diag;
  diag.eps = cfg.eps_split;
  diag.ball_radius = std::pow(cfg.eps_split, cfg.ball_radius_exponent);
  SmoothSplit split = smooth_split(f, cfg.eps_split, d.band_limit());
  diag.split_degree = split.degree;
  diag.rough_norm = l2_norm(split.rough);
  const SphereField& phi = split.smooth;

  SphereField lin = a * d.cubic(phi);
  lin -= phi;
  if (!is_zero(split.rough)) lin += (3.0 * a) * d.trilinear(phi, phi, split.rough);
  diag.linear_term_norm = l2_norm(lin);

  // Increments below this are rounding noise of the cubic map.
  const double noise = 1e-13 * std::max(1.0, l2_norm(phi));
  SphereField h(f.quadrature_ptr());
  for (int k = 0; k < cfg.max_iters; ++k) {
    SphereField next = lin;
    if (!is_zero(h)) {
      next += (3.0 * a) * d.trilinear(phi, h, h);
      next += a * d.cubic(h);
    }
    const double inc = l2_norm(next - h);
    diag.increments.push_back(inc);
    const double dist = l2_norm(next - lin);
    diag.max_ball_distance = std::max(diag.max_ball_distance, dist);
    if (dist > diag.ball_radius) diag.stayed_in_ball = false;
    h = std::move(next);
    if (inc <= noise) {
      diag.converged = true;
      break;
    }
  }
  for (std::size_t k = 1; k < diag.increments.size(); ++k) {
    if (diag.increments[k - 1] <= noise) break;
    diag.contraction_ratio = std::max(diag.contraction_ratio, diag.increments[k] / diag.increments[k - 1]);
    diag.ratio_measured = true;
  }

  CriticalPointReport rep;
  rep.final_field = phi + h;
  const SphereField tf = d.cubic(rep.final_field);
  rep.lambda = multiplier_estimate(rep.final_field, tf);
  rep.q = q_value(rep.final_field, d);
  diag.refined_residual = rep.lambda > 0.0 ? el_residual(rep.final_field, tf, rep.lambda)
                                           : std::numeric_limits<double>::infinity();
  rep.history.push_back({1, diag.refined_residual, rep.q, rep.lambda});
  rep.converged = diag.converged && diag.stayed_in_ball;
  fill_diagnostics(rep, d);
  rep.contraction = std::move(diag);
  return rep;
}

SphereField random_even_perturbation(std::uint64_t seed, const Discretization& d) {
  const int top = std::min(4, d.band_limit());
  if (top < 2) throw std::invalid_argument("random_even_perturbation: band limit below 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  HarmonicSpectrum s(d.band_limit());
  for (int l = 2; l <= top; l += 2)
    for (int m = -l; m <= l; ++m) s.at(l, m) = normal(rng);
  SphereField p = synthesize(s, d.sphere);
  return (std::sqrt(4.0 * std::numbers::pi) / l2_norm(p)) * p;
}

PerturbationStudy perturbation_study(int n_trials, double amplitude, const SolverConfig& cfg,
                                     const Discretization& d) {
  if (n_trials < 1) throw std::invalid_argument("perturbation_study: need at least one trial");
  PerturbationStudy study;
  for (int t = 0; t < n_trials; ++t) {
    SphereField f0 = d.constant(1.0);
    if (amplitude != 0.0) f0 += amplitude * random_even_perturbation(cfg.seed + t, d);
    study.initial_q.push_back(q_value(f0, d));
    study.trials.push_back(power_iterate(f0, cfg, d));
  }
  study.distances.assign(n_trials, std::vector<double>(n_trials, 0.0));
  for (int i = 0; i < n_trials; ++i)
    for (int j = i + 1; j < n_trials; ++j) {
      const double dist = l2_norm(study.trials[i].final_field - study.trials[j].final_field);
      study.distances[i][j] = study.distances[j][i] = dist;
      study.max_distance = std::max(study.max_distance, dist);
    }
  return study;
}

}  // namespace rlab
