#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rlab/discretization.hpp"

namespace rlab {

struct SolverConfig {
  int max_iters = 200;
  double tol_residual = 1e-8;
  /// eps of the smooth/rough split used by contraction_solve.
  double eps_split = 0.05;
  /// The Picard iterates must stay within eps_split^ball_radius_exponent of the linear term.
  double ball_radius_exponent = 0.75;
  std::uint64_t seed = 7;
  Resolution resolution;

  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double residual = 0.0;
  double q = 0.0;
  double lambda = 0.0;
};

struct ContractionDiagnostics {
  double eps = 0.0;
  double ball_radius = 0.0;
  int split_degree = 0;
  double rough_norm = 0.0;
  double linear_term_norm = 0.0;
  /// ||h_{k+1} - h_k||_2 for each Picard step, starting from h_0 = 0.
  std::vector<double> increments;
  /// Largest ratio of consecutive increments above the noise floor; 0 if none was measurable.
  double contraction_ratio = 0.0;
  bool ratio_measured = false;
  /// Largest ||h_k - L||_2 over the iterates.
  double max_ball_distance = 0.0;
  bool stayed_in_ball = true;
  bool converged = false;
  double refined_residual = 0.0;
};

struct CriticalPointReport {
  SphereField final_field;
  double lambda = 0.0;
  double q = 0.0;
  std::vector<IterationRecord> history;
  /// Per-degree energies of the final field, degrees 0..L.
  std::vector<double> spectrum_tail;
  /// ||f - f(-.)||_2 / ||f||_2.
  double evenness_defect = 0.0;
  /// Smallest real part over the nodes.
  double min_value = 0.0;
  bool converged = false;
  std::optional<ContractionDiagnostics> contraction;

  std::vector<double> residual_history() const;
  /// Energy in degrees [L/2, L] over total energy.
  double tail_fraction() const;
};

/// Normalized fixed-point iteration f <- T(f) / ||T(f)||_2, T(f) = (f sigma)^{*3}|_{S^2}.
/// Stops when the Euler-Lagrange residual at the estimated multiplier drops below
/// tol_residual, after max_iters, or when the residual has not decreased by a relative
/// 1e-15 over 25 iterations. Throws std::runtime_error when T(f) vanishes.
CriticalPointReport power_iterate(const SphereField& f0, const SolverConfig& cfg, const Discretization& d);

/// Refines a near-critical f through the smooth/rough split f = phi + g and Picard
/// iteration of h <- Lin + N(phi, h), where with a = 1 / (lambda ||f||^2)
///   Lin      = -phi + a T3(phi, phi, phi) + 3 a T3(phi, phi, g)
///   N(phi,h) = 3 a T3(phi, h, h) + a T3(h, h, h).
/// Leaving the ball of radius eps^exponent around Lin is reported, not thrown.
CriticalPointReport contraction_solve(const SphereField& f, const SolverConfig& cfg, const Discretization& d);

/// Real, even perturbation with independent N(0,1) coefficients on degrees 2 and 4
/// (capped at the band limit), scaled so that its L2 norm equals that of the constant 1.
SphereField random_even_perturbation(std::uint64_t seed, const Discretization& d);

struct PerturbationStudy {
  std::vector<CriticalPointReport> trials;
  std::vector<double> initial_q;
  /// Raw pairwise L2 distances between final fields, no alignment.
  std::vector<std::vector<double>> distances;
  double max_distance = 0.0;
};

/// power_iterate from 1 + amplitude * random_even_perturbation(seed + trial).
PerturbationStudy perturbation_study(int n_trials, double amplitude, const SolverConfig& cfg,
                                     const Discretization& d);

}  // namespace rlab
