#pragma once

#include <utility>

#include "rlab/discretization.hpp"

namespace rlab {

struct FunctionalNorms {
  double l2_f = 0.0;
  double l2_conv = 0.0;
};

struct FunctionalReport {
  double q_value = 0.0;
  double lambda_value = 0.0;
  double multiplier_estimate = 0.0;
  double el_residual_rel = 0.0;
  FunctionalNorms norms;
};

/// ||f sigma * f sigma||_{L2(R^3)} / ||f||_2^2.
double q_value(const SphereField& f, const Discretization& d);

/// Lambda(f) = ||(f sigma)^||_4^4 / ||f||_2^4, computed on the convolution side as
/// (2 pi)^3 ||f sigma * f sigma||_2^2 / ||f||_2^4.
double lambda_value(const SphereField& f, const Discretization& d);

/// P_l(t), Q_l(t) of the finite Hankel form
/// r j_l(r) = sin(r - l pi/2) P_l(1/r) + cos(r - l pi/2) Q_l(1/r).
std::pair<double, double> hankel_polynomials(int l, double t);

struct OracleResult {
  double value = 0.0;       // integral of |(f sigma)^|^4 over |xi| <= xi_max, over ||f||^4
  double tail_bound = 0.0;  // upper bound for the omitted |xi| > xi_max part
  double xi_max = 0.0;
  int n_xi = 0;
};

/// Fourier-side evaluation of Lambda. (f sigma)^(r w) is computed from the
/// plane-wave expansion 4 pi sum_l (-i)^l j_l(r) f_l(w) of the band-limited
/// field and integrated on Gauss radii in (0, xi_max) times a direction rule that
/// is exact for the angular content of |(f sigma)^|^4.
OracleResult lambda_oracle(const SphereField& f, const Discretization& d, double xi_max, int n_xi);

/// ||T(f) - lambda ||f||^2 f||_2 / (lambda ||f||_2^3), T(f) = (f sigma)^{*3}|_{S^2}.
double el_residual(const SphereField& f, double lambda, const Discretization& d);
/// Same, with T(f) supplied.
double el_residual(const SphereField& f, const SphereField& tf, double lambda);

/// Re <T(f), f> / ||f||_2^4.
double multiplier_estimate(const SphereField& f, const Discretization& d);
double multiplier_estimate(const SphereField& f, const SphereField& tf);

/// All of the above for one field; the residual uses the estimated multiplier.
FunctionalReport evaluate_functional(const SphereField& f, const Discretization& d);

}  // namespace rlab
