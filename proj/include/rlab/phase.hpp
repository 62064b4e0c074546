#pragma once

#include "rlab/harmonics.hpp"

namespace rlab {

/// Values multiplied node-wise by exp(i x . xi).
SphereField modulate(const SphereField& f, Vec3 xi);

/// |(f sigma)^(xi)| = |sum_i w_i f(x_i) exp(-i x_i . xi)| on the field's own nodes.
double extension_modulus(const SphereField& f, Vec3 xi);

struct ArgmaxResult {
  Vec3 zeta;
  double value = 0.0;
  /// Best value on the coarse lattice, before refinement.
  double coarse_value = 0.0;
};

/// Maximizes |(f sigma)^| over the lattice of spacing xi_max / n_coarse in
/// [-xi_max, xi_max]^3, first maximum in lexicographic (xi1, xi2, xi3) order,
/// then refines by coordinate-wise golden-section search to 1e-6.
ArgmaxResult extension_argmax(const SphereField& f, double xi_max, int n_coarse);

struct CharacterFit {
  Vec3 xi;
  cplx c{1.0, 0.0};
  double residual_rel = 0.0;
  double argmax_value = 0.0;
};

/// Best approximation of f by c exp(i x . xi) |f|. xi is seeded from
/// extension_argmax and refined by Newton ascent on |<f, exp(i x . xi) |f|>|^2;
/// c is the phase of that inner product. n_coarse <= 0 picks 2 * ceil(xi_max).
/// Throws std::domain_error when f vanishes.
CharacterFit fit_character(const SphereField& f, double xi_max = 10.0, int n_coarse = 0);

/// ||f - c exp(i x . xi) |f| ||_2 / ||f||_2 for given (xi, c), evaluated node-wise.
double character_residual(const SphereField& f, Vec3 xi, cplx c);

/// residual_rel of fit_character.
double factorization_defect(const SphereField& f, double xi_max = 10.0);

}  // namespace rlab
