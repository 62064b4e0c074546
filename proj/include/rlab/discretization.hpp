#pragma once

#include "rlab/convolution.hpp"

namespace rlab {

/// Resolution dials shared by every computation.
struct Resolution {
  int n_polar = 12;
  int n_azimuthal = 24;
  int n_radial = 20;
  int n_circle = 64;
  int band_limit = 8;

  /// Throws std::invalid_argument when the sizes are inconsistent or out of range.
  void validate() const;
};

/// Quadratures, ball grid and geodesic rule built from a Resolution.
///
/// The ball's angular rule is sized independently of the field rule so that
/// |f sigma * f sigma|^2 (angular degree 4L) is integrated exactly.
struct Discretization {
  Resolution resolution;
  SphereQuadraturePtr sphere;
  BallGridPtr ball;
  GeodesicRule geodesic;
  Backend backend = Backend::parallel;

  /// n_circle is doubled until sigma * sigma matches 2 pi / |z| to 1e-8 on the ball nodes.
  static Discretization build(const Resolution& r, Backend backend = Backend::parallel);

  int band_limit() const { return resolution.band_limit; }
  int n_circle() const { return resolution.n_circle; }

  SphereField constant(cplx value) const;
  PairConvolution pair(const SphereField& f, const SphereField& g) const;
  BallField convolve(const SphereField& f, const SphereField& g) const;
  /// T3(u, v, w) = (u sigma * v sigma * w sigma)|_{S^2}.
  SphereField trilinear(const SphereField& u, const SphereField& v, const SphereField& w) const;
  /// T(f) = T3(f, f, f).
  SphereField cubic(const SphereField& f) const;
};

}  // namespace rlab
