#include "rlab/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rlab {

void Resolution::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("resolution: " + msg); };
  if (n_polar < 2 || n_polar > 512) fail("n_polar must lie in [2, 512]");
  if (n_azimuthal < 4 || n_azimuthal % 2 != 0) fail("n_azimuthal must be even and >= 4");
  if (n_radial < 4) fail("n_radial must be >= 4");
  if (n_circle < 8) fail("n_circle must be >= 8");
  if (band_limit < 0 || band_limit > 128) fail("band_limit must lie in [0, 128]");
  const int degree = std::min(2 * n_polar - 1, n_azimuthal - 1);
  if (degree < 2 * band_limit) {
    fail("sphere rule of degree " + std::to_string(degree) + " cannot resolve band limit " +
         std::to_string(band_limit));
  }
}

namespace {

constexpr double kConstantDensityTol = 1e-8;
constexpr int kMaxCircle = 4096;

// Largest relative deviation of (sigma * sigma)(z) from 2 pi / |z| over the ball nodes.
double constant_density_error(const BallGrid& grid, int n_circle, Backend backend) {
  HarmonicSpectrum one(0);
  one.at(0, 0) = std::sqrt(4.0 * std::numbers::pi);
  const PairConvolution pair(one, one, n_circle);
  std::vector<Vec3> z(grid.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = grid.point(i);
  std::vector<cplx> out(z.size());
  kernels::pair_values(pair, z, out, backend);
  double worst = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double exact = kCircleConstant / norm(z[i]);
    worst = std::max(worst, std::abs(out[i] - exact) / exact);
  }
  return worst;
}

}  // namespace

Discretization Discretization::build(const Resolution& r, Backend backend) {
  r.validate();
  Discretization d;
  d.resolution = r;
  d.sphere = build_sphere_quadrature(r.n_polar, r.n_azimuthal);
  const int L = r.band_limit;
  auto angular = build_sphere_quadrature(std::max(2 * L + 1, 4), std::max(4 * L + 2, 8));
  d.ball = build_ball_grid(r.n_radial, std::move(angular));
  d.geodesic = GeodesicRule::for_band_limit(L);
  d.backend = backend;
  while (constant_density_error(*d.ball, d.resolution.n_circle, backend) > kConstantDensityTol) {
    if (d.resolution.n_circle >= kMaxCircle) throw std::runtime_error("discretization: n_circle calibration failed");
    d.resolution.n_circle *= 2;
  }
  return d;
}

SphereField Discretization::constant(cplx value) const {
  return SphereField(sphere, std::vector<cplx>(sphere->size(), value));
}

PairConvolution Discretization::pair(const SphereField& f, const SphereField& g) const {
  return PairConvolution(analyze(f, band_limit()), analyze(g, band_limit()), n_circle());
}

BallField Discretization::convolve(const SphereField& f, const SphereField& g) const {
  return convolve_pair(f, g, ball, n_circle(), band_limit(), backend);
}

SphereField Discretization::trilinear(const SphereField& u, const SphereField& v, const SphereField& w) const {
  return triple_restrict(w, pair(u, v), band_limit(), geodesic, backend);
}

SphereField Discretization::cubic(const SphereField& f) const { return trilinear(f, f, f); }

}  // namespace rlab
