#include "rlab/convolution.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace rlab {

namespace kernels::reference {
void pair_values(const PairConvolution& pair, std::span<const Vec3> z, std::span<cplx> out);
void triple_values(const HarmonicEvaluator& h, const PairConvolution& pair, const GeodesicRule& rule,
                   std::span<const Vec3> x, std::span<cplx> out);
}  // namespace kernels::reference

namespace kernels::parallel {
void pair_values(const PairConvolution& pair, std::span<const Vec3> z, std::span<cplx> out);
void triple_values(const HarmonicEvaluator& h, const PairConvolution& pair, const GeodesicRule& rule,
                   std::span<const Vec3> x, std::span<cplx> out);
}  // namespace kernels::parallel

std::vector<CirclePair> circle_points(Vec3 z, int n) {
  const double r = norm(z);
  if (!(r > 0.0 && r < 2.0)) {
    throw std::invalid_argument("circle_points: |z| = " + std::to_string(r) + " is outside (0, 2)");
  }
  if (n < 4) throw std::invalid_argument("circle_points: need n >= 4");
  const PerpFrame fr = perpendicular_frame(z);
  const double rho = std::sqrt(1.0 - 0.25 * r * r);
  std::vector<CirclePair> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    const Vec3 x = 0.5 * z + rho * (std::cos(t) * fr.e1 + std::sin(t) * fr.e2);
    out.push_back({x, z - x});
  }
  return out;
}

GeodesicRule GeodesicRule::make(int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 4 || n_phi % 2 != 0) {
    throw std::invalid_argument("geodesic rule needs n_theta >= 2 and an even n_phi >= 4");
  }
  const GaussLegendre gl = gauss_legendre(n_theta);
  GeodesicRule rule;
  rule.n_phi = n_phi;
  const double half_pi = 0.5 * std::numbers::pi;
  for (int i = 0; i < n_theta; ++i) {
    const double t = half_pi * (gl.nodes[i] + 1.0);
    rule.theta.push_back(t);
    rule.weight.push_back(half_pi * gl.weights[i] * std::sin(t) * 2.0 * std::numbers::pi / n_phi);
  }
  return rule;
}

GeodesicRule GeodesicRule::for_band_limit(int band_limit) {
  // Azimuthal content of h(y) P(x - y) has degree 3L, so 3L + 2 points are exact;
  // the polar count was measured to give ~1e-12 relative error for L <= 16.
  const int n_theta = (5 * band_limit + 1) / 2 + 8;
  int n_phi = 3 * band_limit + 2;
  n_phi += n_phi % 2;
  return make(n_theta, n_phi);
}

PairConvolution::PairConvolution(HarmonicSpectrum f, HarmonicSpectrum g, int n_circle)
    : f_(f), g_(g), n_circle_(n_circle) {
  if (n_circle < 4) throw std::invalid_argument("pair convolution needs n_circle >= 4");
  symmetric_ = f.band_limit() == g.band_limit() &&
               std::equal(f.coefficients().begin(), f.coefficients().end(), g.coefficients().begin());
}

int PairConvolution::band_limit() const {
  return std::max(f_.spectrum().band_limit(), g_.spectrum().band_limit());
}

BallField::BallField(BallGridPtr grid, std::vector<cplx> values, PairConvolutionPtr source)
    : grid_(std::move(grid)), values_(std::move(values)), source_(std::move(source)) {
  if (!grid_ || values_.size() != grid_->size()) {
    throw std::invalid_argument("BallField: values do not match the grid shape");
  }
}

BallField& BallField::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

namespace kernels {

void pair_values(const PairConvolution& pair, std::span<const Vec3> z, std::span<cplx> out,
                 Backend backend) {
  if (z.size() != out.size()) throw std::invalid_argument("pair_values: output size mismatch");
  if (backend == Backend::reference) {
    reference::pair_values(pair, z, out);
  } else {
    parallel::pair_values(pair, z, out);
  }
}

void triple_values(const HarmonicEvaluator& h, const PairConvolution& pair, const GeodesicRule& rule,
                   std::span<const Vec3> x, std::span<cplx> out, Backend backend) {
  if (x.size() != out.size()) throw std::invalid_argument("triple_values: output size mismatch");
  if (backend == Backend::reference) {
    reference::triple_values(h, pair, rule, x, out);
  } else {
    parallel::triple_values(h, pair, rule, x, out);
  }
}

}  // namespace kernels

BallField convolve_pair(const SphereField& f, const SphereField& g, BallGridPtr grid, int n_circle,
                        int band_limit, Backend backend) {
  if (n_circle < 8) throw std::invalid_argument("convolve_pair: need n_circle >= 8");
  auto pair = std::make_shared<const PairConvolution>(analyze(f, band_limit), analyze(g, band_limit), n_circle);
  std::vector<Vec3> pts(grid->size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = grid->point(i);
  std::vector<cplx> values(pts.size());
  kernels::pair_values(*pair, pts, values, backend);
  return BallField(std::move(grid), std::move(values), std::move(pair));
}

SphereField triple_restrict(const SphereField& h, const PairConvolution& pair, int band_limit,
                            const GeodesicRule& rule, Backend backend) {
  const HarmonicEvaluator he(analyze(h, band_limit));
  std::vector<cplx> values(h.size());
  kernels::triple_values(he, pair, rule, h.quadrature().nodes(), values, backend);
  return SphereField(h.quadrature_ptr(), std::move(values));
}

SphereField triple_restrict(const SphereField& h, const BallField& pair, int band_limit,
                            const GeodesicRule& rule, Backend backend) {
  return triple_restrict(h, pair.source(), band_limit, rule, backend);
}

double l2_norm_ball(const BallField& b) {
  std::vector<double> sq(b.values().size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = std::norm(b.values()[i]);
  return std::sqrt(integrate_ball(b.grid(), sq));
}

}  // namespace rlab
