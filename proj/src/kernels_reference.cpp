// Serial reference kernels: one point at a time, harmonics through std::sph_legendre.
// Slow, and kept only to cross-check the parallel kernels.

#include <cmath>
#include <numbers>

#include "rlab/convolution.hpp"

namespace rlab::kernels::reference {

namespace {

cplx pair_at(const PairConvolution& pair, Vec3 z) {
  const double r = norm(z);
  if (!(r > 0.0 && r < 2.0)) return {};
  const auto pts = circle_points(z, pair.n_circle());
  cplx acc{};
  for (const CirclePair& p : pts) {
    acc += evaluate_reference(pair.first().spectrum(), p.x) *
           evaluate_reference(pair.second().spectrum(), p.x_prime);
  }
  return kCircleConstant / r * acc / static_cast<double>(pts.size());
}

}  // namespace

void pair_values(const PairConvolution& pair, std::span<const Vec3> z, std::span<cplx> out) {
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = pair_at(pair, z[i]);
}

void triple_values(const HarmonicEvaluator& h, const PairConvolution& pair, const GeodesicRule& rule,
                   std::span<const Vec3> x, std::span<cplx> out) {
  const double dphi = 2.0 * std::numbers::pi / rule.n_phi;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const Vec3 c = x[n];
    const PerpFrame fr = perpendicular_frame(c);
    cplx acc{};
    for (std::size_t i = 0; i < rule.theta.size(); ++i) {
      const double ct = std::cos(rule.theta[i]), st = std::sin(rule.theta[i]);
      for (int j = 0; j < rule.n_phi; ++j) {
        const double phi = dphi * j;
        const Vec3 y = ct * c + st * (std::cos(phi) * fr.e1 + std::sin(phi) * fr.e2);
        acc += rule.weight[i] * evaluate_reference(h.spectrum(), y) * pair_at(pair, c - y);
      }
    }
    out[n] = acc;
  }
}

}  // namespace rlab::kernels::reference
