#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "rlab/harmonics.hpp"
#include "rlab/quadrature.hpp"

namespace rlab {

/// c0 in (h sigma * h sigma)(z) = c0 |z|^-1 * (mean of h(x) h(x') over the circle x + x' = z).
/// Fixed by matching sigma*sigma(z) = 2 pi / |z|.
inline constexpr double kCircleConstant = 2.0 * 3.14159265358979323846;

/// Which implementation of the inner kernels to run. `reference` is the plain
/// serial code path kept for cross-checking; `parallel` is the batched OpenMP one.
enum class Backend { reference, parallel };

struct CirclePair {
  Vec3 x;
  Vec3 x_prime;
};

/// n equispaced points on the circle {x in S^2 : |z - x| = 1}, paired with x' = z - x.
/// Requires 0 < |z| < 2 and n >= 4.
std::vector<CirclePair> circle_points(Vec3 z, int n);

/// Quadrature on S^2 in geodesic polar coordinates about a moving center x:
/// Gauss-Legendre in the geodesic angle t in (0, pi) times an even number of
/// equispaced azimuths. In these coordinates the |x - y|^-1 singularity of the
/// pair density cancels against the sin t area factor.
struct GeodesicRule {
  std::vector<double> theta;
  std::vector<double> weight;  // Gauss weight * sin(theta) * 2 pi / n_phi
  int n_phi = 0;

  static GeodesicRule make(int n_theta, int n_phi);
  /// Sizes that integrate products of three band-`band_limit` fields to ~1e-12.
  static GeodesicRule for_band_limit(int band_limit);
  std::size_t size() const { return theta.size() * static_cast<std::size_t>(n_phi); }
};

/// f sigma * g sigma, evaluable at any z with 0 < |z| < 2 by recomputing the
/// circle mean; f and g are carried as spectra.
class PairConvolution {
 public:
  PairConvolution(HarmonicSpectrum f, HarmonicSpectrum g, int n_circle);

  const HarmonicEvaluator& first() const { return f_; }
  const HarmonicEvaluator& second() const { return g_; }
  int n_circle() const { return n_circle_; }
  bool symmetric() const { return symmetric_; }
  int band_limit() const;

 private:
  HarmonicEvaluator f_;
  HarmonicEvaluator g_;
  int n_circle_;
  bool symmetric_;
};

using PairConvolutionPtr = std::shared_ptr<const PairConvolution>;

/// Samples of f sigma * g sigma on a BallGrid; off-grid values come from `source()`.
class BallField {
 public:
  BallField(BallGridPtr grid, std::vector<cplx> values, PairConvolutionPtr source);

  const BallGrid& grid() const { return *grid_; }
  const BallGridPtr& grid_ptr() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  const PairConvolution& source() const { return *source_; }
  const PairConvolutionPtr& source_ptr() const { return source_; }

  BallField& operator*=(cplx s);

 private:
  BallGridPtr grid_;
  std::vector<cplx> values_;
  PairConvolutionPtr source_;
};

namespace kernels {

/// (f sigma * g sigma)(z_i) for each query point; 0 outside 0 < |z| < 2.
void pair_values(const PairConvolution& pair, std::span<const Vec3> z, std::span<cplx> out,
                 Backend backend);

/// x -> integral over y in S^2 of h(y) P(x - y), P the pair convolution, at each x.
void triple_values(const HarmonicEvaluator& h, const PairConvolution& pair, const GeodesicRule& rule,
                   std::span<const Vec3> x, std::span<cplx> out, Backend backend);

}  // namespace kernels

/// Convolution of f sigma and g sigma sampled on `grid`, with f and g taken through
/// their band-`band_limit` spectra.
BallField convolve_pair(const SphereField& f, const SphereField& g, BallGridPtr grid, int n_circle,
                        int band_limit, Backend backend = Backend::parallel);

/// (h sigma * pair)|_{S^2} on the nodes of h's quadrature.
SphereField triple_restrict(const SphereField& h, const PairConvolution& pair, int band_limit,
                            const GeodesicRule& rule, Backend backend = Backend::parallel);
SphereField triple_restrict(const SphereField& h, const BallField& pair, int band_limit,
                            const GeodesicRule& rule, Backend backend = Backend::parallel);

double l2_norm_ball(const BallField& b);

}  // namespace rlab
