#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rlab/quadrature.hpp"

namespace rlab {

/// Complex function sampled at the nodes of a sphere quadrature.
class SphereField {
 public:
  SphereField() = default;
  SphereField(SphereQuadraturePtr q, std::vector<cplx> values);
  /// Zero field on `q`.
  explicit SphereField(SphereQuadraturePtr q);

  const SphereQuadrature& quadrature() const { return *q_; }
  const SphereQuadraturePtr& quadrature_ptr() const { return q_; }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  std::size_t size() const { return values_.size(); }
  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }

  SphereField& operator+=(const SphereField& o);
  SphereField& operator-=(const SphereField& o);
  SphereField& operator*=(cplx s);

  friend SphereField operator+(SphereField a, const SphereField& b) { return a += b; }
  friend SphereField operator-(SphereField a, const SphereField& b) { return a -= b; }
  friend SphereField operator*(cplx s, SphereField a) { return a *= s; }

 private:
  SphereQuadraturePtr q_;
  std::vector<cplx> values_;
};

/// Builds a field by evaluating `fn` at each node.
template <class Fn>
SphereField sample(SphereQuadraturePtr q, Fn&& fn) {
  std::vector<cplx> v;
  v.reserve(q->size());
  for (const Vec3& x : q->nodes()) v.push_back(cplx(fn(x)));
  return SphereField(std::move(q), std::move(v));
}

/// <f, g> = integral of f * conj(g).
cplx inner(const SphereField& f, const SphereField& g);
double l2_norm(const SphereField& f);

/// Field on the same nodes with values f(-x); needs an even azimuthal count.
SphereField antipodal(const SphereField& f);
SphereField conjugate(const SphereField& f);
/// Node-wise modulus |f|.
SphereField modulus(const SphereField& f);

/// Coefficients of an expansion in orthonormal real spherical harmonics,
/// 0 <= l <= L, -l <= m <= l, stored at index l*l + l + m. The harmonics carry
/// no Condon-Shortley phase: Y_{l,m} = sqrt(2) Pbar_l^m(cos t) cos(m p) for m > 0,
/// sqrt(2) Pbar_l^|m|(cos t) sin(|m| p) for m < 0.
class HarmonicSpectrum {
 public:
  HarmonicSpectrum() = default;
  explicit HarmonicSpectrum(int band_limit);
  HarmonicSpectrum(int band_limit, std::vector<cplx> coefficients);

  int band_limit() const { return band_limit_; }
  static constexpr std::size_t index(int l, int m) {
    return static_cast<std::size_t>(l * l + l + m);
  }
  cplx at(int l, int m) const { return coeffs_.at(index(l, m)); }
  cplx& at(int l, int m) { return coeffs_.at(index(l, m)); }
  std::span<const cplx> coefficients() const { return coeffs_; }
  /// True when every coefficient has zero imaginary part.
  bool is_real() const;

  /// Sum over m of |a_{l,m}|^2, for l = 0..L.
  std::vector<double> degree_energies() const;
  /// Copy keeping only degrees <= `degree`.
  HarmonicSpectrum truncated(int degree) const;

 private:
  int band_limit_ = 0;
  std::vector<cplx> coeffs_;
};

/// Recurrence constants for normalized associated Legendre functions divided by
/// sin^m, so that Y_{l,m} = sqrt(2) Q_l^m(z) Re/Im (x + i y)^m.
struct LegendreTables {
  std::vector<double> diag;  // Q_m^m / Q_{m-1}^{m-1}
  std::vector<double> sub;   // Q_{m+1}^m / (z Q_m^m)
  std::vector<double> a;     // three-term recurrence, indexed like the spectrum
  std::vector<double> b;

  explicit LegendreTables(int band_limit);
};

/// A spectrum with its recurrence tables, for repeated off-node evaluation.
class HarmonicEvaluator {
 public:
  explicit HarmonicEvaluator(HarmonicSpectrum s);

  const HarmonicSpectrum& spectrum() const { return spectrum_; }
  /// x, y, z, out_re and out_im all have length n; points must be unit vectors.
  void evaluate_soa(const double* x, const double* y, const double* z, std::size_t n, double* out_re,
                    double* out_im) const;

 private:
  HarmonicSpectrum spectrum_;
  LegendreTables tables_;
  bool real_;
};

/// Value of the real harmonic Y_{l,m} at unit vector x, via std::sph_legendre.
/// Slow; kept as an independent check on the recurrence evaluator.
double real_harmonic(int l, int m, Vec3 x);

/// Sum of a_{l,m} real_harmonic(l, m, x); the slow reference evaluator.
cplx evaluate_reference(const HarmonicSpectrum& s, Vec3 x);

/// Evaluates the expansion at arbitrary unit vectors.
void evaluate(const HarmonicSpectrum& s, std::span<const Vec3> points, std::span<cplx> out);
cplx evaluate(const HarmonicSpectrum& s, Vec3 point);

/// Structure-of-arrays evaluation used by the inner kernels; x, y, z, out_re and
/// out_im all have length n. The points must be unit vectors.
void evaluate_soa(const HarmonicSpectrum& s, const double* x, const double* y, const double* z,
                  std::size_t n, double* out_re, double* out_im);

/// a_{l,m} = integral of f Y_{l,m} by quadrature. Requires degree >= 2L.
HarmonicSpectrum analyze(const SphereField& f, int band_limit);
SphereField synthesize(const HarmonicSpectrum& s, SphereQuadraturePtr q);

/// ( sum (1 + l(l+1))^order |a_{l,m}|^2 )^(1/2).
double sobolev_norm(const HarmonicSpectrum& s, double order);

/// The field x -> f(R x), with f evaluated through its band-`band_limit` spectrum.
SphereField rotate(const SphereField& f, const Mat3& rotation, int band_limit);

/// Fixed set of 20 rotations: axes from a Fibonacci lattice, angles log-spaced in [1e-3, 1].
std::vector<Mat3> standard_rotations();

/// max over rotations of |R - I|^(-order) * ||f o R - f||_2. A sampled lower bound
/// for the rotation-modulus seminorm.
double rotation_modulus(const SphereField& f, double order, std::span<const Mat3> rotations,
                        int band_limit);

struct SmoothSplit {
  SphereField smooth;  // lowest-degree truncation of f
  SphereField rough;   // f - smooth, node-wise
  int degree = 0;      // truncation degree of `smooth`
};

/// Splits f = smooth + rough with ||rough||_2 < eps, choosing the smallest
/// truncation degree that achieves it. Throws ResolutionExhausted if even the full
/// band-`band_limit` projection leaves ||rough||_2 >= eps.
SmoothSplit smooth_split(const SphereField& f, double eps, int band_limit);

class ResolutionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV with header `l,m,re,im`, values printed with 17 significant digits.
void write_spectrum_csv(std::ostream& os, const HarmonicSpectrum& s);
HarmonicSpectrum read_spectrum_csv(std::istream& is);

}  // namespace rlab
