#include "rlab/functional.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rlab {

namespace {

constexpr double kPi = std::numbers::pi;

double checked_norm(const SphereField& f) {
  const double n = l2_norm(f);
  if (!(n > 0.0)) throw std::domain_error("functional of the zero field is undefined");
  return n;
}

}  // namespace

double q_value(const SphereField& f, const Discretization& d) {
  const double nf = checked_norm(f);
  return l2_norm_ball(d.convolve(f, f)) / (nf * nf);
}

double lambda_value(const SphereField& f, const Discretization& d) {
  const double nf = checked_norm(f);
  const double conv = l2_norm_ball(d.convolve(f, f));
  return std::pow(2.0 * kPi, 3) * conv * conv / std::pow(nf, 4);
}

std::pair<double, double> hankel_polynomials(int l, double t) {
  if (l < 0) throw std::invalid_argument("hankel_polynomials: negative degree");
  double p = 0.0, q = 0.0;
  double a = 1.0;  // a_k(l) = (l+k)! / (2^k k! (l-k)!)
  double tk = 1.0;
  for (int k = 0; k <= l; ++k) {
    if (k > 0) {
      a *= static_cast<double>((l + k) * (l - k + 1)) / (2.0 * k);
      tk *= t;
    }
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    (k % 2 == 0 ? p : q) += sign * a * tk;
  }
  return {p, q};
}

OracleResult lambda_oracle(const SphereField& f, const Discretization& d, double xi_max, int n_xi) {
  if (!(xi_max > 0.0) || n_xi < 2) throw std::invalid_argument("lambda_oracle: bad xi grid");
  const double nf = checked_norm(f);
  const int L = d.band_limit();
  const HarmonicSpectrum s = analyze(f, L);

  // f_l(w) for every direction node and degree l.
  const auto dirs = build_sphere_quadrature(std::max(2 * L + 1, 4), std::max(4 * L + 2, 8));
  const std::size_t n_dir = dirs->size();
  std::vector<std::vector<cplx>> parts(L + 1, std::vector<cplx>(n_dir));
  for (int l = 0; l <= L; ++l) {
    HarmonicSpectrum one(l);
    for (int m = -l; m <= l; ++m) one.at(l, m) = s.at(l, m);
    evaluate(one, dirs->nodes(), parts[l]);
  }
  std::vector<cplx> phase(L + 1);
  for (int l = 0; l <= L; ++l) phase[l] = std::pow(cplx(0.0, -1.0), l);

  const GaussLegendre gl = gauss_legendre(n_xi);
  CompensatedSum<double> total;
  std::vector<double> jl(L + 1);
  for (int k = 0; k < n_xi; ++k) {
    const double r = 0.5 * xi_max * (gl.nodes[k] + 1.0);
    const double wr = 0.5 * xi_max * gl.weights[k] * r * r;
    for (int l = 0; l <= L; ++l) jl[l] = std::sph_bessel(static_cast<unsigned>(l), r);
    double shell = 0.0;
    for (std::size_t j = 0; j < n_dir; ++j) {
      cplx ext{};
      for (int l = 0; l <= L; ++l) ext += phase[l] * jl[l] * parts[l][j];
      ext *= 4.0 * kPi;
      const double a2 = std::norm(ext);
      shell += dirs->weights()[j] * a2 * a2;
    }
    total.add(wr * shell);
  }

  // r j_l(r) = sin(r - l pi/2) P_l(1/r) + cos(r - l pi/2) Q_l(1/r) with the finite
  // Hankel polynomials P_l, Q_l. Collecting phases, (4 pi)^-1 r (f sigma)^(r w) =
  // sin(r) U + cos(r) V with U, V polynomials in 1/r, so |(f sigma)^| <= 4 pi B(w) / r
  // where B(w) = sup over r >= R of sqrt(|U|^2 + |V|^2), taken on a grid in 1/r.
  // The omitted shell integral is then at most (4 pi)^4 / R * int B^4 dw.
  constexpr int kSamples = 33;
  std::vector<double> p_l(static_cast<std::size_t>(kSamples) * (L + 1));
  std::vector<double> q_l(p_l.size());
  for (int sidx = 0; sidx < kSamples; ++sidx) {
    const double t = static_cast<double>(sidx) / (kSamples - 1) / xi_max;
    for (int l = 0; l <= L; ++l) {
      const auto [p, q] = hankel_polynomials(l, t);
      p_l[sidx * (L + 1) + l] = p;
      q_l[sidx * (L + 1) + l] = q;
    }
  }
  const cplx i_unit(0.0, 1.0);
  double angular = 0.0;
  for (std::size_t j = 0; j < n_dir; ++j) {
    double b2 = 0.0;
    for (int sidx = 0; sidx < kSamples; ++sidx) {
      cplx u{}, v{};
      for (int l = 0; l <= L; ++l) {
        const double p = p_l[sidx * (L + 1) + l], q = q_l[sidx * (L + 1) + l];
        const cplx fl = parts[l][j];
        if (l % 2 == 0) {
          u += p * fl;
          v += q * fl;
        } else {
          u -= i_unit * q * fl;
          v += i_unit * p * fl;
        }
      }
      b2 = std::max(b2, std::norm(u) + std::norm(v));
    }
    angular += dirs->weights()[j] * b2 * b2;
  }
  const double tail = std::pow(4.0 * kPi, 4) * angular / xi_max;

  const double nf4 = std::pow(nf, 4);
  return {total.value() / nf4, tail / nf4, xi_max, n_xi};
}

double el_residual(const SphereField& f, const SphereField& tf, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("el_residual: lambda must be positive");
  const double nf = checked_norm(f);
  SphereField diff = tf;
  diff -= (lambda * nf * nf) * f;
  return l2_norm(diff) / (lambda * nf * nf * nf);
}

double el_residual(const SphereField& f, double lambda, const Discretization& d) {
  if (!(lambda > 0.0)) throw std::invalid_argument("el_residual: lambda must be positive");
  return el_residual(f, d.cubic(f), lambda);
}

double multiplier_estimate(const SphereField& f, const SphereField& tf) {
  const double nf = checked_norm(f);
  return inner(tf, f).real() / std::pow(nf, 4);
}

double multiplier_estimate(const SphereField& f, const Discretization& d) {
  checked_norm(f);
  return multiplier_estimate(f, d.cubic(f));
}

FunctionalReport evaluate_functional(const SphereField& f, const Discretization& d) {
  FunctionalReport rep;
  rep.norms.l2_f = checked_norm(f);
  rep.norms.l2_conv = l2_norm_ball(d.convolve(f, f));
  const double nf2 = rep.norms.l2_f * rep.norms.l2_f;
  rep.q_value = rep.norms.l2_conv / nf2;
  rep.lambda_value = std::pow(2.0 * kPi, 3) * rep.norms.l2_conv * rep.norms.l2_conv / (nf2 * nf2);
  const SphereField tf = d.cubic(f);
  rep.multiplier_estimate = multiplier_estimate(f, tf);
  rep.el_residual_rel =
      rep.multiplier_estimate > 0.0 ? el_residual(f, tf, rep.multiplier_estimate) : std::nan("");
  return rep;
}

}  // namespace rlab
