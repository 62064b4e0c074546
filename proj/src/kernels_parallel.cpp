// Batched kernels: circle points are generated in structure-of-arrays blocks and
// the harmonic sums vectorize over points. Output points are distributed over
// OpenMP threads; every output value is computed by a single thread in a fixed
// order, so results do not depend on the thread count.

#include <cmath>
#include <numbers>
#include <vector>

#include "rlab/convolution.hpp"

namespace rlab::kernels::parallel {

namespace {

struct CircleTable {
  std::vector<double> cos_t;
  std::vector<double> sin_t;

  explicit CircleTable(int n) : cos_t(n), sin_t(n) {
    for (int k = 0; k < n; ++k) {
      const double t = 2.0 * std::numbers::pi * k / n;
      cos_t[k] = std::cos(t);
      sin_t[k] = std::sin(t);
    }
  }
};

/// Scratch space reused across the output points handled by one thread.
struct Workspace {
  std::vector<double> x, y, z, fr, fi, gr, gi;

  void resize(std::size_t n) {
    for (auto* v : {&x, &y, &z, &fr, &fi, &gr, &gi}) v->resize(n);
  }
};

/// Appends the n_circle points x_k on the circle of z to ws at offset `at`.
/// For even n the partner z - x_k is x_{k + n/2}; odd n stores partners separately.
void fill_circle(const CircleTable& ct, Vec3 zv, double r, std::size_t at, Workspace& ws,
                 Workspace* partners) {
  const std::size_t n = ct.cos_t.size();
  const PerpFrame fr = perpendicular_frame(zv);
  const double rho = std::sqrt(std::max(0.0, 1.0 - 0.25 * r * r));
  const Vec3 mid = 0.5 * zv;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 p = mid + rho * (ct.cos_t[k] * fr.e1 + ct.sin_t[k] * fr.e2);
    ws.x[at + k] = p.x;
    ws.y[at + k] = p.y;
    ws.z[at + k] = p.z;
    if (partners) {
      const Vec3 q = zv - p;
      partners->x[at + k] = q.x;
      partners->y[at + k] = q.y;
      partners->z[at + k] = q.z;
    }
  }
}

/// Evaluates f at the points in ws and g at the partner points, leaving
/// values in ws.fr/fi and ws.gr/gi (partner-aligned when n is odd).
void evaluate_block(const PairConvolution& pair, std::size_t count, Workspace& ws, Workspace* partners) {
  pair.first().evaluate_soa(ws.x.data(), ws.y.data(), ws.z.data(), count, ws.fr.data(), ws.fi.data());
  if (partners) {
    pair.second().evaluate_soa(partners->x.data(), partners->y.data(), partners->z.data(), count,
                               ws.gr.data(), ws.gi.data());
  } else if (pair.symmetric()) {
    std::copy_n(ws.fr.begin(), count, ws.gr.begin());
    std::copy_n(ws.fi.begin(), count, ws.gi.begin());
  } else {
    pair.second().evaluate_soa(ws.x.data(), ws.y.data(), ws.z.data(), count, ws.gr.data(), ws.gi.data());
  }
}

/// Circle mean of f(x_k) g(z - x_k) for the block of n points starting at `at`.
cplx circle_mean(const Workspace& ws, std::size_t at, std::size_t n, bool paired_storage) {
  double sr = 0.0, si = 0.0;
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t kp = paired_storage ? k : (k + half) % n;
    const double ar = ws.fr[at + k], ai = ws.fi[at + k];
    const double br = ws.gr[at + kp], bi = ws.gi[at + kp];
    sr += ar * br - ai * bi;
    si += ar * bi + ai * br;
  }
  return {sr / n, si / n};
}

}  // namespace

void pair_values(const PairConvolution& pair, std::span<const Vec3> z, std::span<cplx> out) {
  const int n = pair.n_circle();
  const CircleTable ct(n);
  const bool odd = n % 2 != 0;
  const auto count = static_cast<std::ptrdiff_t>(z.size());
#pragma omp parallel
  {
    Workspace ws, partners;
    ws.resize(n);
    if (odd) partners.resize(n);
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const Vec3 zv = z[i];
      const double r = norm(zv);
      if (!(r > 0.0 && r < 2.0)) {
        out[i] = {};
        continue;
      }
      fill_circle(ct, zv, r, 0, ws, odd ? &partners : nullptr);
      evaluate_block(pair, n, ws, odd ? &partners : nullptr);
      out[i] = kCircleConstant / r * circle_mean(ws, 0, n, odd);
    }
  }
}

void triple_values(const HarmonicEvaluator& h, const PairConvolution& pair, const GeodesicRule& rule,
                   std::span<const Vec3> x, std::span<cplx> out) {
  const int n = pair.n_circle();
  const CircleTable ct(n);
  const bool odd = n % 2 != 0;
  const std::size_t n_theta = rule.theta.size();
  const std::size_t n_phi = rule.n_phi;
  const std::size_t n_y = n_theta * n_phi;
  std::vector<double> cos_theta(n_theta), sin_theta(n_theta), cos_phi(n_phi), sin_phi(n_phi);
  for (std::size_t i = 0; i < n_theta; ++i) {
    cos_theta[i] = std::cos(rule.theta[i]);
    sin_theta[i] = std::sin(rule.theta[i]);
  }
  for (std::size_t j = 0; j < n_phi; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / n_phi;
    cos_phi[j] = std::cos(phi);
    sin_phi[j] = std::sin(phi);
  }
  const auto count = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel
  {
    Workspace ws, partners, ys;
    ws.resize(n_y * n);
    if (odd) partners.resize(n_y * n);
    ys.resize(n_y);
    std::vector<double> radius(n_y);
#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t p = 0; p < count; ++p) {
      const Vec3 c = x[p];
      const PerpFrame fr = perpendicular_frame(c);
      for (std::size_t i = 0; i < n_theta; ++i)
        for (std::size_t j = 0; j < n_phi; ++j) {
          const std::size_t k = i * n_phi + j;
          const Vec3 y = cos_theta[i] * c + sin_theta[i] * (cos_phi[j] * fr.e1 + sin_phi[j] * fr.e2);
          ys.x[k] = y.x;
          ys.y[k] = y.y;
          ys.z[k] = y.z;
          const Vec3 zv = c - y;
          radius[k] = norm(zv);
          fill_circle(ct, zv, radius[k], k * n, ws, odd ? &partners : nullptr);
        }
      h.evaluate_soa(ys.x.data(), ys.y.data(), ys.z.data(), n_y, ys.fr.data(), ys.fi.data());
      evaluate_block(pair, n_y * n, ws, odd ? &partners : nullptr);
      double acc_r = 0.0, acc_i = 0.0;
      for (std::size_t i = 0; i < n_theta; ++i) {
        double row_r = 0.0, row_i = 0.0;
        for (std::size_t j = 0; j < n_phi; ++j) {
          const std::size_t k = i * n_phi + j;
          const double r = radius[k];
          if (!(r > 0.0 && r < 2.0)) continue;
          const cplx m = circle_mean(ws, k * n, n, odd) * (kCircleConstant / r);
          const cplx hv(ys.fr[k], ys.fi[k]);
          const cplx t = hv * m;
          row_r += t.real();
          row_i += t.imag();
        }
        acc_r += rule.weight[i] * row_r;
        acc_i += rule.weight[i] * row_i;
      }
      out[p] = {acc_r, acc_i};
    }
  }
}

}  // namespace rlab::kernels::parallel
