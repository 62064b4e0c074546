#include "rlab/phase.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <omp.h>

namespace rlab {

namespace {

constexpr double kRefineTol = 1e-6;
// Lattice values within this relative margin count as ties.
constexpr double kTieRel = 1e-12;

double coord(const Vec3& v, int k) { return k == 0 ? v.x : (k == 1 ? v.y : v.z); }
void set_coord(Vec3& v, int k, double s) { (k == 0 ? v.x : (k == 1 ? v.y : v.z)) = s; }

std::vector<cplx> weighted(const SphereField& f, const SphereField* amp) {
  const SphereQuadrature& q = f.quadrature();
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = q.weights()[i] * f.values()[i];
    if (amp) out[i] *= amp->values()[i];
  }
  return out;
}

cplx transform(const SphereQuadrature& q, const std::vector<cplx>& wf, Vec3 xi) {
  CompensatedSum<cplx> acc;
  for (std::size_t i = 0; i < wf.size(); ++i) acc.add(wf[i] * std::polar(1.0, -dot(q.nodes()[i], xi)));
  return acc.value();
}

// Golden-section maximum of fn on [a, b].
template <class Fn>
double golden_max(Fn&& fn, double a, double b, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

SphereField modulate(const SphereField& f, Vec3 xi) {
  SphereField out = f;
  const auto& nodes = f.quadrature().nodes();
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] *= std::polar(1.0, dot(nodes[i], xi));
  return out;
}

double extension_modulus(const SphereField& f, Vec3 xi) {
  return std::abs(transform(f.quadrature(), weighted(f, nullptr), xi));
}

ArgmaxResult extension_argmax(const SphereField& f, double xi_max, int n_coarse) {
  if (!(xi_max > 0.0)) throw std::invalid_argument("extension_argmax: xi_max must be positive");
  if (n_coarse < 1) throw std::invalid_argument("extension_argmax: n_coarse must be >= 1");
  if (!(l2_norm(f) > 0.0)) throw std::domain_error("extension_argmax: zero field");

  const SphereQuadrature& q = f.quadrature();
  const std::vector<cplx> wf = weighted(f, nullptr);
  const std::size_t n = wf.size();
  const int m = 2 * n_coarse + 1;
  const double h = xi_max / n_coarse;
  auto lattice = [&](int a) { return (a - n_coarse) * h; };

  // tables[k][a * n + i] = exp(-i x_i[k] * lattice(a))
  std::array<std::vector<cplx>, 3> tables;
  for (int k = 0; k < 3; ++k) {
    tables[k].resize(static_cast<std::size_t>(m) * n);
    for (int a = 0; a < m; ++a)
      for (std::size_t i = 0; i < n; ++i) tables[k][a * n + i] = std::polar(1.0, -coord(q.nodes()[i], k) * lattice(a));
  }

  std::vector<double> values(static_cast<std::size_t>(m) * m * m);
#pragma omp parallel
  {
    std::vector<cplx> tmp(n);
#pragma omp for collapse(2) schedule(static)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        for (std::size_t i = 0; i < n; ++i) tmp[i] = wf[i] * tables[0][a * n + i] * tables[1][b * n + i];
        for (int c = 0; c < m; ++c) {
          const cplx* e3 = &tables[2][c * n];
          cplx acc{};
          for (std::size_t i = 0; i < n; ++i) acc += tmp[i] * e3[i];
          values[(static_cast<std::size_t>(a) * m + b) * m + c] = std::abs(acc);
        }
      }
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[best] * (1.0 + kTieRel)) best = k;
  const int a = static_cast<int>(best / (m * m)), b = static_cast<int>(best / m % m), c = static_cast<int>(best % m);

  ArgmaxResult res;
  res.zeta = {lattice(a), lattice(b), lattice(c)};
  res.coarse_value = values[best];
  // Recompute with the compensated sum so refinement compares like with like.
  res.value = std::abs(transform(q, wf, res.zeta));

  for (int sweep = 0; sweep < 50; ++sweep) {
    double moved = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double s0 = coord(res.zeta, k);
      auto along = [&](double s) {
        Vec3 z = res.zeta;
        set_coord(z, k, s);
        return std::abs(transform(q, wf, z));
      };
      const double s = golden_max(along, std::max(-xi_max, s0 - h), std::min(xi_max, s0 + h), kRefineTol);
      const double v = along(s);
      if (v > res.value * (1.0 + 1e-14)) {
        set_coord(res.zeta, k, s);
        res.value = v;
        moved = std::max(moved, std::abs(s - s0));
      }
    }
    if (moved < kRefineTol) break;
  }
  res.value = std::max(res.value, res.coarse_value);
  return res;
}

double character_residual(const SphereField& f, Vec3 xi, cplx c) {
  const auto& nodes = f.quadrature().nodes();
  SphereField diff = f;
  for (std::size_t i = 0; i < diff.size(); ++i) {
    const cplx v = f.values()[i];
    diff.values()[i] = v - c * std::polar(1.0, dot(nodes[i], xi)) * std::abs(v);
  }
  return l2_norm(diff) / l2_norm(f);
}

CharacterFit fit_character(const SphereField& f, double xi_max, int n_coarse) {
  if (!(xi_max > 0.0)) throw std::invalid_argument("fit_character: xi_max must be positive");
  if (!(l2_norm(f) > 0.0)) throw std::domain_error("fit_character: |f| vanishes identically");
  if (n_coarse <= 0) n_coarse = std::max(1, 2 * static_cast<int>(std::ceil(xi_max)));

  const ArgmaxResult seed = extension_argmax(f, xi_max, n_coarse);
  const SphereQuadrature& q = f.quadrature();
  const SphereField amp = modulus(f);
  const std::vector<cplx> wfF = weighted(f, &amp);
  const std::size_t n = wfF.size();

  // g(xi) = <f, exp(i x . xi) F>, with gradient and Hessian in xi.
  struct Local {
    cplx g;
    std::array<cplx, 3> dg;
    std::array<cplx, 6> hg;  // xx, xy, xz, yy, yz, zz
  };
  auto local = [&](Vec3 xi) {
    CompensatedSum<cplx> g;
    std::array<CompensatedSum<cplx>, 3> dg;
    std::array<CompensatedSum<cplx>, 6> hg;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3& x = q.nodes()[i];
      const cplx t = wfF[i] * std::polar(1.0, -dot(x, xi));
      const cplx mt = cplx{0.0, -1.0} * t;
      g.add(t);
      dg[0].add(x.x * mt);
      dg[1].add(x.y * mt);
      dg[2].add(x.z * mt);
      hg[0].add(-(x.x * x.x * t));
      hg[1].add(-(x.x * x.y * t));
      hg[2].add(-(x.x * x.z * t));
      hg[3].add(-(x.y * x.y * t));
      hg[4].add(-(x.y * x.z * t));
      hg[5].add(-(x.z * x.z * t));
    }
    Local out;
    out.g = g.value();
    for (int k = 0; k < 3; ++k) out.dg[k] = dg[k].value();
    for (int k = 0; k < 6; ++k) out.hg[k] = hg[k].value();
    return out;
  };
  auto objective = [&](Vec3 xi) { return std::norm(transform(q, wfF, xi)); };
  auto clamp = [&](Vec3 v) {
    return Vec3{std::clamp(v.x, -xi_max, xi_max), std::clamp(v.y, -xi_max, xi_max), std::clamp(v.z, -xi_max, xi_max)};
  };

  Vec3 xi = seed.zeta;
  double phi = objective(xi);
  for (int it = 0; it < 100; ++it) {
    const Local l = local(xi);
    // phi = |g|^2: grad = 2 Re(conj(g) dg), Hess = 2 Re(conj(g) d2g + conj(dg_j) dg_k).
    std::array<double, 3> grad;
    for (int k = 0; k < 3; ++k) grad[k] = 2.0 * (std::conj(l.g) * l.dg[k]).real();
    constexpr int idx[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    double H[3][3];
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        H[j][k] = 2.0 * (std::conj(l.g) * l.hg[idx[j][k]] + std::conj(l.dg[j]) * l.dg[k]).real();
    if (std::hypot(grad[0], grad[1], grad[2]) == 0.0) break;

    // Newton step on -H (positive definite near a maximum) via Cramer; gradient step otherwise.
    const double A[3][3] = {{-H[0][0], -H[0][1], -H[0][2]}, {-H[1][0], -H[1][1], -H[1][2]}, {-H[2][0], -H[2][1], -H[2][2]}};
    const double det = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
                       A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
                       A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
    const bool pd = A[0][0] > 0.0 && A[0][0] * A[1][1] - A[0][1] * A[1][0] > 0.0 && det > 0.0;
    Vec3 step;
    if (pd) {
      auto solve = [&](int col) {
        double M[3][3];
        for (int r = 0; r < 3; ++r)
          for (int s = 0; s < 3; ++s) M[r][s] = (s == col) ? grad[r] : A[r][s];
        return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])) / det;
      };
      step = {solve(0), solve(1), solve(2)};
    } else {
      const double scale = std::max(phi, 1e-300);
      step = Vec3{grad[0], grad[1], grad[2]} * (1.0 / scale);
    }

    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 40; ++k, t *= 0.5) {
      const Vec3 trial = clamp(xi + step * t);
      const double pt = objective(trial);
      if (pt >= phi * (1.0 - 1e-14)) {
        const double moved = norm(trial - xi);
        xi = trial;
        phi = std::max(phi, pt);
        accepted = moved > 0.0;
        if (moved < 1e-13) accepted = false;
        break;
      }
    }
    if (!accepted) break;
  }

  CharacterFit fit;
  fit.xi = xi;
  const cplx g = transform(q, wfF, xi);
  fit.c = std::abs(g) > 0.0 ? g / std::abs(g) : cplx{1.0, 0.0};
  fit.residual_rel = character_residual(f, fit.xi, fit.c);
  fit.argmax_value = seed.value;
  return fit;
}

double factorization_defect(const SphereField& f, double xi_max) { return fit_character(f, xi_max).residual_rel; }

}  // namespace rlab
