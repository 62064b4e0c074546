#include "rlab/quadrature.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace rlab {

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  GaussLegendre gl;
  gl.nodes.assign(n, 0.0);
  gl.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Mirror so the rule is exactly symmetric; x > 0 here, store ascending.
    gl.nodes[n - 1 - i] = x;
    gl.nodes[i] = -x;
    gl.weights[n - 1 - i] = w;
    gl.weights[i] = w;
  }
  if (n % 2 == 1) gl.nodes[n / 2] = 0.0;
  return gl;
}

SphereQuadrature::SphereQuadrature(int n_polar, int n_azimuthal)
    : n_polar_(n_polar), n_azimuthal_(n_azimuthal) {
  if (n_polar < 2 || n_azimuthal < 4) {
    throw std::invalid_argument("sphere quadrature needs n_polar >= 2 and n_azimuthal >= 4, got " +
                                std::to_string(n_polar) + " x " + std::to_string(n_azimuthal));
  }
  degree_ = std::min(2 * n_polar - 1, n_azimuthal - 1);
  const GaussLegendre gl = gauss_legendre(n_polar);
  cosines_ = gl.nodes;
  nodes_.reserve(static_cast<std::size_t>(n_polar) * n_azimuthal);
  weights_.reserve(nodes_.capacity());
  const double dphi = 2.0 * std::numbers::pi / n_azimuthal;
  for (int i = 0; i < n_polar; ++i) {
    const double t = gl.nodes[i];
    const double s = std::sqrt((1.0 - t) * (1.0 + t));
    for (int j = 0; j < n_azimuthal; ++j) {
      const double phi = dphi * j;
      nodes_.push_back({s * std::cos(phi), s * std::sin(phi), t});
      weights_.push_back(gl.weights[i] * dphi);
    }
  }
}

std::size_t SphereQuadrature::antipode(std::size_t index) const {
  if (n_azimuthal_ % 2 != 0) throw std::logic_error("antipode needs an even azimuthal count");
  const std::size_t i = index / n_azimuthal_;
  const std::size_t j = index % n_azimuthal_;
  return (n_polar_ - 1 - i) * n_azimuthal_ + (j + n_azimuthal_ / 2) % n_azimuthal_;
}

SphereQuadraturePtr build_sphere_quadrature(int n_polar, int n_azimuthal) {
  return std::make_shared<const SphereQuadrature>(n_polar, n_azimuthal);
}

BallGrid::BallGrid(int n_radial, SphereQuadraturePtr angular) : angular_(std::move(angular)) {
  if (n_radial < 4) throw std::invalid_argument("ball grid needs n_radial >= 4");
  if (!angular_) throw std::invalid_argument("ball grid needs an angular rule");
  const GaussLegendre gl = gauss_legendre(n_radial);
  for (int i = 0; i < n_radial; ++i) {
    const double r = 1.0 + gl.nodes[i];
    radial_nodes_.push_back(r);
    radial_weights_.push_back(gl.weights[i] * r * r);
  }
}

Vec3 BallGrid::point(std::size_t flat) const {
  const std::size_t n = angular_->size();
  return radial_nodes_[flat / n] * angular_->nodes()[flat % n];
}

BallGridPtr build_ball_grid(int n_radial, SphereQuadraturePtr angular) {
  return std::make_shared<const BallGrid>(n_radial, std::move(angular));
}

namespace {

template <class T>
T sphere_sum(const SphereQuadrature& q, std::span<const T> values) {
  if (values.size() != q.size()) {
    throw std::invalid_argument("integrate_sphere: expected " + std::to_string(q.size()) +
                                " values, got " + std::to_string(values.size()));
  }
  CompensatedSum<T> acc;
  const auto w = q.weights();
  for (std::size_t i = 0; i < values.size(); ++i) acc.add(w[i] * values[i]);
  return acc.value();
}

template <class T>
T ball_sum(const BallGrid& g, std::span<const T> values) {
  if (values.size() != g.size()) {
    throw std::invalid_argument("integrate_ball: expected " + std::to_string(g.size()) +
                                " values, got " + std::to_string(values.size()));
  }
  const auto aw = g.angular().weights();
  const auto rw = g.radial_weights();
  const std::size_t n = aw.size();
  CompensatedSum<T> acc;
  for (std::size_t i = 0; i < rw.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) acc.add((rw[i] * aw[j]) * values[i * n + j]);
  return acc.value();
}

}  // namespace

cplx integrate_sphere(const SphereQuadrature& q, std::span<const cplx> values) {
  return sphere_sum<cplx>(q, values);
}
double integrate_sphere(const SphereQuadrature& q, std::span<const double> values) {
  return sphere_sum<double>(q, values);
}
cplx integrate_ball(const BallGrid& g, std::span<const cplx> values) { return ball_sum<cplx>(g, values); }
double integrate_ball(const BallGrid& g, std::span<const double> values) {
  return ball_sum<double>(g, values);
}

}  // namespace rlab
