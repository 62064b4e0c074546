#pragma once

#include <memory>
#include <span>
#include <vector>

#include "rlab/vec3.hpp"

namespace rlab {

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n);

/// Product rule on the unit sphere: Gauss-Legendre in the polar cosine times
/// an equispaced azimuth. Nodes are stored polar-major: index = i * n_azimuthal + j.
class SphereQuadrature {
 public:
  SphereQuadrature(int n_polar, int n_azimuthal);

  int n_polar() const { return n_polar_; }
  int n_azimuthal() const { return n_azimuthal_; }
  /// Polynomial exactness degree.
  int degree() const { return degree_; }
  std::size_t size() const { return nodes_.size(); }

  std::span<const Vec3> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> polar_cosines() const { return cosines_; }

  /// Index of the node at -x for the node at `index`; requires even n_azimuthal.
  std::size_t antipode(std::size_t index) const;

 private:
  int n_polar_;
  int n_azimuthal_;
  int degree_;
  std::vector<double> cosines_;
  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
};

using SphereQuadraturePtr = std::shared_ptr<const SphereQuadrature>;

SphereQuadraturePtr build_sphere_quadrature(int n_polar, int n_azimuthal);

/// Tensor grid over the ball B(0,2): Gauss-Legendre radii in the open interval
/// (0,2) with weights that already carry the r^2 Jacobian, times an angular rule.
/// Node (i, j) sits at radial_nodes[i] * angular.nodes()[j], flat index i * n_angular + j.
class BallGrid {
 public:
  BallGrid(int n_radial, SphereQuadraturePtr angular);

  std::span<const double> radial_nodes() const { return radial_nodes_; }
  std::span<const double> radial_weights() const { return radial_weights_; }
  const SphereQuadrature& angular() const { return *angular_; }
  const SphereQuadraturePtr& angular_ptr() const { return angular_; }

  int n_radial() const { return static_cast<int>(radial_nodes_.size()); }
  std::size_t size() const { return radial_nodes_.size() * angular_->size(); }
  Vec3 point(std::size_t flat) const;

 private:
  std::vector<double> radial_nodes_;
  std::vector<double> radial_weights_;
  SphereQuadraturePtr angular_;
};

using BallGridPtr = std::shared_ptr<const BallGrid>;

BallGridPtr build_ball_grid(int n_radial, SphereQuadraturePtr angular);

/// Neumaier-compensated running sum; summation order is the call order.
template <class T>
class CompensatedSum {
 public:
  void add(T v) {
    const T t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

template <>
class CompensatedSum<cplx> {
 public:
  void add(cplx v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<double> re_;
  CompensatedSum<double> im_;
};

cplx integrate_sphere(const SphereQuadrature& q, std::span<const cplx> values);
double integrate_sphere(const SphereQuadrature& q, std::span<const double> values);
cplx integrate_ball(const BallGrid& g, std::span<const cplx> values);
double integrate_ball(const BallGrid& g, std::span<const double> values);

}  // namespace rlab
