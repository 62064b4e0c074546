#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "rlab/quadrature.hpp"

using namespace rlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Integral of x^a y^b z^c over S^2.
double monomial_integral(int a, int b, int c) {
  if (a % 2 || b % 2 || c % 2) return 0.0;
  const double ga = std::tgamma((a + 1) / 2.0), gb = std::tgamma((b + 1) / 2.0), gc = std::tgamma((c + 1) / 2.0);
  return 2.0 * ga * gb * gc / std::tgamma((a + b + c + 3) / 2.0);
}

double ipow(double x, int k) {
  double r = 1.0;
  while (k-- > 0) r *= x;
  return r;
}

}  // namespace

TEST_CASE("gauss-legendre nodes are symmetric and exact to degree 2n-1") {
  for (int n : {1, 2, 5, 16, 33}) {
    const GaussLegendre gl = gauss_legendre(n);
    REQUIRE(gl.nodes.size() == static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(gl.nodes[i] == -gl.nodes[n - 1 - i]);
      CHECK(gl.weights[i] > 0.0);
      if (i > 0) CHECK(gl.nodes[i] > gl.nodes[i - 1]);
      wsum += gl.weights[i];
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += gl.weights[i] * ipow(gl.nodes[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs(s - exact) < 1e-13);
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("sphere quadrature invariants") {
  const SphereQuadrature q(12, 24);
  CHECK(q.degree() == 23);
  CHECK(q.size() == 288u);
  double wsum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK(std::abs(norm(q.nodes()[i]) - 1.0) < 1e-14);
    CHECK(q.weights()[i] > 0.0);
    wsum += q.weights()[i];
  }
  CHECK(std::abs(wsum - 4.0 * kPi) < 1e-12);

  SUBCASE("monomials up to the degree") {
    for (int a = 0; a <= q.degree(); ++a)
      for (int b = 0; a + b <= q.degree(); ++b)
        for (int c = 0; a + b + c <= q.degree(); ++c) {
          double s = 0.0;
          for (std::size_t i = 0; i < q.size(); ++i) {
            const Vec3 x = q.nodes()[i];
            s += q.weights()[i] * ipow(x.x, a) * ipow(x.y, b) * ipow(x.z, c);
          }
          CHECK(std::abs(s - monomial_integral(a, b, c)) < 1e-12);
        }
  }

  SUBCASE("antipodes") {
    for (std::size_t i = 0; i < q.size(); ++i) CHECK(norm(q.nodes()[q.antipode(i)] + q.nodes()[i]) < 1e-14);
  }
}

TEST_CASE("sphere quadrature rejects undersized rules") {
  CHECK_THROWS_AS(SphereQuadrature(1, 8), std::invalid_argument);
  CHECK_THROWS_AS(SphereQuadrature(4, 3), std::invalid_argument);
  CHECK_THROWS(SphereQuadrature(4, 5).antipode(0));
}

TEST_CASE("ball grid covers B(0,2)") {
  const BallGrid g(20, build_sphere_quadrature(8, 16));
  const auto r = g.radial_nodes();
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(r[i] > 0.0);
    CHECK(r[i] < 2.0);
    if (i > 0) CHECK(r[i] > r[i - 1]);
  }
  double rw = 0.0;
  for (double w : g.radial_weights()) rw += w;
  CHECK(std::abs(rw * 4.0 * kPi - 32.0 * kPi / 3.0) < 1e-10);

  // |z|^2 over the ball: 4 pi 2^5 / 5.
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = dot(g.point(k), g.point(k));
  CHECK(integrate_ball(g, v) == doctest::Approx(128.0 * kPi / 5.0).epsilon(1e-13));
  CHECK_THROWS_AS(BallGrid(3, build_sphere_quadrature(4, 8)), std::invalid_argument);
}

TEST_CASE("compensated sum keeps small terms") {
  CompensatedSum<double> s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
}

TEST_CASE("integrate_sphere checks lengths") {
  const SphereQuadrature q(4, 8);
  std::vector<double> v(q.size() - 1, 1.0);
  CHECK_THROWS_AS(integrate_sphere(q, v), std::invalid_argument);
}
