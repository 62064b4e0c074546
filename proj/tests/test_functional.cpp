#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rlab/fields.hpp"
#include "rlab/functional.hpp"
#include "rlab/phase.hpp"

using namespace rlab;

namespace {

constexpr double kPi = std::numbers::pi;

const Discretization& base() {
  static const Discretization d = Discretization::build(Resolution{});
  return d;
}

const Discretization& small() {
  static const Discretization d = Discretization::build(Resolution{8, 16, 12, 16, 4});
  return d;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("values at the constant") {
  const Discretization& d = base();
  const SphereField one = d.constant(1.0);
  const FunctionalReport r = evaluate_functional(one, d);
  CHECK(std::abs(r.q_value - std::sqrt(2.0 * kPi)) < 1e-6);
  CHECK(rel(r.lambda_value, 16.0 * std::pow(kPi, 4)) < 1e-4);
  CHECK(std::abs(r.multiplier_estimate - 2.0 * kPi) < 1e-6);
  CHECK(r.el_residual_rel < 1e-6);
  CHECK(r.norms.l2_f == doctest::Approx(std::sqrt(4.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("el_residual") {
  const Discretization& d = base();
  const SphereField one = d.constant(1.0);
  CHECK(el_residual(one, 2.0 * kPi, d) < 1e-6);
  // |8 pi^2 - 4 pi| sqrt(4 pi) / (4 pi)^(3/2)
  CHECK(el_residual(one, 1.0, d) == doctest::Approx(2.0 * kPi - 1.0).epsilon(1e-10));
  CHECK_THROWS_AS(el_residual(one, 0.0, d), std::invalid_argument);
  CHECK_THROWS_AS(el_residual(one, -1.0, d), std::invalid_argument);
  CHECK_THROWS_AS(q_value(SphereField(d.sphere), d), std::domain_error);
  CHECK_THROWS_AS(multiplier_estimate(SphereField(d.sphere), d), std::domain_error);

  const SphereField f = random_band_limited(3, 4, small(), false);
  const double lambda = multiplier_estimate(f, small());
  const SphereField fr = rotate(f, axis_angle({1, 1, 0}, 0.8), 4);
  CHECK(std::abs(el_residual(fr, lambda, small()) - el_residual(f, lambda, small())) < 1e-6);
}

TEST_CASE("multiplier estimate") {
  const Discretization& d = small();
  SphereField f = random_band_limited(21, 4, d, false);
  f += antipodal(f);
  const double m = multiplier_estimate(f, d);
  CHECK(std::abs(m - std::pow(q_value(f, d), 2)) < 1e-8 * m);
  CHECK(rel(multiplier_estimate(cplx(3.0, 0.0) * f, d), m) < 1e-13);
}

TEST_CASE("invariances of q and Lambda") {
  const Discretization d = Discretization::build(Resolution{15, 30, 25, 28, 12});
  const SphereField f = random_band_limited(31, 3, d, true);
  const double q = q_value(f, d), lv = lambda_value(f, d);
  const SphereField images[] = {cplx(-2.0, 0.5) * f,   rotate(f, axis_angle({0, 1, 1}, 2.0), 12),
                                conjugate(f),          antipodal(f),
                                modulate(f, {1, 0, 0}), modulate(f, {0, 0, -2.5})};
  for (const SphereField& g : images) {
    CHECK(rel(q_value(g, d), q) < 1e-6);
    CHECK(rel(lambda_value(g, d), lv) < 1e-6);
  }
}

TEST_CASE("q(f) <= q(|f|)") {
  const Discretization& d = small();
  for (int seed = 0; seed < 3; ++seed) {
    const SphereField g = random_band_limited(40 + seed, 2, d, true);
    SphereField f = g;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= g[i];
    CHECK(q_value(f, d) <= q_value(modulus(f), d) + 1e-8);
  }
}

TEST_CASE("finite Hankel form of spherical Bessel functions") {
  for (int l = 0; l <= 12; ++l)
    for (double r : {0.7, 3.0, 11.5, 40.0, 123.4}) {
      const auto [p, q] = hankel_polynomials(l, 1.0 / r);
      const double a = r - l * kPi / 2.0;
      const double via_form = (std::sin(a) * p + std::cos(a) * q) / r;
      const double direct = std::sph_bessel(static_cast<unsigned>(l), r);
      CHECK(std::abs(via_form - direct) < 1e-9 * std::max(1.0, std::abs(p) + std::abs(q)) / r);
    }
}

TEST_CASE("oracle brackets Lambda") {
  const Discretization& d = base();
  const OracleResult o = lambda_oracle(d.constant(1.0), d, 40.0, 96);
  const double exact = 16.0 * std::pow(kPi, 4);
  CHECK(o.value < exact);
  CHECK(exact - o.value <= o.tail_bound);
  // larger cutoffs close the gap
  const OracleResult far = lambda_oracle(d.constant(1.0), d, 160.0, 384);
  CHECK(exact - far.value < exact - o.value);
  CHECK(far.tail_bound < o.tail_bound);

  for (int seed = 0; seed < 3; ++seed) {
    const SphereField f = random_band_limited(60 + seed, 4, small(), true);
    const double lv = lambda_value(f, small());
    const OracleResult of = lambda_oracle(f, small(), 40.0, 128);
    CHECK(std::abs(lv - of.value) <= of.tail_bound + 1e-4 * lv);
  }
}

TEST_CASE("oracle of a single harmonic is finite and positive") {
  const SphereField y = harmonic_field(3, -2, small());
  const OracleResult o = lambda_oracle(y, small(), 30.0, 96);
  CHECK(o.value > 0.0);
  CHECK(std::isfinite(o.tail_bound));
  CHECK_THROWS_AS(lambda_oracle(y, small(), -1.0, 10), std::invalid_argument);
}
