#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rlab/fields.hpp"
#include "rlab/phase.hpp"
#include "rlab/report_io.hpp"

using namespace rlab;

namespace {

constexpr double kPi = std::numbers::pi;

const Discretization& base() {
  static const Discretization d = Discretization::build(Resolution{});
  return d;
}

double max_diff(const SphereField& a, const SphereField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("modulation") {
  const SphereField f = random_band_limited(1, 4, base(), true);
  CHECK(max_diff(modulate(f, {0, 0, 0}), f) == 0.0);
  const Vec3 xi{0.4, -2.0, 1.3};
  CHECK(max_diff(modulate(modulate(f, xi), -1.0 * xi), f) < 1e-14);
  CHECK(std::abs(l2_norm(modulate(f, xi)) - l2_norm(f)) < 1e-13 * l2_norm(f));
}

TEST_CASE("extension argmax") {
  const SphereField one = base().constant(1.0);
  const ArgmaxResult a = extension_argmax(one, 10.0, 10);
  CHECK(norm(a.zeta) == 0.0);
  CHECK(a.value == doctest::Approx(4.0 * kPi).epsilon(1e-14));

  const Vec3 xi0{1.5, 0, 0};
  const ArgmaxResult b = extension_argmax(modulate(one, xi0), 10.0, 10);
  CHECK(norm(b.zeta - xi0) < 1e-6);
  CHECK(b.value >= b.coarse_value);

  // off-lattice target: refinement must find it
  const Vec3 xi1{0.37, -1.21, 0.66};
  const ArgmaxResult c = extension_argmax(modulate(one, xi1), 5.0, 5);
  CHECK(norm(c.zeta - xi1) < 1e-5);
  CHECK(c.value >= c.coarse_value);

  CHECK_THROWS(extension_argmax(SphereField(base().sphere), 10.0, 4));
  CHECK_THROWS(extension_argmax(one, 0.0, 4));
}

TEST_CASE("argmax value is rotation invariant") {
  const Vec3 xi0{0.7, -1.2, 0.4};
  auto field = [&](Vec3 x) { return std::polar(1.0, dot(x, xi0)) * (1.0 + 0.3 * x.x); };
  const Mat3 rot = axis_angle({1, 2, -1}, 0.6);
  const SphereField f = sample(base().sphere, field);
  const SphereField fr = sample(base().sphere, [&](Vec3 x) { return field(rot * x); });
  const ArgmaxResult a = extension_argmax(f, 5.0, 10);
  const ArgmaxResult b = extension_argmax(fr, 5.0, 10);
  CHECK(std::abs(a.value - b.value) < 1e-8 * a.value);
  CHECK(norm(b.zeta - transpose(rot) * a.zeta) < 1e-5);
}

TEST_CASE("fit recovers a constructed character") {
  const Discretization& d = base();
  const SphereField y20 = harmonic_field(2, 0, d);
  SphereField F = d.constant(1.0);
  F += 0.3 * y20;  // 1 + 0.3 Y20 > 0
  const SphereField f = cplx(0.7, 0.0) * modulate(F, {0, 2, 0});
  const CharacterFit fit = fit_character(f);
  CHECK(norm(fit.xi - Vec3{0, 2, 0}) < 1e-4);
  CHECK(fit.residual_rel < 1e-8);
  CHECK(std::abs(std::abs(fit.c) - 1.0) < 1e-12);
  CHECK(std::abs(character_residual(f, fit.xi, fit.c) - fit.residual_rel) < 1e-10);
}

TEST_CASE("fit is exact up to a constant phase") {
  const Discretization& d = base();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 4; ++trial) {
    const SphereField g = random_band_limited(100 + trial, 3, d, true);
    const SphereField F0 = modulus(g);
    const Vec3 xi0{3 * u(rng), 3 * u(rng), 3 * u(rng)};
    const cplx c0 = std::polar(1.0, kPi * u(rng));
    const SphereField f = c0 * modulate(F0, xi0);
    const CharacterFit fit = fit_character(f);
    CHECK(fit.residual_rel < 1e-8);
    // e^{i x.(xi - xi0)} c / c0 is one phase on the support
    const auto& nodes = d.sphere->nodes();
    const cplx ref = std::polar(1.0, dot(nodes[0], fit.xi - xi0)) * fit.c / c0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (std::abs(F0[i]) < 1e-12) continue;
      CHECK(std::abs(std::polar(1.0, dot(nodes[i], fit.xi - xi0)) * fit.c / c0 - ref) < 1e-6);
    }
  }
}

TEST_CASE("real nonnegative fields fit with xi = 0") {
  const SphereField g = random_band_limited(5, 3, base(), false);
  const SphereField F = modulus(g);
  const CharacterFit fit = fit_character(F);
  CHECK(norm(fit.xi) == 0.0);
  CHECK(fit.c == cplx(1.0, 0.0));
  CHECK(fit.residual_rel == 0.0);
}

TEST_CASE("recorded misfits") {
  const Discretization& d = base();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  const SphereField noise = sample(d.sphere, [&](Vec3) { return std::polar(1.0, u(rng)); });
  const double noise_defect = factorization_defect(noise);
  CHECK(noise_defect > 0.5);
  CHECK(noise_defect == doctest::Approx(1.2794).epsilon(1e-3));

  const double odd = factorization_defect(harmonic_field(1, 0, d));
  CHECK(odd == doctest::Approx(0.3836).epsilon(1e-3));
}

TEST_CASE("defect is modulation invariant") {
  const Discretization& d = base();
  const SphereField fields[] = {harmonic_field(1, 0, d), random_band_limited(9, 2, d, true)};
  for (const SphereField& f : fields) {
    const double a = factorization_defect(f);
    const double b = factorization_defect(modulate(f, {1, 0, 0}));
    CHECK(std::abs(a - b) < 1e-8);
  }
  CHECK_THROWS_AS(fit_character(SphereField(d.sphere)), std::domain_error);
}

TEST_CASE("character fit json") {
  CharacterFit fit;
  fit.xi = {0.1, 2.0, -0.3};
  fit.c = std::polar(1.0, 0.4);
  fit.residual_rel = 1e-9;
  fit.argmax_value = 12.5;
  const json j = to_json(fit);
  CHECK(j.size() == 5u);
  for (const char* key : {"xi", "c_re", "c_im", "residual_rel", "argmax_value"}) CHECK(j.contains(key));
  const CharacterFit back = character_fit_from_json(json::parse(j.dump()));
  CHECK(norm(back.xi - fit.xi) == 0.0);
  CHECK(back.c == fit.c);
  CHECK(back.residual_rel == fit.residual_rel);
}
