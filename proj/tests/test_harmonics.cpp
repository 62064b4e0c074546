#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "rlab/fields.hpp"
#include "rlab/harmonics.hpp"

using namespace rlab;

namespace {

HarmonicSpectrum random_spectrum(int L, unsigned seed, bool complex = true) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  HarmonicSpectrum s(L);
  for (int l = 0; l <= L; ++l)
    for (int m = -l; m <= l; ++m) s.at(l, m) = complex ? cplx(n(rng), n(rng)) : cplx(n(rng), 0.0);
  return s;
}

double max_diff(const SphereField& a, const SphereField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("real harmonics are orthonormal") {
  const int L = 6;
  auto q = build_sphere_quadrature(L + 1, 2 * L + 2);
  for (int l1 = 0; l1 <= L; ++l1)
    for (int m1 = -l1; m1 <= l1; ++m1)
      for (int l2 = 0; l2 <= L; ++l2)
        for (int m2 = -l2; m2 <= l2; ++m2) {
          double s = 0.0;
          for (std::size_t i = 0; i < q->size(); ++i)
            s += q->weights()[i] * real_harmonic(l1, m1, q->nodes()[i]) * real_harmonic(l2, m2, q->nodes()[i]);
          CHECK(std::abs(s - ((l1 == l2 && m1 == m2) ? 1.0 : 0.0)) < 1e-12);
        }
}

TEST_CASE("fast evaluator matches the reference evaluation") {
  const HarmonicSpectrum s = random_spectrum(12, 3);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Vec3 x = normalized(Vec3{n(rng), n(rng), n(rng)});
    CHECK(std::abs(evaluate(s, x) - evaluate_reference(s, x)) < 1e-12);
  }
  // poles and the equator
  for (Vec3 x : {Vec3{0, 0, 1}, Vec3{0, 0, -1}, Vec3{1, 0, 0}, Vec3{0, -1, 0}})
    CHECK(std::abs(evaluate(s, x) - evaluate_reference(s, x)) < 1e-12);
}

TEST_CASE("analyze inverts synthesize and Parseval holds") {
  auto q = build_sphere_quadrature(12, 24);
  const HarmonicSpectrum s = random_spectrum(8, 5);
  const SphereField f = synthesize(s, q);
  const HarmonicSpectrum back = analyze(f, 8);
  double energy = 0.0;
  for (int l = 0; l <= 8; ++l)
    for (int m = -l; m <= l; ++m) {
      CHECK(std::abs(back.at(l, m) - s.at(l, m)) < 1e-10);
      energy += std::norm(s.at(l, m));
    }
  CHECK(std::abs(energy - std::pow(l2_norm(f), 2)) < 1e-10 * energy);
  CHECK_THROWS_AS(analyze(f, 12), std::invalid_argument);
}

TEST_CASE("antipodal map flips odd degrees") {
  auto q = build_sphere_quadrature(8, 16);
  for (int l = 0; l <= 5; ++l) {
    HarmonicSpectrum s(l);
    s.at(l, l > 0 ? 1 : 0) = 1.0;
    const SphereField f = synthesize(s, q);
    const SphereField a = antipodal(f);
    const double sign = l % 2 ? -1.0 : 1.0;
    CHECK(max_diff(a, sign * f) < 1e-14);
  }
}

TEST_CASE("rotation acts on band-limited fields exactly") {
  auto q = build_sphere_quadrature(10, 20);
  auto poly = [](Vec3 x) { return cplx(x.x * x.y + 0.3 * x.z, x.z * x.z - x.x); };
  const SphereField f = sample(q, poly);
  const Mat3 r = axis_angle({1, -2, 0.5}, 0.9);
  const SphereField fr = rotate(f, r, 2);
  const SphereField direct = sample(q, [&](Vec3 x) { return poly(r * x); });
  CHECK(max_diff(fr, direct) < 1e-13);

  const auto e0 = analyze(f, 2).degree_energies();
  const auto e1 = analyze(fr, 2).degree_energies();
  for (std::size_t l = 0; l < e0.size(); ++l) CHECK(std::abs(e0[l] - e1[l]) < 1e-13);
}

TEST_CASE("sobolev norms of single harmonics") {
  for (int l = 0; l <= 6; ++l) {
    HarmonicSpectrum s(6);
    s.at(l, 0) = 1.0;
    for (double order : {0.0, 0.5, 1.0, 2.0})
      CHECK(sobolev_norm(s, order) == doctest::Approx(std::pow(1.0 + l * (l + 1.0), order / 2.0)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(sobolev_norm(HarmonicSpectrum(2), -0.5), std::invalid_argument);
}

TEST_CASE("rotation modulus") {
  auto q = build_sphere_quadrature(10, 20);
  const auto rots = standard_rotations();
  CHECK(rots.size() == 20u);
  for (const Mat3& r : rots) CHECK(orthogonality_defect(r) < 1e-12);
  const SphereField one(q, std::vector<cplx>(q->size(), 1.0));
  CHECK(rotation_modulus(one, 0.5, rots, 4) < 1e-12);
  const SphereField f = synthesize(random_spectrum(4, 8), q);
  const double w = rotation_modulus(f, 0.5, rots, 4);
  CHECK(w > 0.0);
  CHECK(std::isfinite(w));
  CHECK_THROWS(rotation_modulus(f, 1.0, rots, 4));
}

TEST_CASE("smooth split") {
  auto q = build_sphere_quadrature(10, 20);
  HarmonicSpectrum s(6);
  s.at(0, 0) = 1.0;
  s.at(3, 1) = 1e-3;
  s.at(6, -2) = 1e-6;
  const SphereField f = synthesize(s, q);
  const SmoothSplit a = smooth_split(f, 1e-2, 6);
  CHECK(a.degree == 0);
  CHECK(l2_norm(a.rough) < 1e-2);
  const SmoothSplit b = smooth_split(f, 1e-4, 6);
  CHECK(b.degree == 3);
  CHECK(max_diff(b.smooth + b.rough, f) < 1e-15);
  CHECK_THROWS_AS(smooth_split(f, 1e-9, 4), ResolutionExhausted);
}

TEST_CASE("spectrum csv round trip is exact") {
  const HarmonicSpectrum s = random_spectrum(5, 11);
  std::stringstream ss;
  write_spectrum_csv(ss, s);
  CHECK(ss.str().rfind("l,m,re,im\n", 0) == 0);
  const HarmonicSpectrum back = read_spectrum_csv(ss);
  REQUIRE(back.band_limit() == 5);
  for (int l = 0; l <= 5; ++l)
    for (int m = -l; m <= l; ++m) CHECK(back.at(l, m) == s.at(l, m));

  std::stringstream bad("l,m,re,im\n0,0,1.0\n");
  CHECK_THROWS(read_spectrum_csv(bad));
  std::stringstream header("a,b,c,d\n0,0,1,0\n");
  CHECK_THROWS(read_spectrum_csv(header));
  std::stringstream range("l,m,re,im\n1,2,1,0\n");
  CHECK_THROWS(read_spectrum_csv(range));
}
