#include "rlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <optional>
#include <limits>
#include <random>

#include "rlab/fields.hpp"
#include "rlab/functional.hpp"
#include "rlab/phase.hpp"
#include "rlab/solver.hpp"

namespace rlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances.
constexpr double kTolDensity = 1e-8;     // 1: max relative error of sigma*sigma against 2 pi / |z|
constexpr double kMcSigmas = 4.0;        // 1: Monte Carlo agreement, in standard errors
constexpr double kTolConstantT = 1e-6;   // 2: relative deviation of T(1) from 8 pi^2
constexpr double kTolResidual = 1e-6;    // 2: el_residual(1, 2 pi)
constexpr double kTolMultiplier = 1e-6;  // 2: |multiplier_estimate(1) - 2 pi|
constexpr double kTolQ = 1e-6;           // 3: |q(1) - sqrt(2 pi)|
constexpr double kTolLambdaRel = 1e-4;   // 3, 9: relative slack on Lambda
constexpr double kTolInvariance = 1e-6;  // 4
constexpr double kTolDomination = 1e-10; // 5
constexpr double kTolSolver = 1e-8;      // 6: el_residual at exit
constexpr double kTolTail = 1e-10;       // 6: energy fraction in degrees [L/2, L]
constexpr double kMinValue = 1e-3;       // 6
constexpr double kTolEven = 1e-8;        // 6
constexpr double kTolXi = 1e-3;          // 8
constexpr double kTolFit = 1e-6;         // 8
constexpr double kTolDefect = 1e-8;      // 8
constexpr double kBaselineSlack = 1.05;  // 10

// Largest trilinear ratios over the 100 seeded triples, measured once at the
// criterion 10 resolution.
constexpr double kTrilinearBaselineH0 = 1.8625775;
constexpr double kTrilinearBaselineHalf = 1.3392329;

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

SphereField node_product(const SphereField& a, const SphereField& b) {
  SphereField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return out;
}

Resolution solver_resolution(bool quick) {
  if (quick) return Resolution{8, 16, 12, 16, 4};
  return Resolution{};
}

class Suite {
 public:
  explicit Suite(const AcceptanceOptions& opt) : opt_(opt) {}

  CriterionResult constant_density();
  CriterionResult constant_critical_point();
  CriterionResult constant_values();
  CriterionResult symmetry();
  CriterionResult domination();
  CriterionResult solver();
  CriterionResult contraction();
  CriterionResult phase();
  CriterionResult oracle_equivalence();
  CriterionResult trilinear();

 private:
  const Discretization& base() {
    if (!base_) base_ = Discretization::build(Resolution{}, opt_.backend);
    return *base_;
  }
  const Discretization& solver_disc() {
    if (!solver_disc_) solver_disc_ = Discretization::build(solver_resolution(opt_.quick), opt_.backend);
    return *solver_disc_;
  }
  SolverConfig solver_config() const {
    SolverConfig cfg;
    cfg.resolution = solver_resolution(opt_.quick);
    return cfg;
  }
  const CriticalPointReport& converged() {
    if (!converged_) {
      const Discretization& d = solver_disc();
      SphereField f0 = d.constant(1.0);
      f0 += 0.05 * random_even_perturbation(solver_config().seed, d);
      converged_ = power_iterate(f0, solver_config(), d);
    }
    return *converged_;
  }

  AcceptanceOptions opt_;
  std::optional<Discretization> base_;
  std::optional<Discretization> solver_disc_;
  std::optional<CriticalPointReport> converged_;
};

CriterionResult Suite::constant_density() {
  const Discretization& d = base();
  const SphereField one = d.constant(1.0);
  const BallField p = d.convolve(one, one);
  double worst = 0.0;
  for (std::size_t i = 0; i < p.values().size(); ++i) {
    const double exact = kCircleConstant / norm(p.grid().point(i));
    worst = std::max(worst, std::abs(p.values()[i] - exact) / exact);
  }

  // Independent pairs x, y uniform on S^2: |x + y| lands in [a, b] with probability
  // c0 (b^2 - a^2) / (8 pi) when the density of x + y is c0 / (16 pi^2 |z|).
  const long n = opt_.quick ? 1'000'000 : 10'000'000;
  const double edges[] = {0.0, 0.5, 1.0, 1.5, 2.0};
  long counts[4] = {0, 0, 0, 0};
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-1.0, 1.0), phi(0.0, 2.0 * kPi);
  auto draw = [&] {
    const double c = u(rng), a = phi(rng), s = std::sqrt(1.0 - c * c);
    return Vec3{s * std::cos(a), s * std::sin(a), c};
  };
  for (long k = 0; k < n; ++k) {
    const double r = norm(draw() + draw());
    const int bin = std::min(3, static_cast<int>(r / 0.5));
    ++counts[bin];
  }
  bool mc_ok = true;
  double worst_sigma = 0.0;
  for (int b = 0; b < 4; ++b) {
    const double span = edges[b + 1] * edges[b + 1] - edges[b] * edges[b];
    const double frac = static_cast<double>(counts[b]) / n;
    const double c0 = 8.0 * kPi * frac / span;
    const double se = 8.0 * kPi * std::sqrt(frac * (1.0 - frac) / n) / span;
    const double z = std::abs(c0 - 2.0 * kPi) / se;
    worst_sigma = std::max(worst_sigma, z);
    mc_ok = mc_ok && z <= kMcSigmas;
  }
  const double pooled = 8.0 * kPi * static_cast<double>(counts[1] + counts[2]) / n / (2.25 - 0.25);

  CriterionResult r;
  r.expected = "sigma*sigma(z) = 2pi/|z|; MC c0 = 2pi";
  r.actual = strf("max rel err %.2e; MC c0 %.5f (worst shell %.2f se)", worst, pooled, worst_sigma);
  r.tolerance = strf("%.0e rel; %.0f se", kTolDensity, kMcSigmas);
  r.pass = worst <= kTolDensity && mc_ok;
  return r;
}

CriterionResult Suite::constant_critical_point() {
  const Discretization& d = base();
  const SphereField one = d.constant(1.0);
  const SphereField t = d.cubic(one);
  // Closed form: T(1)(x) = 2 pi * integral of |x - y|^-1 over S^2 = 2 pi * 4 pi.
  const double expected = 2.0 * kPi * 4.0 * kPi;
  double worst = 0.0;
  for (const cplx v : t.values()) worst = std::max(worst, std::abs(v - expected) / expected);
  const double res = el_residual(one, t, 2.0 * kPi);
  const double mult = multiplier_estimate(one, t);

  CriterionResult r;
  r.expected = "T(1) = 8pi^2; residual(1, 2pi) = 0; multiplier = 2pi";
  r.actual = strf("max rel dev %.2e; residual %.2e; multiplier %.10f", worst, res, mult);
  r.tolerance = strf("%.0e / %.0e / %.0e", kTolConstantT, kTolResidual, kTolMultiplier);
  r.pass = worst <= kTolConstantT && res <= kTolResidual && std::abs(mult - 2.0 * kPi) <= kTolMultiplier;
  return r;
}

CriterionResult Suite::constant_values() {
  const Discretization& d = base();
  const SphereField one = d.constant(1.0);
  const double q = q_value(one, d);
  const double lv = lambda_value(one, d);
  const double exact = 16.0 * std::pow(kPi, 4);
  const OracleResult o = lambda_oracle(one, d, 40.0, 96);
  // The truncated oracle integral of a nonnegative integrand sits below Lambda by at most the tail.
  const bool bracket = o.value <= lv * (1.0 + kTolLambdaRel) && lv - o.value <= o.tail_bound + kTolLambdaRel * lv;

  CriterionResult r;
  r.expected = "q = sqrt(2pi); Lambda = 16pi^4; oracle(40) within tail";
  r.actual = strf("q %.10f; Lambda rel err %.2e; oracle %.4f tail %.4f gap %.4f", q, rel(lv, exact), o.value,
                  o.tail_bound, lv - o.value);
  r.tolerance = strf("%.0e abs / %.0e rel / tail + %.0e rel", kTolQ, kTolLambdaRel, kTolLambdaRel);
  r.pass = std::abs(q - std::sqrt(2.0 * kPi)) <= kTolQ && rel(lv, exact) <= kTolLambdaRel && bracket;
  return r;
}

CriterionResult Suite::symmetry() {
  // Band limit 12 resolves the modulated degree-3 fields to ~1e-14.
  const Discretization d = Discretization::build(Resolution{15, 30, 25, 28, 12}, opt_.backend);
  const int n_fields = opt_.quick ? 2 : 5;
  const std::vector<Mat3> rotations = {axis_angle({1, 2, 3}, 0.7), axis_angle({0, 0, 1}, 2.1),
                                       axis_angle({-1, 1, 0.5}, 1.3)};
  double worst = 0.0;
  for (int k = 0; k < n_fields; ++k) {
    const SphereField f = random_band_limited(401 + k, k == 0 ? 2 : 3, d, k != 0);
    const double base_value = lambda_value(f, d);
    std::vector<SphereField> images = {cplx(0.3, -1.7) * f, conjugate(f), antipodal(f), modulate(f, {1, 0, 0}),
                                       modulate(f, {0, 2, 0})};
    for (const Mat3& rot : rotations) images.push_back(rotate(f, rot, d.band_limit()));
    for (const SphereField& g : images) worst = std::max(worst, rel(lambda_value(g, d), base_value));
  }

  CriterionResult r;
  r.expected = "Lambda unchanged under scaling, 3 rotations, conjugation, antipode, 2 modulations";
  r.actual = strf("%d fields, max rel change %.2e", n_fields, worst);
  r.tolerance = strf("%.0e rel", kTolInvariance);
  r.pass = worst <= kTolInvariance;
  return r;
}

CriterionResult Suite::domination() {
  // f = g^2 keeps both f and |f| = |g|^2 band-limited, so both sides are exact.
  const Discretization& d = base();
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 5; ++k) {
    const SphereField g = random_band_limited(501 + k, 2, d, true);
    const SphereField f = node_product(g, g);
    const BallField pf = d.convolve(f, f);
    const SphereField mf = modulus(f);
    const BallField pm = d.convolve(mf, mf);
    for (std::size_t i = 0; i < pf.values().size(); ++i)
      worst = std::max(worst, std::abs(pf.values()[i]) - pm.values()[i].real());
  }

  CriterionResult r;
  r.expected = "|f sigma * f sigma| <= |f| sigma * |f| sigma node-wise";
  r.actual = strf("max(|Pf| - P|f|) = %.2e over 5 fields", worst);
  r.tolerance = strf("%.0e abs", kTolDomination);
  r.pass = worst <= kTolDomination;
  return r;
}

CriterionResult Suite::solver() {
  const CriticalPointReport& rep = converged();
  const double last = rep.history.back().residual;
  const double tail = rep.tail_fraction();

  CriterionResult r;
  r.expected = "converged <= 200 its; tail, min value, evenness";
  r.actual = strf("%zu its, residual %.2e, tail %.2e, min %.4f, even %.2e", rep.history.size(), last, tail,
                  rep.min_value, rep.evenness_defect);
  r.tolerance = strf("res %.0e, tail %.0e, min >= %.0e, even %.0e", kTolSolver, kTolTail, kMinValue, kTolEven);
  r.pass = rep.converged && last < kTolSolver && rep.history.size() <= 200 && tail < kTolTail &&
           rep.min_value >= kMinValue && rep.evenness_defect < kTolEven;
  return r;
}

CriterionResult Suite::contraction() {
  SolverConfig cfg = solver_config();
  cfg.eps_split = 0.05;
  const CriticalPointReport rep = contraction_solve(converged().final_field, cfg, solver_disc());
  const ContractionDiagnostics& c = *rep.contraction;

  CriterionResult r;
  r.expected = "Picard ratio < 1, iterates inside eps^(3/4) ball";
  r.actual = strf("%zu steps, ratio %.2e, max dist %.2e of radius %.4f", c.increments.size(), c.contraction_ratio,
                  c.max_ball_distance, c.ball_radius);
  r.tolerance = "ratio < 1";
  r.pass = c.ratio_measured && c.contraction_ratio < 1.0 && c.stayed_in_ball && c.converged;
  return r;
}

CriterionResult Suite::phase() {
  const Vec3 xi0{0, 2, 0};
  const SphereField g = modulate(converged().final_field, xi0);
  const CharacterFit fit = fit_character(g, 10.0);
  const double xi_err = norm(fit.xi - xi0);

  const Vec3 shift{1, 0, 0};
  double defect_change = 0.0;
  const SphereField odd = harmonic_field(1, 0, solver_disc());
  for (const SphereField* h : {&g, &odd})
    defect_change = std::max(defect_change, std::abs(factorization_defect(modulate(*h, shift)) - factorization_defect(*h)));

  CriterionResult r;
  r.expected = "xi = (0,2,0), residual ~ 0, defect modulation-invariant";
  r.actual = strf("|xi - xi0| %.2e, residual %.2e, defect change %.2e", xi_err, fit.residual_rel, defect_change);
  r.tolerance = strf("%.0e / %.0e / %.0e", kTolXi, kTolFit, kTolDefect);
  r.pass = xi_err <= kTolXi && fit.residual_rel < kTolFit && defect_change <= kTolDefect;
  return r;
}

CriterionResult Suite::oracle_equivalence() {
  const Discretization d = Discretization::build(Resolution{8, 16, 12, 16, 4}, opt_.backend);
  const int n_fields = opt_.quick ? 1 : 3;
  bool ok = true;
  double worst_gap = 0.0, worst_tail = 0.0;
  for (int k = 0; k < n_fields; ++k) {
    const SphereField f = random_band_limited(901 + k, 4, d, true);
    const double lv = lambda_value(f, d);
    const OracleResult o = lambda_oracle(f, d, 80.0, 256);
    const double gap = lv - o.value;
    ok = ok && std::abs(gap) <= o.tail_bound + kTolLambdaRel * lv;
    worst_gap = std::max(worst_gap, std::abs(gap) / lv);
    worst_tail = std::max(worst_tail, o.tail_bound / lv);
  }

  CriterionResult r;
  r.expected = "|Lambda - oracle(80)| <= tail + 1e-4 Lambda";
  r.actual = strf("%d fields, max gap %.3f Lambda, max tail %.3f Lambda", n_fields, worst_gap, worst_tail);
  r.tolerance = strf("tail + %.0e rel", kTolLambdaRel);
  r.pass = ok;
  return r;
}

CriterionResult Suite::trilinear() {
  // n_circle 24 is exact for band limit 8 and keeps 100 triples affordable.
  const Discretization d = Discretization::build(Resolution{12, 24, 20, 24, 8}, opt_.backend);
  const int n_triples = opt_.quick ? 20 : 100;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> degree(1, 8);
  double m0 = 0.0, m5 = 0.0;
  for (int k = 0; k < n_triples; ++k) {
    SphereField h[3];
    for (auto& hi : h) {
      const auto seed = rng();
      hi = random_band_limited(seed, degree(rng), d, true);
    }
    const HarmonicSpectrum out = analyze(d.trilinear(h[1], h[2], h[0]), d.band_limit());
    double r0 = sobolev_norm(out, 0.0), r5 = sobolev_norm(out, 0.5);
    for (const auto& hi : h) {
      const HarmonicSpectrum s = analyze(hi, d.band_limit());
      r0 /= sobolev_norm(s, 0.0);
      r5 /= sobolev_norm(s, 0.5);
    }
    m0 = std::max(m0, r0);
    m5 = std::max(m5, r5);
  }

  CriterionResult r;
  r.expected = strf("H^0 <= %.7f, H^0.5 <= %.7f (x%.2f)", kTrilinearBaselineH0, kTrilinearBaselineHalf, kBaselineSlack);
  r.actual = strf("%d triples, max H^0 %.7f, max H^0.5 %.7f", n_triples, m0, m5);
  r.tolerance = strf("baseline x %.2f", kBaselineSlack);
  r.pass = m0 <= kTrilinearBaselineH0 * kBaselineSlack && m5 <= kTrilinearBaselineHalf * kBaselineSlack;
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, const CriterionCallback& on_result) {
  struct Entry {
    int id;
    const char* name;
    double budget;
    CriterionResult (Suite::*run)();
  };
  const Entry entries[] = {
      {1, "constant-density law", 10.0, &Suite::constant_density},
      {2, "constant critical point", 30.0, &Suite::constant_critical_point},
      {3, "functional values at the constant", 120.0, &Suite::constant_values},
      {4, "symmetry suite", 120.0, &Suite::symmetry},
      {5, "pointwise domination", 60.0, &Suite::domination},
      {6, "solver convergence", 180.0, &Suite::solver},
      {7, "contraction illustration", 120.0, &Suite::contraction},
      {8, "phase factorization", 60.0, &Suite::phase},
      {9, "oracle equivalence", 180.0, &Suite::oracle_equivalence},
      {10, "trilinear-bound regression", 180.0, &Suite::trilinear},
  };
  Suite suite(opt);
  std::vector<CriterionResult> results;
  for (const Entry& e : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = (suite.*e.run)();
    } catch (const std::exception& ex) {
      r.actual = std::string("error: ") + ex.what();
      r.pass = false;
    }
    r.id = e.id;
    r.name = e.name;
    r.seconds = seconds_since(t0);
    r.budget_seconds = e.budget;
    if (r.seconds > r.budget_seconds) r.pass = false;
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  return strf("%s [%2d] %-34s | expected: %s | actual: %s | tol: %s | %.1f s (budget %.0f s)",
              r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.expected.c_str(), r.actual.c_str(),
              r.tolerance.c_str(), r.seconds, r.budget_seconds);
}

json to_json(const CriterionResult& r) {
  return {{"id", r.id},           {"name", r.name},       {"expected", r.expected},
          {"actual", r.actual},   {"tolerance", r.tolerance}, {"pass", r.pass},
          {"seconds", r.seconds}, {"budget_seconds", r.budget_seconds}};
}

}  // namespace rlab
