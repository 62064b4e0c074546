#include "rlab/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace rlab {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

void require_same_nodes(const SphereField& a, const SphereField& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("fields live on different quadratures");
  }
}


constexpr std::size_t kBlock = 64;

/// Walks all harmonics for a block of at most kBlock points and calls
/// visit(l, m, y) with y[p] = Y_{l,m}(point p) for each (l, m), m negative included.
template <class Visit>
void for_each_harmonic(const LegendreTables& t, int L, const double* x, const double* y,
                       const double* z, std::size_t nb, Visit&& visit) {
  alignas(64) double qmm[kBlock], cm[kBlock], sm[kBlock];
  alignas(64) double q0[kBlock], q1[kBlock], q2[kBlock], val[kBlock];
  const double root2 = std::numbers::sqrt2;
  for (std::size_t p = 0; p < nb; ++p) {
    qmm[p] = 1.0 / std::sqrt(kFourPi);
    cm[p] = 1.0;
    sm[p] = 0.0;
  }
  for (int m = 0; m <= L; ++m) {
    if (m > 0) {
      const double d = t.diag[m];
      for (std::size_t p = 0; p < nb; ++p) {
        qmm[p] *= d;
        const double c = cm[p] * x[p] - sm[p] * y[p];
        const double s = cm[p] * y[p] + sm[p] * x[p];
        cm[p] = c;
        sm[p] = s;
      }
    }
    for (int l = m; l <= L; ++l) {
      if (l == m) {
        for (std::size_t p = 0; p < nb; ++p) q0[p] = qmm[p];
      } else if (l == m + 1) {
        const double c = t.sub[m];
        for (std::size_t p = 0; p < nb; ++p) {
          q1[p] = q0[p];
          q0[p] = c * z[p] * q1[p];
        }
      } else {
        const double a = t.a[HarmonicSpectrum::index(l, m)];
        const double b = t.b[HarmonicSpectrum::index(l, m)];
        for (std::size_t p = 0; p < nb; ++p) {
          q2[p] = q1[p];
          q1[p] = q0[p];
          q0[p] = a * (z[p] * q1[p] - b * q2[p]);
        }
      }
      if (m == 0) {
        visit(l, 0, static_cast<const double*>(q0));
      } else {
        for (std::size_t p = 0; p < nb; ++p) val[p] = root2 * q0[p] * cm[p];
        visit(l, m, static_cast<const double*>(val));
        for (std::size_t p = 0; p < nb; ++p) val[p] = root2 * q0[p] * sm[p];
        visit(l, -m, static_cast<const double*>(val));
      }
    }
  }
}

}  // namespace

LegendreTables::LegendreTables(int L)
    : diag(L + 1, 1.0), sub(L + 1, 0.0), a(static_cast<std::size_t>(L + 1) * (L + 1)), b(a.size()) {
  for (int m = 1; m <= L; ++m) diag[m] = std::sqrt((2.0 * m + 1.0) / (2.0 * m));
  for (int m = 0; m <= L; ++m) sub[m] = std::sqrt(2.0 * m + 3.0);
  for (int m = 0; m <= L; ++m)
    for (int l = m + 2; l <= L; ++l) {
      const double ll = l, mm = m;
      a[HarmonicSpectrum::index(l, m)] = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
      b[HarmonicSpectrum::index(l, m)] =
          std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
    }
}

SphereField::SphereField(SphereQuadraturePtr q, std::vector<cplx> values)
    : q_(std::move(q)), values_(std::move(values)) {
  if (!q_) throw std::invalid_argument("SphereField needs a quadrature");
  if (values_.size() != q_->size()) {
    throw std::invalid_argument("SphereField: value count does not match node count");
  }
}

SphereField::SphereField(SphereQuadraturePtr q) : q_(std::move(q)) {
  if (!q_) throw std::invalid_argument("SphereField needs a quadrature");
  values_.assign(q_->size(), cplx{});
}

SphereField& SphereField::operator+=(const SphereField& o) {
  require_same_nodes(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

SphereField& SphereField::operator-=(const SphereField& o) {
  require_same_nodes(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

SphereField& SphereField::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

cplx inner(const SphereField& f, const SphereField& g) {
  require_same_nodes(f, g);
  std::vector<cplx> prod(f.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = f[i] * std::conj(g[i]);
  return integrate_sphere(f.quadrature(), prod);
}

double l2_norm(const SphereField& f) {
  std::vector<double> sq(f.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = std::norm(f[i]);
  return std::sqrt(integrate_sphere(f.quadrature(), sq));
}

SphereField antipodal(const SphereField& f) {
  SphereField out(f.quadrature_ptr());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[f.quadrature().antipode(i)];
  return out;
}

SphereField conjugate(const SphereField& f) {
  SphereField out = f;
  for (auto& v : out.values()) v = std::conj(v);
  return out;
}

SphereField modulus(const SphereField& f) {
  SphereField out = f;
  for (auto& v : out.values()) v = std::abs(v);
  return out;
}

HarmonicSpectrum::HarmonicSpectrum(int band_limit) : band_limit_(band_limit) {
  if (band_limit < 0) throw std::invalid_argument("band limit must be nonnegative");
  coeffs_.assign(static_cast<std::size_t>(band_limit + 1) * (band_limit + 1), cplx{});
}

HarmonicSpectrum::HarmonicSpectrum(int band_limit, std::vector<cplx> coefficients)
    : band_limit_(band_limit), coeffs_(std::move(coefficients)) {
  if (band_limit < 0) throw std::invalid_argument("band limit must be nonnegative");
  if (coeffs_.size() != static_cast<std::size_t>(band_limit + 1) * (band_limit + 1)) {
    throw std::invalid_argument("spectrum coefficient count does not match band limit");
  }
}

bool HarmonicSpectrum::is_real() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c.imag() == 0.0; });
}

std::vector<double> HarmonicSpectrum::degree_energies() const {
  std::vector<double> e(band_limit_ + 1, 0.0);
  for (int l = 0; l <= band_limit_; ++l)
    for (int m = -l; m <= l; ++m) e[l] += std::norm(at(l, m));
  return e;
}

HarmonicSpectrum HarmonicSpectrum::truncated(int degree) const {
  HarmonicSpectrum out(band_limit_);
  const int top = std::min(degree, band_limit_);
  for (int l = 0; l <= top; ++l)
    for (int m = -l; m <= l; ++m) out.at(l, m) = at(l, m);
  return out;
}

double real_harmonic(int l, int m, Vec3 x) {
  const double theta = std::acos(std::clamp(x.z, -1.0, 1.0));
  const double phi = std::atan2(x.y, x.x);
  const int am = std::abs(m);
  // sph_legendre carries the Condon-Shortley factor (-1)^m; undo it.
  const double p = (am % 2 ? -1.0 : 1.0) * std::sph_legendre(l, am, theta);
  if (m == 0) return p;
  return std::numbers::sqrt2 * p * (m > 0 ? std::cos(am * phi) : std::sin(am * phi));
}

cplx evaluate_reference(const HarmonicSpectrum& s, Vec3 x) {
  cplx acc{};
  for (int l = 0; l <= s.band_limit(); ++l)
    for (int m = -l; m <= l; ++m) acc += s.at(l, m) * real_harmonic(l, m, x);
  return acc;
}

HarmonicEvaluator::HarmonicEvaluator(HarmonicSpectrum s)
    : spectrum_(std::move(s)), tables_(spectrum_.band_limit()), real_(spectrum_.is_real()) {}

void HarmonicEvaluator::evaluate_soa(const double* x, const double* y, const double* z, std::size_t n,
                                     double* out_re, double* out_im) const {
  const int L = spectrum_.band_limit();
  const LegendreTables& tables = tables_;
  const auto c = spectrum_.coefficients();
  const bool real = real_;
  for (std::size_t start = 0; start < n; start += kBlock) {
    const std::size_t nb = std::min(kBlock, n - start);
    double* re = out_re + start;
    double* im = out_im + start;
    std::fill(re, re + nb, 0.0);
    std::fill(im, im + nb, 0.0);
    for_each_harmonic(tables, L, x + start, y + start, z + start, nb,
                      [&](int l, int m, const double* yv) {
                        const cplx a = c[HarmonicSpectrum::index(l, m)];
                        const double ar = a.real(), ai = a.imag();
                        if (ar != 0.0)
                          for (std::size_t p = 0; p < nb; ++p) re[p] += ar * yv[p];
                        if (!real && ai != 0.0)
                          for (std::size_t p = 0; p < nb; ++p) im[p] += ai * yv[p];
                      });
  }
}

void evaluate_soa(const HarmonicSpectrum& s, const double* x, const double* y, const double* z,
                  std::size_t n, double* out_re, double* out_im) {
  HarmonicEvaluator(s).evaluate_soa(x, y, z, n, out_re, out_im);
}

void evaluate(const HarmonicSpectrum& s, std::span<const Vec3> points, std::span<cplx> out) {
  if (out.size() != points.size()) throw std::invalid_argument("evaluate: output size mismatch");
  const std::size_t n = points.size();
  std::vector<double> buf(5 * n);
  double* x = buf.data();
  double* y = x + n;
  double* z = y + n;
  double* re = z + n;
  double* im = re + n;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = points[i].x;
    y[i] = points[i].y;
    z[i] = points[i].z;
  }
  evaluate_soa(s, x, y, z, n, re, im);
  for (std::size_t i = 0; i < n; ++i) out[i] = {re[i], im[i]};
}

cplx evaluate(const HarmonicSpectrum& s, Vec3 point) {
  cplx out;
  evaluate(s, std::span<const Vec3>(&point, 1), std::span<cplx>(&out, 1));
  return out;
}

HarmonicSpectrum analyze(const SphereField& f, int band_limit) {
  const SphereQuadrature& q = f.quadrature();
  if (band_limit < 0) throw std::invalid_argument("analyze: negative band limit");
  if (q.degree() < 2 * band_limit) {
    throw std::invalid_argument("analyze: quadrature degree " + std::to_string(q.degree()) +
                                " cannot resolve band limit " + std::to_string(band_limit));
  }
  const LegendreTables tables(band_limit);
  const auto nodes = q.nodes();
  const auto w = q.weights();
  std::vector<cplx> acc(static_cast<std::size_t>(band_limit + 1) * (band_limit + 1));
  alignas(64) double x[kBlock], y[kBlock], z[kBlock], wr[kBlock], wi[kBlock];
  for (std::size_t start = 0; start < nodes.size(); start += kBlock) {
    const std::size_t nb = std::min(kBlock, nodes.size() - start);
    for (std::size_t p = 0; p < nb; ++p) {
      const Vec3& v = nodes[start + p];
      x[p] = v.x;
      y[p] = v.y;
      z[p] = v.z;
      const cplx fw = w[start + p] * f[start + p];
      wr[p] = fw.real();
      wi[p] = fw.imag();
    }
    for_each_harmonic(tables, band_limit, x, y, z, nb, [&](int l, int m, const double* yv) {
      double sr = 0.0, si = 0.0;
      for (std::size_t p = 0; p < nb; ++p) {
        sr += wr[p] * yv[p];
        si += wi[p] * yv[p];
      }
      acc[HarmonicSpectrum::index(l, m)] += cplx(sr, si);
    });
  }
  return HarmonicSpectrum(band_limit, std::move(acc));
}

SphereField synthesize(const HarmonicSpectrum& s, SphereQuadraturePtr q) {
  std::vector<cplx> v(q->size());
  evaluate(s, q->nodes(), v);
  return SphereField(std::move(q), std::move(v));
}

double sobolev_norm(const HarmonicSpectrum& s, double order) {
  if (!(order >= 0.0)) throw std::invalid_argument("sobolev_norm: order must be >= 0");
  const auto e = s.degree_energies();
  CompensatedSum<double> acc;
  for (int l = 0; l <= s.band_limit(); ++l) {
    acc.add(std::pow(1.0 + l * (l + 1.0), order) * e[l]);
  }
  return std::sqrt(acc.value());
}

SphereField rotate(const SphereField& f, const Mat3& rotation, int band_limit) {
  const HarmonicSpectrum s = analyze(f, band_limit);
  std::vector<Vec3> pts;
  pts.reserve(f.size());
  for (const Vec3& x : f.quadrature().nodes()) pts.push_back(rotation * x);
  std::vector<cplx> v(pts.size());
  evaluate(s, pts, v);
  return SphereField(f.quadrature_ptr(), std::move(v));
}

std::vector<Mat3> standard_rotations() {
  constexpr int kCount = 20;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Mat3> out;
  out.reserve(kCount);
  for (int k = 0; k < kCount; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / kCount;
    const double r = std::sqrt(1.0 - z * z);
    const Vec3 axis{r * std::cos(golden * k), r * std::sin(golden * k), z};
    const double angle = 1e-3 * std::pow(1e3, static_cast<double>(k) / (kCount - 1));
    out.push_back(axis_angle(axis, angle));
  }
  return out;
}

double rotation_modulus(const SphereField& f, double order, std::span<const Mat3> rotations,
                        int band_limit) {
  if (!(order > 0.0 && order < 1.0)) throw std::invalid_argument("rotation_modulus: order must lie in (0,1)");
  for (const Mat3& r : rotations) {
    if (orthogonality_defect(r) > 1e-12) throw std::invalid_argument("rotation_modulus: matrix is not orthogonal");
  }
  const HarmonicSpectrum s = analyze(f, band_limit);
  const SphereField base = synthesize(s, f.quadrature_ptr());
  double best = 0.0;
  std::vector<Vec3> pts(f.size());
  std::vector<cplx> v(f.size());
  for (const Mat3& r : rotations) {
    const double dist = distance_to_identity(r);
    if (dist == 0.0) continue;
    const auto nodes = f.quadrature().nodes();
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = r * nodes[i];
    evaluate(s, pts, v);
    SphereField diff(f.quadrature_ptr(), v);
    diff -= base;
    best = std::max(best, std::pow(dist, -order) * l2_norm(diff));
  }
  return best;
}

SmoothSplit smooth_split(const SphereField& f, double eps, int band_limit) {
  if (!(eps > 0.0)) throw std::invalid_argument("smooth_split: eps must be positive");
  const HarmonicSpectrum s = analyze(f, band_limit);
  for (int k = 0; k <= band_limit; ++k) {
    SphereField smooth = synthesize(s.truncated(k), f.quadrature_ptr());
    SphereField rough = f - smooth;
    if (l2_norm(rough) < eps) return {std::move(smooth), std::move(rough), k};
  }
  throw ResolutionExhausted("smooth_split: no truncation up to degree " + std::to_string(band_limit) +
                            " leaves a remainder below eps");
}

void write_spectrum_csv(std::ostream& os, const HarmonicSpectrum& s) {
  os << "l,m,re,im\n";
  os << std::setprecision(17);
  for (int l = 0; l <= s.band_limit(); ++l)
    for (int m = -l; m <= l; ++m) {
      const cplx c = s.at(l, m);
      os << l << ',' << m << ',' << c.real() << ',' << c.imag() << '\n';
    }
}

HarmonicSpectrum read_spectrum_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("spectrum csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "l,m,re,im") throw std::runtime_error("spectrum csv: expected header 'l,m,re,im'");
  struct Row {
    int l, m;
    double re, im;
  };
  std::vector<Row> rows;
  int max_l = -1;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    Row r{};
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(ls >> r.l >> c1 >> r.m >> c2 >> r.re >> c3 >> r.im) || c1 != ',' || c2 != ',' || c3 != ',' ||
        r.l < 0 || std::abs(r.m) > r.l) {
      throw std::runtime_error("spectrum csv: malformed row at line " + std::to_string(lineno));
    }
    ls >> std::ws;
    if (!ls.eof()) throw std::runtime_error("spectrum csv: trailing data at line " + std::to_string(lineno));
    max_l = std::max(max_l, r.l);
    rows.push_back(r);
  }
  if (max_l < 0) throw std::runtime_error("spectrum csv: no coefficients");
  HarmonicSpectrum s(max_l);
  for (const Row& r : rows) s.at(r.l, r.m) = {r.re, r.im};
  return s;
}

}  // namespace rlab
