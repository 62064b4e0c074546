#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace rlab {

using cplx = std::complex<double>;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return s * a; }
  friend constexpr bool operator==(Vec3 a, Vec3 b) = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) { return (1.0 / norm(a)) * a; }

/// Row-major 3x3 matrix, used for rotations of the sphere.
struct Mat3 {
  std::array<double, 9> a{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double operator()(int r, int c) const { return a[3 * r + c]; }
  double& operator()(int r, int c) { return a[3 * r + c]; }

  friend Vec3 operator*(const Mat3& m, Vec3 v) {
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
  }
  friend Mat3 operator*(const Mat3& p, const Mat3& q) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += p(i, k) * q(k, j);
        r(i, j) = s;
      }
    return r;
  }
};

inline Mat3 transpose(const Mat3& m) {
  Mat3 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = m(j, i);
  return t;
}

/// Rotation by `angle` radians about the unit vector `axis` (Rodrigues).
inline Mat3 axis_angle(Vec3 axis, double angle) {
  const Vec3 u = normalized(axis);
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  Mat3 m;
  m(0, 0) = c + t * u.x * u.x;
  m(0, 1) = t * u.x * u.y - s * u.z;
  m(0, 2) = t * u.x * u.z + s * u.y;
  m(1, 0) = t * u.y * u.x + s * u.z;
  m(1, 1) = c + t * u.y * u.y;
  m(1, 2) = t * u.y * u.z - s * u.x;
  m(2, 0) = t * u.z * u.x - s * u.y;
  m(2, 1) = t * u.z * u.y + s * u.x;
  m(2, 2) = c + t * u.z * u.z;
  return m;
}

/// Frobenius distance between `m` and the identity.
inline double distance_to_identity(const Mat3& m) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double d = m(i, j) - (i == j ? 1.0 : 0.0);
      s += d * d;
    }
  return std::sqrt(s);
}

/// Largest entry of |M^T M - I|.
inline double orthogonality_defect(const Mat3& m) {
  const Mat3 p = transpose(m) * m;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(p(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

/// Orthonormal basis {e1, e2} of the plane perpendicular to `v`.
///
/// e1 is Gram-Schmidt of the coordinate axis least aligned with v (ties go to
/// the smallest axis index), e2 = v_hat x e1. Deterministic for a given v.
struct PerpFrame {
  Vec3 e1;
  Vec3 e2;
};

inline PerpFrame perpendicular_frame(Vec3 v) {
  const Vec3 n = normalized(v);
  const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
  Vec3 axis{1, 0, 0};
  if (ay < ax && ay <= az) {
    axis = {0, 1, 0};
  } else if (az < ax && az < ay) {
    axis = {0, 0, 1};
  }
  const Vec3 e1 = normalized(axis - dot(axis, n) * n);
  return {e1, cross(n, e1)};
}

}  // namespace rlab
