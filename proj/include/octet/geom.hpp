#pragma once
// Floating-point 3D primitives: vectors, 3x3 matrices and isometries.

#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>

namespace octet {

/// Absolute tolerance for unit-scale coordinates (one honeycomb edge is sqrt(2)).
inline constexpr double kTol = 1e-9;

struct Vec3 {
  double x = 0, y = 0, z = 0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
  constexpr Vec3& operator/=(double s) { x /= s; y /= s; z /= s; return *this; }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator/(Vec3 a, double s) { return a /= s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
  }
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double norm2(const Vec3& a) { return dot(a, a); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
constexpr double distance2(const Vec3& a, const Vec3& b) { return norm2(a - b); }

inline bool near(const Vec3& a, const Vec3& b, double tol = kTol) {
  return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol && std::abs(a.z - b.z) <= tol;
}

/// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static constexpr Mat3 identity() { return {}; }
  static constexpr Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
    return Mat3{{r0.x, r0.y, r0.z, r1.x, r1.y, r1.z, r2.x, r2.y, r2.z}};
  }
  static constexpr Mat3 from_cols(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    return Mat3{{c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z}};
  }

  constexpr double operator()(int r, int c) const { return m[static_cast<std::size_t>(r * 3 + c)]; }
  constexpr double& operator()(int r, int c) { return m[static_cast<std::size_t>(r * 3 + c)]; }

  constexpr Vec3 row(int r) const { return {(*this)(r, 0), (*this)(r, 1), (*this)(r, 2)}; }
  constexpr Vec3 col(int c) const { return {(*this)(0, c), (*this)(1, c), (*this)(2, c)}; }

  constexpr Mat3 transposed() const {
    Mat3 t;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t(r, c) = (*this)(c, r);
    return t;
  }

  constexpr double determinant() const {
    return dot(row(0), cross(row(1), row(2)));
  }

  friend constexpr Vec3 operator*(const Mat3& a, const Vec3& v) {
    return {dot(a.row(0), v), dot(a.row(1), v), dot(a.row(2), v)};
  }
  friend constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = dot(a.row(i), b.col(j));
    return r;
  }

  /// Inverse by cofactors; callers guarantee a non-singular matrix.
  Mat3 inverse() const {
    const Vec3 r0 = row(0), r1 = row(1), r2 = row(2);
    const Vec3 c0 = cross(r1, r2), c1 = cross(r2, r0), c2 = cross(r0, r1);
    return from_cols(c0, c1, c2) * (1.0 / dot(r0, c0));
  }

  friend Mat3 operator*(Mat3 a, double s) {
    for (double& v : a.m) v *= s;
    return a;
  }

  /// Max-abs deviation from another matrix.
  double distance_to(const Mat3& o) const {
    double d = 0;
    for (std::size_t i = 0; i < 9; ++i) d = std::max(d, std::abs(m[i] - o.m[i]));
    return d;
  }
};

/// Rotation by `angle` radians about the unit axis `axis` (right-hand rule).
inline Mat3 rotation_matrix(const Vec3& axis, double angle) {
  const Vec3 a = normalized(axis);
  const double c = std::cos(angle), s = std::sin(angle), t = 1 - c;
  return Mat3{{t * a.x * a.x + c, t * a.x * a.y - s * a.z, t * a.x * a.z + s * a.y,
               t * a.x * a.y + s * a.z, t * a.y * a.y + c, t * a.y * a.z - s * a.x,
               t * a.x * a.z - s * a.y, t * a.y * a.z + s * a.x, t * a.z * a.z + c}};
}

/// Householder reflection through the plane with (not necessarily unit) normal `n`.
inline Mat3 reflection_matrix(const Vec3& n) {
  const Vec3 u = normalized(n);
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (i == j ? 1.0 : 0.0) - 2 * u[i] * u[j];
  return r;
}

/// x -> linear * x + translation. `proper` records det(linear) == +1.
struct Isometry {
  Mat3 linear;
  Vec3 translation;
  bool proper = true;

  static Isometry identity() { return {}; }
  static Isometry translate(const Vec3& t) { return {Mat3::identity(), t, true}; }

  /// Rotation about the line through `point` with direction `axis`.
  static Isometry rotation(const Vec3& axis, double angle, const Vec3& point = {}) {
    const Mat3 r = rotation_matrix(axis, angle);
    return {r, point - r * point, true};
  }

  /// Reflection in the plane through `point` with normal `normal`.
  static Isometry reflection(const Vec3& normal, const Vec3& point = {}) {
    const Mat3 r = reflection_matrix(normal);
    return {r, point - r * point, false};
  }

  /// Point inversion through `center`.
  static Isometry inversion(const Vec3& center) {
    Mat3 r;
    r.m = {-1, 0, 0, 0, -1, 0, 0, 0, -1};
    return {r, 2 * center, false};
  }

  Vec3 operator()(const Vec3& p) const { return linear * p + translation; }
  Vec3 apply_vector(const Vec3& v) const { return linear * v; }

  Isometry inverse() const {
    const Mat3 t = linear.transposed();
    return {t, -(t * translation), proper};
  }

  /// Orthogonality defect and sign consistency, both to within `tol`.
  bool is_valid(double tol = kTol) const {
    const Mat3 g = linear.transposed() * linear;
    if (g.distance_to(Mat3::identity()) > tol) return false;
    return (linear.determinant() > 0) == proper;
  }

  bool near(const Isometry& o, double tol = kTol) const {
    return proper == o.proper && linear.distance_to(o.linear) <= tol &&
           octet::near(translation, o.translation, tol);
  }
};

/// a after b.
inline Isometry compose(const Isometry& a, const Isometry& b) {
  return {a.linear * b.linear, a.linear * b.translation + a.translation, a.proper == b.proper};
}

/// Rigid map taking the orthonormal frame (from_origin, from_axes) onto (to_origin, to_axes).
/// Axes are columns; both frames must have the same handedness for a proper result.
inline Isometry frame_map(const Vec3& from_origin, const Mat3& from_axes, const Vec3& to_origin,
                          const Mat3& to_axes) {
  const Mat3 r = to_axes * from_axes.transposed();
  return {r, to_origin - r * from_origin, r.determinant() > 0};
}

}  // namespace octet
