#pragma once

#include <cmath>

#include "rfscape/common.hpp"

namespace rfscape {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

inline Vec3 normalized(const Vec3& v) {
  double n = norm(v);
  if (n == 0.0) throw Error("cannot normalize zero vector");
  return v / n;
}

inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline bool finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

inline Vec3 abs(const Vec3& v) {
  return {std::fabs(v.x), std::fabs(v.y), std::fabs(v.z)};
}

inline Vec3 max(const Vec3& a, const Vec3& b) {
  return {std::fmax(a.x, b.x), std::fmax(a.y, b.y), std::fmax(a.z, b.z)};
}

inline Vec3 min(const Vec3& a, const Vec3& b) {
  return {std::fmin(a.x, b.x), std::fmin(a.y, b.y), std::fmin(a.z, b.z)};
}

// Unit quaternion, scalar-first. Rigid rotations only.
struct Quat {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  Quat() = default;
  Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

  static Quat identity() { return {}; }

  static Quat from_axis_angle(const Vec3& axis, double angle) {
    Vec3 u = normalized(axis);
    double h = 0.5 * angle;
    double s = std::sin(h);
    return {std::cos(h), u.x * s, u.y * s, u.z * s};
  }

  // Exponential map of a rotation vector (axis * angle).
  static Quat from_rotvec(const Vec3& r) {
    double a = norm(r);
    if (a < 1e-12) return {1.0, 0.5 * r.x, 0.5 * r.y, 0.5 * r.z};
    return from_axis_angle(r, a);
  }

  Quat conjugate() const { return {w, -x, -y, -z}; }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    double n = norm();
    if (n == 0.0) throw Error("cannot normalize zero quaternion");
    return {w / n, x / n, y / n, z / n};
  }

  Quat operator*(const Quat& q) const {
    return {w * q.w - x * q.x - y * q.y - z * q.z,
            w * q.x + x * q.w + y * q.z - z * q.y,
            w * q.y - x * q.z + y * q.w + z * q.x,
            w * q.z + x * q.y - y * q.x + z * q.w};
  }

  Vec3 rotate(const Vec3& v) const {
    // q v q* expanded via the double-cross identity.
    Vec3 u{x, y, z};
    Vec3 t = cross(u, v) * 2.0;
    return v + t * w + cross(u, t);
  }

  Vec3 rotate_inverse(const Vec3& v) const { return conjugate().rotate(v); }
};

inline bool approx_unit(const Quat& q, double tol = 1e-9) {
  return std::fabs(q.norm() - 1.0) <= tol;
}

inline bool approx_unit(const Vec3& v, double tol = 1e-9) {
  return std::fabs(norm(v) - 1.0) <= tol;
}

}  // namespace rfscape
