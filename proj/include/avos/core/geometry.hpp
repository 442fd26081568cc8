#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

namespace avos {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  constexpr double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a * s; }
  friend constexpr Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
  Vec3& operator+=(Vec3 o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double distance(Vec3 a, Vec3 b) { return norm(a - b); }
inline Vec3 normalized(Vec3 a) { return a / norm(a); }

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{};

  static constexpr Mat3 identity() { return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
  constexpr double operator()(int r, int c) const { return m[static_cast<size_t>(r * 3 + c)]; }
  constexpr double& operator()(int r, int c) { return m[static_cast<size_t>(r * 3 + c)]; }

  constexpr Mat3 transposed() const {
    Mat3 t;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t(c, r) = (*this)(r, c);
    return t;
  }
  friend constexpr Vec3 operator*(const Mat3& a, Vec3 v) {
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
  }
  friend constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 out;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += a(r, k) * b(k, c);
        out(r, c) = s;
      }
    return out;
  }
};

/// Axis-aligned box, closed on both sides.
struct Aabb {
  Vec3 min;
  Vec3 max;

  friend constexpr bool operator==(const Aabb&, const Aabb&) = default;

  Vec3 center() const { return (min + max) * 0.5; }
  Vec3 extent() const { return max - min; }
  bool valid() const { return min.x < max.x && min.y < max.y && min.z < max.z; }
  bool contains(Vec3 p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
           p.z <= max.z;
  }
  bool strictly_contains(Vec3 p) const {
    return p.x > min.x && p.x < max.x && p.y > min.y && p.y < max.y && p.z > min.z && p.z < max.z;
  }
  bool contains(const Aabb& b) const { return contains(b.min) && contains(b.max); }
  // Touching faces do not count as overlap.
  bool overlaps_interior(const Aabb& b) const {
    return min.x < b.max.x && b.min.x < max.x && min.y < b.max.y && b.min.y < max.y &&
           min.z < b.max.z && b.min.z < max.z;
  }
  Aabb inflated(double margin) const {
    const Vec3 d{margin, margin, margin};
    return {min - d, max + d};
  }
  Vec3 closest_point(Vec3 p) const {
    return {std::clamp(p.x, min.x, max.x), std::clamp(p.y, min.y, max.y),
            std::clamp(p.z, min.z, max.z)};
  }
  double distance_to(Vec3 p) const { return distance(p, closest_point(p)); }
};

/// Parametric slab test. Returns the [t_enter, t_exit] interval of the line
/// origin + t*dir inside the box, or nullopt when the line misses it.
inline std::optional<std::pair<double, double>> slab_interval(Vec3 origin, Vec3 dir,
                                                              const Aabb& box) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (dir[a] == 0.0) {
      if (origin[a] < box.min[a] || origin[a] > box.max[a]) return std::nullopt;
      continue;
    }
    const double inv = 1.0 / dir[a];
    double ta = (box.min[a] - origin[a]) * inv;
    double tb = (box.max[a] - origin[a]) * inv;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  return std::make_pair(t0, t1);
}

/// Distance along a ray (dir need not be unit; t is in units of dir) to the
/// first point of the box at or after the origin.
inline std::optional<double> ray_box_entry(Vec3 origin, Vec3 dir, const Aabb& box) {
  auto iv = slab_interval(origin, dir, box);
  if (!iv || iv->second < 0.0) return std::nullopt;
  return std::max(iv->first, 0.0);
}

/// True when the segment a->b passes through the open interior of the box
/// with positive length.
inline bool segment_crosses_interior(Vec3 a, Vec3 b, const Aabb& box) {
  const Vec3 d = b - a;
  double t0 = 0.0;
  double t1 = 1.0;
  for (int k = 0; k < 3; ++k) {
    if (d[k] == 0.0) {
      if (a[k] <= box.min[k] || a[k] >= box.max[k]) return false;
      continue;
    }
    const double inv = 1.0 / d[k];
    double ta = (box.min[k] - a[k]) * inv;
    double tb = (box.max[k] - a[k]) * inv;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 >= t1) return false;
  }
  return t1 - t0 > 0.0;
}

constexpr double kPi = 3.14159265358979323846;
constexpr double deg_to_rad(double d) { return d * kPi / 180.0; }
constexpr double rad_to_deg(double r) { return r * 180.0 / kPi; }

}  // namespace avos
