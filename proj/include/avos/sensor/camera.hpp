#pragma once

#include <cmath>
#include <vector>

#include "avos/core/errors.hpp"
#include "avos/core/geometry.hpp"

namespace avos::sensor {

/// Pinhole intrinsics. Pixel (u, v) samples the ray through image
/// coordinate (u, v); the principal pixel is (cx, cy).
struct CameraModel {
  double fx = 320.0;
  double fy = 320.0;
  double cx = 320.0;
  double cy = 240.0;
  int width = 640;
  int height = 480;
  double max_range = 60.0;

  /// Square pixels, principal point at (width/2, height/2).
  static CameraModel from_fov(int width, int height, double hfov_deg, double max_range) {
    CameraModel c;
    c.width = width;
    c.height = height;
    c.fx = (width / 2.0) / std::tan(deg_to_rad(hfov_deg) / 2.0);
    c.fy = c.fx;
    c.cx = width / 2.0;
    c.cy = height / 2.0;
    c.max_range = max_range;
    return c;
  }

  Mat3 intrinsics() const { return Mat3{{fx, 0, cx, 0, fy, cy, 0, 0, 1}}; }
  Mat3 inverse_intrinsics() const {
    return Mat3{{1.0 / fx, 0, -cx / fx, 0, 1.0 / fy, -cy / fy, 0, 0, 1}};
  }
  /// K^-1 [u, v, 1]: camera-frame direction with unit z.
  Vec3 unproject_unit_z(double u, double v) const { return {(u - cx) / fx, (v - cy) / fy, 1.0}; }

  std::vector<Violation> validate() const {
    std::vector<Violation> out;
    if (!(fx > 0 && fy > 0)) out.push_back({"camera.K", "focal lengths must be positive"});
    if (width <= 0 || height <= 0) out.push_back({"camera.size", "raster must be non-empty"});
    if (!(cx >= 0 && cx < width && cy >= 0 && cy < height))
      out.push_back({"camera.K", "principal point must lie inside the image"});
    if (!(max_range > 0)) out.push_back({"camera.max_range", "must be positive"});
    return out;
  }
};

/// UAV pose: position plus yaw (counter-clockwise from +x, degrees) and
/// pitch (positive up, degrees). Roll is always zero.
struct Pose {
  Vec3 position;
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;

  friend bool operator==(const Pose&, const Pose&) = default;

  Vec3 forward() const {
    const double y = deg_to_rad(yaw_deg), p = deg_to_rad(pitch_deg);
    return {std::cos(p) * std::cos(y), std::cos(p) * std::sin(y), std::sin(p)};
  }
  Vec3 right() const {
    const double y = deg_to_rad(yaw_deg);
    return {std::sin(y), -std::cos(y), 0.0};
  }
  /// World-to-camera rotation R. Camera frame: x right, y down, z forward.
  Mat3 rotation() const {
    const Vec3 r = right();
    const Vec3 f = forward();
    const Vec3 d = cross(f, r);
    return Mat3{{r.x, r.y, r.z, d.x, d.y, d.z, f.x, f.y, f.z}};
  }
  /// Extrinsic translation r = -R * position.
  Vec3 translation() const { return (rotation() * position) * -1.0; }
};

inline double normalize_yaw(double yaw_deg) {
  double y = std::fmod(yaw_deg, 360.0);
  if (y < 0) y += 360.0;
  if (y >= 360.0) y -= 360.0;
  return y;
}

struct PixelDepth {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;  // camera-frame z
};

/// (X, Y, Z) = R^-1 (K^-1 [u D, v D, D] - r), with D the camera-frame z.
inline Vec3 backproject(double u, double v, double depth_z, const CameraModel& cam,
                        const Pose& pose) {
  if (!(depth_z > 0.0)) throw Error("backproject: depth must be positive");
  const Mat3 R = pose.rotation();
  const Vec3 cam_pt = cam.inverse_intrinsics() * Vec3{u * depth_z, v * depth_z, depth_z};
  return R.transposed() * (cam_pt - pose.translation());
}

/// Forward model: world point to pixel coordinates and camera-frame z.
inline PixelDepth project(Vec3 world, const CameraModel& cam, const Pose& pose) {
  const Vec3 c = pose.rotation() * world + pose.translation();
  const Vec3 h = cam.intrinsics() * c;
  return {h.x / h.z, h.y / h.z, c.z};
}

/// Converts a Euclidean ray length at pixel (u, v) into camera-frame z.
inline double ray_length_to_z(double u, double v, double ray_length, const CameraModel& cam) {
  return ray_length / norm(cam.unproject_unit_z(u, v));
}

}  // namespace avos::sensor
