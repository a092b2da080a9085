#pragma once

#include <vector>

#include "core/types.hpp"

namespace gsc {

// Pinhole camera. `rotation` maps world to camera coordinates (p_cam = R p + t),
// z looks forward. Pixel (x, y) samples the image plane at exactly (x, y):
// u = fx * px / pz + cx in pixel-index units.
struct Camera {
  double fx = 1.0, fy = 1.0;
  double cx = 0.0, cy = 0.0;
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  int width = 1, height = 1;

  Vec3 center() const { return -rotation.transpose() * translation; }
  Vec3 principal_axis() const { return rotation.row(2).transpose(); }
  Vec3 to_camera(const Vec3& p_world) const { return rotation * p_world + translation; }

  Vec2 project(const Vec3& p_cam) const {
    return Vec2(fx * p_cam.x() / p_cam.z() + cx, fy * p_cam.y() / p_cam.z() + cy);
  }

  // World-space unit direction of the ray through pixel coordinate (u, v).
  Vec3 ray_direction(double u, double v) const {
    const Vec3 d_cam((u - cx) / fx, (v - cy) / fy, 1.0);
    return (rotation.transpose() * d_cam).normalized();
  }

  void validate() const;
};

// Camera at `position` looking toward `at`; the camera y axis is aligned with
// `up` projected off the view direction.
Camera make_look_at_camera(const Vec3& position, const Vec3& at, double fx, double fy,
                           int width, int height, const Vec3& up = Vec3(0, 1, 0));

double camera_baseline(const Camera& a, const Camera& b);

}  // namespace gsc
