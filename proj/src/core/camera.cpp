#include "core/camera.hpp"

#include <cmath>

#include "core/error.hpp"

namespace gsc {

void Camera::validate() const {
  if (!rotation.allFinite() || !translation.allFinite() || !std::isfinite(fx) ||
      !std::isfinite(fy) || !std::isfinite(cx) || !std::isfinite(cy)) {
    fail(ErrorCode::Numeric, "camera: non-finite field");
  }
  if (!(fx > 0.0) || !(fy > 0.0)) {
    fail(ErrorCode::InvalidArgument, "camera: focal length must be positive");
  }
  if (width < 1 || height < 1) {
    fail(ErrorCode::InvalidArgument, "camera: resolution must be at least 1x1");
  }
  const Mat3 gram = rotation.transpose() * rotation;
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-6) {
    fail(ErrorCode::InvalidArgument, "camera: rotation not orthonormal");
  }
  if (rotation.determinant() < 0.0) {
    fail(ErrorCode::InvalidArgument, "camera: reflection not a rotation");
  }
}

Camera make_look_at_camera(const Vec3& position, const Vec3& at, double fx, double fy,
                           int width, int height, const Vec3& up) {
  const Vec3 z = (at - position).normalized();
  Vec3 x = up.cross(z);
  if (x.norm() < 1e-9) {
    x = Vec3(1, 0, 0).cross(z);
    if (x.norm() < 1e-9) x = Vec3(0, 0, 1).cross(z);
  }
  x.normalize();
  const Vec3 y = z.cross(x);

  Camera cam;
  cam.fx = fx;
  cam.fy = fy;
  cam.cx = 0.5 * (width - 1);
  cam.cy = 0.5 * (height - 1);
  cam.width = width;
  cam.height = height;
  cam.rotation.row(0) = x.transpose();
  cam.rotation.row(1) = y.transpose();
  cam.rotation.row(2) = z.transpose();
  cam.translation = -cam.rotation * position;
  return cam;
}

double camera_baseline(const Camera& a, const Camera& b) {
  return (a.center() - b.center()).norm();
}

}  // namespace gsc
