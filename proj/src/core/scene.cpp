#include "core/scene.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"

namespace gsc {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Context: return "context";
    case Provenance::Target: return "target";
    case Provenance::Merged: return "merged";
  }
  return "unknown";
}

Mat3 rotation_matrix(const Vec4& q) {
  const double n = q.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    fail(ErrorCode::Numeric, "degenerate quaternion");
  }
  const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
  Mat3 r;
  r << 1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y),
       2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x),
       2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y);
  return r;
}

Mat3 covariance_from_scale_rotation(const Vec4& q, const Vec3& scale) {
  if (!q.allFinite() || !scale.allFinite()) {
    fail(ErrorCode::Numeric, "covariance: non-finite quaternion or scale");
  }
  if (!(scale.minCoeff() > 0.0)) {
    fail(ErrorCode::InvalidArgument, "covariance: scale components must be positive");
  }
  const Mat3 r = rotation_matrix(q);
  const Mat3 m = r * scale.asDiagonal();
  return m * m.transpose();
}

void GaussianScene::validate() const {
  if (provenance.size() != primitives.size()) {
    fail(ErrorCode::InvalidArgument, "scene: provenance count (" +
                                         std::to_string(provenance.size()) +
                                         ") != primitive count (" +
                                         std::to_string(primitives.size()) + ")");
  }
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    const auto& p = primitives[i];
    const std::string at = " at primitive " + std::to_string(i);
    if (!p.mean.allFinite() || !p.rotation.allFinite() || !p.scale.allFinite() ||
        !std::isfinite(p.opacity) || !p.color.allFinite()) {
      fail(ErrorCode::Numeric, "scene: non-finite field" + at);
    }
    if (std::abs(p.rotation.norm() - 1.0) > 1e-6) {
      fail(ErrorCode::InvalidArgument, "scene: quaternion norm deviates from 1" + at);
    }
    if (!(p.scale.minCoeff() > 0.0)) {
      fail(ErrorCode::InvalidArgument, "scene: non-positive scale" + at);
    }
    if (p.opacity < 0.0 || p.opacity > 1.0) {
      fail(ErrorCode::InvalidArgument, "scene: opacity outside [0, 1]" + at);
    }
  }
}

std::vector<Vec3> GaussianScene::means() const {
  std::vector<Vec3> out;
  out.reserve(primitives.size());
  for (const auto& p : primitives) out.push_back(p.mean);
  return out;
}

void LossWeights::validate() const {
  if (lambda_d < 0.0 || lambda_s < 0.0 || lambda_c < 0.0 || lambda_mv < 0.0) {
    fail(ErrorCode::InvalidArgument, "loss weights must be nonnegative");
  }
  if (!(tau > 0.0 && tau < 1.0)) {
    fail(ErrorCode::InvalidArgument, "tau must lie in (0, 1)");
  }
}

}  // namespace gsc
