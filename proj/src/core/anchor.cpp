#include "core/anchor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"

namespace gsc {

double relative_rotation_deg(const Camera& a, const Camera& b) {
  const Mat3 rel = a.rotation * b.rotation.transpose();
  const double c = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

AnchorDecision select_stereo_anchor(const Camera& target, const std::vector<Camera>& contexts,
                                    double gate_deg) {
  if (contexts.empty()) {
    fail(ErrorCode::InvalidArgument, "anchor selection: empty context list");
  }
  AnchorDecision best;
  AnchorDecision min_rot;
  min_rot.relative_rotation_deg = 1e300;
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    const double rot = relative_rotation_deg(target, contexts[i]);
    const double base = camera_baseline(target, contexts[i]);
    if (rot < gate_deg && (best.anchor_index < 0 || base > best.baseline)) {
      best.anchor_index = static_cast<int>(i);
      best.relative_rotation_deg = rot;
      best.baseline = base;
    }
    if (rot < min_rot.relative_rotation_deg) {
      min_rot.anchor_index = static_cast<int>(i);
      min_rot.relative_rotation_deg = rot;
      min_rot.baseline = base;
    }
  }
  if (best.anchor_index >= 0) {
    best.fallback_used = false;
    return best;
  }
  min_rot.fallback_used = true;
  return min_rot;
}

AnchorDecision select_nearest_anchor(const Camera& target, const std::vector<Camera>& contexts) {
  if (contexts.empty()) {
    fail(ErrorCode::InvalidArgument, "anchor selection: empty context list");
  }
  AnchorDecision out;
  double best_dist = 1e300;
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    const double d = camera_baseline(target, contexts[i]);
    if (d < best_dist) {
      best_dist = d;
      out.anchor_index = static_cast<int>(i);
      out.baseline = d;
      out.relative_rotation_deg = relative_rotation_deg(target, contexts[i]);
    }
  }
  out.fallback_used = false;
  return out;
}

}  // namespace gsc
