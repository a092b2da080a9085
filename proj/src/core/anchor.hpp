#pragma once

#include <vector>

#include "core/camera.hpp"

namespace gsc {

struct AnchorDecision {
  int anchor_index = -1;
  double relative_rotation_deg = 0.0;
  double baseline = 0.0;
  bool fallback_used = false;
};

// Geodesic angle between the two orientations in degrees, range [0, 180].
double relative_rotation_deg(const Camera& a, const Camera& b);

// Among contexts with relative rotation below `gate_deg`, picks the one with
// the largest camera-center baseline to the target. When no context passes
// the gate, falls back to the minimum-rotation view. Ties break toward the
// lowest index.
AnchorDecision select_stereo_anchor(const Camera& target, const std::vector<Camera>& contexts,
                                    double gate_deg = 45.0);

// Ablation substitute for stereo-anchor selection: nearest context camera by
// center distance.
AnchorDecision select_nearest_anchor(const Camera& target, const std::vector<Camera>& contexts);

}  // namespace gsc
