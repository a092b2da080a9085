#pragma once

#include <string>
#include <vector>

#include "core/camera.hpp"
#include "core/depth_align.hpp"
#include "core/ray_param.hpp"
#include "core/render.hpp"
#include "core/scene.hpp"

namespace gsc {

struct RegistrationReport {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::vector<double> trace_total;
  std::vector<double> trace_depth;   // lambda-weighted term values
  std::vector<double> trace_stereo;
  std::vector<double> trace_rgb;
  int iterations_run = 0;
  int backoffs = 0;
  double wall_time_s = 0.0;
  bool aborted = false;
  std::string abort_reason;
  bool empty_depth_masks_warning = false;
};

// Reference signals for the joint objective: the pseudo ground-truth target
// image, the sparse context depth rendered at the target pose, and the dense
// context depth at the anchor pose.
struct RegistrationRefs {
  std::vector<double> reference_rgb;  // 3 * W * H at the target camera
  DepthMap ctx_depth_target;
  DepthMap ctx_depth_anchor;
};

// Gradient descent on the ray distances only. The composite scene (ctx + tgt)
// is rendered at the target camera for the depth and rgb terms; the target
// Gaussians alone are rendered at the anchor camera for the stereo term. All
// losses are L1 sums over valid pixels; distances are clamped to the near
// plane after each step. Non-positional attributes are never touched.
RegistrationReport ray_constrained_optimize(const GaussianScene& ctx, GaussianScene& tgt,
                                            RayParameterization& rays, const Camera& target_cam,
                                            const Camera& anchor_cam,
                                            const RegistrationRefs& refs, const LossWeights& w,
                                            int iters, double lr, const RenderConfig& cfg);

}  // namespace gsc
