#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/camera.hpp"
#include "core/render.hpp"
#include "core/scene.hpp"

namespace gsc {

struct HoleMask {
  int width = 0, height = 0;
  std::vector<std::uint8_t> mask;  // 1 where context alpha < tau
  double tau = 0.5;
};

// mask(p) = (accumulated context alpha at p) < tau, from a forward render.
HoleMask render_hole_mask(const GaussianScene& ctx, const Camera& cam, double tau,
                          const RenderConfig& cfg = {});

// Keeps a target primitive iff its projected mean lands on a true mask pixel
// (nearest pixel); off-image or behind-camera primitives are dropped.
// Provenance tags are preserved. `kept_indices`, when given, receives the
// surviving indices into `tgt`.
GaussianScene filter_by_hole_mask(const GaussianScene& tgt, const HoleMask& mask,
                                  const Camera& cam, const RenderConfig& cfg = {},
                                  std::vector<int>* kept_indices = nullptr);

// Concatenation, context first; appended primitives are tagged target.
GaussianScene merge_scenes(const GaussianScene& ctx, const GaussianScene& tgt_filtered);

struct RefineReport {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::vector<double> trace_total;
  int iterations_run = 0;
  int backoffs = 0;
  double wall_time_s = 0.0;
  bool aborted = false;
  std::string abort_reason;
  bool no_op_warning = false;  // empty optimizable set
};

struct RefineView {
  Camera cam;
  std::vector<double> image;  // 3 * W * H reference
};

// Gradient descent on the opacities of `new_indices` only; every other
// attribute stays frozen. The objective is an L1 sum per view; by default
// lambda_mv weights the target term (the context terms when
// `lambda_on_context`). Opacities clamp to [0, 1] after each step.
RefineReport opacity_refine(GaussianScene& merged, const std::vector<int>& new_indices,
                            const RefineView& target_view,
                            const std::vector<RefineView>& context_views, const LossWeights& w,
                            int iters, double lr, bool lambda_on_context,
                            const RenderConfig& cfg);

}  // namespace gsc
