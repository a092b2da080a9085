#pragma once

#include <vector>

#include "core/camera.hpp"
#include "core/ray_param.hpp"
#include "core/render.hpp"
#include "core/scene.hpp"

namespace gsc {

// Per-pixel upstream gradients of a scalar loss with respect to the rendered
// rgb and composited depth. Depth gradients at pixels whose rendered depth is
// invalid are ignored.
struct PixelLossGrads {
  int width = 0, height = 0;
  std::vector<double> d_rgb;    // 3 * W * H, may be empty (treated as zero)
  std::vector<double> d_depth;  // W * H, may be empty
};

// dL/dd_i for every ray-bound primitive, differentiating through projection,
// the projected covariance, the per-pixel Gaussian weight, transmittance,
// color compositing, and the depth numerator/denominator. Primitives without
// rays receive no entry (their gradient is zero by construction); invisible
// bound primitives get 0.
std::vector<double> backward_ray_distance(const GaussianScene& scene, const Camera& cam,
                                          const RenderConfig& cfg, const PixelLossGrads& grads,
                                          const RayParameterization& rays);

// dL/dalpha_i for the primitives listed in `indices` (rgb gradients only).
std::vector<double> backward_opacity(const GaussianScene& scene, const Camera& cam,
                                     const RenderConfig& cfg, const std::vector<double>& d_rgb,
                                     const std::vector<int>& indices);

// Central finite-difference references (debug mode / test oracle). `h` is the
// step in world units for distances, in opacity units for opacities.
std::vector<double> fd_ray_distance(const GaussianScene& scene, const Camera& cam,
                                    const RenderConfig& cfg, const PixelLossGrads& grads,
                                    const RayParameterization& rays, double h);
std::vector<double> fd_opacity(const GaussianScene& scene, const Camera& cam,
                               const RenderConfig& cfg, const std::vector<double>& d_rgb,
                               const std::vector<int>& indices, double h);

// Scalar loss sum(d_rgb . rgb) + sum(d_depth . depth over valid pixels); the
// quantity the finite-difference references differentiate.
double loss_under_grads(const RenderBuffers& buffers, const PixelLossGrads& grads);

}  // namespace gsc
