#pragma once

#include <cmath>
#include <vector>

#include "core/camera.hpp"
#include "core/scene.hpp"

namespace gsc {

struct RenderConfig {
  double near_plane = 0.01;
  // Per-pixel weight ceiling alpha_i * g_i <= alpha_clamp.
  double alpha_clamp = 0.99;
  // Front-to-back compositing stops once transmittance drops below this.
  double term_transmittance = 1e-4;
  // Low-pass regularization added to the projected covariance diagonal (px^2).
  double eps2d = 0.3;
  // Support radius in Mahalanobis sigmas: the Gaussian weight is exactly zero
  // where (d^T cov2d^-1 d) > footprint_sigma^2, and the same bound expands the
  // image border for the visibility cull, so culling never clips live weight.
  double footprint_sigma = 6.0;
  // Pixels with accumulated alpha at or below this have no defined depth.
  double min_alpha = 1e-6;
  int tile_size = 16;
  int threads = 0;  // 0 = hardware concurrency
};

struct SplatProjection {
  Vec2 mean2d = Vec2::Zero();
  Mat2 cov2d = Mat2::Zero();  // regularized
  double z_cam = 0.0;
  bool visible = false;
};

struct RenderBuffers {
  int width = 0, height = 0;
  std::vector<double> rgb;    // (y * width + x) * 3 + c
  std::vector<double> depth;  // NaN where alpha <= min_alpha
  std::vector<double> alpha;

  bool depth_valid(std::size_t idx) const { return std::isfinite(depth[idx]); }
};

SplatProjection project_gaussian(const GaussianPrimitive& prim, const Camera& cam,
                                 const RenderConfig& cfg = {});

RenderBuffers render(const GaussianScene& scene, const Camera& cam,
                     const RenderConfig& cfg = {});

}  // namespace gsc
