#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/render.hpp"

namespace gsc {

// A depth buffer with an explicit validity mask.
struct DepthMap {
  int width = 0, height = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  std::size_t size() const { return values.size(); }
};

// Depth + validity extracted from a render: valid where the composited depth
// is defined and, when min_alpha >= 0 is given, accumulated alpha exceeds it.
DepthMap depth_from_render(const RenderBuffers& buffers, double alpha_threshold = -1.0);

struct AffineDepthFit {
  double scale = 1.0;
  double shift = 0.0;
  int inlier_count = 0;
  double inlier_fraction = 0.0;
  double residual_median = 0.0;
  bool success = false;
  std::string failure_reason;
};

struct RansacConfig {
  int iters = 256;
  double thresh_frac = 0.05;          // of the median context depth
  double min_inlier_fraction = 0.2;
  std::uint64_t seed = 0;
  int threads = 0;
};

// Robustly fits ctx ~= scale * pred + shift over pixels marked in `valid`
// (minimal sample size 2, closed-form least squares over the best inlier
// set). Throws on fewer than 2 valid pixels or zero variance in pred;
// returns success=false for a sub-threshold inlier fraction or non-positive
// scale.
AffineDepthFit fit_affine_depth_ransac(const DepthMap& pred, const DepthMap& ctx,
                                       const std::vector<std::uint8_t>& valid,
                                       const RansacConfig& cfg = {});

// Applies v -> scale * v + shift; invalid pixels stay invalid.
DepthMap apply_affine_depth(const DepthMap& depth, const AffineDepthFit& fit);

}  // namespace gsc
