#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/camera.hpp"
#include "core/render.hpp"
#include "core/scene.hpp"

namespace gsc {

struct OracleParams {
  std::string preset = "room";  // "room" or "terrain"
  int n_primitives = 4000;
  std::uint64_t seed = 1;
  int width = 64, height = 64;
  int n_context = 5;  // includes one deliberately turned-away camera
  int n_targets = 1;
  int interval = 1;   // spacing multiplier between successive targets
  double fov_deg = 55.0;

  void validate() const;
};

// Ground-truth scene, camera trajectory (context cameras first, then target
// cameras), and clean renders. Everything is a pure function of the params.
struct OracleScene {
  GaussianScene gt;
  std::vector<Camera> cameras;
  int n_context = 0;
  std::vector<RenderBuffers> gt_renders;
  std::uint64_t seed = 0;
  double scene_diag = 0.0;
};

OracleScene generate_synthetic_scene(const OracleParams& params, const RenderConfig& cfg = {});

bool primitive_visible_in(const GaussianPrimitive& prim, const Camera& cam,
                          const RenderConfig& cfg = {});

// Primitives visible in at least one context camera; `gt_indices` receives
// their indices into the ground-truth scene.
GaussianScene context_scene(const OracleScene& oracle, const RenderConfig& cfg = {},
                            std::vector<int>* gt_indices = nullptr);

// Models the drift of the feed-forward prediction that the pipeline must
// undo.
struct CorruptionSpec {
  double scale = 1.0;             // s*, > 0
  double shift = 0.0;             // t*, world units
  double ray_noise_sigma = 0.0;   // multiplicative, fraction of distance
  double outlier_fraction = 0.0;  // in [0, 1]
  std::uint64_t seed = 0;

  void validate() const;
};

struct TargetPrediction {
  GaussianScene prims;            // tagged target, one per target-visible gt primitive
  std::vector<int> gt_index;      // correspondence into the gt scene
  std::vector<double> true_dist;  // d* along the target ray
  double noise_sigma_used = 0.0;  // after the anchor-quality model
};

// Corrupts the target-visible ground truth along its target-camera rays. The
// scale/shift component is constructed so the planar depth seen from
// `reference_cam` (the stereo anchor feeding the prediction) satisfies
// D_gt = s* . D_pred + t* per primitive, which makes the coarse-alignment
// target analytic. Multiplicative ray noise is scaled by a stereo-quality
// factor: a short anchor baseline inflates triangulation error, mirroring why
// anchor selection matters.
TargetPrediction corrupt_target_prediction(const OracleScene& oracle, int target_cam_index,
                                           const Camera& reference_cam,
                                           const CorruptionSpec& spec,
                                           const RenderConfig& cfg = {});

// Pseudo ground-truth image: the gt scene rendered at the target camera,
// optionally degraded by Gaussian blur (px) and additive uniform noise.
std::vector<double> make_reference_image(const OracleScene& oracle, int target_cam_index,
                                         double blur_sigma_px, double noise_amplitude,
                                         std::uint64_t seed, const RenderConfig& cfg = {});

}  // namespace gsc
