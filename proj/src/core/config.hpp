#pragma once

#include <cstdint>
#include <string>

#include "core/depth_align.hpp"
#include "core/render.hpp"
#include "core/scene.hpp"
#include "core/synth.hpp"

namespace gsc {

// Full pipeline configuration. Serializes to/from the documented `key = value`
// text format; CLI flags override file values by re-applying single pairs.
struct PipelineConfig {
  // Stage toggles (mirrors the ablation rows).
  bool stage_sa = true;
  bool stage_da = true;
  bool stage_rc = true;
  bool stage_mv = true;

  // Synthetic input.
  OracleParams oracle;
  CorruptionSpec corruption{1.15, 0.1, 0.05, 0.3, 0};
  double reference_blur_sigma = 0.0;
  double reference_noise = 0.0;

  // Anchor selection.
  double anchor_gate_deg = 45.0;

  // Coarse alignment.
  RansacConfig ransac;

  // Ray-constrained registration.
  int reg_iters = 50;
  double reg_lr = 0.01;
  LossWeights weights;
  bool bilinear_depth_sampling = false;

  // Opacity-only refinement.
  int refine_iters = 30;
  double refine_lr = 0.08;
  int n_context_views = 2;
  bool lambda_on_context = false;  // Eq. placement switch; default as written

  // Renderer.
  RenderConfig render;

  // Metrics.
  double f_thresh_frac = 0.05;  // of the scene diagonal

  // Long-sequence harness.
  int long_length = 5;
  int long_interval = 1;

  // Ablation harness.
  int ablate_seeds = 20;
  std::uint64_t ablate_first_seed = 1;

  // File-input mode (used when input_scene is non-empty).
  std::string input_scene;
  std::string input_cameras;
  std::string input_reference;
  std::string input_prediction;
  int input_target_index = -1;

  bool deterministic = true;
  bool write_images = true;

  void validate() const;
};

// Parses the key = value format ('#' comments, blank lines ignored). Unknown
// keys are rejected.
PipelineConfig parse_config_text(const std::string& text);
void apply_config_pair(PipelineConfig& cfg, const std::string& key, const std::string& value);
std::string config_to_text(const PipelineConfig& cfg);

}  // namespace gsc
