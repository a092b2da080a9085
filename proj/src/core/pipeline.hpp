#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "core/anchor.hpp"
#include "core/config.hpp"
#include "core/depth_align.hpp"
#include "core/integrate.hpp"
#include "core/registration.hpp"
#include "core/synth.hpp"

namespace gsc {

struct StageTiming {
  std::string name;
  double seconds = 0.0;
  bool skipped = false;
};

struct TimingReport {
  std::vector<StageTiming> stages;
  double total = 0.0;  // exact sum of the stage entries
};

struct PipelineOutputs {
  GaussianScene completed;
  std::vector<int> added_pred_indices;  // into the prediction, after hole filtering

  // Diagnostics (NaN where not applicable, e.g. file-input mode).
  AnchorDecision anchor;
  AffineDepthFit fit;
  bool fit_fell_back = false;
  RegistrationReport registration;
  RefineReport refinement;
  double hole_fraction = 0.0;
  double chamfer_init = 0.0, chamfer_after = 0.0;
  double f_score_after = 0.0, abs_rel_after = 0.0, f_threshold = 0.0;
  double mean_d_err_init = 0.0, mean_d_err_post_da = 0.0, mean_d_err_post_rc = 0.0;
  double target_psnr_before = 0.0, target_psnr_after = 0.0, target_ssim_after = 0.0;
  double ctx_psnr_premerge = 0.0, ctx_psnr_after = 0.0;

  // Render artifacts at the target camera.
  RenderBuffers target_render;
  std::vector<double> reference_image;
  HoleMask hole_mask;

  TimingReport timing;
  nlohmann::json report;       // deterministic; no wall-clock content
  nlohmann::json timing_json;  // wall-clock content, kept separate
};

PipelineOutputs run_completion_pipeline(const PipelineConfig& config);

void write_pipeline_artifacts(const PipelineOutputs& out, const PipelineConfig& config,
                              const std::string& out_dir);

struct LongRunStep {
  double target_psnr = 0.0;
  double running_context_psnr = 0.0;
  double step_chamfer = 0.0;
  int added = 0;
};

struct LongRunOutputs {
  std::vector<LongRunStep> steps;
  GaussianScene final_scene;
  nlohmann::json report;
  nlohmann::json timing_json;
};

LongRunOutputs run_long_sequence(const PipelineConfig& config);

struct AblationRow {
  std::string name;
  double mean_chamfer = 0.0;
  double mean_f_score = 0.0;
  double mean_abs_rel = 0.0;
  double mean_target_psnr = 0.0;
  double mean_ctx_psnr = 0.0;
  double mean_ctx_psnr_premerge = 0.0;
};

struct AblationOutputs {
  std::vector<AblationRow> rows;
  nlohmann::json report;
};

// Runs {full, w/o SA, w/o DA, w/o RC, w/o DA&RC, w/o MV} over the configured
// seed range, sharing one oracle per seed across rows.
AblationOutputs run_ablation_grid(const PipelineConfig& config);

// Writes scene.ply, cameras.json, and per-camera renders for the configured
// oracle; returns a summary.
nlohmann::json synth_generate_artifacts(const PipelineConfig& config, const std::string& out_dir);

}  // namespace gsc
