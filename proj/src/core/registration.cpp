#include "core/registration.hpp"

#include <chrono>
#include <cmath>

#include "core/descent.hpp"
#include "core/error.hpp"
#include "core/render_grad.hpp"

namespace gsc {

namespace {

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

struct EvalOut {
  double total = 0.0;
  double depth = 0.0, stereo = 0.0, rgb = 0.0;  // lambda-weighted
  PixelLossGrads target_grads;
  PixelLossGrads anchor_grads;
};

}  // namespace

RegistrationReport ray_constrained_optimize(const GaussianScene& ctx, GaussianScene& tgt,
                                            RayParameterization& rays, const Camera& target_cam,
                                            const Camera& anchor_cam,
                                            const RegistrationRefs& refs, const LossWeights& w,
                                            int iters, double lr, const RenderConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  w.validate();
  rays.validate(tgt);
  const std::size_t npx_t = static_cast<std::size_t>(target_cam.width) * target_cam.height;
  if (refs.reference_rgb.size() != npx_t * 3 ||
      refs.ctx_depth_target.size() != npx_t ||
      refs.ctx_depth_anchor.size() !=
          static_cast<std::size_t>(anchor_cam.width) * anchor_cam.height) {
    fail(ErrorCode::InvalidArgument, "registration: reference buffer size mismatch");
  }

  RegistrationReport report;
  {
    bool any_target = false, any_anchor = false;
    for (const auto v : refs.ctx_depth_target.valid) any_target = any_target || v;
    for (const auto v : refs.ctx_depth_anchor.valid) any_anchor = any_anchor || v;
    report.empty_depth_masks_warning = !any_target && !any_anchor;
  }

  // Composite scene: context first, target appended; ray-bound indices shift.
  GaussianScene composite = ctx;
  composite.reserve(ctx.size() + tgt.size());
  for (std::size_t i = 0; i < tgt.size(); ++i) {
    composite.push_back(tgt.primitives[i], tgt.provenance[i]);
  }
  RayParameterization comp_rays = rays;
  for (auto& idx : comp_rays.prim_index) idx += static_cast<int>(ctx.size());

  auto apply = [&](const std::vector<double>& d) {
    rays.dist = d;
    comp_rays.dist = d;
    rays.apply_to(tgt);
    comp_rays.apply_to(composite);
  };

  auto eval = [&]() -> EvalOut {
    EvalOut out;
    const RenderBuffers rt = render(composite, target_cam, cfg);
    const RenderBuffers ra = render(tgt, anchor_cam, cfg);

    out.target_grads.width = target_cam.width;
    out.target_grads.height = target_cam.height;
    out.target_grads.d_rgb.assign(npx_t * 3, 0.0);
    out.target_grads.d_depth.assign(npx_t, 0.0);
    out.anchor_grads.width = anchor_cam.width;
    out.anchor_grads.height = anchor_cam.height;
    out.anchor_grads.d_depth.assign(ra.depth.size(), 0.0);

    if (w.lambda_c > 0.0) {
      double l = 0.0;
      for (std::size_t i = 0; i < npx_t * 3; ++i) {
        const double r = rt.rgb[i] - refs.reference_rgb[i];
        l += std::abs(r);
        out.target_grads.d_rgb[i] = w.lambda_c * sign_of(r);
      }
      out.rgb = w.lambda_c * l;
    }
    if (w.lambda_d > 0.0) {
      double l = 0.0;
      for (std::size_t i = 0; i < npx_t; ++i) {
        if (!refs.ctx_depth_target.valid[i] || !rt.depth_valid(i)) continue;
        const double r = rt.depth[i] - refs.ctx_depth_target.values[i];
        l += std::abs(r);
        out.target_grads.d_depth[i] = w.lambda_d * sign_of(r);
      }
      out.depth = w.lambda_d * l;
    }
    if (w.lambda_s > 0.0) {
      double l = 0.0;
      for (std::size_t i = 0; i < ra.depth.size(); ++i) {
        if (!refs.ctx_depth_anchor.valid[i] || !ra.depth_valid(i)) continue;
        const double r = ra.depth[i] - refs.ctx_depth_anchor.values[i];
        l += std::abs(r);
        out.anchor_grads.d_depth[i] = w.lambda_s * sign_of(r);
      }
      out.stereo = w.lambda_s * l;
    }
    out.total = out.depth + out.stereo + out.rgb;
    return out;
  };

  auto grad = [&](const EvalOut& cur) {
    std::vector<double> g =
        backward_ray_distance(composite, target_cam, cfg, cur.target_grads, comp_rays);
    const std::vector<double> ga =
        backward_ray_distance(tgt, anchor_cam, cfg, cur.anchor_grads, rays);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += ga[i];
    return g;
  };

  std::vector<double> params = rays.dist;
  const DescentStatus status = gradient_descent_backoff<EvalOut>(
      params, cfg.near_plane, 1e300, iters, lr, 30, eval, grad, apply,
      [&](const EvalOut& cur) {
        report.trace_total.push_back(cur.total);
        report.trace_depth.push_back(cur.depth);
        report.trace_stereo.push_back(cur.stereo);
        report.trace_rgb.push_back(cur.rgb);
      });

  report.initial_loss = status.initial_loss;
  report.final_loss = status.final_loss;
  report.iterations_run = status.iterations_run;
  report.backoffs = status.backoffs;
  report.aborted = status.aborted;
  report.abort_reason = status.abort_reason;
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace gsc
