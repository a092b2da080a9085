#include "core/integrate.hpp"

#include <chrono>
#include <cmath>

#include "core/descent.hpp"
#include "core/error.hpp"
#include "core/render_grad.hpp"

namespace gsc {

HoleMask render_hole_mask(const GaussianScene& ctx, const Camera& cam, double tau,
                          const RenderConfig& cfg) {
  if (!(tau > 0.0 && tau < 1.0)) {
    fail(ErrorCode::InvalidArgument, "hole mask: tau must lie in (0, 1)");
  }
  const RenderBuffers buffers = render(ctx, cam, cfg);
  HoleMask out;
  out.width = buffers.width;
  out.height = buffers.height;
  out.tau = tau;
  out.mask.resize(buffers.alpha.size());
  for (std::size_t i = 0; i < buffers.alpha.size(); ++i) {
    out.mask[i] = buffers.alpha[i] < tau ? 1 : 0;
  }
  return out;
}

GaussianScene filter_by_hole_mask(const GaussianScene& tgt, const HoleMask& mask,
                                  const Camera& cam, const RenderConfig& cfg,
                                  std::vector<int>* kept_indices) {
  if (mask.width != cam.width || mask.height != cam.height) {
    fail(ErrorCode::InvalidArgument, "hole filter: mask resolution mismatch");
  }
  GaussianScene out;
  if (kept_indices) kept_indices->clear();
  for (std::size_t i = 0; i < tgt.size(); ++i) {
    const Vec3 p = cam.to_camera(tgt.primitives[i].mean);
    if (!(p.z() > cfg.near_plane)) continue;
    const Vec2 u = cam.project(p);
    const int x = static_cast<int>(std::lround(u.x()));
    const int y = static_cast<int>(std::lround(u.y()));
    if (x < 0 || x >= mask.width || y < 0 || y >= mask.height) continue;
    if (!mask.mask[static_cast<std::size_t>(y) * mask.width + x]) continue;
    out.push_back(tgt.primitives[i], tgt.provenance[i]);
    if (kept_indices) kept_indices->push_back(static_cast<int>(i));
  }
  return out;
}

GaussianScene merge_scenes(const GaussianScene& ctx, const GaussianScene& tgt_filtered) {
  GaussianScene out = ctx;
  out.reserve(ctx.size() + tgt_filtered.size());
  for (const auto& prim : tgt_filtered.primitives) {
    out.push_back(prim, Provenance::Target);
  }
  return out;
}

namespace {

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

struct EvalOut {
  double total = 0.0;
  std::vector<std::vector<double>> d_rgb_per_view;  // lambda-weighted signs
};

}  // namespace

RefineReport opacity_refine(GaussianScene& merged, const std::vector<int>& new_indices,
                            const RefineView& target_view,
                            const std::vector<RefineView>& context_views, const LossWeights& w,
                            int iters, double lr, bool lambda_on_context,
                            const RenderConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  w.validate();
  RefineReport report;
  if (new_indices.empty()) {
    report.no_op_warning = true;
    return report;
  }
  for (const int idx : new_indices) {
    if (idx < 0 || idx >= static_cast<int>(merged.size())) {
      fail(ErrorCode::InvalidArgument, "opacity refine: index out of range");
    }
  }

  std::vector<const RefineView*> views;
  std::vector<double> view_weight;
  views.push_back(&target_view);
  view_weight.push_back(lambda_on_context ? 1.0 : w.lambda_mv);
  for (const auto& v : context_views) {
    views.push_back(&v);
    view_weight.push_back(lambda_on_context ? w.lambda_mv : 1.0);
  }
  for (const auto* v : views) {
    if (v->image.size() != static_cast<std::size_t>(v->cam.width) * v->cam.height * 3) {
      fail(ErrorCode::InvalidArgument, "opacity refine: reference image size mismatch");
    }
  }

  auto apply = [&](const std::vector<double>& alphas) {
    for (std::size_t k = 0; k < new_indices.size(); ++k) {
      merged.primitives[new_indices[k]].opacity = alphas[k];
    }
  };

  auto eval = [&]() -> EvalOut {
    EvalOut out;
    out.d_rgb_per_view.resize(views.size());
    for (std::size_t v = 0; v < views.size(); ++v) {
      const RenderBuffers rb = render(merged, views[v]->cam, cfg);
      auto& grads = out.d_rgb_per_view[v];
      grads.assign(rb.rgb.size(), 0.0);
      double l = 0.0;
      for (std::size_t i = 0; i < rb.rgb.size(); ++i) {
        const double r = rb.rgb[i] - views[v]->image[i];
        l += std::abs(r);
        grads[i] = view_weight[v] * sign_of(r);
      }
      out.total += view_weight[v] * l;
    }
    return out;
  };

  auto grad = [&](const EvalOut& cur) {
    std::vector<double> g(new_indices.size(), 0.0);
    for (std::size_t v = 0; v < views.size(); ++v) {
      const std::vector<double> gv =
          backward_opacity(merged, views[v]->cam, cfg, cur.d_rgb_per_view[v], new_indices);
      for (std::size_t k = 0; k < g.size(); ++k) g[k] += gv[k];
    }
    return g;
  };

  std::vector<double> params(new_indices.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    params[k] = merged.primitives[new_indices[k]].opacity;
  }

  const DescentStatus status = gradient_descent_backoff<EvalOut>(
      params, 0.0, 1.0, iters, lr, 30, eval, grad, apply,
      [&](const EvalOut& cur) { report.trace_total.push_back(cur.total); });

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
