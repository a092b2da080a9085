#include "core/render_grad.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/render_detail.hpp"

namespace gsc {

namespace {

using detail::PreparedScene;
using detail::PreparedSplat;
using detail::TileGrid;

struct Contribution {
  int list_pos;  // position within the tile list
  double a;      // clamped per-pixel weight alpha * g
  double g;      // Gaussian weight
  double T;      // transmittance in front of this splat
  double w;      // T * a
  double dx, dy;
  bool clamped;
};

// Per-splat accumulators of the loss gradient with respect to the projected
// mean (du), the regularized 2d covariance via its inverse (dC, full 2x2
// symmetric), the camera depth (dz), and the opacity (da).
struct SplatAccum {
  double dux = 0.0, duy = 0.0;
  double dC00 = 0.0, dC01 = 0.0, dC11 = 0.0;
  double dz = 0.0;
  double da = 0.0;
};

void check_grads(const Camera& cam, const PixelLossGrads& grads) {
  const std::size_t npx = static_cast<std::size_t>(cam.width) * cam.height;
  if (grads.width != cam.width || grads.height != cam.height) {
    fail(ErrorCode::InvalidArgument, "backward: gradient buffer resolution mismatch");
  }
  if (!grads.d_rgb.empty() && grads.d_rgb.size() != npx * 3) {
    fail(ErrorCode::InvalidArgument, "backward: d_rgb size mismatch");
  }
  if (!grads.d_depth.empty() && grads.d_depth.size() != npx) {
    fail(ErrorCode::InvalidArgument, "backward: d_depth size mismatch");
  }
}

// Replays the forward composite per pixel and back-propagates into per-splat
// accumulators. `accum` has one slot per entry of the tile list.
void backward_tiles(const GaussianScene& scene, const PreparedScene& prep, const TileGrid& grid,
                    const RenderConfig& cfg, const PixelLossGrads& grads,
                    std::vector<std::vector<SplatAccum>>& tile_accums) {
  const double q_max = cfg.footprint_sigma * cfg.footprint_sigma;
  const int width = prep.width, height = prep.height;
  const bool has_rgb = !grads.d_rgb.empty();
  const bool has_depth = !grads.d_depth.empty();
  const std::size_t n_tiles = grid.lists.size();
  tile_accums.assign(n_tiles, {});

  parallel_chunks(n_tiles, cfg.threads, [&](std::size_t, std::size_t tb, std::size_t te) {
    std::vector<Contribution> recs;
    for (std::size_t t = tb; t < te; ++t) {
      const auto& list = grid.lists[t];
      if (list.empty()) continue;
      auto& accum = tile_accums[t];
      accum.assign(list.size(), SplatAccum{});

      const int tx = static_cast<int>(t) % grid.tiles_x;
      const int ty = static_cast<int>(t) / grid.tiles_x;
      const int px0 = tx * grid.tile, px1 = std::min(width, px0 + grid.tile);
      const int py0 = ty * grid.tile, py1 = std::min(height, py0 + grid.tile);

      for (int y = py0; y < py1; ++y) {
        for (int x = px0; x < px1; ++x) {
          const std::size_t pix = static_cast<std::size_t>(y) * width + x;
          const double gr0 = has_rgb ? grads.d_rgb[pix * 3 + 0] : 0.0;
          const double gr1 = has_rgb ? grads.d_rgb[pix * 3 + 1] : 0.0;
          const double gr2 = has_rgb ? grads.d_rgb[pix * 3 + 2] : 0.0;
          double gd = has_depth ? grads.d_depth[pix] : 0.0;
          if (gr0 == 0.0 && gr1 == 0.0 && gr2 == 0.0 && gd == 0.0) continue;

          // Forward replay.
          recs.clear();
          double T = 1.0, acc_a = 0.0, acc_d = 0.0;
          for (std::size_t li = 0; li < list.size(); ++li) {
            const PreparedSplat& s = prep.splats[list[li]];
            const double dx = x - s.ux, dy = y - s.uy;
            const double q = s.i00 * dx * dx + 2.0 * s.i01 * dx * dy + s.i11 * dy * dy;
            if (!(q <= q_max)) continue;
            const double g = std::exp(-0.5 * q);
            double a = scene.primitives[s.prim].opacity * g;
            const bool clamped = a > cfg.alpha_clamp;
            if (clamped) a = cfg.alpha_clamp;
            const double w = T * a;
            recs.push_back({static_cast<int>(li), a, g, T, w, dx, dy, clamped});
            acc_a += w;
            acc_d += w * s.z;
            T *= 1.0 - a;
            if (T < cfg.term_transmittance) break;
          }
          if (recs.empty()) continue;

          const bool depth_ok = acc_a > cfg.min_alpha;
          if (!depth_ok) gd = 0.0;
          const double depth = depth_ok ? acc_d / acc_a : 0.0;
          const double inv_a = depth_ok ? 1.0 / acc_a : 0.0;

          // Back-to-front sweep: dL/da'_j = T_j G_j - S_j / (1 - a'_j) with
          // S_j the suffix sum of G_m w_m over m > j.
          double suffix = 0.0;
          for (std::size_t r = recs.size(); r-- > 0;) {
            const Contribution& rec = recs[r];
            const PreparedSplat& s = prep.splats[list[rec.list_pos]];
            const Vec3& color = scene.primitives[s.prim].color;
            const double G = gr0 * color.x() + gr1 * color.y() + gr2 * color.z() +
                             gd * (s.z - depth) * inv_a;
            const double dIda = rec.T * G - suffix / (1.0 - rec.a);
            suffix += G * rec.w;

            SplatAccum& sa = accum[rec.list_pos];
            sa.dz += gd * rec.w * inv_a;
            if (rec.clamped) continue;
            sa.da += dIda * rec.g;
            const double dIdg = dIda * scene.primitives[s.prim].opacity;
            // g = exp(-q/2): dL/du = dIdg * g * (C d); dL/dC = -dIdg * g/2 * d d^T.
            const double gg = dIdg * rec.g;
            const double cdx = s.i00 * rec.dx + s.i01 * rec.dy;
            const double cdy = s.i01 * rec.dx + s.i11 * rec.dy;
            sa.dux += gg * cdx;
            sa.duy += gg * cdy;
            const double f = -0.5 * gg;
            sa.dC00 += f * rec.dx * rec.dx;
            sa.dC01 += f * rec.dx * rec.dy;
            sa.dC11 += f * rec.dy * rec.dy;
          }
        }
      }
    }
  });
}

// Merges per-tile partials in tile index order (fixed reduction order keeps
// runs bit-reproducible across thread counts).
std::vector<SplatAccum> merge_accums(const PreparedScene& prep, const TileGrid& grid,
                                     const std::vector<std::vector<SplatAccum>>& tile_accums) {
  std::vector<SplatAccum> global(prep.splats.size());
  for (std::size_t t = 0; t < grid.lists.size(); ++t) {
    const auto& list = grid.lists[t];
    const auto& accum = tile_accums[t];
    if (accum.empty()) continue;
    for (std::size_t li = 0; li < list.size(); ++li) {
      SplatAccum& g = global[list[li]];
      const SplatAccum& p = accum[li];
      g.dux += p.dux;
      g.duy += p.duy;
      g.dC00 += p.dC00;
      g.dC01 += p.dC01;
      g.dC11 += p.dC11;
      g.dz += p.dz;
      g.da += p.da;
    }
  }
  return global;
}

}  // namespace

double loss_under_grads(const RenderBuffers& buffers, const PixelLossGrads& grads) {
  double loss = 0.0;
  const std::size_t npx = static_cast<std::size_t>(buffers.width) * buffers.height;
  if (!grads.d_rgb.empty()) {
    for (std::size_t i = 0; i < npx * 3; ++i) loss += grads.d_rgb[i] * buffers.rgb[i];
  }
  if (!grads.d_depth.empty()) {
    for (std::size_t i = 0; i < npx; ++i) {
      if (grads.d_depth[i] != 0.0 && buffers.depth_valid(i)) {
        loss += grads.d_depth[i] * buffers.depth[i];
      }
    }
  }
  return loss;
}

std::vector<double> backward_ray_distance(const GaussianScene& scene, const Camera& cam,
                                          const RenderConfig& cfg, const PixelLossGrads& grads,
                                          const RayParameterization& rays) {
  scene.validate();
  cam.validate();
  check_grads(cam, grads);
  for (const int prim : rays.prim_index) {
    if (prim < 0 || prim >= static_cast<int>(scene.size())) {
      fail(ErrorCode::InvalidArgument, "backward: ray binding index out of range");
    }
  }

  const PreparedScene prep = detail::prepare_scene(scene, cam, cfg);
  const TileGrid grid = detail::build_tiles(prep, cfg);
  std::vector<std::vector<SplatAccum>> tile_accums;
  backward_tiles(scene, prep, grid, cfg, grads, tile_accums);
  const std::vector<SplatAccum> global = merge_accums(prep, grid, tile_accums);

  std::vector<double> out(rays.size(), 0.0);
  for (std::size_t k = 0; k < rays.size(); ++k) {
    const int prim = rays.prim_index[k];
    const int sp = prep.prim_to_splat[prim];
    if (sp < 0) continue;  // invisible: zero gradient
    const SplatAccum& acc = global[sp];
    const PreparedSplat& s = prep.splats[sp];

    const Vec3 p = cam.to_camera(scene.primitives[prim].mean);
    const Vec3 r_cam = cam.rotation * rays.dir[k];
    const double iz = 1.0 / p.z();
    const double iz2 = iz * iz;

    Eigen::Matrix<double, 2, 3> jac;
    jac << cam.fx * iz, 0.0, -cam.fx * p.x() * iz2,
           0.0, cam.fy * iz, -cam.fy * p.y() * iz2;

    // Projected-mean term.
    const Vec2 du_dd = jac * r_cam;
    double dd = acc.dux * du_dd.x() + acc.duy * du_dd.y();

    // Depth term (z enters the composite depth directly).
    dd += acc.dz * r_cam.z();

    // Covariance term: dL/dcov = -C (dL/dC) C, then <dL/dcov, dcov/dd> with
    // dcov/dd = B + B^T, B = (dJ/dd) W Sigma W^T J^T.
    if (acc.dC00 != 0.0 || acc.dC01 != 0.0 || acc.dC11 != 0.0) {
      Mat2 dLdC;
      dLdC << acc.dC00, acc.dC01, acc.dC01, acc.dC11;
      Mat2 conic;
      conic << s.i00, s.i01, s.i01, s.i11;
      const Mat2 dLdcov = -(conic * dLdC * conic);

      Eigen::Matrix<double, 2, 3> djac = Eigen::Matrix<double, 2, 3>::Zero();
      const double iz3 = iz2 * iz;
      djac(0, 0) = -cam.fx * r_cam.z() * iz2;
      djac(0, 2) = -cam.fx * r_cam.x() * iz2 + 2.0 * cam.fx * p.x() * r_cam.z() * iz3;
      djac(1, 1) = -cam.fy * r_cam.z() * iz2;
      djac(1, 2) = -cam.fy * r_cam.y() * iz2 + 2.0 * cam.fy * p.y() * r_cam.z() * iz3;

      const Mat3 sigma = covariance_from_scale_rotation(scene.primitives[prim].rotation,
                                                        scene.primitives[prim].scale);
      const Eigen::Matrix<double, 2, 3> m = jac * cam.rotation;
      const Eigen::Matrix<double, 2, 3> dm = djac * cam.rotation;
      const Mat2 b = dm * sigma * m.transpose();
      const Mat2 dcov_dd = b + b.transpose();
      dd += dLdcov.cwiseProduct(dcov_dd).sum();
    }
    out[k] = dd;
  }
  return out;
}

std::vector<double> backward_opacity(const GaussianScene& scene, const Camera& cam,
                                     const RenderConfig& cfg, const std::vector<double>& d_rgb,
                                     const std::vector<int>& indices) {
  scene.validate();
  cam.validate();
  for (const int prim : indices) {
    if (prim < 0 || prim >= static_cast<int>(scene.size())) {
      fail(ErrorCode::InvalidArgument,
           "backward_opacity: index " + std::to_string(prim) + " out of range");
    }
  }
  PixelLossGrads grads;
  grads.width = cam.width;
  grads.height = cam.height;
  grads.d_rgb = d_rgb;
  check_grads(cam, grads);

  const PreparedScene prep = detail::prepare_scene(scene, cam, cfg);
  const TileGrid grid = detail::build_tiles(prep, cfg);
  std::vector<std::vector<SplatAccum>> tile_accums;
  backward_tiles(scene, prep, grid, cfg, grads, tile_accums);
  const std::vector<SplatAccum> global = merge_accums(prep, grid, tile_accums);

  std::vector<double> out(indices.size(), 0.0);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const int sp = prep.prim_to_splat[indices[k]];
    if (sp >= 0) out[k] = global[sp].da;
  }
  return out;
}

std::vector<double> fd_ray_distance(const GaussianScene& scene, const Camera& cam,
                                    const RenderConfig& cfg, const PixelLossGrads& grads,
                                    const RayParameterization& rays, double h) {
  GaussianScene work = scene;
  std::vector<double> out(rays.size(), 0.0);
  for (std::size_t k = 0; k < rays.size(); ++k) {
    const int prim = rays.prim_index[k];
    const Vec3 saved = work.primitives[prim].mean;
    work.primitives[prim].mean = rays.origin + (rays.dist[k] + h) * rays.dir[k];
    const double lp = loss_under_grads(render(work, cam, cfg), grads);
    work.primitives[prim].mean = rays.origin + (rays.dist[k] - h) * rays.dir[k];
    const double lm = loss_under_grads(render(work, cam, cfg), grads);
    work.primitives[prim].mean = saved;
    out[k] = (lp - lm) / (2.0 * h);
  }
  return out;
}

std::vector<double> fd_opacity(const GaussianScene& scene, const Camera& cam,
                               const RenderConfig& cfg, const std::vector<double>& d_rgb,
                               const std::vector<int>& indices, double h) {
  PixelLossGrads grads;
  grads.width = cam.width;
  grads.height = cam.height;
  grads.d_rgb = d_rgb;
  GaussianScene work = scene;
  std::vector<double> out(indices.size(), 0.0);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const double saved = work.primitives[indices[k]].opacity;
    // One-sided steps at the [0, 1] boundary keep the scene valid.
    const double hi = std::min(saved + h, 1.0);
    const double lo = std::max(saved - h, 0.0);
    work.primitives[indices[k]].opacity = hi;
    const double lp = loss_under_grads(render(work, cam, cfg), grads);
    work.primitives[indices[k]].opacity = lo;
    const double lm = loss_under_grads(render(work, cam, cfg), grads);
    work.primitives[indices[k]].opacity = saved;
    out[k] = (hi > lo) ? (lp - lm) / (hi - lo) : 0.0;
  }
  return out;
}

}  // namespace gsc
