#include "core/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/render_detail.hpp"

namespace gsc {

SplatProjection project_gaussian(const GaussianPrimitive& prim, const Camera& cam,
                                 const RenderConfig& cfg) {
  if (!prim.mean.allFinite() || !prim.rotation.allFinite() || !prim.scale.allFinite()) {
    fail(ErrorCode::Numeric, "project: non-finite primitive");
  }
  SplatProjection out;
  const Vec3 p = cam.to_camera(prim.mean);
  out.z_cam = p.z();
  if (!(p.z() > cfg.near_plane)) {
    out.visible = false;
    return out;
  }
  out.mean2d = cam.project(p);

  // EWA: cov2d = J W Sigma W^T J^T + eps I with J the projection Jacobian.
  const double iz = 1.0 / p.z();
  const double iz2 = iz * iz;
  Eigen::Matrix<double, 2, 3> jac;
  jac << cam.fx * iz, 0.0, -cam.fx * p.x() * iz2,
         0.0, cam.fy * iz, -cam.fy * p.y() * iz2;
  const Eigen::Matrix<double, 2, 3> m = jac * cam.rotation;
  const Mat3 sigma = covariance_from_scale_rotation(prim.rotation, prim.scale);
  Mat2 cov = m * sigma * m.transpose();
  cov(0, 0) += cfg.eps2d;
  cov(1, 1) += cfg.eps2d;
  out.cov2d = cov;

  const double ext_x = cfg.footprint_sigma * std::sqrt(std::max(cov(0, 0), 0.0));
  const double ext_y = cfg.footprint_sigma * std::sqrt(std::max(cov(1, 1), 0.0));
  out.visible = out.mean2d.x() >= -ext_x && out.mean2d.x() <= (cam.width - 1) + ext_x &&
                out.mean2d.y() >= -ext_y && out.mean2d.y() <= (cam.height - 1) + ext_y;
  return out;
}

namespace detail {

PreparedScene prepare_scene(const GaussianScene& scene, const Camera& cam,
                            const RenderConfig& cfg) {
  PreparedScene prep;
  prep.width = cam.width;
  prep.height = cam.height;
  prep.prim_to_splat.assign(scene.size(), -1);
  prep.splats.reserve(scene.size());

  for (std::size_t i = 0; i < scene.size(); ++i) {
    const SplatProjection proj = project_gaussian(scene.primitives[i], cam, cfg);
    if (!proj.visible) continue;
    PreparedSplat s;
    s.ux = proj.mean2d.x();
    s.uy = proj.mean2d.y();
    s.c00 = proj.cov2d(0, 0);
    s.c01 = proj.cov2d(0, 1);
    s.c11 = proj.cov2d(1, 1);
    const double det = s.c00 * s.c11 - s.c01 * s.c01;
    if (!(det > 0.0) || !std::isfinite(det)) continue;  // singular; skip splat
    const double idet = 1.0 / det;
    s.i00 = s.c11 * idet;
    s.i01 = -s.c01 * idet;
    s.i11 = s.c00 * idet;
    s.z = proj.z_cam;
    s.ext_x = cfg.footprint_sigma * std::sqrt(s.c00);
    s.ext_y = cfg.footprint_sigma * std::sqrt(s.c11);
    s.prim = static_cast<int>(i);
    prep.splats.push_back(s);
  }

  std::sort(prep.splats.begin(), prep.splats.end(), [](const PreparedSplat& a,
                                                       const PreparedSplat& b) {
    if (a.z != b.z) return a.z < b.z;
    return a.prim < b.prim;
  });
  for (std::size_t k = 0; k < prep.splats.size(); ++k) {
    prep.prim_to_splat[prep.splats[k].prim] = static_cast<int>(k);
  }
  return prep;
}

TileGrid build_tiles(const PreparedScene& prep, const RenderConfig& cfg) {
  TileGrid grid;
  grid.tile = std::max(1, cfg.tile_size);
  grid.tiles_x = (prep.width + grid.tile - 1) / grid.tile;
  grid.tiles_y = (prep.height + grid.tile - 1) / grid.tile;
  grid.lists.assign(static_cast<std::size_t>(grid.tiles_x) * grid.tiles_y, {});

  for (std::size_t k = 0; k < prep.splats.size(); ++k) {
    const PreparedSplat& s = prep.splats[k];
    const int x0 = std::clamp(static_cast<int>(std::floor(s.ux - s.ext_x)), 0, prep.width - 1);
    const int x1 = std::clamp(static_cast<int>(std::ceil(s.ux + s.ext_x)), 0, prep.width - 1);
    const int y0 = std::clamp(static_cast<int>(std::floor(s.uy - s.ext_y)), 0, prep.height - 1);
    const int y1 = std::clamp(static_cast<int>(std::ceil(s.uy + s.ext_y)), 0, prep.height - 1);
    if (s.ux + s.ext_x < 0 || s.ux - s.ext_x > prep.width - 1 || s.uy + s.ext_y < 0 ||
        s.uy - s.ext_y > prep.height - 1) {
      continue;  // support entirely outside the image
    }
    for (int ty = y0 / grid.tile; ty <= y1 / grid.tile; ++ty) {
      for (int tx = x0 / grid.tile; tx <= x1 / grid.tile; ++tx) {
        grid.lists[static_cast<std::size_t>(ty) * grid.tiles_x + tx].push_back(
            static_cast<int>(k));
      }
    }
  }
  return grid;
}

}  // namespace detail

RenderBuffers render(const GaussianScene& scene, const Camera& cam, const RenderConfig& cfg) {
  scene.validate();
  cam.validate();

  RenderBuffers out;
  out.width = cam.width;
  out.height = cam.height;
  const std::size_t npx = static_cast<std::size_t>(cam.width) * cam.height;
  out.rgb.assign(npx * 3, 0.0);
  out.alpha.assign(npx, 0.0);
  out.depth.assign(npx, std::numeric_limits<double>::quiet_NaN());
  if (scene.empty()) return out;

  const detail::PreparedScene prep = detail::prepare_scene(scene, cam, cfg);
  const detail::TileGrid grid = detail::build_tiles(prep, cfg);
  const double q_max = cfg.footprint_sigma * cfg.footprint_sigma;
  const std::size_t n_tiles = grid.lists.size();

  parallel_chunks(n_tiles, cfg.threads, [&](std::size_t, std::size_t tb, std::size_t te) {
    for (std::size_t t = tb; t < te; ++t) {
      const auto& list = grid.lists[t];
      if (list.empty()) continue;
      const int tx = static_cast<int>(t) % grid.tiles_x;
      const int ty = static_cast<int>(t) / grid.tiles_x;
      const int px0 = tx * grid.tile, px1 = std::min(cam.width, px0 + grid.tile);
      const int py0 = ty * grid.tile, py1 = std::min(cam.height, py0 + grid.tile);

      for (int y = py0; y < py1; ++y) {
        for (int x = px0; x < px1; ++x) {
          const std::size_t pix = static_cast<std::size_t>(y) * cam.width + x;
          double T = 1.0;
          double acc_r = 0.0, acc_g = 0.0, acc_b = 0.0, acc_a = 0.0, acc_d = 0.0;
          for (const int k : list) {
            const detail::PreparedSplat& s = prep.splats[k];
            const double dx = x - s.ux, dy = y - s.uy;
            const double q = s.i00 * dx * dx + 2.0 * s.i01 * dx * dy + s.i11 * dy * dy;
            if (!(q <= q_max)) continue;
            const double g = std::exp(-0.5 * q);
            double a = scene.primitives[s.prim].opacity * g;
            if (a > cfg.alpha_clamp) a = cfg.alpha_clamp;
            const double w = T * a;
            const Vec3& c = scene.primitives[s.prim].color;
            acc_r += w * c.x();
            acc_g += w * c.y();
            acc_b += w * c.z();
            acc_a += w;
            acc_d += w * s.z;
            T *= 1.0 - a;
            if (T < cfg.term_transmittance) break;
          }
          out.rgb[pix * 3 + 0] = acc_r;
          out.rgb[pix * 3 + 1] = acc_g;
          out.rgb[pix * 3 + 2] = acc_b;
          out.alpha[pix] = acc_a;
          if (acc_a > cfg.min_alpha) out.depth[pix] = acc_d / acc_a;
        }
      }
    }
  });
  return out;
}

}  // namespace gsc
