#include "core/ray_param.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"

namespace gsc {

int RayParameterization::index_of(int prim) const {
  for (std::size_t k = 0; k < prim_index.size(); ++k) {
    if (prim_index[k] == prim) return static_cast<int>(k);
  }
  return -1;
}

int RayParameterization::require_index(int prim) const {
  const int k = index_of(prim);
  if (k < 0) {
    fail(ErrorCode::InvalidArgument,
         "primitive " + std::to_string(prim) + " not ray-parameterized");
  }
  return k;
}

void RayParameterization::apply_to(GaussianScene& scene) const {
  for (std::size_t k = 0; k < prim_index.size(); ++k) {
    scene.primitives[prim_index[k]].mean = origin + dist[k] * dir[k];
  }
}

void RayParameterization::validate(const GaussianScene& scene) const {
  if (dir.size() != prim_index.size() || dist.size() != prim_index.size()) {
    fail(ErrorCode::InvalidArgument, "ray parameterization: size mismatch");
  }
  for (std::size_t k = 0; k < prim_index.size(); ++k) {
    if (std::abs(dir[k].norm() - 1.0) > 1e-6) {
      fail(ErrorCode::InvalidArgument, "ray parameterization: direction not unit");
    }
    if (!(dist[k] > 0.0)) {
      fail(ErrorCode::InvalidArgument, "ray parameterization: distance not positive");
    }
    const Vec3 rec = origin + dist[k] * dir[k];
    if ((rec - scene.primitives[prim_index[k]].mean).cwiseAbs().maxCoeff() > 1e-6) {
      fail(ErrorCode::InvalidArgument,
           "ray parameterization: mean reconstruction mismatch at entry " + std::to_string(k));
    }
  }
}

double unproject_to_ray_distance(double depth_planar, const Vec3& ray_dir,
                                 const Vec3& principal_axis) {
  const double dot = ray_dir.dot(principal_axis);
  if (!(dot > 1e-3)) {
    fail(ErrorCode::Numeric, "unprojection singular: ray grazes the image plane");
  }
  return depth_planar / dot;
}

RayParameterization parameterize_rays(GaussianScene& tgt, const Camera& cam,
                                      const DepthMap& aligned_depth, const RenderConfig& cfg,
                                      bool bilinear) {
  cam.validate();
  if (aligned_depth.width != cam.width || aligned_depth.height != cam.height) {
    fail(ErrorCode::InvalidArgument, "parameterize_rays: depth buffer resolution mismatch");
  }

  RayParameterization rays;
  rays.origin = cam.center();
  const Vec3 axis = cam.principal_axis();

  auto sample_depth = [&](double u, double v, bool* ok) -> double {
    *ok = false;
    if (bilinear) {
      const int x0 = static_cast<int>(std::floor(u));
      const int y0 = static_cast<int>(std::floor(v));
      double acc = 0.0, wsum = 0.0;
      for (int dy = 0; dy <= 1; ++dy) {
        for (int dx = 0; dx <= 1; ++dx) {
          const int x = x0 + dx, y = y0 + dy;
          if (x < 0 || x >= cam.width || y < 0 || y >= cam.height) continue;
          const std::size_t idx = static_cast<std::size_t>(y) * cam.width + x;
          if (!aligned_depth.valid[idx]) continue;
          const double w = (1.0 - std::abs(u - x)) * (1.0 - std::abs(v - y));
          acc += w * aligned_depth.values[idx];
          wsum += w;
        }
      }
      if (wsum <= 0.0) return 0.0;
      *ok = true;
      return acc / wsum;
    }
    const int x = static_cast<int>(std::lround(u));
    const int y = static_cast<int>(std::lround(v));
    if (x < 0 || x >= cam.width || y < 0 || y >= cam.height) return 0.0;
    const std::size_t idx = static_cast<std::size_t>(y) * cam.width + x;
    if (!aligned_depth.valid[idx]) return 0.0;
    *ok = true;
    return aligned_depth.values[idx];
  };

  for (std::size_t i = 0; i < tgt.size(); ++i) {
    const SplatProjection proj = project_gaussian(tgt.primitives[i], cam, cfg);
    const bool on_image = proj.visible && proj.mean2d.x() >= 0.0 &&
                          proj.mean2d.x() <= cam.width - 1 && proj.mean2d.y() >= 0.0 &&
                          proj.mean2d.y() <= cam.height - 1;
    if (!on_image) {
      ++rays.excluded_count;
      continue;
    }
    const Vec3 dir = cam.ray_direction(proj.mean2d.x(), proj.mean2d.y());
    bool have_depth = false;
    const double planar = sample_depth(proj.mean2d.x(), proj.mean2d.y(), &have_depth);

    double d;
    std::uint8_t flagged = 0;
    if (have_depth && planar > 0.0) {
      d = unproject_to_ray_distance(planar, dir, axis);
    } else {
      d = (tgt.primitives[i].mean - rays.origin).norm();  // pre-alignment distance
      flagged = 1;
    }
    d = std::max(d, cfg.near_plane);
    rays.prim_index.push_back(static_cast<int>(i));
    rays.dir.push_back(dir);
    rays.dist.push_back(d);
    rays.no_depth_flag.push_back(flagged);
  }
  rays.apply_to(tgt);
  return rays;
}

RayParameterization rays_from_positions(GaussianScene& tgt, const Camera& cam,
                                        const RenderConfig& cfg) {
  cam.validate();
  RayParameterization rays;
  rays.origin = cam.center();
  for (std::size_t i = 0; i < tgt.size(); ++i) {
    const SplatProjection proj = project_gaussian(tgt.primitives[i], cam, cfg);
    const bool on_image = proj.visible && proj.mean2d.x() >= 0.0 &&
                          proj.mean2d.x() <= cam.width - 1 && proj.mean2d.y() >= 0.0 &&
                          proj.mean2d.y() <= cam.height - 1;
    if (!on_image) {
      ++rays.excluded_count;
      continue;
    }
    const Vec3 offset = tgt.primitives[i].mean - rays.origin;
    const double d = offset.norm();
    if (!(d > cfg.near_plane)) {
      ++rays.excluded_count;
      continue;
    }
    rays.prim_index.push_back(static_cast<int>(i));
    rays.dir.push_back(offset / d);
    rays.dist.push_back(d);
    rays.no_depth_flag.push_back(0);
  }
  rays.apply_to(tgt);
  return rays;
}

}  // namespace gsc
