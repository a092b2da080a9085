#pragma once

#include <vector>

#include "core/camera.hpp"
#include "core/depth_align.hpp"
#include "core/render.hpp"
#include "core/scene.hpp"

namespace gsc {

// 1-DoF parameterization mu_i = origin + dist_i * dir_i for a subset of a
// scene's primitives. Primitives outside `prim_index` are not ray-bound.
struct RayParameterization {
  Vec3 origin = Vec3::Zero();
  std::vector<int> prim_index;
  std::vector<Vec3> dir;       // unit, world space
  std::vector<double> dist;    // > 0
  std::vector<std::uint8_t> no_depth_flag;  // kept pre-alignment distance
  int excluded_count = 0;

  std::size_t size() const { return prim_index.size(); }

  // Position in this parameterization, or -1 when the primitive carries no ray.
  int index_of(int prim) const;

  // Throws "not ray-parameterized" when the primitive carries no ray.
  int require_index(int prim) const;

  void apply_to(GaussianScene& scene) const;

  // Checks unit directions, positive distances, and that origin + d * r
  // reconstructs the stored means within 1e-6.
  void validate(const GaussianScene& scene) const;
};

// Eq.-style geometric correction from planar depth to Euclidean ray distance:
// d = depth / (ray_dir . principal_axis). Grazing rays (dot <= 1e-3) are
// rejected.
double unproject_to_ray_distance(double depth_planar, const Vec3& ray_dir,
                                 const Vec3& principal_axis);

// Binds every primitive of `tgt` visible in `cam` to its viewing ray and
// re-initializes its distance from `aligned_depth` sampled at the projected
// coordinate (nearest pixel, or bilinear over valid pixels when `bilinear`).
// Means are overwritten to origin + d * r. Invisible primitives are excluded
// (counted); primitives over invalid depth keep their current distance and are
// flagged.
RayParameterization parameterize_rays(GaussianScene& tgt, const Camera& cam,
                                      const DepthMap& aligned_depth, const RenderConfig& cfg,
                                      bool bilinear = false);

// Binds rays at the primitives' current positions without re-initializing
// distances (the depth-alignment-disabled path).
RayParameterization rays_from_positions(GaussianScene& tgt, const Camera& cam,
                                        const RenderConfig& cfg);

}  // namespace gsc
