#pragma once

// Shared internals of the forward renderer and the backward passes. Not part
// of the public surface.

#include <vector>

#include "core/render.hpp"

namespace gsc::detail {

struct PreparedSplat {
  double ux = 0.0, uy = 0.0;           // projected mean, pixel coords
  double c00 = 0.0, c01 = 0.0, c11 = 0.0;  // regularized cov2d
  double i00 = 0.0, i01 = 0.0, i11 = 0.0;  // conic (cov2d inverse)
  double z = 0.0;                      // camera-space depth of the mean
  double ext_x = 0.0, ext_y = 0.0;     // support half extents in pixels
  int prim = -1;                       // index into the scene
};

struct PreparedScene {
  std::vector<PreparedSplat> splats;  // visible splats sorted by (z, prim)
  std::vector<int> prim_to_splat;     // -1 when invisible or degenerate
  int width = 0, height = 0;
};

PreparedScene prepare_scene(const GaussianScene& scene, const Camera& cam,
                            const RenderConfig& cfg);

struct TileGrid {
  int tiles_x = 0, tiles_y = 0, tile = 16;
  std::vector<std::vector<int>> lists;  // per tile: indices into splats, z order
};

TileGrid build_tiles(const PreparedScene& prep, const RenderConfig& cfg);

}  // namespace gsc::detail
