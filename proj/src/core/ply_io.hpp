#pragma once

#include <string>

#include "core/scene.hpp"

namespace gsc {

// Binary little-endian PLY in the de-facto 3DGS export layout: float32
// properties x, y, z, f_dc_0..2, opacity, scale_0..2, rot_0..3. Opacity is
// stored as a logit, scale as a log, color as the DC spherical-harmonics
// coefficient (rgb = 0.5 + C0 * f_dc). Unknown properties are skipped on load;
// provenance is not persisted (loaded primitives are tagged context).
GaussianScene load_scene_ply(const std::string& path);
void save_scene_ply(const GaussianScene& scene, const std::string& path);

// DC coefficient of the degree-0 spherical harmonic basis.
inline constexpr double kShC0 = 0.28209479177387814;

}  // namespace gsc
