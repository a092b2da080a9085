#pragma once

#include <string>
#include <vector>

#include "core/camera.hpp"

namespace gsc {

// JSON array of {fx, fy, cx, cy, width, height, rotation (3x3 row-major
// nested array), translation [3]}. Rotations deviating from orthonormal by
// more than 1e-4 are rejected; smaller drift is re-orthonormalized.
std::vector<Camera> load_cameras_json(const std::string& path);
void save_cameras_json(const std::vector<Camera>& cameras, const std::string& path);

std::vector<Camera> cameras_from_json_text(const std::string& text);
std::string cameras_to_json_text(const std::vector<Camera>& cameras);

}  // namespace gsc
