#pragma once

#include <cstdint>
#include <vector>

#include "core/types.hpp"

namespace gsc {

enum class Provenance : std::uint8_t { Context = 0, Target = 1, Merged = 2 };

const char* provenance_name(Provenance p);

// One splat. The quaternion is stored (w, x, y, z) and is kept unit-norm to
// within 1e-6; rotation_matrix() renormalizes exactly before building R.
struct GaussianPrimitive {
  Vec3 mean = Vec3::Zero();
  Vec4 rotation = Vec4(1.0, 0.0, 0.0, 0.0);
  Vec3 scale = Vec3::Ones();  // axis lengths, strictly positive
  double opacity = 1.0;       // in [0, 1]
  Vec3 color = Vec3::Zero();  // view-independent rgb in [0, 1]
};

Mat3 rotation_matrix(const Vec4& quat_wxyz);

// Sigma = R * diag(s)^2 * R^T. Rejects non-finite inputs and non-positive
// scales with a diagnostic.
Mat3 covariance_from_scale_rotation(const Vec4& quat_wxyz, const Vec3& scale);

struct GaussianScene {
  std::vector<GaussianPrimitive> primitives;
  std::vector<Provenance> provenance;

  std::size_t size() const { return primitives.size(); }
  bool empty() const { return primitives.empty(); }

  void push_back(const GaussianPrimitive& prim, Provenance tag) {
    primitives.push_back(prim);
    provenance.push_back(tag);
  }

  void reserve(std::size_t n) {
    primitives.reserve(n);
    provenance.reserve(n);
  }

  // Checks the type invariants (tag count, quaternion norm, positive scales,
  // opacity range); throws on violation.
  void validate() const;

  std::vector<Vec3> means() const;
};

// Per-term weights of the registration and refinement objectives plus the
// hole-mask threshold tau.
struct LossWeights {
  double lambda_d = 1.0;
  double lambda_s = 1.0;
  double lambda_c = 0.1;
  double lambda_mv = 0.1;
  double tau = 0.5;

  void validate() const;
};

}  // namespace gsc
