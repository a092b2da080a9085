#include "core/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "core/error.hpp"
#include "core/image.hpp"

namespace gsc {

namespace {

using std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vec4 quat_from_matrix(const Mat3& r) {
  Eigen::Quaterniond q(r);
  q.normalize();
  return Vec4(q.w(), q.x(), q.y(), q.z());
}

// Tangent frame on a plane with normal n, spun by theta around n.
Mat3 frame_on_plane(const Vec3& n, const Vec3& t1_hint, double theta) {
  const Vec3 t1 = (t1_hint - t1_hint.dot(n) * n).normalized();
  const Vec3 t2 = n.cross(t1);
  const Vec3 a = std::cos(theta) * t1 + std::sin(theta) * t2;
  const Vec3 b = n.cross(a);
  Mat3 frame;
  frame.col(0) = a;
  frame.col(1) = b;
  frame.col(2) = n;
  return frame;
}

GaussianPrimitive make_surface_splat(const Vec3& pos, const Vec3& normal, const Vec3& t1_hint,
                                     double tangent_scale, const Vec3& color,
                                     std::mt19937_64& rng) {
  GaussianPrimitive prim;
  prim.mean = pos;
  const double theta = uniform(rng, 0.0, 2.0 * pi);
  prim.rotation = quat_from_matrix(frame_on_plane(normal, t1_hint, theta));
  const double s1 = tangent_scale * uniform(rng, 0.75, 1.25);
  const double s2 = tangent_scale * uniform(rng, 0.75, 1.25);
  prim.scale = Vec3(s1, s2, 0.08 * tangent_scale);
  prim.opacity = uniform(rng, 0.78, 0.95);
  prim.color = color.cwiseMax(0.02).cwiseMin(0.98);
  return prim;
}

double focal_from_fov(double fov_deg, int width) {
  return 0.5 * width / std::tan(0.5 * fov_deg * pi / 180.0);
}

struct RoomLayout {
  double lx, ly, lz;
};

void generate_room(const OracleParams& p, std::mt19937_64& rng, OracleScene& out) {
  RoomLayout room;
  room.lx = 5.5 + uniform(rng, 0.0, 1.5);
  room.ly = 2.8 + uniform(rng, 0.0, 0.7);
  room.lz = 7.0 + uniform(rng, 0.0, 2.0);
  out.scene_diag = std::sqrt(room.lx * room.lx + room.ly * room.ly + room.lz * room.lz);

  struct Plane {
    Vec3 origin, ua, ub, normal, t1;
    double la, lb;
    Vec3 base_color;
  };
  const std::vector<Plane> planes = {
      // floor, ceiling, left, right, back
      {{0, 0, 0}, {1, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}, room.lx, room.lz, {0.55, 0.42, 0.30}},
      {{0, room.ly, 0}, {1, 0, 0}, {0, 0, 1}, {0, -1, 0}, {1, 0, 0}, room.lx, room.lz, {0.82, 0.80, 0.76}},
      {{0, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 0}, {0, 0, 1}, room.ly, room.lz, {0.35, 0.52, 0.64}},
      {{room.lx, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 0, 0}, {0, 0, 1}, room.ly, room.lz, {0.66, 0.46, 0.38}},
      {{0, 0, room.lz}, {1, 0, 0}, {0, 1, 0}, {0, 0, -1}, {1, 0, 0}, room.lx, room.ly, {0.46, 0.58, 0.40}},
  };

  double total_area = 0.0;
  for (const auto& pl : planes) total_area += pl.la * pl.lb;
  std::vector<int> counts(planes.size(), 0);
  int assigned = 0;
  for (std::size_t i = 0; i + 1 < planes.size(); ++i) {
    counts[i] = static_cast<int>(std::floor(p.n_primitives * planes[i].la * planes[i].lb /
                                            total_area));
    assigned += counts[i];
  }
  counts.back() = p.n_primitives - assigned;

  for (std::size_t pi_ = 0; pi_ < planes.size(); ++pi_) {
    const Plane& pl = planes[pi_];
    const int count = counts[pi_];
    if (count <= 0) continue;
    const double spacing = std::sqrt(pl.la * pl.lb / count);
    const double freq_a = uniform(rng, 2.0, 5.0), freq_b = uniform(rng, 2.0, 5.0);
    const double phase_a = uniform(rng, 0.0, 2.0 * pi), phase_b = uniform(rng, 0.0, 2.0 * pi);
    for (int j = 0; j < count; ++j) {
      const double a = uniform(rng, 0.0, pl.la);
      const double b = uniform(rng, 0.0, pl.lb);
      const Vec3 pos = pl.origin + a * pl.ua + b * pl.ub;
      const double tex = 0.5 + 0.5 * std::sin(freq_a * a + phase_a) * std::sin(freq_b * b + phase_b);
      Vec3 color = pl.base_color * (0.55 + 0.45 * tex);
      for (int c = 0; c < 3; ++c) color[c] += uniform(rng, -0.04, 0.04);
      out.gt.push_back(
          make_surface_splat(pos, pl.normal, pl.t1, spacing * 1.05, color, rng), Provenance::Context);
    }
  }

  // Trajectory: cameras 0..n_context-2 advance down the room facing the
  // right-hand side of the back wall; the last context camera sits closest to
  // the target but is turned hard toward the right wall (a poor stereo mate);
  // targets pan left, exposing a region the context never observed.
  const double f = focal_from_fov(p.fov_deg, p.width);
  const Vec3 right_look(room.lx * (0.68 + uniform(rng, -0.03, 0.03)),
                        room.ly * (0.50 + uniform(rng, -0.04, 0.04)), room.lz);
  const int n_aligned = std::max(1, p.n_context - 1);
  for (int i = 0; i < n_aligned; ++i) {
    const double s = n_aligned > 1 ? static_cast<double>(i) / (n_aligned - 1) : 0.0;
    const Vec3 pos(room.lx * (0.40 + 0.08 * s + uniform(rng, -0.02, 0.02)),
                   room.ly * (0.48 + uniform(rng, -0.03, 0.03)),
                   room.lz * (0.06 + 0.26 * s + uniform(rng, -0.012, 0.012)));
    out.cameras.push_back(make_look_at_camera(
        pos, right_look + Vec3(uniform(rng, -0.15, 0.15), uniform(rng, -0.1, 0.1), 0.0), f, f,
        p.width, p.height));
  }
  if (p.n_context > 1) {
    const Vec3 pos(room.lx * (0.52 + uniform(rng, -0.02, 0.02)),
                   room.ly * (0.50 + uniform(rng, -0.02, 0.02)),
                   room.lz * (0.37 + uniform(rng, -0.015, 0.015)));
    const Vec3 look(room.lx, room.ly * (0.45 + uniform(rng, -0.05, 0.05)),
                    room.lz * (0.40 + uniform(rng, -0.05, 0.05)));
    out.cameras.push_back(make_look_at_camera(pos, look, f, f, p.width, p.height));
  }
  out.n_context = static_cast<int>(out.cameras.size());

  for (int t = 0; t < p.n_targets; ++t) {
    const double adv = 0.05 * t * p.interval;
    const Vec3 pos(room.lx * (0.50 + uniform(rng, -0.02, 0.02)),
                   room.ly * (0.50 + uniform(rng, -0.02, 0.02)),
                   room.lz * std::min(0.62, 0.40 + adv));
    const Vec3 look(room.lx * (0.24 - 0.02 * t + uniform(rng, -0.02, 0.02)),
                    room.ly * (0.50 + uniform(rng, -0.04, 0.04)), room.lz);
    out.cameras.push_back(make_look_at_camera(pos, look, f, f, p.width, p.height));
  }
}

void generate_terrain(const OracleParams& p, std::mt19937_64& rng, OracleScene& out) {
  const double sx = 16.0 + uniform(rng, 0.0, 4.0);
  const double sz = 24.0 + uniform(rng, 0.0, 6.0);
  const double a1 = 1.0 + uniform(rng, 0.0, 0.5), f1 = uniform(rng, 0.35, 0.55),
               p1 = uniform(rng, 0.0, 2.0 * pi);
  const double a2 = 0.7 + uniform(rng, 0.0, 0.4), f2 = uniform(rng, 0.22, 0.40),
               p2 = uniform(rng, 0.0, 2.0 * pi);
  const double a3 = 0.4 + uniform(rng, 0.0, 0.3), f3 = uniform(rng, 0.12, 0.22),
               p3 = uniform(rng, 0.0, 2.0 * pi);

  auto height = [&](double x, double z) {
    return a1 * std::sin(f1 * x + p1) + a2 * std::sin(f2 * z + p2) +
           a3 * std::sin(f3 * (x + z) + p3);
  };
  auto normal_at = [&](double x, double z) {
    const double hx = a1 * f1 * std::cos(f1 * x + p1) + a3 * f3 * std::cos(f3 * (x + z) + p3);
    const double hz = a2 * f2 * std::cos(f2 * z + p2) + a3 * f3 * std::cos(f3 * (x + z) + p3);
    return Vec3(-hx, 1.0, -hz).normalized();
  };

  const double hmax = a1 + a2 + a3;
  out.scene_diag = std::sqrt(sx * sx + sz * sz + 4.0 * hmax * hmax);

  const double spacing = std::sqrt(sx * sz / std::max(1, p.n_primitives));
  const Vec3 low_color(0.30, 0.45, 0.22), high_color(0.55, 0.48, 0.38);
  const double freq = uniform(rng, 1.5, 3.5), phase = uniform(rng, 0.0, 2.0 * pi);
  for (int j = 0; j < p.n_primitives; ++j) {
    const double x = uniform(rng, 0.0, sx);
    const double z = uniform(rng, 0.0, sz);
    const double h = height(x, z);
    const double hn = std::clamp(0.5 + 0.5 * h / hmax, 0.0, 1.0);
    const double tex = 0.5 + 0.5 * std::sin(freq * x + phase) * std::sin(freq * z + phase * 0.7);
    Vec3 color = (1.0 - hn) * low_color + hn * high_color;
    color *= 0.6 + 0.4 * tex;
    for (int c = 0; c < 3; ++c) color[c] += uniform(rng, -0.04, 0.04);
    out.gt.push_back(make_surface_splat(Vec3(x, h, z), normal_at(x, z), Vec3(1, 0, 0),
                                        spacing * 1.1, color, rng),
                     Provenance::Context);
  }

  const double f = focal_from_fov(p.fov_deg, p.width);
  const double fly = hmax + 2.6 + uniform(rng, 0.0, 0.8);
  const int n_aligned = std::max(1, p.n_context - 1);
  for (int i = 0; i < n_aligned; ++i) {
    const double s = n_aligned > 1 ? static_cast<double>(i) / (n_aligned - 1) : 0.0;
    const Vec3 pos(sx * (0.42 + 0.05 * s + uniform(rng, -0.02, 0.02)), fly,
                   sz * (0.05 + 0.18 * s + uniform(rng, -0.01, 0.01)));
    const Vec3 look(sx * (0.62 + uniform(rng, -0.03, 0.03)), 0.0,
                    sz * (0.75 + uniform(rng, -0.03, 0.03)));
    out.cameras.push_back(make_look_at_camera(pos, look, f, f, p.width, p.height));
  }
  if (p.n_context > 1) {
    const Vec3 pos(sx * (0.50 + uniform(rng, -0.02, 0.02)), fly,
                   sz * (0.30 + uniform(rng, -0.01, 0.01)));
    const Vec3 look(sx, fly * 0.25, sz * (0.32 + uniform(rng, -0.03, 0.03)));
    out.cameras.push_back(make_look_at_camera(pos, look, f, f, p.width, p.height));
  }
  out.n_context = static_cast<int>(out.cameras.size());

  for (int t = 0; t < p.n_targets; ++t) {
    const double adv = 0.04 * t * p.interval;
    const Vec3 pos(sx * (0.48 + uniform(rng, -0.02, 0.02)), fly,
                   sz * std::min(0.55, 0.33 + adv));
    const Vec3 look(sx * (0.18 - 0.02 * t + uniform(rng, -0.02, 0.02)), 0.0, sz);
    out.cameras.push_back(make_look_at_camera(pos, look, f, f, p.width, p.height));
  }
}

}  // namespace

void OracleParams::validate() const {
  if (preset != "room" && preset != "terrain") {
    fail(ErrorCode::InvalidArgument, "oracle: unknown preset '" + preset + "'");
  }
  if (n_primitives < 1) fail(ErrorCode::InvalidArgument, "oracle: n_primitives must be >= 1");
  if (n_context < 1 || n_targets < 1) {
    fail(ErrorCode::InvalidArgument, "oracle: need at least one context and one target camera");
  }
  if (width < 8 || height < 8) fail(ErrorCode::InvalidArgument, "oracle: resolution too small");
}

OracleScene generate_synthetic_scene(const OracleParams& params, const RenderConfig& cfg) {
  params.validate();
  OracleScene out;
  out.seed = params.seed;
  std::mt19937_64 rng(params.seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull);
  if (params.preset == "room") {
    generate_room(params, rng, out);
  } else {
    generate_terrain(params, rng, out);
  }
  out.gt.validate();
  out.gt_renders.reserve(out.cameras.size());
  for (const auto& cam : out.cameras) out.gt_renders.push_back(render(out.gt, cam, cfg));
  return out;
}

bool primitive_visible_in(const GaussianPrimitive& prim, const Camera& cam,
                          const RenderConfig& cfg) {
  const SplatProjection proj = project_gaussian(prim, cam, cfg);
  return proj.visible && proj.mean2d.x() >= 0.0 && proj.mean2d.x() <= cam.width - 1 &&
         proj.mean2d.y() >= 0.0 && proj.mean2d.y() <= cam.height - 1;
}

GaussianScene context_scene(const OracleScene& oracle, const RenderConfig& cfg,
                            std::vector<int>* gt_indices) {
  GaussianScene ctx;
  if (gt_indices) gt_indices->clear();
  for (std::size_t i = 0; i < oracle.gt.size(); ++i) {
    bool seen = false;
    for (int c = 0; c < oracle.n_context && !seen; ++c) {
      seen = primitive_visible_in(oracle.gt.primitives[i], oracle.cameras[c], cfg);
    }
    if (!seen) continue;
    ctx.push_back(oracle.gt.primitives[i], Provenance::Context);
    if (gt_indices) gt_indices->push_back(static_cast<int>(i));
  }
  return ctx;
}

void CorruptionSpec::validate() const {
  if (!(scale > 0.0)) fail(ErrorCode::InvalidArgument, "corruption: scale must be positive");
  if (ray_noise_sigma < 0.0 || outlier_fraction < 0.0 || outlier_fraction > 1.0) {
    fail(ErrorCode::InvalidArgument, "corruption: fractions out of range");
  }
}

TargetPrediction corrupt_target_prediction(const OracleScene& oracle, int target_cam_index,
                                           const Camera& reference_cam,
                                           const CorruptionSpec& spec, const RenderConfig& cfg) {
  spec.validate();
  if (target_cam_index < 0 || target_cam_index >= static_cast<int>(oracle.cameras.size())) {
    fail(ErrorCode::InvalidArgument, "corruption: target camera index out of range");
  }
  const Camera& tcam = oracle.cameras[target_cam_index];
  const Vec3 origin = tcam.center();

  TargetPrediction pred;
  std::vector<double> dists;
  for (std::size_t i = 0; i < oracle.gt.size(); ++i) {
    if (!primitive_visible_in(oracle.gt.primitives[i], tcam, cfg)) continue;
    pred.prims.push_back(oracle.gt.primitives[i], Provenance::Target);
    pred.gt_index.push_back(static_cast<int>(i));
    const double d = (oracle.gt.primitives[i].mean - origin).norm();
    pred.true_dist.push_back(d);
    dists.push_back(d);
  }
  if (pred.prims.empty()) return pred;

  // Stereo-quality model: triangulated depth noise grows as the baseline
  // shrinks relative to the scene depth.
  std::vector<double> sorted = dists;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double z_med = sorted[sorted.size() / 2];
  const double baseline = std::max(camera_baseline(tcam, reference_cam), 0.02 * z_med);
  const double quality = 0.5 + 0.5 * z_med / baseline;
  pred.noise_sigma_used = spec.ray_noise_sigma * quality;

  std::mt19937_64 rng(spec.seed * 0x2545F4914F6CDD1Dull + 0x9E3779B97F4A7C15ull);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const bool affine = spec.scale != 1.0 || spec.shift != 0.0;
  for (std::size_t k = 0; k < pred.prims.size(); ++k) {
    auto& prim = pred.prims.primitives[k];
    const Vec3 offset = prim.mean - origin;
    const double d0 = offset.norm();
    const Vec3 ray = offset / d0;
    double d = d0;

    if (affine) {
      // Slide along the target ray so the reference-view planar depth obeys
      // z_gt = s* z_pred + t* exactly.
      const double z_ref = (reference_cam.rotation * prim.mean + reference_cam.translation).z();
      const double beta = (reference_cam.rotation * ray).z();
      if (std::abs(beta) > 0.05) {
        const double z_new = (z_ref - spec.shift) / spec.scale;
        d = d0 + (z_new - z_ref) / beta;
      } else {
        d = (d0 - spec.shift) / spec.scale;
      }
    }
    if (pred.noise_sigma_used > 0.0) {
      d *= 1.0 + pred.noise_sigma_used * gauss(rng);
    }
    if (spec.outlier_fraction > 0.0 && uniform(rng, 0.0, 1.0) < spec.outlier_fraction) {
      d = uniform(rng, 0.3, 0.95 * oracle.scene_diag);
    }
    d = std::max(d, 2.0 * cfg.near_plane);
    if (d != d0) prim.mean = origin + d * ray;
  }
  return pred;
}

std::vector<double> make_reference_image(const OracleScene& oracle, int target_cam_index,
                                         double blur_sigma_px, double noise_amplitude,
                                         std::uint64_t seed, const RenderConfig& cfg) {
  if (target_cam_index < 0 || target_cam_index >= static_cast<int>(oracle.cameras.size())) {
    fail(ErrorCode::InvalidArgument, "reference image: camera index out of range");
  }
  const Camera& cam = oracle.cameras[target_cam_index];
  std::vector<double> rgb;
  if (static_cast<std::size_t>(target_cam_index) < oracle.gt_renders.size() &&
      oracle.gt_renders[target_cam_index].width == cam.width) {
    rgb = oracle.gt_renders[target_cam_index].rgb;
  } else {
    rgb = render(oracle.gt, cam, cfg).rgb;
  }
  if (blur_sigma_px > 0.0) rgb = gaussian_blur_rgb(rgb, cam.width, cam.height, blur_sigma_px);
  if (noise_amplitude > 0.0) {
    std::mt19937_64 rng(seed * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull);
    for (auto& v : rgb) {
      v = std::clamp(v + uniform(rng, -noise_amplitude, noise_amplitude), 0.0, 1.0);
    }
  }
  return rgb;
}

}  // namespace gsc
