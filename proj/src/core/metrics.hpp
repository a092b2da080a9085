#pragma once

#include <vector>

#include "core/types.hpp"

namespace gsc {

struct MetricReport {
  double psnr = 0.0;
  double ssim = 0.0;
  double abs_rel = 0.0;
  double chamfer = 0.0;
  double f_score = 0.0;
  double f_score_threshold = 0.0;
};

inline constexpr double kPsnrCap = 99.0;

// PSNR (10 log10(1/MSE) on [0, 1] images, capped at 99 dB) and SSIM (11x11
// Gaussian window, sigma 1.5, standard constants, averaged over channels and
// the fully-covered window region).
struct ImageMetrics {
  double psnr = 0.0;
  double ssim = 0.0;
};
ImageMetrics image_metrics(const std::vector<double>& a, const std::vector<double>& b, int width,
                           int height);

// Symmetric mean nearest-neighbor distance (unsquared, world units).
double chamfer_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

// Harmonic mean of precision and recall at `threshold`.
double f_score(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt, double threshold);

// Mean |d_pred - d_gt| / d_gt over matched ray distances.
double abs_rel(const std::vector<double>& pred_dist, const std::vector<double>& gt_dist);

struct GeometryMetrics {
  double chamfer = 0.0;
  double f_score = 0.0;
};
GeometryMetrics geometry_metrics(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt,
                                 double f_threshold);

// Nearest-neighbor distances from every query to `points`; brute force for
// small sets, grid-accelerated above 10^4 points. Exposed so tests can pin
// the two routes against each other.
std::vector<double> nn_distances_brute(const std::vector<Vec3>& queries,
                                       const std::vector<Vec3>& points);
std::vector<double> nn_distances_grid(const std::vector<Vec3>& queries,
                                      const std::vector<Vec3>& points);
std::vector<double> nn_distances(const std::vector<Vec3>& queries,
                                 const std::vector<Vec3>& points);

}  // namespace gsc
