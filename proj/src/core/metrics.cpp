#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "core/error.hpp"

namespace gsc {

ImageMetrics image_metrics(const std::vector<double>& a, const std::vector<double>& b, int width,
                           int height) {
  const std::size_t n = static_cast<std::size_t>(width) * height * 3;
  if (a.size() != n || b.size() != n) {
    fail(ErrorCode::InvalidArgument, "image metrics: dimension mismatch");
  }
  ImageMetrics out;

  double mse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    mse += d * d;
  }
  mse /= static_cast<double>(n);
  out.psnr = mse > 0.0 ? std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse)) : kPsnrCap;

  // SSIM, 11x11 Gaussian window sigma 1.5 over the fully-covered region.
  constexpr int kRadius = 5;
  constexpr double kC1 = 0.01 * 0.01;
  constexpr double kC2 = 0.03 * 0.03;
  double kernel[2 * kRadius + 1];
  double ksum = 0.0;
  for (int k = -kRadius; k <= kRadius; ++k) {
    kernel[k + kRadius] = std::exp(-0.5 * k * k / (1.5 * 1.5));
    ksum += kernel[k + kRadius];
  }
  for (double& k : kernel) k /= ksum;

  if (width < 2 * kRadius + 1 || height < 2 * kRadius + 1) {
    // Too small for the window; single global statistic per channel.
    double ssim_sum = 0.0;
    const std::size_t npx = static_cast<std::size_t>(width) * height;
    for (int c = 0; c < 3; ++c) {
      double ma = 0.0, mb = 0.0;
      for (std::size_t i = 0; i < npx; ++i) {
        ma += a[i * 3 + c];
        mb += b[i * 3 + c];
      }
      ma /= npx;
      mb /= npx;
      double va = 0.0, vb = 0.0, cov = 0.0;
      for (std::size_t i = 0; i < npx; ++i) {
        va += (a[i * 3 + c] - ma) * (a[i * 3 + c] - ma);
        vb += (b[i * 3 + c] - mb) * (b[i * 3 + c] - mb);
        cov += (a[i * 3 + c] - ma) * (b[i * 3 + c] - mb);
      }
      va /= npx;
      vb /= npx;
      cov /= npx;
      ssim_sum += ((2 * ma * mb + kC1) * (2 * cov + kC2)) /
                  ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
    }
    out.ssim = ssim_sum / 3.0;
    return out;
  }

  auto at = [&](const std::vector<double>& img, int x, int y, int c) {
    return img[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  };

  double ssim_total = 0.0;
  std::size_t count = 0;
  for (int y = kRadius; y < height - kRadius; ++y) {
    for (int x = kRadius; x < width - kRadius; ++x) {
      for (int c = 0; c < 3; ++c) {
        double ma = 0.0, mb = 0.0, vaa = 0.0, vbb = 0.0, vab = 0.0;
        for (int dy = -kRadius; dy <= kRadius; ++dy) {
          for (int dx = -kRadius; dx <= kRadius; ++dx) {
            const double w = kernel[dy + kRadius] * kernel[dx + kRadius];
            const double pa = at(a, x + dx, y + dy, c);
            const double pb = at(b, x + dx, y + dy, c);
            ma += w * pa;
            mb += w * pb;
            vaa += w * pa * pa;
            vbb += w * pb * pb;
            vab += w * pa * pb;
          }
        }
        const double var_a = vaa - ma * ma;
        const double var_b = vbb - mb * mb;
        const double cov = vab - ma * mb;
        ssim_total += ((2 * ma * mb + kC1) * (2 * cov + kC2)) /
                      ((ma * ma + mb * mb + kC1) * (var_a + var_b + kC2));
        ++count;
      }
    }
  }
  out.ssim = ssim_total / static_cast<double>(count);
  return out;
}

namespace {

constexpr std::size_t kBruteThreshold = 10000;

std::int64_t cell_key(int cx, int cy, int cz) {
  return (static_cast<std::int64_t>(cx) << 42) ^ (static_cast<std::int64_t>(cy) << 21) ^
         static_cast<std::int64_t>(cz);
}

}  // namespace

std::vector<double> nn_distances_brute(const std::vector<Vec3>& queries,
                                       const std::vector<Vec3>& points) {
  if (points.empty()) fail(ErrorCode::InvalidArgument, "nearest neighbor: empty point set");
  std::vector<double> out(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    double best = 1e300;
    for (const auto& p : points) {
      best = std::min(best, (queries[i] - p).squaredNorm());
    }
    out[i] = std::sqrt(best);
  }
  return out;
}

std::vector<double> nn_distances_grid(const std::vector<Vec3>& queries,
                                      const std::vector<Vec3>& points) {
  if (points.empty()) fail(ErrorCode::InvalidArgument, "nearest neighbor: empty point set");
  Vec3 lo = points[0], hi = points[0];
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double diag = (hi - lo).norm();
  const double cell = std::max(diag / std::max(1.0, std::cbrt(double(points.size()))), 1e-12);

  std::unordered_map<std::int64_t, std::vector<int>> grid;
  grid.reserve(points.size() * 2);
  auto cell_of = [&](const Vec3& p, int* cx, int* cy, int* cz) {
    *cx = static_cast<int>(std::floor((p.x() - lo.x()) / cell));
    *cy = static_cast<int>(std::floor((p.y() - lo.y()) / cell));
    *cz = static_cast<int>(std::floor((p.z() - lo.z()) / cell));
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    int cx, cy, cz;
    cell_of(points[i], &cx, &cy, &cz);
    grid[cell_key(cx, cy, cz)].push_back(static_cast<int>(i));
  }

  std::vector<double> out(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    int cx, cy, cz;
    cell_of(queries[i], &cx, &cy, &cz);
    double best_sq = 1e300;
    // Expanding ring search; a ring at radius r only contains points farther
    // than (r - 1) * cell, so stop once that bound exceeds the best distance.
    for (int r = 0;; ++r) {
      if (r > 0 && best_sq < 1e300) {
        const double bound = (r - 1) * cell;
        if (bound > 0.0 && bound * bound > best_sq) break;
      }
      bool any_cell = false;
      for (int dz = -r; dz <= r; ++dz) {
        for (int dy = -r; dy <= r; ++dy) {
          for (int dx = -r; dx <= r; ++dx) {
            if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != r) continue;
            const auto it = grid.find(cell_key(cx + dx, cy + dy, cz + dz));
            if (it == grid.end()) continue;
            any_cell = true;
            for (const int pi : it->second) {
              best_sq = std::min(best_sq, (queries[i] - points[pi]).squaredNorm());
            }
          }
        }
      }
      // Safety: if the query is far outside the populated grid keep growing
      // until something is found.
      if (!any_cell && r > 0 && best_sq == 1e300) {
        const int max_r = static_cast<int>(diag / cell) + 2;
        if (r > max_r) {
          out[i] = nn_distances_brute({queries[i]}, points)[0];
          best_sq = out[i] * out[i];
          break;
        }
      }
    }
    out[i] = std::sqrt(best_sq);
  }
  return out;
}

std::vector<double> nn_distances(const std::vector<Vec3>& queries,
                                 const std::vector<Vec3>& points) {
  if (points.size() <= kBruteThreshold && queries.size() <= kBruteThreshold) {
    return nn_distances_brute(queries, points);
  }
  return nn_distances_grid(queries, points);
}

double chamfer_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.empty() || b.empty()) fail(ErrorCode::InvalidArgument, "chamfer: empty point set");
  const std::vector<double> ab = nn_distances(a, b);
  const std::vector<double> ba = nn_distances(b, a);
  double ma = 0.0, mb = 0.0;
  for (const double d : ab) ma += d;
  for (const double d : ba) mb += d;
  return 0.5 * (ma / ab.size() + mb / ba.size());
}

double f_score(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt, double threshold) {
  if (pred.empty() || gt.empty()) fail(ErrorCode::InvalidArgument, "f-score: empty point set");
  const std::vector<double> pg = nn_distances(pred, gt);
  const std::vector<double> gp = nn_distances(gt, pred);
  double precision = 0.0, recall = 0.0;
  for (const double d : pg) precision += d < threshold ? 1.0 : 0.0;
  for (const double d : gp) recall += d < threshold ? 1.0 : 0.0;
  precision /= pred.size();
  recall /= gt.size();
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double abs_rel(const std::vector<double>& pred_dist, const std::vector<double>& gt_dist) {
  if (pred_dist.size() != gt_dist.size() || pred_dist.empty()) {
    fail(ErrorCode::InvalidArgument, "abs_rel: size mismatch or empty");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < pred_dist.size(); ++i) {
    acc += std::abs(pred_dist[i] - gt_dist[i]) / gt_dist[i];
  }
  return acc / static_cast<double>(pred_dist.size());
}

GeometryMetrics geometry_metrics(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt,
                                 double f_threshold) {
  GeometryMetrics out;
  out.chamfer = chamfer_distance(pred, gt);
  out.f_score = f_score(pred, gt, f_threshold);
  return out;
}

}  // namespace gsc
