#include "core/depth_align.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "core/error.hpp"
#include "core/parallel.hpp"

namespace gsc {

DepthMap depth_from_render(const RenderBuffers& buffers, double alpha_threshold) {
  DepthMap out;
  out.width = buffers.width;
  out.height = buffers.height;
  const std::size_t n = buffers.depth.size();
  out.values.assign(n, 0.0);
  out.valid.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const bool ok = buffers.depth_valid(i) &&
                    (alpha_threshold < 0.0 || buffers.alpha[i] >= alpha_threshold);
    if (ok) {
      out.values[i] = buffers.depth[i];
      out.valid[i] = 1;
    }
  }
  return out;
}

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}

struct LeastSquares {
  double scale = 0.0, shift = 0.0;
  bool ok = false;
};

LeastSquares fit_least_squares(const std::vector<double>& x, const std::vector<double>& y,
                               const std::vector<int>& idx) {
  LeastSquares out;
  const double n = static_cast<double>(idx.size());
  if (idx.size() < 2) return out;
  double sx = 0.0, sy = 0.0;
  for (const int i : idx) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const int i : idx) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) return out;
  out.scale = sxy / sxx;
  out.shift = my - out.scale * mx;
  out.ok = true;
  return out;
}

}  // namespace

AffineDepthFit fit_affine_depth_ransac(const DepthMap& pred, const DepthMap& ctx,
                                       const std::vector<std::uint8_t>& valid,
                                       const RansacConfig& cfg) {
  if (pred.size() != ctx.size() || valid.size() != pred.size()) {
    fail(ErrorCode::InvalidArgument, "depth fit: buffer size mismatch");
  }

  std::vector<double> xs, ys;
  xs.reserve(pred.size());
  ys.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!valid[i]) continue;
    if (!std::isfinite(pred.values[i]) || !std::isfinite(ctx.values[i])) continue;
    xs.push_back(pred.values[i]);
    ys.push_back(ctx.values[i]);
  }
  const std::size_t n = xs.size();
  if (n < 2) fail(ErrorCode::InvalidArgument, "depth fit: insufficient correspondences");

  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  if (*xmin == *xmax) fail(ErrorCode::Numeric, "depth fit: degenerate: zero depth variance");

  const double thresh = cfg.thresh_frac * median_of(ys);

  // Hypothesis sampling is sequential from the seed; evaluation parallelizes.
  struct Hypothesis {
    double s = 0.0, t = 0.0;
    bool ok = false;
  };
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<Hypothesis> hyps(static_cast<std::size_t>(std::max(cfg.iters, 1)));
  for (auto& h : hyps) {
    for (int attempt = 0; attempt < 32; ++attempt) {
      const std::size_t a = pick(rng);
      const std::size_t b = pick(rng);
      if (a == b || xs[a] == xs[b]) continue;  // degenerate sample, re-draw
      const double s = (ys[a] - ys[b]) / (xs[a] - xs[b]);
      if (!(s > 0.0) || !std::isfinite(s)) continue;
      h.s = s;
      h.t = ys[a] - s * xs[a];
      h.ok = true;
      break;
    }
  }

  std::vector<int> counts(hyps.size(), -1);
  parallel_chunks(hyps.size(), cfg.threads, [&](std::size_t, std::size_t hb, std::size_t he) {
    for (std::size_t h = hb; h < he; ++h) {
      if (!hyps[h].ok) continue;
      int c = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(ys[i] - (hyps[h].s * xs[i] + hyps[h].t)) <= thresh) ++c;
      }
      counts[h] = c;
    }
  });

  int best_h = -1, best_count = -1;
  for (std::size_t h = 0; h < hyps.size(); ++h) {
    if (counts[h] > best_count) {
      best_count = counts[h];
      best_h = static_cast<int>(h);
    }
  }

  AffineDepthFit fit;
  if (best_h < 0 || best_count < 2) {
    fit.failure_reason = "no valid hypothesis";
    return fit;
  }

  std::vector<int> inliers;
  inliers.reserve(best_count);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(ys[i] - (hyps[best_h].s * xs[i] + hyps[best_h].t)) <= thresh) {
      inliers.push_back(static_cast<int>(i));
    }
  }

  const LeastSquares ls = fit_least_squares(xs, ys, inliers);
  if (!ls.ok) {
    fit.failure_reason = "degenerate inlier set";
    return fit;
  }
  fit.scale = ls.scale;
  fit.shift = ls.shift;
  fit.inlier_count = static_cast<int>(inliers.size());
  fit.inlier_fraction = static_cast<double>(inliers.size()) / static_cast<double>(n);

  std::vector<double> residuals;
  residuals.reserve(inliers.size());
  for (const int i : inliers) residuals.push_back(std::abs(ys[i] - (fit.scale * xs[i] + fit.shift)));
  fit.residual_median = median_of(std::move(residuals));

  if (fit.inlier_fraction < cfg.min_inlier_fraction) {
    fit.failure_reason = "inlier fraction below threshold";
    return fit;
  }
  if (!(fit.scale > 0.0)) {
    fit.failure_reason = "non-positive scale";
    return fit;
  }
  fit.success = true;
  return fit;
}

DepthMap apply_affine_depth(const DepthMap& depth, const AffineDepthFit& fit) {
  if (!fit.success) {
    fail(ErrorCode::InvalidArgument, "apply_affine_depth: fit did not succeed");
  }
  DepthMap out = depth;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (out.valid[i]) out.values[i] = fit.scale * out.values[i] + fit.shift;
  }
  return out;
}

}  // namespace gsc
