#include "core/config.hpp"

#include <charconv>
#include <sstream>

#include "core/error.hpp"

namespace gsc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    fail(ErrorCode::Parse, "config: bad number for '" + key + "': '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    fail(ErrorCode::Parse, "config: bad integer for '" + key + "': '" + v + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    fail(ErrorCode::Parse, "config: bad integer for '" + key + "': '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  fail(ErrorCode::Parse, "config: bad boolean for '" + key + "': '" + v + "'");
}

}  // namespace

void apply_config_pair(PipelineConfig& c, const std::string& key, const std::string& value) {
  if (key == "preset") c.oracle.preset = value;
  else if (key == "n_primitives") c.oracle.n_primitives = parse_int(key, value);
  else if (key == "seed") { c.oracle.seed = parse_u64(key, value); c.corruption.seed = c.oracle.seed; c.ransac.seed = c.oracle.seed; }
  else if (key == "width") c.oracle.width = parse_int(key, value);
  else if (key == "height") c.oracle.height = parse_int(key, value);
  else if (key == "n_context") c.oracle.n_context = parse_int(key, value);
  else if (key == "n_targets") c.oracle.n_targets = parse_int(key, value);
  else if (key == "fov_deg") c.oracle.fov_deg = parse_double(key, value);
  else if (key == "corrupt.scale") c.corruption.scale = parse_double(key, value);
  else if (key == "corrupt.shift") c.corruption.shift = parse_double(key, value);
  else if (key == "corrupt.sigma") c.corruption.ray_noise_sigma = parse_double(key, value);
  else if (key == "corrupt.outliers") c.corruption.outlier_fraction = parse_double(key, value);
  else if (key == "reference.blur_sigma") c.reference_blur_sigma = parse_double(key, value);
  else if (key == "reference.noise") c.reference_noise = parse_double(key, value);
  else if (key == "stages.sa") c.stage_sa = parse_bool(key, value);
  else if (key == "stages.da") c.stage_da = parse_bool(key, value);
  else if (key == "stages.rc") c.stage_rc = parse_bool(key, value);
  else if (key == "stages.mv") c.stage_mv = parse_bool(key, value);
  else if (key == "anchor.gate_deg") c.anchor_gate_deg = parse_double(key, value);
  else if (key == "ransac.iters") c.ransac.iters = parse_int(key, value);
  else if (key == "ransac.thresh_frac") c.ransac.thresh_frac = parse_double(key, value);
  else if (key == "ransac.min_inlier_frac") c.ransac.min_inlier_fraction = parse_double(key, value);
  else if (key == "reg.iters") c.reg_iters = parse_int(key, value);
  else if (key == "reg.lr") c.reg_lr = parse_double(key, value);
  else if (key == "lambda.d") c.weights.lambda_d = parse_double(key, value);
  else if (key == "lambda.s") c.weights.lambda_s = parse_double(key, value);
  else if (key == "lambda.c") c.weights.lambda_c = parse_double(key, value);
  else if (key == "lambda.mv") c.weights.lambda_mv = parse_double(key, value);
  else if (key == "tau") c.weights.tau = parse_double(key, value);
  else if (key == "bilinear") c.bilinear_depth_sampling = parse_bool(key, value);
  else if (key == "refine.iters") c.refine_iters = parse_int(key, value);
  else if (key == "refine.lr") c.refine_lr = parse_double(key, value);
  else if (key == "refine.n_context_views") c.n_context_views = parse_int(key, value);
  else if (key == "refine.lambda_on_context") c.lambda_on_context = parse_bool(key, value);
  else if (key == "render.near") c.render.near_plane = parse_double(key, value);
  else if (key == "render.alpha_clamp") c.render.alpha_clamp = parse_double(key, value);
  else if (key == "render.term_t") c.render.term_transmittance = parse_double(key, value);
  else if (key == "render.eps2d") c.render.eps2d = parse_double(key, value);
  else if (key == "render.footprint_sigma") c.render.footprint_sigma = parse_double(key, value);
  else if (key == "render.tile") c.render.tile_size = parse_int(key, value);
  else if (key == "threads") c.render.threads = parse_int(key, value);
  else if (key == "metrics.f_thresh_frac") c.f_thresh_frac = parse_double(key, value);
  else if (key == "long.length") c.long_length = parse_int(key, value);
  else if (key == "long.interval") c.long_interval = parse_int(key, value);
  else if (key == "ablate.seeds") c.ablate_seeds = parse_int(key, value);
  else if (key == "ablate.first_seed") c.ablate_first_seed = parse_u64(key, value);
  else if (key == "input.scene") c.input_scene = value;
  else if (key == "input.cameras") c.input_cameras = value;
  else if (key == "input.reference") c.input_reference = value;
  else if (key == "input.prediction") c.input_prediction = value;
  else if (key == "input.target_index") c.input_target_index = parse_int(key, value);
  else if (key == "deterministic") c.deterministic = parse_bool(key, value);
  else if (key == "out.images") c.write_images = parse_bool(key, value);
  else fail(ErrorCode::Parse, "config: unknown key '" + key + "'");
}

PipelineConfig parse_config_text(const std::string& text) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::Parse, "config: line " + std::to_string(lineno) + " is not 'key = value'");
    }
    apply_config_pair(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

void PipelineConfig::validate() const {
  oracle.validate();
  corruption.validate();
  weights.validate();
  if (reg_iters < 0 || refine_iters < 0) {
    fail(ErrorCode::InvalidArgument, "config: iteration counts must be nonnegative");
  }
  if (!(reg_lr >= 0.0) || !(refine_lr >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "config: learning rates must be nonnegative");
  }
  if (n_context_views < 0) {
    fail(ErrorCode::InvalidArgument, "config: refine.n_context_views must be nonnegative");
  }
  if (!(anchor_gate_deg > 0.0)) {
    fail(ErrorCode::InvalidArgument, "config: anchor gate must be positive");
  }
  if (long_length < 1 || long_interval < 1) {
    fail(ErrorCode::InvalidArgument, "config: long-run length and interval must be >= 1");
  }
  if (ablate_seeds < 1) fail(ErrorCode::InvalidArgument, "config: ablate.seeds must be >= 1");
}

std::string config_to_text(const PipelineConfig& c) {
  std::ostringstream out;
  out.precision(17);
  auto kv = [&out](const std::string& k, const auto& v) { out << k << " = " << v << "\n"; };
  auto kb = [&out](const std::string& k, bool v) { out << k << " = " << (v ? "true" : "false") << "\n"; };
  kv("preset", c.oracle.preset);
  kv("n_primitives", c.oracle.n_primitives);
  kv("seed", c.oracle.seed);
  kv("width", c.oracle.width);
  kv("height", c.oracle.height);
  kv("n_context", c.oracle.n_context);
  kv("n_targets", c.oracle.n_targets);
  kv("fov_deg", c.oracle.fov_deg);
  kv("corrupt.scale", c.corruption.scale);
  kv("corrupt.shift", c.corruption.shift);
  kv("corrupt.sigma", c.corruption.ray_noise_sigma);
  kv("corrupt.outliers", c.corruption.outlier_fraction);
  kv("reference.blur_sigma", c.reference_blur_sigma);
  kv("reference.noise", c.reference_noise);
  kb("stages.sa", c.stage_sa);
  kb("stages.da", c.stage_da);
  kb("stages.rc", c.stage_rc);
  kb("stages.mv", c.stage_mv);
  kv("anchor.gate_deg", c.anchor_gate_deg);
  kv("ransac.iters", c.ransac.iters);
  kv("ransac.thresh_frac", c.ransac.thresh_frac);
  kv("ransac.min_inlier_frac", c.ransac.min_inlier_fraction);
  kv("reg.iters", c.reg_iters);
  kv("reg.lr", c.reg_lr);
  kv("lambda.d", c.weights.lambda_d);
  kv("lambda.s", c.weights.lambda_s);
  kv("lambda.c", c.weights.lambda_c);
  kv("lambda.mv", c.weights.lambda_mv);
  kv("tau", c.weights.tau);
  kb("bilinear", c.bilinear_depth_sampling);
  kv("refine.iters", c.refine_iters);
  kv("refine.lr", c.refine_lr);
  kv("refine.n_context_views", c.n_context_views);
  kb("refine.lambda_on_context", c.lambda_on_context);
  kv("render.near", c.render.near_plane);
  kv("render.alpha_clamp", c.render.alpha_clamp);
  kv("render.term_t", c.render.term_transmittance);
  kv("render.eps2d", c.render.eps2d);
  kv("render.footprint_sigma", c.render.footprint_sigma);
  kv("render.tile", c.render.tile_size);
  kv("threads", c.render.threads);
  kv("metrics.f_thresh_frac", c.f_thresh_frac);
  kv("long.length", c.long_length);
  kv("long.interval", c.long_interval);
  kv("ablate.seeds", c.ablate_seeds);
  kv("ablate.first_seed", c.ablate_first_seed);
  if (!c.input_scene.empty()) kv("input.scene", c.input_scene);
  if (!c.input_cameras.empty()) kv("input.cameras", c.input_cameras);
  if (!c.input_reference.empty()) kv("input.reference", c.input_reference);
  if (!c.input_prediction.empty()) kv("input.prediction", c.input_prediction);
  if (c.input_target_index >= 0) kv("input.target_index", c.input_target_index);
  kb("deterministic", c.deterministic);
  kb("out.images", c.write_images);
  return out.str();
}

}  // namespace gsc
