#include "core/ply_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "core/error.hpp"

namespace gsc {

namespace {

constexpr const char* kFields[14] = {
    "x", "y", "z", "f_dc_0", "f_dc_1", "f_dc_2", "opacity",
    "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2", "rot_3"};

std::size_t type_size(const std::string& t) {
  if (t == "float" || t == "float32" || t == "int" || t == "int32" || t == "uint" ||
      t == "uint32") {
    return 4;
  }
  if (t == "double" || t == "float64") return 8;
  if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
  if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
  fail(ErrorCode::Parse, "ply: unknown property type '" + t + "'");
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

float to_f32(double v) { return static_cast<float>(v); }

}  // namespace

GaussianScene load_scene_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "ply: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line) || line != "ply") {
    fail(ErrorCode::Parse, "ply: missing 'ply' magic in '" + path + "'");
  }

  std::size_t vertex_count = 0;
  bool in_vertex_element = false;
  bool format_ok = false;
  bool header_done = false;

  struct Prop {
    std::string name;
    std::size_t offset = 0;
    bool is_float = false;
  };
  std::vector<Prop> props;
  std::size_t stride = 0;

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "comment" || tok.empty()) continue;
    if (tok == "format") {
      std::string fmt, ver;
      ls >> fmt >> ver;
      if (fmt != "binary_little_endian") {
        fail(ErrorCode::Parse, "ply: unsupported format '" + fmt + "'");
      }
      format_ok = true;
    } else if (tok == "element") {
      std::string name;
      std::size_t count = 0;
      ls >> name >> count;
      if (name == "vertex") {
        vertex_count = count;
        in_vertex_element = true;
      } else {
        if (in_vertex_element && count > 0) {
          fail(ErrorCode::Parse, "ply: trailing element '" + name + "' not supported");
        }
        in_vertex_element = false;
      }
    } else if (tok == "property") {
      std::string type, name;
      ls >> type >> name;
      if (type == "list") fail(ErrorCode::Parse, "ply: list properties not supported");
      if (in_vertex_element) {
        Prop p;
        p.name = name;
        p.offset = stride;
        p.is_float = (type == "float" || type == "float32");
        stride += type_size(type);
        props.push_back(p);
      }
    } else if (tok == "end_header") {
      header_done = true;
      break;
    } else {
      fail(ErrorCode::Parse, "ply: malformed header line '" + line + "'");
    }
  }
  if (!header_done) fail(ErrorCode::Parse, "ply: truncated header");
  if (!format_ok) fail(ErrorCode::Parse, "ply: missing format declaration");

  std::map<std::string, const Prop*> by_name;
  for (const auto& p : props) by_name[p.name] = &p;
  std::size_t offsets[14];
  for (int f = 0; f < 14; ++f) {
    auto it = by_name.find(kFields[f]);
    if (it == by_name.end()) {
      fail(ErrorCode::Parse, std::string("ply: missing field '") + kFields[f] + "'");
    }
    if (!it->second->is_float) {
      fail(ErrorCode::Parse, std::string("ply: field '") + kFields[f] + "' must be float32");
    }
    offsets[f] = it->second->offset;
  }

  std::vector<char> payload(vertex_count * stride);
  in.read(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (static_cast<std::size_t>(in.gcount()) != payload.size()) {
    fail(ErrorCode::Parse, "ply: truncated payload in '" + path + "'");
  }

  GaussianScene scene;
  scene.reserve(vertex_count);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    const char* rec = payload.data() + i * stride;
    float raw[14];
    for (int f = 0; f < 14; ++f) {
      std::memcpy(&raw[f], rec + offsets[f], sizeof(float));
      if (!std::isfinite(raw[f])) {
        fail(ErrorCode::Parse, std::string("ply: non-finite value in field '") + kFields[f] +
                                   "' at vertex " + std::to_string(i));
      }
    }
    GaussianPrimitive prim;
    prim.mean = Vec3(raw[0], raw[1], raw[2]);
    for (int c = 0; c < 3; ++c) {
      prim.color[c] = std::clamp(0.5 + kShC0 * static_cast<double>(raw[3 + c]), 0.0, 1.0);
    }
    prim.opacity = std::clamp(logistic(raw[6]), 0.0, 1.0);
    for (int c = 0; c < 3; ++c) prim.scale[c] = std::exp(static_cast<double>(raw[7 + c]));
    Vec4 q(raw[10], raw[11], raw[12], raw[13]);
    const double n = q.norm();
    if (n < 1e-6) {
      fail(ErrorCode::Parse, "ply: degenerate quaternion at vertex " + std::to_string(i));
    }
    // Renormalize only when needed so save/load/save stays byte-identical.
    if (std::abs(n - 1.0) > 1e-6) q /= n;
    prim.rotation = q;
    scene.push_back(prim, Provenance::Context);
  }
  return scene;
}

void save_scene_ply(const GaussianScene& scene, const std::string& path) {
  scene.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "ply: cannot open '" + path + "' for writing");

  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << scene.size() << "\n";
  for (const char* f : kFields) out << "property float " << f << "\n";
  out << "end_header\n";

  std::vector<float> rec(14);
  for (const auto& prim : scene.primitives) {
    rec[0] = to_f32(prim.mean.x());
    rec[1] = to_f32(prim.mean.y());
    rec[2] = to_f32(prim.mean.z());
    for (int c = 0; c < 3; ++c) rec[3 + c] = to_f32((prim.color[c] - 0.5) / kShC0);
    const double a = std::clamp(prim.opacity, 1e-7, 1.0 - 1e-7);
    rec[6] = to_f32(std::log(a / (1.0 - a)));
    for (int c = 0; c < 3; ++c) rec[7 + c] = to_f32(std::log(std::max(prim.scale[c], 1e-30)));
    for (int c = 0; c < 4; ++c) rec[10 + c] = to_f32(prim.rotation[c]);
    out.write(reinterpret_cast<const char*>(rec.data()),
              static_cast<std::streamsize>(rec.size() * sizeof(float)));
  }
  if (!out) fail(ErrorCode::Io, "ply: write failed for '" + path + "'");
}

}  // namespace gsc
