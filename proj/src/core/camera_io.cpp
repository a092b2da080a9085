#include "core/camera_io.hpp"

#include <fstream>
#include <sstream>

#include <Eigen/SVD>
#include <json.hpp>

#include "core/error.hpp"

namespace gsc {

namespace {

using nlohmann::json;

Camera camera_from_json(const json& j, std::size_t index) {
  const std::string at = " in camera " + std::to_string(index);
  try {
    Camera cam;
    cam.fx = j.at("fx").get<double>();
    cam.fy = j.at("fy").get<double>();
    cam.cx = j.at("cx").get<double>();
    cam.cy = j.at("cy").get<double>();
    cam.width = j.at("width").get<int>();
    cam.height = j.at("height").get<int>();
    const auto& rot = j.at("rotation");
    const auto& tr = j.at("translation");
    if (rot.size() != 3 || tr.size() != 3) {
      fail(ErrorCode::Parse, "cameras: rotation must be 3x3 and translation 3" + at);
    }
    for (int r = 0; r < 3; ++r) {
      if (rot[r].size() != 3) {
        fail(ErrorCode::Parse, "cameras: rotation must be 3x3" + at);
      }
      for (int c = 0; c < 3; ++c) cam.rotation(r, c) = rot[r][c].get<double>();
      cam.translation[r] = tr[r].get<double>();
    }

    if (!(cam.fx > 0.0) || !(cam.fy > 0.0)) {
      fail(ErrorCode::Parse, "cameras: focal length must be positive" + at);
    }
    if (cam.width < 1 || cam.height < 1) {
      fail(ErrorCode::Parse, "cameras: resolution must be at least 1x1" + at);
    }
    if (cam.rotation.determinant() < 0.0) {
      fail(ErrorCode::Parse, "cameras: reflection not a rotation" + at);
    }
    const double dev =
        (cam.rotation.transpose() * cam.rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (dev > 1e-4) {
      fail(ErrorCode::Parse, "cameras: rotation not orthonormal" + at);
    }
    if (dev > 1e-6) {
      Eigen::JacobiSVD<Mat3> svd(cam.rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
      cam.rotation = svd.matrixU() * svd.matrixV().transpose();
    }
    cam.validate();
    return cam;
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("cameras: ") + e.what() + at);
  }
}

}  // namespace

std::vector<Camera> cameras_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("cameras: invalid json: ") + e.what());
  }
  if (!root.is_array()) fail(ErrorCode::Parse, "cameras: top level must be an array");
  std::vector<Camera> cams;
  cams.reserve(root.size());
  for (std::size_t i = 0; i < root.size(); ++i) cams.push_back(camera_from_json(root[i], i));
  return cams;
}

std::string cameras_to_json_text(const std::vector<Camera>& cameras) {
  json root = json::array();
  for (const auto& cam : cameras) {
    json j;
    j["fx"] = cam.fx;
    j["fy"] = cam.fy;
    j["cx"] = cam.cx;
    j["cy"] = cam.cy;
    j["width"] = cam.width;
    j["height"] = cam.height;
    json rot = json::array();
    for (int r = 0; r < 3; ++r) {
      rot.push_back({cam.rotation(r, 0), cam.rotation(r, 1), cam.rotation(r, 2)});
    }
    j["rotation"] = rot;
    j["translation"] = {cam.translation[0], cam.translation[1], cam.translation[2]};
    root.push_back(j);
  }
  return root.dump(2) + "\n";
}

std::vector<Camera> load_cameras_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cameras: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return cameras_from_json_text(ss.str());
}

void save_cameras_json(const std::vector<Camera>& cameras, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cameras: cannot open '" + path + "' for writing");
  out << cameras_to_json_text(cameras);
  if (!out) fail(ErrorCode::Io, "cameras: write failed for '" + path + "'");
}

}  // namespace gsc
