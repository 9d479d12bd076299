#include "dnorm/config_io.hpp"

#include <fstream>

#include "dnorm/io.hpp"

namespace dnorm {
namespace {

Vec3 vec_from(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected a 3-element array");
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

Json vec_to(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

template <typename T>
void read_opt(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_vec(const Json& j, const char* key, Vec3& out) {
  if (j.contains(key)) out = vec_from(j.at(key));
}

}  // namespace

SceneSpec scene_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("scene must be a JSON object");
  SceneSpec s;
  s.kind = parse_scene_kind(j.at("kind").get<std::string>());
  read_opt(j, "width", s.width);
  read_opt(j, "height", s.height);
  read_opt(j, "max_depth", s.max_depth);
  read_opt(j, "band_radius", s.band_radius);
  if (j.contains("intrinsics")) {
    const Json& k = j.at("intrinsics");
    read_opt(k, "fx", s.K.fx);
    read_opt(k, "fy", s.K.fy);
    read_opt(k, "u0", s.K.u0);
    read_opt(k, "v0", s.K.v0);
  }
  const std::string kind(to_string(s.kind));
  const Json p = j.contains(kind) ? j.at(kind) : Json::object();
  switch (s.kind) {
    case SceneKind::Plane:
      read_vec(p, "normal", s.plane.normal);
      read_opt(p, "offset", s.plane.offset);
      break;
    case SceneKind::Step:
      read_opt(p, "near_depth", s.step.near_depth);
      read_opt(p, "far_depth", s.step.far_depth);
      read_opt(p, "split_column", s.step.split_column);
      break;
    case SceneKind::Wedge:
      read_vec(p, "left_normal", s.wedge.left_normal);
      read_vec(p, "right_normal", s.wedge.right_normal);
      read_opt(p, "ridge_x", s.wedge.ridge_x);
      read_opt(p, "ridge_z", s.wedge.ridge_z);
      break;
    case SceneKind::Sphere:
      read_vec(p, "center", s.sphere.center);
      read_opt(p, "radius", s.sphere.radius);
      break;
    case SceneKind::Corner:
      read_opt(p, "distance", s.corner.distance);
      break;
    case SceneKind::Sinusoid:
      read_opt(p, "amplitude", s.sinusoid.amplitude);
      read_opt(p, "frequency", s.sinusoid.frequency);
      read_opt(p, "base_depth", s.sinusoid.base_depth);
      break;
  }
  s.validate();
  return s;
}

Json scene_to_json(const SceneSpec& s) {
  Json j;
  j["kind"] = std::string(to_string(s.kind));
  j["width"] = s.width;
  j["height"] = s.height;
  j["intrinsics"] = {{"fx", s.K.fx}, {"fy", s.K.fy}, {"u0", s.K.u0}, {"v0", s.K.v0}};
  j["max_depth"] = s.max_depth;
  j["band_radius"] = s.band_radius;
  Json p;
  switch (s.kind) {
    case SceneKind::Plane: p = {{"normal", vec_to(s.plane.normal)}, {"offset", s.plane.offset}}; break;
    case SceneKind::Step:
      p = {{"near_depth", s.step.near_depth}, {"far_depth", s.step.far_depth}, {"split_column", s.step.split_column}};
      break;
    case SceneKind::Wedge:
      p = {{"left_normal", vec_to(s.wedge.left_normal)},
           {"right_normal", vec_to(s.wedge.right_normal)},
           {"ridge_x", s.wedge.ridge_x},
           {"ridge_z", s.wedge.ridge_z}};
      break;
    case SceneKind::Sphere: p = {{"center", vec_to(s.sphere.center)}, {"radius", s.sphere.radius}}; break;
    case SceneKind::Corner: p = {{"distance", s.corner.distance}}; break;
    case SceneKind::Sinusoid:
      p = {{"amplitude", s.sinusoid.amplitude},
           {"frequency", s.sinusoid.frequency},
           {"base_depth", s.sinusoid.base_depth}};
      break;
  }
  j[std::string(to_string(s.kind))] = p;
  return j;
}

IntrinsicsFile intrinsics_from_json(const Json& j) {
  IntrinsicsFile f;
  f.K.fx = j.at("fx").get<double>();
  f.K.fy = j.at("fy").get<double>();
  f.K.u0 = j.at("u0").get<double>();
  f.K.v0 = j.at("v0").get<double>();
  f.width = j.at("width").get<int>();
  f.height = j.at("height").get<int>();
  f.K.validate();
  if (f.width <= 0 || f.height <= 0) throw std::invalid_argument("intrinsics: width and height must be positive");
  return f;
}

Json intrinsics_to_json(const IntrinsicsFile& f) {
  return {{"fx", f.K.fx}, {"fy", f.K.fy}, {"u0", f.K.u0}, {"v0", f.K.v0}, {"width", f.width}, {"height", f.height}};
}

Json noise_to_json(const NoiseSpec& n) {
  return {{"mode", std::string(to_string(n.mode))}, {"sigma", n.sigma}, {"seed", n.seed}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("'" + path.string() + "': " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

SceneSpec load_scene(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  try {
    return scene_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("'" + path.string() + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError("'" + path.string() + "': " + e.what());
  }
}

IntrinsicsFile load_intrinsics(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  try {
    return intrinsics_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("'" + path.string() + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError("'" + path.string() + "': " + e.what());
  }
}

}  // namespace dnorm
