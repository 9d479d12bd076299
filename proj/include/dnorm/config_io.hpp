// JSON (de)serialization of scene, intrinsics and noise settings.
//
// Scene file:
//   {
//     "kind": "plane" | "step" | "wedge" | "sphere" | "corner" | "sinusoid",
//     "width": 512, "height": 424,
//     "intrinsics": {"fx": 365, "fy": 365, "u0": 256, "v0": 212},
//     "max_depth": 10.0, "band_radius": 3,
//     "plane":    {"normal": [0, 0, -1], "offset": 2.0},
//     "step":     {"near_depth": 2.0, "far_depth": 3.0, "split_column": 256},
//     "wedge":    {"left_normal": [..], "right_normal": [..], "ridge_x": 0, "ridge_z": 2.5},
//     "sphere":   {"center": [0, 0, 2], "radius": 0.5},
//     "corner":   {"distance": 3.0},
//     "sinusoid": {"amplitude": 0.05, "frequency": 12.566, "base_depth": 2.0}
//   }
// Every key except "kind" is optional and falls back to the defaults of
// SceneSpec; only the parameter block matching "kind" is read.
//
// Intrinsics file: {"fx": .., "fy": .., "u0": .., "v0": .., "width": .., "height": ..}

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dnorm/synthgen.hpp"

namespace dnorm {

using Json = nlohmann::ordered_json;

SceneSpec scene_from_json(const Json& j);
Json scene_to_json(const SceneSpec& spec);

struct IntrinsicsFile {
  CameraIntrinsics K{};
  int width = 0;
  int height = 0;
};

IntrinsicsFile intrinsics_from_json(const Json& j);
Json intrinsics_to_json(const IntrinsicsFile& f);

Json noise_to_json(const NoiseSpec& noise);

// Parse / write helpers; failures throw IoError naming the file.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

SceneSpec load_scene(const std::filesystem::path& path);
IntrinsicsFile load_intrinsics(const std::filesystem::path& path);

}  // namespace dnorm
