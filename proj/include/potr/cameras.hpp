// Copyright 2026 The potr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "potr/scene.hpp"

namespace potr {

/// Parses a JSON array of cameras:
///   {"eye":[x,y,z], "rotation":[9 floats, row-major world-to-camera],
///    "fx":..,"fy":..,"cx":..,"cy":..,"width":..,"height":.., "image":"optional/path.png"}
/// Every camera is validated; rotations must be orthonormal within 1e-4.
std::vector<Camera> parse_cameras(std::string_view json_text);

std::string cameras_to_json(const std::vector<Camera>& cameras);

std::vector<Camera> load_cameras(const std::filesystem::path& path, bool load_images = false);
void save_cameras(const std::filesystem::path& path, const std::vector<Camera>& cameras);

/// COLMAP stores world-to-camera as p_cam = R p + t; the eye is -R^T t.
Camera camera_from_colmap(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation, double fx,
                          double fy, double cx, double cy, int width, int height);

} // namespace potr
