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

#include <cstddef>
#include <cstdint>

#include "potr/scene.hpp"

namespace potr {

/// Synthetic scene: splats on a spherical shell with smoothly varying color,
/// a per-splat luminance highlight and weak coefficient noise, viewed by a
/// ring of cameras around it.
struct FixtureConfig {
    std::size_t splats = 10000;
    int cameras = 16;
    int width = 64;
    int height = 64;
    std::uint64_t seed = 1;
    double radius = 1.0;
    double shell_thickness = 0.02;
    double camera_distance = 3.0;
    double field_of_view_deg = 50.0;
    double faint_fraction = 0.2;  // share of low-opacity splats
    double lobe_strength = 0.3;   // max magnitude of the degree-1 luminance lobe
    double ac_noise = 0.02;       // std-dev of degree-1 noise, halved per degree
};

/// Deterministic for a given config (std::mt19937_64 and explicit transforms).
Scene make_fixture(const FixtureConfig& config);

/// Camera at `eye` looking at `target`, +y of the image pointing away from `up`.
Camera look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target, const Eigen::Vector3d& up, double fx,
               double fy, int width, int height);

} // namespace potr
