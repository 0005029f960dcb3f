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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace potr {

inline constexpr int kShCoeffs = 16;  // degrees 0..3
inline constexpr int kChannels = 3;

/// Lighting coefficients, channel-major: sh[channel][basis], basis 0 is DC.
using ShCoeffs = std::array<std::array<float, kShCoeffs>, kChannels>;

/// A splat exactly as stored in the reference PLY layout (pre-activation).
struct RawSplat {
    std::array<float, 3> position{};
    std::array<float, 3> log_scale{};
    std::array<float, 4> rotation{};  // w, x, y, z; not necessarily normalized
    float opacity_logit = 0.0f;
    ShCoeffs sh{};
};

/// Activated splat used by every processing stage.
///
/// Invariants: opacity in (0,1), scale > 0 per axis, |rotation| = 1 with w >= 0.
struct Splat {
    Eigen::Vector3f position = Eigen::Vector3f::Zero();
    Eigen::Vector3f scale = Eigen::Vector3f::Ones();
    Eigen::Vector4f rotation{1.0f, 0.0f, 0.0f, 0.0f};  // w, x, y, z
    float opacity = 0.5f;
    ShCoeffs sh{};
};

/// Row-major interleaved RGB image in linear float64.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> rgb;

    Image() = default;
    Image(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0.0) {}

    [[nodiscard]] std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    double* pixel(int x, int y) { return rgb.data() + (static_cast<std::size_t>(y) * width + x) * 3; }
    [[nodiscard]] const double* pixel(int x, int y) const {
        return rgb.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
};

/// Pinhole camera. `rotation` maps world to camera axes: p_cam = rotation * (p - eye).
/// The camera looks down +z, +x right, +y down; pixel (0,0) is the top-left corner.
struct Camera {
    Eigen::Vector3d eye = Eigen::Vector3d::Zero();
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 1;
    int height = 1;
    std::optional<std::string> image_path;
    std::optional<Image> target;
};

struct Scene {
    std::vector<Splat> splats;
    std::vector<Camera> cameras;
};

/// Fixed per-camera reference renders, produced once from the uncompressed model.
using TargetSet = std::vector<Image>;

/// Maps stored values to activated ones. Throws DataError naming `index` and the field.
Splat activate(const RawSplat& raw, std::size_t index = 0);

/// Inverse of activate: logit opacity, log scale, quaternion as stored.
RawSplat deactivate(const Splat& splat);

std::vector<Splat> activate_all(const std::vector<RawSplat>& raw);
std::vector<RawSplat> deactivate_all(const std::vector<Splat>& splats);

/// Throws ValidationError when the camera violates its invariants.
void validate_camera(const Camera& camera, double orthonormal_tolerance = 1e-4);

} // namespace potr
