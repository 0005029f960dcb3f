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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "potr/color.hpp"
#include "potr/scene.hpp"

namespace potr {

inline constexpr double kNearClip = 0.01;
inline constexpr double kCovarianceDilation = 0.3;  // px^2, added to the 2D covariance diagonal
inline constexpr double kMaxAlpha = 0.999;
inline constexpr double kMinAlpha = 1.0 / 255.0;
inline constexpr double kTransmittanceCutoff = 1e-4;
inline constexpr double kSigmaExtent = 3.0;
inline constexpr double kColorOffset = 0.5;  // reference renderer adds 0.5 to the SH sum

/// Screen-space footprint of one splat for one camera.
struct Projected2D {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();  // pixels, pixel centers at integer + 0.5
    Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();
    Eigen::Vector3d conic = Eigen::Vector3d::Zero();  // inverse covariance (a, b, c)
    double depth = 0.0;
    double opacity = 0.0;
    Color3 color{};  // view-dependent, offset and clamped at 0
    int x_min = 0, x_max = -1, y_min = 0, y_max = -1;  // inclusive pixel range inside the image
    std::uint32_t splat_id = 0;
};

/// Returns nullopt when the splat is behind the near plane or its 3-sigma
/// footprint misses every pixel center.
std::optional<Projected2D> project_splat(const Splat& splat, const Camera& camera, std::uint32_t id = 0);

/// Rotation-scale covariance R diag(s^2) R^T.
Eigen::Matrix3d splat_covariance(const Splat& splat);

/// Color seen from `eye`: max(0, SH(d) + 0.5) per channel with d from eye to splat.
Color3 splat_color(const Splat& splat, const Eigen::Vector3d& eye);

struct Contribution {
    std::uint32_t splat = 0;
    double alpha = 0.0;          // in [1/255, 0.999]
    double transmittance = 1.0;  // before this splat was composited
    Color3 color{};
};

/// Every composited splat for one pixel, front to back.
struct PixelRecord {
    std::vector<Contribution> contributions;
    Color3 color{};  // P_K, unclamped
};

struct RecordedView {
    Image image;
    std::vector<PixelRecord> pixels;  // row-major
};

/// Image only; identical values to render_with_records().image.
Image render(std::span<const Splat> splats, const Camera& camera);
std::vector<Image> render_all(std::span<const Splat> splats, std::span<const Camera> cameras);

RecordedView render_with_records(std::span<const Splat> splats, const Camera& camera);

/// Color change at this pixel if `splat` were deleted. Zero when the splat did not contribute.
Color3 prune_difference(const PixelRecord& record, std::uint32_t splat);

/// Per-splat results accumulated over all cameras.
struct ImpactReport {
    std::size_t splat_count = 0;
    std::size_t camera_count = 0;
    std::vector<double> delta_mse;        // change in MSE vs targets if the splat is removed
    std::vector<double> importance;       // I_k, mean over cameras
    std::vector<double> view_importance;  // I_k(s), camera-major: [s * splat_count + k]
    std::vector<double> view_mse;         // per camera MSE vs targets (0 without targets)
    double mse = 0.0;                     // mean of view_mse

    [[nodiscard]] double view_importance_at(std::size_t camera, std::size_t splat) const {
        return view_importance[camera * splat_count + splat];
    }
};

/// Importance only (no targets, delta_mse and mse are zero).
ImpactReport compute_importance(std::span<const Splat> splats, std::span<const Camera> cameras);

/// Importance and delta MSE against fixed targets. Throws ArgumentError when a
/// target's resolution differs from its camera.
ImpactReport compute_delta_mse(std::span<const Splat> splats, std::span<const Camera> cameras,
                               const TargetSet& targets);

/// Mean squared error over all pixels and channels, unclamped.
double mse(const Image& a, const Image& b);
double mean_mse(std::span<const Image> a, std::span<const Image> b);

} // namespace potr
