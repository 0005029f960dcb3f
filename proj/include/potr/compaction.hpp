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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "potr/rasterizer.hpp"
#include "potr/scene.hpp"

namespace potr {

using ColumnMask = std::array<bool, kShCoeffs>;
using Coeffs16 = Eigen::Matrix<double, kShCoeffs, 1>;

/// Lighting coefficients in YCoCg space, same layout as ShCoeffs but double.
using YcocgCoeffs = std::array<std::array<double, kShCoeffs>, kChannels>;

struct CompactionConfig {
    double lambda = 0.31622776601683794;  // luminance; chrominance uses chroma_factor * lambda
    double chroma_factor = 3.0;
    double parallel_threshold = 0.8175744761936437;  // |cos| above this drops the later column
    double zero_threshold = 0.5 / 51.0;             // |AC| below this is forced to zero after pass 1

    void validate() const;
    [[nodiscard]] std::array<double, 3> channel_lambdas() const {
        return {lambda, chroma_factor * lambda, chroma_factor * lambda};
    }
};

/// Importance-weighted least-squares system for one splat: one row per camera
/// that sees it, rows of Y and C scaled by that camera's importance.
struct SplatSystem {
    Eigen::MatrixXd basis;   // N x 16
    Eigen::MatrixXd colors;  // N x 3, YCoCg
    Eigen::VectorXd weights;
    std::vector<std::size_t> cameras;  // source camera of each row
};

/// Rows only for cameras with importance > 0; d runs from the camera eye to the splat.
SplatSystem build_weighted_system(const Splat& splat, std::span<const Camera> cameras,
                                  std::span<const double> view_importance);

/// Scans columns 1..16; drops column i when a retained earlier column has
/// |cos| > threshold, or when column i has zero norm. DC is always kept.
ColumnMask sparsify_parallel_columns(const Eigen::MatrixXd& basis, double threshold);

/// Minimizes |Y x - c|^2 + lambda |x_AC|^2 over the retained columns with a
/// Cholesky solve; masked entries are exactly 0. Retries once with 1e-10
/// diagonal jitter and returns nullopt if that also fails.
std::optional<Coeffs16> ridge_solve(const Eigen::MatrixXd& basis, const Eigen::VectorXd& colors,
                                    const ColumnMask& mask, double lambda);

struct CompactedSplat {
    YcocgCoeffs ycocg{};
    ShCoeffs rgb{};
    bool fallback = false;  // no camera saw the splat
    bool failed = false;    // solve failed; original coefficients kept
    std::array<ColumnMask, 3> masks{};
};

CompactedSplat compact_splat(const Splat& splat, std::span<const Camera> cameras,
                             std::span<const double> view_importance, const CompactionConfig& config);

struct CompactionResult {
    std::vector<Splat> splats;         // RGB coefficients replaced
    std::vector<YcocgCoeffs> ycocg;    // the same coefficients before the inverse color transform
    std::size_t fallback_count = 0;
    std::size_t failure_count = 0;
};

/// Every splat independently (OpenMP over splats). `impact` must have been
/// computed on exactly these splats and cameras. Row weights are the
/// per-camera importance times that camera's pixel count, i.e. the number of
/// pixels' worth of color the splat supplies, so lambda does not depend on
/// image resolution.
CompactionResult compact_scene(std::span<const Splat> splats, std::span<const Camera> cameras,
                               const ImpactReport& impact, const CompactionConfig& config);

YcocgCoeffs to_ycocg(const ShCoeffs& rgb);
ShCoeffs to_rgb(const YcocgCoeffs& ycocg);

/// Fraction of AC entries (45 per splat) that are exactly zero.
double ac_zero_fraction(std::span<const YcocgCoeffs> coeffs);

} // namespace potr
