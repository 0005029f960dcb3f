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
#include <span>
#include <vector>

#include <Eigen/Core>

#include "potr/scene.hpp"

namespace potr {

inline constexpr double kOpacityShift = 0.25;
inline constexpr int kDefaultMaxDepth = 24;

/// Scale factors, stored as f32 in the container and used at that precision.
struct QuantParams {
    float sf_sh = 51.0f;
    float sf_opacity = 101.0f;
    float sf_rotation = 201.0f;
    float sf_scale = 2001.0f;

    void validate() const;
    bool operator==(const QuantParams&) const = default;
};

/// floor(0.5 + x * sf). Throws DataError if x is not finite or the result
/// exceeds 2e18 in magnitude.
std::int64_t quantize_uniform(double x, double sf);

/// (q + shift) / sf.
inline double dequantize_uniform(std::int64_t q, double sf, double shift = 0.0) {
    return (static_cast<double>(q) + shift) / sf;
}

/// Axis-aligned cube bounding all positions. Center and half extent are f32
/// values so encoder and decoder derive identical node centers.
struct RootCube {
    Eigen::Vector3f center = Eigen::Vector3f::Zero();
    float half = 0.0f;

    bool operator==(const RootCube& o) const { return center == o.center && half == o.half; }
};

/// Cube-ified AABB: centered on the AABB center, half of the largest extent,
/// rounded so every position lies inside after the f32 conversion.
RootCube bounding_cube(std::span<const Eigen::Vector3f> positions);

/// Per-splat tolerance for the geometry criterion: max(gamma, beta * min_s |mu - eye_s|),
/// with beta and gamma taken at f32 precision. Parallel over splats.
std::vector<double> position_tolerances(std::span<const Eigen::Vector3f> positions,
                                        std::span<const Eigen::Vector3d> eyes, float beta, float gamma);

/// Node in depth-first preorder. Internal nodes carry a non-zero occupancy
/// byte; leaves have occupancy 0 and a splat count >= 1.
struct OctreeNode {
    std::uint8_t occupancy = 0;
    std::uint32_t count = 0;
};

struct Octree {
    RootCube root;
    int max_depth = kDefaultMaxDepth;
    std::vector<OctreeNode> nodes;     // depth-first preorder
    std::vector<std::uint32_t> order;  // splat indices in serialization order
    std::vector<Eigen::Vector3f> leaf_positions;  // quantized position of order[i]
    std::vector<std::uint8_t> leaf_depth;         // depth of the leaf holding order[i]
};

/// Splits leaves holding more than one splat or whose splat is farther than
/// its tolerance from the leaf center (strictly), until max_depth.
Octree build_octree(std::span<const Eigen::Vector3f> positions, std::span<const double> tolerances,
                    const RootCube& root, int max_depth = kDefaultMaxDepth);

/// Convenience overload computing the cube and tolerances.
Octree build_octree(std::span<const Eigen::Vector3f> positions, std::span<const Eigen::Vector3d> eyes, float beta,
                    float gamma, int max_depth = kDefaultMaxDepth);

/// Occupancy bytes for internal nodes, 0x00 + LEB128 count for leaves.
std::vector<std::uint8_t> serialize_octree(const Octree& tree);

/// Rebuilds node list, leaf positions and depths (order is the identity).
/// Throws LengthError on truncation and FormatError on malformed nodes,
/// trailing bytes, or a splat total different from `expected_count`.
Octree deserialize_octree(std::span<const std::uint8_t> bytes, const RootCube& root, int max_depth,
                          std::size_t expected_count);

/// Child octant: 4 (x >= cx) + 2 (y >= cy) + (z >= cz).
int octant_of(const Eigen::Vector3d& p, const Eigen::Vector3d& center);

} // namespace potr
