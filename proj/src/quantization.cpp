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

#include "potr/quantization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "potr/errors.hpp"
#include "potr/varint.hpp"

namespace potr {

namespace {

constexpr int kMaxSupportedDepth = 32;

void check_depth(int max_depth) {
    if (max_depth < 0 || max_depth > kMaxSupportedDepth) {
        throw ArgumentError("octree max_depth must be in [0, " + std::to_string(kMaxSupportedDepth) + "]");
    }
}

Eigen::Vector3d child_center(const Eigen::Vector3d& c, double child_half, int octant) {
    return {c.x() + ((octant & 4) ? child_half : -child_half), c.y() + ((octant & 2) ? child_half : -child_half),
            c.z() + ((octant & 1) ? child_half : -child_half)};
}

} // namespace

void QuantParams::validate() const {
    for (float sf : {sf_sh, sf_opacity, sf_rotation, sf_scale}) {
        if (!(sf > 0.0f) || !std::isfinite(sf)) throw ArgumentError("scale factors must be finite and > 0");
    }
}

std::int64_t quantize_uniform(double x, double sf) {
    const double v = std::floor(0.5 + x * sf);
    if (!std::isfinite(v) || std::abs(v) > 2.0e18) {
        throw DataError("value " + std::to_string(x) + " cannot be quantized with scale factor " + std::to_string(sf));
    }
    return static_cast<std::int64_t>(v);
}

int octant_of(const Eigen::Vector3d& p, const Eigen::Vector3d& center) {
    return 4 * (p.x() >= center.x()) + 2 * (p.y() >= center.y()) + (p.z() >= center.z());
}

RootCube bounding_cube(std::span<const Eigen::Vector3f> positions) {
    RootCube cube;
    if (positions.empty()) return cube;
    Eigen::Vector3d lo = positions[0].cast<double>(), hi = lo;
    for (const auto& p : positions) {
        lo = lo.cwiseMin(p.cast<double>());
        hi = hi.cwiseMax(p.cast<double>());
    }
    cube.center = (0.5 * (lo + hi)).cast<float>();
    const Eigen::Vector3d c = cube.center.cast<double>();
    const double half = std::max((hi - c).maxCoeff(), (c - lo).maxCoeff());
    float h = static_cast<float>(half);
    if (static_cast<double>(h) < half) h = std::nextafter(h, std::numeric_limits<float>::infinity());
    cube.half = h;
    return cube;
}

std::vector<double> position_tolerances(std::span<const Eigen::Vector3f> positions,
                                        std::span<const Eigen::Vector3d> eyes, float beta, float gamma) {
    std::vector<double> tol(positions.size());
    const double b = beta, g = gamma;
    const auto n = static_cast<std::int64_t>(positions.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n; ++k) {
        const Eigen::Vector3d p = positions[k].cast<double>();
        double nearest = eyes.empty() ? 0.0 : std::numeric_limits<double>::infinity();
        for (const auto& e : eyes) nearest = std::min(nearest, (p - e).norm());
        tol[k] = std::max(g, b * nearest);
    }
    return tol;
}

namespace {

class OctreeBuilder {
public:
    OctreeBuilder(std::span<const Eigen::Vector3f> positions, std::span<const double> tolerances, Octree& out)
        : pos_(positions), tol_(tolerances), out_(out), idx_(positions.size()), scratch_(positions.size()),
          octant_(positions.size()) {
        for (std::size_t i = 0; i < idx_.size(); ++i) idx_[i] = static_cast<std::uint32_t>(i);
    }

    void build(std::size_t b, std::size_t e, const Eigen::Vector3d& c, double half, int depth) {
        const Eigen::Vector3f snapped = c.cast<float>();
        bool leaf = depth == out_.max_depth;
        if (!leaf && e - b == 1) {
            const std::uint32_t k = idx_[b];
            leaf = (pos_[k].cast<double>() - snapped.cast<double>()).norm() < tol_[k];
        }
        if (leaf) {
            out_.nodes.push_back({0, static_cast<std::uint32_t>(e - b)});
            for (std::size_t i = b; i < e; ++i) {
                out_.order.push_back(idx_[i]);
                out_.leaf_positions.push_back(snapped);
                out_.leaf_depth.push_back(static_cast<std::uint8_t>(depth));
            }
            return;
        }

        // Stable counting sort of [b, e) by octant.
        std::array<std::size_t, 9> start{};
        for (std::size_t i = b; i < e; ++i) {
            octant_[i] = static_cast<std::uint8_t>(octant_of(pos_[idx_[i]].cast<double>(), c));
            ++start[octant_[i] + 1];
        }
        std::uint8_t occupancy = 0;
        for (int o = 0; o < 8; ++o) {
            if (start[o + 1] > 0) occupancy |= static_cast<std::uint8_t>(1u << o);
            start[o + 1] += start[o];
        }
        std::array<std::size_t, 8> cursor{};
        for (int o = 0; o < 8; ++o) cursor[o] = b + start[o];
        for (std::size_t i = b; i < e; ++i) scratch_[cursor[octant_[i]]++] = idx_[i];
        std::copy(scratch_.begin() + static_cast<std::ptrdiff_t>(b), scratch_.begin() + static_cast<std::ptrdiff_t>(e),
                  idx_.begin() + static_cast<std::ptrdiff_t>(b));

        out_.nodes.push_back({occupancy, 0});
        const double child_half = 0.5 * half;
        for (int o = 0; o < 8; ++o) {
            if (!(occupancy & (1u << o))) continue;
            build(b + start[o], b + start[o + 1], child_center(c, child_half, o), child_half, depth + 1);
        }
    }

private:
    std::span<const Eigen::Vector3f> pos_;
    std::span<const double> tol_;
    Octree& out_;
    std::vector<std::uint32_t> idx_;
    std::vector<std::uint32_t> scratch_;
    std::vector<std::uint8_t> octant_;
};

} // namespace

Octree build_octree(std::span<const Eigen::Vector3f> positions, std::span<const double> tolerances,
                    const RootCube& root, int max_depth) {
    check_depth(max_depth);
    if (tolerances.size() != positions.size()) throw ArgumentError("one tolerance per position required");
    Octree tree;
    tree.root = root;
    tree.max_depth = max_depth;
    if (positions.empty()) return tree;
    tree.order.reserve(positions.size());
    tree.leaf_positions.reserve(positions.size());
    tree.leaf_depth.reserve(positions.size());
    OctreeBuilder builder(positions, tolerances, tree);
    builder.build(0, positions.size(), root.center.cast<double>(), root.half, 0);
    return tree;
}

Octree build_octree(std::span<const Eigen::Vector3f> positions, std::span<const Eigen::Vector3d> eyes, float beta,
                    float gamma, int max_depth) {
    const auto tol = position_tolerances(positions, eyes, beta, gamma);
    return build_octree(positions, tol, bounding_cube(positions), max_depth);
}

std::vector<std::uint8_t> serialize_octree(const Octree& tree) {
    ByteWriter w;
    for (const auto& node : tree.nodes) {
        w.put_u8(node.occupancy);
        if (node.occupancy == 0) w.put_varint(node.count);
    }
    return w.take();
}

namespace {

struct OctreeParser {
    ByteReader reader;
    Octree& out;
    std::size_t expected;
    std::size_t total = 0;

    void parse(const Eigen::Vector3d& c, double half, int depth) {
        const std::uint8_t occupancy = reader.get_u8();
        if (occupancy == 0) {
            const std::uint64_t count = reader.get_varint();
            if (count == 0) throw FormatError("octree: leaf with zero splats");
            if (count > expected - total) throw FormatError("octree: more splats than the header declares");
            out.nodes.push_back({0, static_cast<std::uint32_t>(count)});
            const Eigen::Vector3f snapped = c.cast<float>();
            for (std::uint64_t i = 0; i < count; ++i) {
                out.order.push_back(static_cast<std::uint32_t>(total + i));
                out.leaf_positions.push_back(snapped);
                out.leaf_depth.push_back(static_cast<std::uint8_t>(depth));
            }
            total += count;
            return;
        }
        if (depth >= out.max_depth) throw FormatError("octree: internal node at max_depth");
        out.nodes.push_back({occupancy, 0});
        const double child_half = 0.5 * half;
        for (int o = 0; o < 8; ++o) {
            if (occupancy & (1u << o)) parse(child_center(c, child_half, o), child_half, depth + 1);
        }
    }
};

} // namespace

Octree deserialize_octree(std::span<const std::uint8_t> bytes, const RootCube& root, int max_depth,
                          std::size_t expected_count) {
    check_depth(max_depth);
    Octree tree;
    tree.root = root;
    tree.max_depth = max_depth;
    if (expected_count == 0) {
        if (!bytes.empty()) throw FormatError("octree: bytes present for an empty scene");
        return tree;
    }
    OctreeParser parser{ByteReader(bytes, "octree stream"), tree, expected_count};
    parser.parse(root.center.cast<double>(), root.half, 0);
    if (!parser.reader.at_end()) throw FormatError("octree: trailing bytes after the last node");
    if (parser.total != expected_count) {
        throw FormatError("octree: stream holds " + std::to_string(parser.total) + " splats, header declares " +
                          std::to_string(expected_count));
    }
    return tree;
}

} // namespace potr
