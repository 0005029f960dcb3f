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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "potr/compaction.hpp"
#include "potr/quantization.hpp"
#include "potr/scene.hpp"

namespace potr {

inline constexpr std::array<char, 4> kMagic{'P', 'O', 'T', 'R'};
inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr int kDefaultZstdLevel = 19;
inline constexpr int kStreamCount = 6;
inline constexpr int kAcCount = kShCoeffs - 1;

/// Uncompressed bytes per degree-3 splat in the reference PLY layout:
/// position 12, scale 12, opacity 4, rotation 16, SH 12 + 180.
inline constexpr std::size_t kRawBytesPerSplat = 236;

/// Fixed stream order inside the payload.
enum class Stream : int { geometry = 0, dc = 1, ac = 2, opacity = 3, scale = 4, rotation = 5 };
const char* stream_name(int index);

struct ContainerHeader {
    std::uint32_t splat_count = 0;
    float q = 0.5f;
    QuantParams sf;
    float beta = 0.0f;
    float gamma = 0.0f;
    RootCube root;
    std::uint8_t max_depth = kDefaultMaxDepth;
    std::uint8_t zstd_level = kDefaultZstdLevel;
    std::array<std::uint32_t, kStreamCount> stream_lengths{};  // uncompressed

    static constexpr std::size_t kSize = 79;

    bool operator==(const ContainerHeader&) const = default;
};

/// Quantized integers for every attribute, splats in octree order.
struct QuantizedScene {
    ContainerHeader header;              // stream_lengths are filled on write
    std::vector<std::uint8_t> geometry;  // serialized octree
    std::vector<std::int64_t> dc;        // [k * 3 + channel], YCoCg
    std::vector<std::int64_t> ac;        // [k * 45 + (basis - 1) * 3 + channel], YCoCg
    std::vector<std::int64_t> opacity;   // [k]
    std::vector<std::int64_t> scale;     // [k * 3 + axis], log domain
    std::vector<std::int64_t> rotation;  // [k * 3 + component], x y z of the w >= 0 quaternion

    bool operator==(const QuantizedScene&) const = default;
};

struct EncodeParams {
    float q = 0.5f;
    QuantParams sf;
    float beta = 7e-5f;
    float gamma = 1.5811388e-5f;
    int max_depth = kDefaultMaxDepth;
};

/// Builds the octree and quantizes every attribute in its order. `ycocg`
/// supplies coefficients already in YCoCg (exact zeros preserved); when empty
/// they are converted from the splats' RGB coefficients. `order_out`, if given,
/// receives the splat permutation.
QuantizedScene quantize_scene(std::span<const Splat> splats, std::span<const YcocgCoeffs> ycocg,
                              std::span<const Eigen::Vector3d> eyes, const EncodeParams& params,
                              std::vector<std::uint32_t>* order_out = nullptr);

/// Splats in stored (octree) order.
struct DecodedScene {
    ContainerHeader header;
    Octree octree;
    std::vector<Splat> splats;
    std::vector<YcocgCoeffs> ycocg;
    std::size_t clamped_rotations = 0;  // |(x,y,z)| > 1 after dequantization
};

DecodedScene dequantize_scene(const QuantizedScene& scene);

/// Quantizes a decoded scene again with its own header and octree, keeping the
/// stored order. Reproduces the QuantizedScene it was decoded from.
QuantizedScene requantize_scene(const DecodedScene& decoded);

using AttributeStreams = std::array<std::vector<std::uint8_t>, kStreamCount>;

AttributeStreams encode_attribute_streams(const QuantizedScene& scene);

/// Throws FormatError when a stream holds more or fewer values than the
/// header's splat count implies.
QuantizedScene decode_attribute_streams(const AttributeStreams& streams, const ContainerHeader& header);

std::vector<std::uint8_t> write_header(const ContainerHeader& header);

/// Parses and checks magic and version only. Throws UnsupportedFormatError or IntegrityError.
ContainerHeader read_header(std::span<const std::uint8_t> bytes);

/// Header, then one zstd frame over the concatenated streams (checksummed,
/// single-threaded so the bytes do not depend on the machine).
std::vector<std::uint8_t> write_container(const QuantizedScene& scene, int zstd_level = kDefaultZstdLevel);
QuantizedScene read_container(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> zstd_compress(std::span<const std::uint8_t> data, int level);
/// Throws IntegrityError unless `frame` is exactly one valid frame of `expected_size` bytes.
std::vector<std::uint8_t> zstd_decompress(std::span<const std::uint8_t> frame, std::size_t expected_size);

struct StreamSize {
    std::string name;
    std::size_t uncompressed = 0;
    double attributed = 0.0;  // compressed payload minus payload with this stream zero-filled
};

struct SizeReport {
    ContainerHeader header;
    std::size_t file_bytes = 0;
    std::size_t payload_bytes = 0;
    std::array<StreamSize, kStreamCount> streams;

    [[nodiscard]] double bytes_per_splat() const;
    [[nodiscard]] std::string to_json() const;
};

/// Per-stream attribution by ablation: each stream is zero-filled in turn and
/// the payload recompressed at the container's level.
SizeReport size_report(std::span<const std::uint8_t> container);

} // namespace potr
