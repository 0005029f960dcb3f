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

#include "potr/bitstream.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iostream>
#include <limits>
#include <numeric>

#include <zstd.h>

#include "json.hpp"

#include "potr/color.hpp"
#include "potr/errors.hpp"
#include "potr/varint.hpp"

namespace potr {

const char* stream_name(int index) {
    static constexpr const char* kNames[kStreamCount] = {"position", "dc", "ac", "opacity", "scale", "rotation"};
    if (index < 0 || index >= kStreamCount) throw ArgumentError("stream index out of range");
    return kNames[index];
}

QuantizedScene quantize_scene(std::span<const Splat> splats, std::span<const YcocgCoeffs> ycocg,
                              std::span<const Eigen::Vector3d> eyes, const EncodeParams& params,
                              std::vector<std::uint32_t>* order_out) {
    params.sf.validate();
    if (!ycocg.empty() && ycocg.size() != splats.size()) throw ArgumentError("ycocg coefficients do not match splats");
    if (splats.size() > std::numeric_limits<std::uint32_t>::max()) throw ArgumentError("too many splats");

    std::vector<Eigen::Vector3f> positions(splats.size());
    for (std::size_t k = 0; k < splats.size(); ++k) positions[k] = splats[k].position;
    const Octree tree = build_octree(positions, eyes, params.beta, params.gamma, params.max_depth);

    QuantizedScene out;
    auto& h = out.header;
    h.splat_count = static_cast<std::uint32_t>(splats.size());
    h.q = params.q;
    h.sf = params.sf;
    h.beta = params.beta;
    h.gamma = params.gamma;
    h.root = tree.root;
    h.max_depth = static_cast<std::uint8_t>(params.max_depth);
    out.geometry = serialize_octree(tree);

    const std::size_t n = splats.size();
    out.dc.resize(n * 3);
    out.ac.resize(n * 3 * kAcCount);
    out.opacity.resize(n);
    out.scale.resize(n * 3);
    out.rotation.resize(n * 3);
    const double sf_sh = params.sf.sf_sh, sf_op = params.sf.sf_opacity;
    const double sf_rot = params.sf.sf_rotation, sf_scale = params.sf.sf_scale;

    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t k = tree.order[i];
        const Splat& s = splats[k];
        const YcocgCoeffs coeffs = ycocg.empty() ? to_ycocg(s.sh) : ycocg[k];
        for (int ch = 0; ch < 3; ++ch) {
            out.dc[i * 3 + ch] = quantize_uniform(coeffs[ch][0], sf_sh);
            for (int b = 1; b < kShCoeffs; ++b) {
                out.ac[i * 3 * kAcCount + (b - 1) * 3 + ch] = quantize_uniform(coeffs[ch][b], sf_sh);
            }
        }
        out.opacity[i] = quantize_uniform(s.opacity, sf_op);
        Eigen::Vector4d rot = s.rotation.cast<double>();
        if (rot[0] < 0.0) rot = -rot;
        for (int a = 0; a < 3; ++a) {
            out.scale[i * 3 + a] = quantize_uniform(std::log(static_cast<double>(s.scale[a])), sf_scale);
            out.rotation[i * 3 + a] = quantize_uniform(rot[a + 1], sf_rot);
        }
    }
    if (order_out) *order_out = tree.order;
    return out;
}

DecodedScene dequantize_scene(const QuantizedScene& scene) {
    const auto& h = scene.header;
    const std::size_t n = h.splat_count;
    const Octree tree = deserialize_octree(scene.geometry, h.root, h.max_depth, n);

    DecodedScene out;
    out.header = h;
    out.octree = tree;
    out.splats.resize(n);
    out.ycocg.resize(n);
    const double sf_sh = h.sf.sf_sh, sf_op = h.sf.sf_opacity;
    const double sf_rot = h.sf.sf_rotation, sf_scale = h.sf.sf_scale;
    const float max_opacity = std::nextafter(1.0f, 0.0f);
    const float min_opacity = std::numeric_limits<float>::min();

    for (std::size_t k = 0; k < n; ++k) {
        Splat& s = out.splats[k];
        s.position = tree.leaf_positions[k];
        auto& c = out.ycocg[k];
        for (int ch = 0; ch < 3; ++ch) {
            c[ch][0] = dequantize_uniform(scene.dc[k * 3 + ch], sf_sh);
            for (int b = 1; b < kShCoeffs; ++b) {
                c[ch][b] = dequantize_uniform(scene.ac[k * 3 * kAcCount + (b - 1) * 3 + ch], sf_sh);
            }
        }
        s.sh = to_rgb(c);
        s.opacity = std::clamp(static_cast<float>(dequantize_uniform(scene.opacity[k], sf_op, kOpacityShift)),
                               min_opacity, max_opacity);
        Eigen::Vector3d v;
        for (int a = 0; a < 3; ++a) {
            s.scale[a] = static_cast<float>(std::exp(dequantize_uniform(scene.scale[k * 3 + a], sf_scale)));
            v[a] = dequantize_uniform(scene.rotation[k * 3 + a], sf_rot);
        }
        // Vectors outside the unit ball keep their stored value with w = 0; the
        // rasterizer normalizes, and re-quantization stays exact.
        const double n2 = v.squaredNorm();
        if (n2 > 1.0) ++out.clamped_rotations;
        const double w = std::sqrt(std::max(0.0, 1.0 - n2));
        s.rotation = Eigen::Vector4d(w, v.x(), v.y(), v.z()).cast<float>();
    }
    if (out.clamped_rotations > 0) {
        std::cerr << "warning: " << out.clamped_rotations
                  << " decoded rotations lie outside the unit ball; stored with w = 0\n";
    }
    return out;
}

QuantizedScene requantize_scene(const DecodedScene& decoded) {
    const auto& h = decoded.header;
    const std::size_t n = h.splat_count;
    if (decoded.splats.size() != n || decoded.ycocg.size() != n || decoded.octree.leaf_positions.size() != n) {
        throw ArgumentError("decoded scene does not match its header");
    }
    QuantizedScene out;
    out.header = h;
    out.geometry = serialize_octree(decoded.octree);
    out.dc.resize(n * 3);
    out.ac.resize(n * 3 * kAcCount);
    out.opacity.resize(n);
    out.scale.resize(n * 3);
    out.rotation.resize(n * 3);
    const double sf_sh = h.sf.sf_sh, sf_op = h.sf.sf_opacity;
    const double sf_rot = h.sf.sf_rotation, sf_scale = h.sf.sf_scale;
    for (std::size_t k = 0; k < n; ++k) {
        const Splat& s = decoded.splats[k];
        const auto& c = decoded.ycocg[k];
        for (int ch = 0; ch < 3; ++ch) {
            out.dc[k * 3 + ch] = quantize_uniform(c[ch][0], sf_sh);
            for (int b = 1; b < kShCoeffs; ++b) {
                out.ac[k * 3 * kAcCount + (b - 1) * 3 + ch] = quantize_uniform(c[ch][b], sf_sh);
            }
        }
        // The decoder stored (q + shift) / sf; removing the shift recovers q exactly.
        out.opacity[k] = quantize_uniform(static_cast<double>(s.opacity) - kOpacityShift / sf_op, sf_op);
        for (int a = 0; a < 3; ++a) {
            out.scale[k * 3 + a] = quantize_uniform(std::log(static_cast<double>(s.scale[a])), sf_scale);
            out.rotation[k * 3 + a] = quantize_uniform(s.rotation[a + 1], sf_rot);
        }
    }
    return out;
}

AttributeStreams encode_attribute_streams(const QuantizedScene& scene) {
    const std::size_t n = scene.header.splat_count;
    AttributeStreams streams;
    streams[0] = scene.geometry;

    ByteWriter dc;
    for (int ch = 0; ch < 3; ++ch) {
        std::int64_t prev = 0;
        for (std::size_t k = 0; k < n; ++k) {
            dc.put_svarint(scene.dc[k * 3 + ch] - prev);
            prev = scene.dc[k * 3 + ch];
        }
    }
    streams[1] = dc.take();

    ByteWriter ac;
    for (int j = 0; j < kAcCount * 3; ++j) {
        for (std::size_t k = 0; k < n; ++k) ac.put_svarint(scene.ac[k * 3 * kAcCount + j]);
    }
    streams[2] = ac.take();

    ByteWriter op;
    for (std::size_t k = 0; k < n; ++k) {
        if (scene.opacity[k] < 0) throw DataError("negative quantized opacity at splat " + std::to_string(k));
        op.put_varint(static_cast<std::uint64_t>(scene.opacity[k]));
    }
    streams[3] = op.take();

    ByteWriter sc, rot;
    for (int a = 0; a < 3; ++a) {
        for (std::size_t k = 0; k < n; ++k) {
            sc.put_svarint(scene.scale[k * 3 + a]);
            rot.put_svarint(scene.rotation[k * 3 + a]);
        }
    }
    streams[4] = sc.take();
    streams[5] = rot.take();
    return streams;
}

namespace {

void expect_end(const ByteReader& r, int stream) {
    if (!r.at_end()) {
        throw FormatError(std::string(stream_name(stream)) + " stream has " + std::to_string(r.remaining()) +
                          " trailing bytes");
    }
}

/// Runs `body` and maps running off the end of a stream to a format error.
template <typename F>
void read_stream(int stream, F&& body) {
    try {
        body();
    } catch (const LengthError&) {
        throw FormatError(std::string(stream_name(stream)) + " stream holds fewer values than the splat count");
    }
}

} // namespace

QuantizedScene decode_attribute_streams(const AttributeStreams& streams, const ContainerHeader& header) {
    const std::size_t n = header.splat_count;
    QuantizedScene out;
    out.header = header;
    out.geometry = streams[0];
    out.dc.resize(n * 3);
    out.ac.resize(n * 3 * kAcCount);
    out.opacity.resize(n);
    out.scale.resize(n * 3);
    out.rotation.resize(n * 3);

    read_stream(1, [&] {
        ByteReader r(streams[1], "dc");
        for (int ch = 0; ch < 3; ++ch) {
            std::int64_t prev = 0;
            for (std::size_t k = 0; k < n; ++k) {
                prev += r.get_svarint();
                out.dc[k * 3 + ch] = prev;
            }
        }
        expect_end(r, 1);
    });
    read_stream(2, [&] {
        ByteReader r(streams[2], "ac");
        for (int j = 0; j < kAcCount * 3; ++j) {
            for (std::size_t k = 0; k < n; ++k) out.ac[k * 3 * kAcCount + j] = r.get_svarint();
        }
        expect_end(r, 2);
    });
    read_stream(3, [&] {
        ByteReader r(streams[3], "opacity");
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint64_t v = r.get_varint();
            if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
                throw FormatError("opacity value out of range");
            }
            out.opacity[k] = static_cast<std::int64_t>(v);
        }
        expect_end(r, 3);
    });
    read_stream(4, [&] {
        ByteReader r(streams[4], "scale");
        for (int a = 0; a < 3; ++a) {
            for (std::size_t k = 0; k < n; ++k) out.scale[k * 3 + a] = r.get_svarint();
        }
        expect_end(r, 4);
    });
    read_stream(5, [&] {
        ByteReader r(streams[5], "rotation");
        for (int a = 0; a < 3; ++a) {
            for (std::size_t k = 0; k < n; ++k) out.rotation[k * 3 + a] = r.get_svarint();
        }
        expect_end(r, 5);
    });
    return out;
}

std::vector<std::uint8_t> write_header(const ContainerHeader& h) {
    ByteWriter w;
    for (char c : kMagic) w.put_u8(static_cast<std::uint8_t>(c));
    w.put_u8(kFormatVersion);
    w.put_u32(h.splat_count);
    w.put_f32(h.q);
    w.put_f32(h.sf.sf_sh);
    w.put_f32(h.sf.sf_opacity);
    w.put_f32(h.sf.sf_rotation);
    w.put_f32(h.sf.sf_scale);
    w.put_f32(h.beta);
    w.put_f32(h.gamma);
    for (int a = 0; a < 3; ++a) w.put_f32(h.root.center[a]);
    w.put_f32(h.root.half);
    w.put_u8(h.max_depth);
    w.put_u8(h.zstd_level);
    for (auto len : h.stream_lengths) w.put_u32(len);
    return w.take();
}

ContainerHeader read_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kMagic.size() || std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
        throw UnsupportedFormatError("not a POTR container (bad magic)");
    }
    if (bytes.size() < ContainerHeader::kSize) throw IntegrityError("container truncated inside the header");
    ByteReader r(bytes, "header");
    r.get_bytes(kMagic.size());
    const std::uint8_t version = r.get_u8();
    if (version != kFormatVersion) {
        throw UnsupportedFormatError("unsupported container version " + std::to_string(version));
    }
    ContainerHeader h;
    h.splat_count = r.get_u32();
    h.q = r.get_f32();
    h.sf.sf_sh = r.get_f32();
    h.sf.sf_opacity = r.get_f32();
    h.sf.sf_rotation = r.get_f32();
    h.sf.sf_scale = r.get_f32();
    h.beta = r.get_f32();
    h.gamma = r.get_f32();
    for (int a = 0; a < 3; ++a) h.root.center[a] = r.get_f32();
    h.root.half = r.get_f32();
    h.max_depth = r.get_u8();
    h.zstd_level = r.get_u8();
    for (auto& len : h.stream_lengths) len = r.get_u32();
    try {
        h.sf.validate();
    } catch (const ArgumentError& e) {
        throw FormatError(std::string("header: ") + e.what());
    }
    return h;
}

std::vector<std::uint8_t> zstd_compress(std::span<const std::uint8_t> data, int level) {
    if (level < 1 || level > ZSTD_maxCLevel()) {
        throw ArgumentError("zstd level must be in [1, " + std::to_string(ZSTD_maxCLevel()) + "]");
    }
    ZSTD_CCtx* ctx = ZSTD_createCCtx();
    if (!ctx) throw Error("zstd: cannot allocate compression context");
    ZSTD_CCtx_setParameter(ctx, ZSTD_c_compressionLevel, level);
    ZSTD_CCtx_setParameter(ctx, ZSTD_c_checksumFlag, 1);
    ZSTD_CCtx_setParameter(ctx, ZSTD_c_contentSizeFlag, 1);
    ZSTD_CCtx_setParameter(ctx, ZSTD_c_nbWorkers, 0);
    std::vector<std::uint8_t> out(ZSTD_compressBound(data.size()));
    const std::size_t written = ZSTD_compress2(ctx, out.data(), out.size(), data.data(), data.size());
    ZSTD_freeCCtx(ctx);
    if (ZSTD_isError(written)) throw Error(std::string("zstd: ") + ZSTD_getErrorName(written));
    out.resize(written);
    return out;
}

std::vector<std::uint8_t> zstd_decompress(std::span<const std::uint8_t> frame, std::size_t expected_size) {
    const std::size_t frame_size = ZSTD_findFrameCompressedSize(frame.data(), frame.size());
    if (ZSTD_isError(frame_size)) {
        throw IntegrityError(std::string("payload is not a complete zstd frame: ") + ZSTD_getErrorName(frame_size));
    }
    if (frame_size != frame.size()) throw IntegrityError("trailing bytes after the zstd frame");
    const unsigned long long content = ZSTD_getFrameContentSize(frame.data(), frame.size());
    if (content != expected_size) throw IntegrityError("payload size does not match the header stream lengths");
    std::vector<std::uint8_t> out(expected_size);
    const std::size_t got = ZSTD_decompress(out.data(), out.size(), frame.data(), frame.size());
    if (ZSTD_isError(got)) throw IntegrityError(std::string("zstd: ") + ZSTD_getErrorName(got));
    if (got != expected_size) throw IntegrityError("payload decompressed to an unexpected size");
    return out;
}

namespace {

std::vector<std::uint8_t> concat(const AttributeStreams& streams) {
    std::vector<std::uint8_t> payload;
    for (const auto& s : streams) payload.insert(payload.end(), s.begin(), s.end());
    return payload;
}

struct OpenedContainer {
    ContainerHeader header;
    AttributeStreams streams;
    std::size_t payload_bytes = 0;
};

OpenedContainer open_container(std::span<const std::uint8_t> bytes) {
    OpenedContainer c;
    c.header = read_header(bytes);
    const auto frame = bytes.subspan(ContainerHeader::kSize);
    c.payload_bytes = frame.size();
    const std::size_t total =
        std::accumulate(c.header.stream_lengths.begin(), c.header.stream_lengths.end(), std::size_t{0});
    const auto payload = zstd_decompress(frame, total);
    std::size_t offset = 0;
    for (int i = 0; i < kStreamCount; ++i) {
        const auto begin = payload.begin() + static_cast<std::ptrdiff_t>(offset);
        c.streams[i].assign(begin, begin + c.header.stream_lengths[i]);
        offset += c.header.stream_lengths[i];
    }
    return c;
}

} // namespace

std::vector<std::uint8_t> write_container(const QuantizedScene& scene, int zstd_level) {
    const AttributeStreams streams = encode_attribute_streams(scene);
    ContainerHeader h = scene.header;
    h.zstd_level = static_cast<std::uint8_t>(zstd_level);
    for (int i = 0; i < kStreamCount; ++i) {
        if (streams[i].size() > std::numeric_limits<std::uint32_t>::max()) throw Error("stream exceeds 4 GiB");
        h.stream_lengths[i] = static_cast<std::uint32_t>(streams[i].size());
    }
    auto out = write_header(h);
    const auto frame = zstd_compress(concat(streams), zstd_level);
    out.insert(out.end(), frame.begin(), frame.end());
    return out;
}

QuantizedScene read_container(std::span<const std::uint8_t> bytes) {
    const OpenedContainer c = open_container(bytes);
    QuantizedScene scene = decode_attribute_streams(c.streams, c.header);
    // Validate geometry now so a bad container fails before any output is produced.
    deserialize_octree(scene.geometry, c.header.root, c.header.max_depth, c.header.splat_count);
    return scene;
}

double SizeReport::bytes_per_splat() const {
    return header.splat_count == 0 ? 0.0 : static_cast<double>(file_bytes) / header.splat_count;
}

std::string SizeReport::to_json() const {
    nlohmann::json j;
    j["splat_count"] = header.splat_count;
    j["q"] = header.q;
    j["scale_factors"] = {{"sh", header.sf.sf_sh},
                          {"opacity", header.sf.sf_opacity},
                          {"rotation", header.sf.sf_rotation},
                          {"scale", header.sf.sf_scale}};
    j["beta"] = header.beta;
    j["gamma"] = header.gamma;
    j["root_center"] = {header.root.center.x(), header.root.center.y(), header.root.center.z()};
    j["root_half_extent"] = header.root.half;
    j["max_depth"] = header.max_depth;
    j["zstd_level"] = header.zstd_level;
    j["file_bytes"] = file_bytes;
    j["payload_bytes"] = payload_bytes;
    j["bytes_per_splat"] = bytes_per_splat();
    nlohmann::json streams_json = nlohmann::json::array();
    double attributed_total = 0.0;
    for (const auto& s : streams) attributed_total += s.attributed;
    for (const auto& s : streams) {
        nlohmann::json e;
        e["name"] = s.name;
        e["uncompressed_bytes"] = s.uncompressed;
        e["attributed_bytes"] = s.attributed;
        e["attributed_bytes_per_splat"] = header.splat_count ? s.attributed / header.splat_count : 0.0;
        e["share_of_payload"] = payload_bytes ? s.attributed / static_cast<double>(payload_bytes) : 0.0;
        streams_json.push_back(e);
    }
    j["streams"] = streams_json;
    j["attributed_total_bytes"] = attributed_total;
    return j.dump(2);
}

SizeReport size_report(std::span<const std::uint8_t> container) {
    const OpenedContainer c = open_container(container);
    SizeReport report;
    report.header = c.header;
    report.file_bytes = container.size();
    report.payload_bytes = c.payload_bytes;
    const int level = std::max(1, static_cast<int>(c.header.zstd_level));
    for (int i = 0; i < kStreamCount; ++i) {
        AttributeStreams ablated = c.streams;
        std::fill(ablated[i].begin(), ablated[i].end(), std::uint8_t{0});
        const std::size_t size = zstd_compress(concat(ablated), level).size();
        report.streams[i].name = stream_name(i);
        report.streams[i].uncompressed = c.streams[i].size();
        report.streams[i].attributed = static_cast<double>(c.payload_bytes) - static_cast<double>(size);
    }
    return report;
}

} // namespace potr
