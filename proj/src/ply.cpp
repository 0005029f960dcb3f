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

#include "potr/ply.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "potr/errors.hpp"

namespace potr {
namespace {

static_assert(std::endian::native == std::endian::little, "PLY I/O assumes a little-endian host");

enum class ScalarType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

struct Property {
    std::string name;
    ScalarType type;
    std::size_t offset;
};

ScalarType parse_type(const std::string& t) {
    static const std::unordered_map<std::string, ScalarType> kTypes = {
        {"char", ScalarType::Int8},     {"int8", ScalarType::Int8},       {"uchar", ScalarType::UInt8},
        {"uint8", ScalarType::UInt8},   {"short", ScalarType::Int16},     {"int16", ScalarType::Int16},
        {"ushort", ScalarType::UInt16}, {"uint16", ScalarType::UInt16},   {"int", ScalarType::Int32},
        {"int32", ScalarType::Int32},   {"uint", ScalarType::UInt32},     {"uint32", ScalarType::UInt32},
        {"float", ScalarType::Float32}, {"float32", ScalarType::Float32}, {"double", ScalarType::Float64},
        {"float64", ScalarType::Float64},
    };
    auto it = kTypes.find(t);
    if (it == kTypes.end()) throw FormatError("unknown PLY property type '" + t + "'");
    return it->second;
}

std::size_t type_size(ScalarType t) {
    switch (t) {
        case ScalarType::Int8:
        case ScalarType::UInt8: return 1;
        case ScalarType::Int16:
        case ScalarType::UInt16: return 2;
        case ScalarType::Int32:
        case ScalarType::UInt32:
        case ScalarType::Float32: return 4;
        case ScalarType::Float64: return 8;
    }
    return 0;
}

template <typename T>
T load(const std::uint8_t* p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    return v;
}

float read_as_float(const std::uint8_t* p, ScalarType t) {
    switch (t) {
        case ScalarType::Int8: return static_cast<float>(load<std::int8_t>(p));
        case ScalarType::UInt8: return static_cast<float>(load<std::uint8_t>(p));
        case ScalarType::Int16: return static_cast<float>(load<std::int16_t>(p));
        case ScalarType::UInt16: return static_cast<float>(load<std::uint16_t>(p));
        case ScalarType::Int32: return static_cast<float>(load<std::int32_t>(p));
        case ScalarType::UInt32: return static_cast<float>(load<std::uint32_t>(p));
        case ScalarType::Float32: return load<float>(p);
        case ScalarType::Float64: return static_cast<float>(load<double>(p));
    }
    return 0.0f;
}

std::vector<std::string> required_properties() {
    std::vector<std::string> names = {"x", "y", "z", "f_dc_0", "f_dc_1", "f_dc_2"};
    for (int i = 0; i < 45; ++i) names.push_back("f_rest_" + std::to_string(i));
    names.push_back("opacity");
    for (int i = 0; i < 3; ++i) names.push_back("scale_" + std::to_string(i));
    for (int i = 0; i < 4; ++i) names.push_back("rot_" + std::to_string(i));
    return names;
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
    std::uint8_t b[4];
    std::memcpy(b, &v, 4);
    out.insert(out.end(), b, b + 4);
}

} // namespace

std::vector<RawSplat> parse_ply(std::span<const std::uint8_t> bytes) {
    static constexpr std::string_view kEnd = "end_header\n";
    const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    const auto header_end = text.find(kEnd);
    if (text.substr(0, 4) != "ply\n" || header_end == std::string_view::npos) {
        throw FormatError("not a PLY file (missing 'ply' magic or end_header)");
    }

    std::istringstream header{std::string(text.substr(0, header_end))};
    std::string line;
    std::size_t vertex_count = 0;
    bool in_vertex = false;
    bool seen_vertex = false;
    bool binary_le = false;
    std::vector<Property> props;
    std::size_t stride = 0;

    while (std::getline(header, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string keyword;
        ls >> keyword;
        if (keyword == "format") {
            std::string fmt;
            ls >> fmt;
            binary_le = (fmt == "binary_little_endian");
        } else if (keyword == "element") {
            std::string name;
            std::size_t count = 0;
            ls >> name >> count;
            in_vertex = (name == "vertex");
            if (in_vertex) {
                if (seen_vertex) throw FormatError("duplicate vertex element");
                vertex_count = count;
                seen_vertex = true;
            } else if (!seen_vertex) {
                throw FormatError("element '" + name + "' precedes vertex element");
            }
        } else if (keyword == "property" && in_vertex) {
            std::string type;
            std::string name;
            ls >> type;
            if (type == "list") throw FormatError("list properties are not supported in vertex element");
            ls >> name;
            const ScalarType t = parse_type(type);
            props.push_back({name, t, stride});
            stride += type_size(t);
        }
    }
    if (!binary_le) throw FormatError("only binary_little_endian PLY is supported");
    if (!seen_vertex) throw FormatError("missing vertex element");

    std::unordered_map<std::string, const Property*> by_name;
    for (const auto& p : props) by_name[p.name] = &p;
    std::vector<const Property*> layout;
    for (const auto& name : required_properties()) {
        auto it = by_name.find(name);
        if (it == by_name.end()) throw FormatError("missing property " + name);
        layout.push_back(it->second);
    }

    const std::size_t payload_start = header_end + kEnd.size();
    const std::size_t needed = vertex_count * stride;
    if (bytes.size() - payload_start < needed) {
        throw LengthError("PLY payload truncated: expected " + std::to_string(needed) + " bytes, found " +
                          std::to_string(bytes.size() - payload_start));
    }

    std::vector<RawSplat> out(vertex_count);
    for (std::size_t v = 0; v < vertex_count; ++v) {
        const std::uint8_t* row = bytes.data() + payload_start + v * stride;
        auto get = [&](std::size_t i) { return read_as_float(row + layout[i]->offset, layout[i]->type); };
        RawSplat& s = out[v];
        std::size_t i = 0;
        for (int k = 0; k < 3; ++k) s.position[k] = get(i++);
        for (int c = 0; c < 3; ++c) s.sh[c][0] = get(i++);
        for (int c = 0; c < 3; ++c) {
            for (int j = 1; j < kShCoeffs; ++j) s.sh[c][j] = get(i++);
        }
        s.opacity_logit = get(i++);
        for (int k = 0; k < 3; ++k) s.log_scale[k] = get(i++);
        for (int k = 0; k < 4; ++k) s.rotation[k] = get(i++);
    }
    return out;
}

std::vector<std::uint8_t> export_ply(const std::vector<RawSplat>& splats) {
    std::ostringstream h;
    h << "ply\nformat binary_little_endian 1.0\nelement vertex " << splats.size() << "\n";
    for (const char* n : {"x", "y", "z", "nx", "ny", "nz"}) h << "property float " << n << "\n";
    for (const auto& n : required_properties()) {
        if (n == "x" || n == "y" || n == "z") continue;
        h << "property float " << n << "\n";
    }
    h << "end_header\n";
    const std::string head = h.str();

    std::vector<std::uint8_t> out(head.begin(), head.end());
    out.reserve(out.size() + splats.size() * 62 * 4);
    for (const auto& s : splats) {
        for (float v : s.position) put_f32(out, v);
        for (int k = 0; k < 3; ++k) put_f32(out, 0.0f);
        for (int c = 0; c < 3; ++c) put_f32(out, s.sh[c][0]);
        for (int c = 0; c < 3; ++c) {
            for (int j = 1; j < kShCoeffs; ++j) put_f32(out, s.sh[c][j]);
        }
        put_f32(out, s.opacity_logit);
        for (float v : s.log_scale) put_f32(out, v);
        for (float v : s.rotation) put_f32(out, v);
    }
    return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::vector<Splat> load_ply(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return activate_all(parse_ply(bytes));
}

void save_ply(const std::filesystem::path& path, const std::vector<Splat>& splats) {
    const auto bytes = export_ply(deactivate_all(splats));
    write_file_atomic(path, bytes);
}

} // namespace potr
