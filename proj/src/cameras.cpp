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

#include "potr/cameras.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "potr/errors.hpp"
#include "potr/image_io.hpp"

namespace potr {

using json = nlohmann::json;

namespace {

double number(const json& entry, const char* key, std::size_t index) {
    if (!entry.contains(key) || !entry[key].is_number()) {
        throw FormatError("camera " + std::to_string(index) + ": missing numeric field '" + key + "'");
    }
    return entry[key].get<double>();
}

} // namespace

std::vector<Camera> parse_cameras(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("cameras JSON: ") + e.what());
    }
    if (!doc.is_array()) throw FormatError("cameras JSON must be an array");

    std::vector<Camera> cameras;
    cameras.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& e = doc[i];
        if (!e.is_object()) throw FormatError("camera " + std::to_string(i) + " is not an object");
        if (!e.contains("eye") || !e["eye"].is_array() || e["eye"].size() != 3) {
            throw FormatError("camera " + std::to_string(i) + ": 'eye' must have 3 numbers");
        }
        if (!e.contains("rotation") || !e["rotation"].is_array() || e["rotation"].size() != 9) {
            throw FormatError("camera " + std::to_string(i) + ": 'rotation' must have 9 numbers");
        }
        Camera c;
        for (int k = 0; k < 3; ++k) c.eye[k] = e["eye"][k].get<double>();
        for (int r = 0; r < 3; ++r) {
            for (int k = 0; k < 3; ++k) c.rotation(r, k) = e["rotation"][r * 3 + k].get<double>();
        }
        c.fx = number(e, "fx", i);
        c.fy = number(e, "fy", i);
        c.cx = number(e, "cx", i);
        c.cy = number(e, "cy", i);
        c.width = static_cast<int>(number(e, "width", i));
        c.height = static_cast<int>(number(e, "height", i));
        if (e.contains("image") && e["image"].is_string()) c.image_path = e["image"].get<std::string>();
        try {
            validate_camera(c);
        } catch (const ValidationError& err) {
            throw ValidationError("camera " + std::to_string(i) + ": " + err.what());
        }
        cameras.push_back(std::move(c));
    }
    return cameras;
}

std::string cameras_to_json(const std::vector<Camera>& cameras) {
    json doc = json::array();
    for (const auto& c : cameras) {
        json e;
        e["eye"] = {c.eye.x(), c.eye.y(), c.eye.z()};
        json rot = json::array();
        for (int r = 0; r < 3; ++r) {
            for (int k = 0; k < 3; ++k) rot.push_back(c.rotation(r, k));
        }
        e["rotation"] = rot;
        e["fx"] = c.fx;
        e["fy"] = c.fy;
        e["cx"] = c.cx;
        e["cy"] = c.cy;
        e["width"] = c.width;
        e["height"] = c.height;
        if (c.image_path) e["image"] = *c.image_path;
        doc.push_back(std::move(e));
    }
    return doc.dump(2);
}

std::vector<Camera> load_cameras(const std::filesystem::path& path, bool load_images) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    auto cameras = parse_cameras(ss.str());
    if (load_images) {
        for (auto& c : cameras) {
            if (!c.image_path) continue;
            std::filesystem::path p(*c.image_path);
            if (p.is_relative()) p = path.parent_path() / p;
            Image img = read_png(p);
            if (img.width != c.width || img.height != c.height) {
                throw ValidationError("target image " + p.string() + " does not match camera resolution");
            }
            c.target = std::move(img);
        }
    }
    return cameras;
}

void save_cameras(const std::filesystem::path& path, const std::vector<Camera>& cameras) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << cameras_to_json(cameras) << "\n";
}

Camera camera_from_colmap(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation, double fx,
                          double fy, double cx, double cy, int width, int height) {
    Camera c;
    c.rotation = rotation;
    c.eye = -rotation.transpose() * translation;
    c.fx = fx;
    c.fy = fy;
    c.cx = cx;
    c.cy = cy;
    c.width = width;
    c.height = height;
    validate_camera(c);
    return c;
}

} // namespace potr
