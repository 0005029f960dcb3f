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

#include "potr/scene.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "potr/errors.hpp"

namespace potr {
namespace {

void require_finite(float v, std::size_t index, const char* field) {
    if (!std::isfinite(v)) {
        throw DataError("splat " + std::to_string(index) + ": non-finite " + field);
    }
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

} // namespace

Splat activate(const RawSplat& raw, std::size_t index) {
    for (float v : raw.position) require_finite(v, index, "position");
    for (float v : raw.log_scale) require_finite(v, index, "scale");
    for (float v : raw.rotation) require_finite(v, index, "rotation");
    require_finite(raw.opacity_logit, index, "opacity");
    for (const auto& channel : raw.sh) {
        for (float v : channel) require_finite(v, index, "sh");
    }

    Splat s;
    s.position = Eigen::Vector3f(raw.position[0], raw.position[1], raw.position[2]);
    for (int i = 0; i < 3; ++i) {
        s.scale[i] = static_cast<float>(std::exp(static_cast<double>(raw.log_scale[i])));
        if (!(s.scale[i] > 0.0f) || !std::isfinite(s.scale[i])) {
            throw DataError("splat " + std::to_string(index) + ": scale out of range");
        }
    }

    Eigen::Vector4d q(raw.rotation[0], raw.rotation[1], raw.rotation[2], raw.rotation[3]);
    const double norm = q.norm();
    if (!(norm > 0.0)) {
        throw DataError("splat " + std::to_string(index) + ": zero-norm rotation");
    }
    q /= norm;
    if (q[0] < 0.0) q = -q;
    s.rotation = q.cast<float>();

    const double o = logistic(raw.opacity_logit);
    s.opacity = static_cast<float>(o);
    // float rounding of logistic() saturates for |logit| > ~17
    if (!(s.opacity > 0.0f)) s.opacity = std::nextafter(0.0f, 1.0f);
    if (!(s.opacity < 1.0f)) s.opacity = std::nextafter(1.0f, 0.0f);

    s.sh = raw.sh;
    return s;
}

RawSplat deactivate(const Splat& splat) {
    RawSplat raw;
    for (int i = 0; i < 3; ++i) {
        raw.position[i] = splat.position[i];
        raw.log_scale[i] = static_cast<float>(std::log(static_cast<double>(splat.scale[i])));
    }
    for (int i = 0; i < 4; ++i) raw.rotation[i] = splat.rotation[i];
    const double o = splat.opacity;
    raw.opacity_logit = static_cast<float>(std::log(o / (1.0 - o)));
    raw.sh = splat.sh;
    return raw;
}

std::vector<Splat> activate_all(const std::vector<RawSplat>& raw) {
    std::vector<Splat> out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out.push_back(activate(raw[i], i));
    return out;
}

std::vector<RawSplat> deactivate_all(const std::vector<Splat>& splats) {
    std::vector<RawSplat> out;
    out.reserve(splats.size());
    for (const auto& s : splats) out.push_back(deactivate(s));
    return out;
}

void validate_camera(const Camera& camera, double orthonormal_tolerance) {
    if (!camera.eye.allFinite() || !camera.rotation.allFinite()) {
        throw ValidationError("camera has non-finite pose");
    }
    const Eigen::Matrix3d gram = camera.rotation * camera.rotation.transpose();
    const double err = (gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (err > orthonormal_tolerance) {
        throw ValidationError("camera rotation is not orthonormal (max error " + std::to_string(err) + ")");
    }
    if (camera.rotation.determinant() <= 0.0) {
        throw ValidationError("camera rotation has negative determinant (reflection)");
    }
    if (!(camera.fx > 0.0) || !(camera.fy > 0.0)) {
        throw ValidationError("camera focal lengths must be positive");
    }
    if (camera.width < 1 || camera.height < 1) {
        throw ValidationError("camera image size must be at least 1x1");
    }
}

} // namespace potr
