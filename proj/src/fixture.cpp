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

#include "potr/fixture.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "potr/errors.hpp"
#include "potr/sh.hpp"

namespace potr {

namespace {

/// Distribution code written out so results do not depend on the standard
/// library's distribution implementations.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 rng_;
};

} // namespace

Camera look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target, const Eigen::Vector3d& up, double fx,
               double fy, int width, int height) {
    const Eigen::Vector3d forward = (target - eye).normalized();
    const Eigen::Vector3d down = -(up - up.dot(forward) * forward).normalized();
    const Eigen::Vector3d right = down.cross(forward);
    Camera cam;
    cam.eye = eye;
    cam.rotation.row(0) = right;
    cam.rotation.row(1) = down;
    cam.rotation.row(2) = forward;
    cam.fx = fx;
    cam.fy = fy;
    cam.cx = 0.5 * width;
    cam.cy = 0.5 * height;
    cam.width = width;
    cam.height = height;
    return cam;
}

Scene make_fixture(const FixtureConfig& config) {
    if (config.cameras < 0 || config.width < 1 || config.height < 1) throw ArgumentError("bad fixture dimensions");
    Sampler rng(config.seed);
    Scene scene;
    scene.splats.reserve(config.splats);

    for (std::size_t k = 0; k < config.splats; ++k) {
        const double z = rng.uniform(-1.0, 1.0);
        const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double ring = std::sqrt(std::max(0.0, 1.0 - z * z));
        const Eigen::Vector3d dir(ring * std::cos(phi), z, ring * std::sin(phi));
        const double r = config.radius + config.shell_thickness * rng.uniform(-0.5, 0.5);

        Splat s;
        s.position = (r * dir).cast<float>();
        for (int a = 0; a < 3; ++a) {
            s.scale[a] = static_cast<float>(std::exp(std::log(0.03 * config.radius) + 0.3 * rng.normal()));
        }
        Eigen::Vector4d q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
        q.normalize();
        if (q[0] < 0.0) q = -q;
        s.rotation = q.cast<float>();
        const bool faint = rng.uniform() < config.faint_fraction;
        s.opacity = static_cast<float>(faint ? rng.uniform(0.02, 0.08) : rng.uniform(0.6, 0.98));

        // Luminance-only degree-1 lobe (a broad highlight) plus weak per-channel noise.
        Eigen::Vector3d lobe(rng.normal(), rng.normal(), rng.normal());
        lobe *= config.lobe_strength * rng.uniform() / std::max(lobe.norm(), 1e-12);
        for (int ch = 0; ch < 3; ++ch) {
            const double base = 0.5 + 0.3 * std::sin(4.0 * dir.x() + ch) * std::cos(3.0 * dir.y() - ch) +
                                0.1 * std::sin(5.0 * dir.z() + 2.0 * ch) + 0.02 * rng.normal();
            s.sh[ch][0] = static_cast<float>((base - 0.5) / kShC0);
            for (int b = 1; b < kShCoeffs; ++b) {
                const int degree = b < 4 ? 1 : (b < 9 ? 2 : 3);
                const double sd = config.ac_noise / static_cast<double>(1 << (degree - 1));
                const double lobe_term = b < 4 ? lobe[b - 1] : 0.0;
                s.sh[ch][b] = static_cast<float>(lobe_term + sd * rng.normal());
            }
        }
        scene.splats.push_back(s);
    }

    const double f = 0.5 * config.width / std::tan(0.5 * config.field_of_view_deg * std::numbers::pi / 180.0);
    for (int i = 0; i < config.cameras; ++i) {
        const double theta = 2.0 * std::numbers::pi * i / config.cameras;
        const double d = config.camera_distance;
        const Eigen::Vector3d eye(d * std::cos(theta), 0.25 * d * std::sin(2.0 * theta), d * std::sin(theta));
        scene.cameras.push_back(
            look_at(eye, Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitY(), f, f, config.width, config.height));
    }
    return scene;
}

} // namespace potr
