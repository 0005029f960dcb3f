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

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <omp.h>

#include "potr/errors.hpp"
#include "potr/rasterizer.hpp"
#include "potr/reference.hpp"
#include "support/test_support.hpp"

using namespace potr;

namespace {

Camera unit_pixel_camera() { return test::axis_camera(1, 1, 100.0, 0.5, 0.5); }

// Opaque-looking splat exactly on the axis of a 1x1 camera, so the
// Gaussian evaluates to 1 at the only pixel center.
Splat on_axis(double depth, float opacity, double gray) {
    return test::gray_splat({0.0f, 0.0f, static_cast<float>(depth)}, 0.01f, opacity, gray);
}

} // namespace

TEST_CASE("projection of an on-axis isotropic splat") {
    const Camera cam = test::axis_camera(32, 32, 100.0, 16.0, 16.0);
    const Splat s = test::gray_splat({0, 0, 1}, 0.01f, 0.5f, 1.0);
    const auto p = project_splat(s, cam);
    REQUIRE(p.has_value());
    CHECK(p->mean.x() == doctest::Approx(16.0));
    CHECK(p->mean.y() == doctest::Approx(16.0));
    CHECK(p->cov(0, 0) == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(p->cov(1, 1) == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(std::abs(p->cov(0, 1)) < 1e-9);
    CHECK(p->depth == doctest::Approx(1.0));
}

TEST_CASE("projection culls behind the near plane") {
    const Camera cam = test::axis_camera(32, 32, 100.0, 16.0, 16.0);
    CHECK_FALSE(project_splat(test::gray_splat({0, 0, -1}, 0.01f, 0.5f, 1.0), cam).has_value());
    CHECK_FALSE(project_splat(test::gray_splat({0, 0, 0.005f}, 0.01f, 0.5f, 1.0), cam).has_value());
    // Far outside the image even with its 3-sigma extent.
    CHECK_FALSE(project_splat(test::gray_splat({50, 0, 1}, 0.01f, 0.5f, 1.0), cam).has_value());
}

TEST_CASE("isotropic splats are rotation invariant") {
    const Camera cam = test::axis_camera(32, 32, 60.0, 16.0, 16.0);
    test::Rng rng(1);
    Splat s = test::gray_splat({0.1f, -0.2f, 2.0f}, 0.05f, 0.5f, 1.0);
    const auto base = project_splat(s, cam);
    REQUIRE(base.has_value());
    for (int i = 0; i < 20; ++i) {
        Eigen::Vector4d q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
        q.normalize();
        s.rotation = q.cast<float>();
        const auto p = project_splat(s, cam);
        REQUIRE(p.has_value());
        CHECK((p->cov - base->cov).norm() < 1e-9 * base->cov.norm());
    }
}

TEST_CASE("compositing examples") {
    const Camera cam = unit_pixel_camera();
    SUBCASE("empty pixel is black") {
        const Splat far_away = test::gray_splat({0, 0, -5}, 0.01f, 0.5f, 1.0);
        const std::vector<Splat> splats{far_away};
        const auto view = render_with_records(splats, cam);
        CHECK(view.image.rgb == std::vector<double>{0, 0, 0});
        CHECK(view.pixels[0].contributions.empty());
    }
    SUBCASE("single splat") {
        const std::vector<Splat> splats{on_axis(1.0, 0.5f, 1.0)};
        const auto view = render_with_records(splats, cam);
        for (double v : view.image.rgb) CHECK(v == doctest::Approx(0.5).epsilon(1e-6));
        REQUIRE(view.pixels[0].contributions.size() == 1);
        CHECK(view.pixels[0].contributions[0].splat == 0);
        CHECK(view.pixels[0].contributions[0].alpha == doctest::Approx(0.5));
        CHECK(view.pixels[0].contributions[0].transmittance == 1.0);
        const Color3 pd = prune_difference(view.pixels[0], 0);
        for (double v : pd) CHECK(v == doctest::Approx(-0.5).epsilon(1e-6));
    }
    SUBCASE("two stacked splats") {
        const std::vector<Splat> splats{on_axis(2.0, 0.5f, 1.0), on_axis(1.0, 0.5f, 1.0)};
        const auto view = render_with_records(splats, cam);
        for (double v : view.image.rgb) CHECK(v == doctest::Approx(0.75).epsilon(1e-6));
        REQUIRE(view.pixels[0].contributions.size() == 2);
        CHECK(view.pixels[0].contributions[0].splat == 1);  // front first
        const Color3 pd = prune_difference(view.pixels[0], 1);
        for (double v : pd) CHECK(v == doctest::Approx(-0.25).epsilon(1e-6));

        const auto without_front = render(test::without(splats, 1), cam);
        CHECK(without_front.rgb[0] - view.image.rgb[0] == doctest::Approx(pd[0]).epsilon(1e-9));

        const TargetSet targets{view.image};
        const std::vector<Camera> cams{cam};
        const auto impact = compute_delta_mse(splats, cams, targets);
        CHECK(impact.delta_mse[1] == doctest::Approx(0.0625).epsilon(1e-6));
    }
    SUBCASE("equal depths keep index order") {
        const std::vector<Splat> splats{on_axis(1.0, 0.5f, 1.0), on_axis(1.0, 0.5f, 0.2)};
        const auto view = render_with_records(splats, cam);
        REQUIRE(view.pixels[0].contributions.size() == 2);
        CHECK(view.pixels[0].contributions[0].splat == 0);
        CHECK(view.pixels[0].contributions[1].splat == 1);
    }
    SUBCASE("splats absent from the record have zero prune difference") {
        const std::vector<Splat> splats{on_axis(1.0, 0.5f, 1.0)};
        const auto view = render_with_records(splats, cam);
        CHECK(prune_difference(view.pixels[0], 5) == Color3{0, 0, 0});
    }
}

TEST_CASE("alpha is clamped below one") {
    const std::vector<Splat> splats{on_axis(1.0, 0.99999f, 1.0)};
    const auto view = render_with_records(splats, unit_pixel_camera());
    REQUIRE(view.pixels[0].contributions.size() == 1);
    CHECK(view.pixels[0].contributions[0].alpha == kMaxAlpha);
}

TEST_CASE("importance examples") {
    SUBCASE("single splat on a single pixel") {
        const std::vector<Splat> splats{on_axis(1.0, 0.5f, 1.0)};
        const std::vector<Camera> cams{unit_pixel_camera()};
        CHECK(compute_importance(splats, cams).importance[0] == doctest::Approx(0.5));
    }
    SUBCASE("large splat covering a 4x4 image") {
        const std::vector<Splat> splats{test::gray_splat({0, 0, 1}, 1000.0f, 0.5f, 1.0)};
        const std::vector<Camera> cams{test::axis_camera(4, 4, 10.0, 2.0, 2.0)};
        CHECK(compute_importance(splats, cams).importance[0] == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("never visible") {
        const std::vector<Splat> splats{on_axis(1.0, 0.5f, 1.0), test::gray_splat({0, 0, -3}, 0.1f, 0.9f, 1.0)};
        const std::vector<Camera> cams{unit_pixel_camera()};
        CHECK(compute_importance(splats, cams).importance[1] == 0.0);
    }
    SUBCASE("per-camera sums are at most one") {
        const auto scene = test::random_scene(3, 200, 4);
        const auto impact = compute_importance(scene.splats, scene.cameras);
        for (std::size_t s = 0; s < scene.cameras.size(); ++s) {
            double sum = 0.0;
            for (std::size_t k = 0; k < scene.splats.size(); ++k) {
                const double v = impact.view_importance_at(s, k);
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
                sum += v;
            }
            CHECK(sum <= 1.0 + 1e-12);
            CHECK(sum > 0.0);
        }
    }
}

TEST_CASE("transmittance telescopes and colors accumulate as recorded") {
    const auto scene = test::random_scene(5, 60, 2);
    for (const auto& cam : scene.cameras) {
        const auto view = render_with_records(scene.splats, cam);
        for (std::size_t p = 0; p < view.pixels.size(); ++p) {
            double t = 1.0;
            Color3 c{0, 0, 0};
            for (const auto& contrib : view.pixels[p].contributions) {
                CHECK(contrib.transmittance == t);
                for (int ch = 0; ch < 3; ++ch) c[ch] += contrib.transmittance * contrib.alpha * contrib.color[ch];
                t *= 1.0 - contrib.alpha;
            }
            for (int ch = 0; ch < 3; ++ch) {
                CHECK(view.pixels[p].color[ch] == doctest::Approx(c[ch]).epsilon(1e-14));
                CHECK(view.image.rgb[p * 3 + ch] == view.pixels[p].color[ch]);
            }
        }
    }
}

namespace {

bool terminated(const PixelRecord& record) {
    if (record.contributions.empty()) return false;
    const auto& last = record.contributions.back();
    return last.transmittance * (1.0 - last.alpha) < kTransmittanceCutoff;
}

std::size_t terminated_pixels(const Scene& scene) {
    std::size_t n = 0;
    for (const auto& cam : scene.cameras) {
        for (const auto& px : render_with_records(scene.splats, cam).pixels) n += terminated(px) ? 1 : 0;
    }
    return n;
}

} // namespace

TEST_CASE("prune difference matches re-rendering without the splat") {
    // Where compositing stopped early, deleting a front splat lets splats past
    // the cutoff contribute; that error is at most the raised residual
    // transmittance times the brightest splat color.
    std::size_t terminated_checked = 0;
    for (std::uint64_t seed = 10; seed < 14; ++seed) {
        const auto scene = test::random_scene(seed, 40, 3);
        double worst_open = 0.0;
        bool within_bound = true;
        for (const auto& cam : scene.cameras) {
            double brightest = 0.0;
            for (const auto& s : scene.splats) {
                for (double v : splat_color(s, cam.eye)) brightest = std::max(brightest, v);
            }
            const auto view = render_with_records(scene.splats, cam);
            for (std::size_t k = 0; k < scene.splats.size(); ++k) {
                const Image other = render(test::without(scene.splats, k), cam);
                for (std::size_t p = 0; p < view.pixels.size(); ++p) {
                    const auto& record = view.pixels[p];
                    const Color3 pd = prune_difference(record, static_cast<std::uint32_t>(k));
                    double err = 0.0;
                    for (int ch = 0; ch < 3; ++ch) {
                        err = std::max(err, std::abs(pd[ch] - (other.rgb[p * 3 + ch] - view.image.rgb[p * 3 + ch])));
                    }
                    if (!terminated(record)) {
                        worst_open = std::max(worst_open, err);
                        continue;
                    }
                    ++terminated_checked;
                    const auto& last = record.contributions.back();
                    double residual = last.transmittance * (1.0 - last.alpha);
                    for (const auto& c : record.contributions) {
                        if (c.splat == k) residual /= 1.0 - c.alpha;
                    }
                    if (err > residual * brightest + 1e-12) within_bound = false;
                }
            }
        }
        CAPTURE(seed);
        CHECK(worst_open <= 1e-5);
        CHECK(within_bound);
    }
    CHECK(terminated_checked > 0);
}

TEST_CASE("delta MSE matches brute-force MSE differences") {
    for (std::uint64_t seed = 20; seed < 23; ++seed) {
        const auto scene = test::random_scene(seed, 20, 3);
        REQUIRE(terminated_pixels(scene) == 0);
        // Targets from a perturbed scene so both error terms are exercised.
        auto perturbed = scene.splats;
        for (auto& s : perturbed) s.sh[0][0] += 0.1f;
        const TargetSet targets = render_all(perturbed, scene.cameras);
        const auto impact = compute_delta_mse(scene.splats, scene.cameras, targets);
        const double base = mean_mse(render_all(scene.splats, scene.cameras), targets);
        CHECK(impact.mse == doctest::Approx(base).epsilon(1e-12));
        double worst = 0.0;
        for (std::size_t k = 0; k < scene.splats.size(); ++k) {
            const double removed = mean_mse(render_all(test::without(scene.splats, k), scene.cameras), targets);
            worst = std::max(worst, std::abs(impact.delta_mse[k] - (removed - base)));
        }
        CAPTURE(seed);
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("delta MSE is non-negative against the model's own render") {
    const auto scene = test::random_scene(30, 80, 3);
    const TargetSet targets = render_all(scene.splats, scene.cameras);
    const auto impact = compute_delta_mse(scene.splats, scene.cameras, targets);
    CHECK(impact.mse == 0.0);
    for (double d : impact.delta_mse) CHECK(d >= 0.0);
}

TEST_CASE("target resolution mismatch is rejected") {
    const auto scene = test::random_scene(31, 10, 2);
    TargetSet targets = render_all(scene.splats, scene.cameras);
    targets[1] = Image(5, 5);
    CHECK_THROWS_AS(compute_delta_mse(scene.splats, scene.cameras, targets), ArgumentError);
}

TEST_CASE("parallel kernels agree bit for bit with the serial reference") {
    const auto scene = test::random_scene(40, 150, 3);
    auto perturbed = scene.splats;
    for (auto& s : perturbed) s.opacity *= 0.9f;
    const TargetSet targets = render_all(perturbed, scene.cameras);
    for (const auto& cam : scene.cameras) {
        const auto fast = render_with_records(scene.splats, cam);
        const auto slow = reference::render_with_records(scene.splats, cam);
        CHECK(fast.image.rgb == slow.image.rgb);
        CHECK(render(scene.splats, cam).rgb == slow.image.rgb);
    }
    const auto fast = compute_delta_mse(scene.splats, scene.cameras, targets);
    const auto slow = reference::compute_delta_mse(scene.splats, scene.cameras, targets);
    CHECK(fast.delta_mse == slow.delta_mse);
    CHECK(fast.importance == slow.importance);
    CHECK(fast.view_importance == slow.view_importance);
    CHECK(fast.mse == slow.mse);
}

TEST_CASE("results do not depend on the thread count") {
    const auto scene = test::random_scene(41, 300, 4, 48);
    const TargetSet targets = render_all(test::without(scene.splats, 0), scene.cameras);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = compute_delta_mse(scene.splats, scene.cameras, targets);
    const auto images_one = render_all(scene.splats, scene.cameras);
    for (int threads : {4, 16}) {
        omp_set_num_threads(threads);
        const auto many = compute_delta_mse(scene.splats, scene.cameras, targets);
        CHECK(many.delta_mse == one.delta_mse);
        CHECK(many.view_importance == one.view_importance);
        CHECK(test::same_images(render_all(scene.splats, scene.cameras), images_one));
    }
    omp_set_num_threads(saved);
}
