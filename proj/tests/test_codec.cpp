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
#include <filesystem>
#include <numbers>
#include <vector>

#include "potr/cameras.hpp"
#include "potr/config.hpp"
#include "potr/errors.hpp"
#include "potr/fixture.hpp"
#include "potr/metrics.hpp"
#include "potr/pipeline.hpp"
#include "potr/ply.hpp"
#include "potr/rasterizer.hpp"
#include "support/test_support.hpp"

using namespace potr;
namespace fs = std::filesystem;

namespace {

Scene small_fixture() {
    FixtureConfig fc;
    fc.splats = 800;
    fc.cameras = 8;
    fc.width = 32;
    fc.height = 32;
    return make_fixture(fc);
}

Image constant_image(int w, int h, double v) {
    Image im(w, h);
    std::fill(im.rgb.begin(), im.rgb.end(), v);
    return im;
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("potr_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("schedule at q = 0.5") {
    const EncodeConfig c = config_from_q(0.5);
    CHECK(c.lambda == doctest::Approx(0.316227766).epsilon(1e-9));
    CHECK(c.alpha_par == doctest::Approx(1.0 / (1.0 + std::exp(-1.5))).epsilon(1e-12));
    CHECK(c.alpha_par == doctest::Approx(0.81757).epsilon(1e-5));
    CHECK(c.max_delta_mse == doctest::Approx(std::pow(10.0, -9.8)).epsilon(1e-12));
    CHECK(c.beta == doctest::Approx(7e-5).epsilon(1e-12));
    CHECK(c.gamma == doctest::Approx(5.0 * std::pow(10.0, -5.5)).epsilon(1e-12));
    CHECK(c.sf_sh == 51.0);
    CHECK(c.sf_opacity == 101.0);
    CHECK(c.sf_rotation == 201.0);
    CHECK(c.sf_scale == 2001.0);
    CHECK(c.iterations == 48);
    CHECK(c.mapping_a == 10.0);
    CHECK(c.chroma_factor == 3.0);
}

TEST_CASE("schedule at the ends of the range") {
    const EncodeConfig lo = config_from_q(0.0);
    CHECK(lo.lambda == 1.0);
    CHECK(lo.beta == 0.0);
    CHECK(lo.gamma == doctest::Approx(5e-3).epsilon(1e-12));
    CHECK(lo.alpha_par == 0.5);
    CHECK(lo.sf_sh == 1.0);
    CHECK(lo.sf_opacity == 1.0);
    CHECK(lo.sf_rotation == 1.0);
    CHECK(lo.sf_scale == 1.0);
    const EncodeConfig hi = config_from_q(1.0);
    CHECK(hi.max_delta_mse == doctest::Approx(std::pow(10.0, -10.8)).epsilon(1e-12));
    CHECK(hi.sf_scale == 4001.0);
    CHECK(hi.lambda == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(config_from_q(-0.01), ArgumentError);
    CHECK_THROWS_AS(config_from_q(1.01), ArgumentError);
    CHECK_THROWS_AS(config_from_q(std::nan("")), ArgumentError);
}

TEST_CASE("overrides replace single fields") {
    EncodeConfig c = config_from_q(0.5);
    c.apply_override("sf_sh=80");
    c.apply_override("placement=interleaved");
    c.set("iterations", "12");
    CHECK(c.sf_sh == 80.0);
    CHECK(c.placement == CompactionPlacement::interleaved);
    CHECK(c.iterations == 12);
    CHECK(c.sf_opacity == 101.0);
    CHECK(c.encode_params().sf.sf_sh == 80.0f);
    CHECK(c.prune_config().iterations == 12);
    CHECK_THROWS_AS(c.apply_override("no_such_key=1"), ArgumentError);
    CHECK_THROWS_AS(c.apply_override("sf_sh"), ArgumentError);
    CHECK_THROWS_AS(c.apply_override("sf_sh=abc"), ArgumentError);
    c.set("zstd_level", "0");
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    const auto j = config_from_q(0.25).to_json();
    CHECK(j["q"] == 0.25);
    CHECK(j.contains("sf_scale"));
}

TEST_CASE("PSNR and SSIM examples") {
    const Image gray = constant_image(8, 8, 0.5), black = constant_image(8, 8, 0.0);
    CHECK(clamped_mse(gray, black) == 0.25);
    CHECK(psnr(gray, black) == doctest::Approx(6.0206).epsilon(1e-5));
    CHECK(psnr(gray, gray) == kPsnrCap);
    CHECK(ssim(gray, gray) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ssim(gray, black) < 0.1);
    // Values outside [0,1] are clamped before comparison.
    CHECK(psnr(constant_image(8, 8, 1.7), constant_image(8, 8, 1.0)) == kPsnrCap);
    CHECK_THROWS_AS(psnr(gray, constant_image(8, 9, 0.5)), ArgumentError);
}

TEST_CASE("SSIM is symmetric and drops with noise") {
    test::Rng rng(1);
    Image a = constant_image(24, 24, 0.0);
    for (auto& p : a.rgb) p = rng.uniform();
    Image small = a, large = a;
    for (std::size_t i = 0; i < a.rgb.size(); ++i) {
        const double n = rng.normal();
        small.rgb[i] += 0.01 * n;
        large.rgb[i] += 0.1 * n;
    }
    CHECK(ssim(a, small) == doctest::Approx(ssim(small, a)).epsilon(1e-12));
    CHECK(ssim(a, small) > ssim(a, large));
    CHECK(ssim(a, small) < 1.0);
}

TEST_CASE("per-view metrics report") {
    const std::vector<Image> a{constant_image(4, 4, 0.5), constant_image(4, 4, 0.2)};
    const std::vector<Image> b{constant_image(4, 4, 0.0), constant_image(4, 4, 0.2)};
    const MetricsReport r = compare_images(a, b);
    REQUIRE(r.psnr.size() == 2);
    CHECK(r.psnr[0] == doctest::Approx(6.0206).epsilon(1e-5));
    CHECK(r.psnr[1] == kPsnrCap);
    CHECK(r.mean_mse == doctest::Approx(0.125));
    CHECK_THROWS_AS(compare_images(a, std::vector<Image>{b[0]}), ArgumentError);
}

TEST_CASE("pipeline is deterministic") {
    const Scene s = small_fixture();
    const EncodeConfig cfg = config_from_q(0.5);
    const EncodeResult a = encode_scene(s.splats, s.cameras, cfg);
    const EncodeResult b = encode_scene(s.splats, s.cameras, cfg);
    CHECK(a.container == b.container);
    CHECK(a.surviving_ids == b.surviving_ids);
    REQUIRE(a.report.prune_iterations.size() == b.report.prune_iterations.size());
    for (std::size_t i = 0; i < a.report.prune_iterations.size(); ++i) {
        CHECK(a.report.prune_iterations[i].to_json_line() == b.report.prune_iterations[i].to_json_line());
    }
    CHECK(a.report.file_bytes == a.container.size());
    CHECK(a.report.output_splats == a.processed.size());
    CHECK(a.report.prune_iterations.size() == 48);
}

TEST_CASE("interleaved compaction produces a valid container") {
    const Scene s = small_fixture();
    EncodeConfig cfg = config_from_q(0.5);
    cfg.placement = CompactionPlacement::interleaved;
    const EncodeResult r = encode_scene(s.splats, s.cameras, cfg);
    CHECK(r.report.compaction_iteration == 24);
    const auto j = r.report.to_json();
    CHECK(j["compaction_placement"] == "interleaved");
    const DecodedScene d = decode_container(r.container);
    CHECK(d.splats.size() == r.processed.size());
    CHECK(r.report.quantized_ac_zero_fraction > 0.0);
}

TEST_CASE("decoded scene stays within the quantizer bounds of the processed scene") {
    const Scene s = small_fixture();
    const EncodeConfig cfg = config_from_q(0.5);
    const EncodeResult r = encode_scene(s.splats, s.cameras, cfg);
    const DecodedScene d = decode_container(r.container);
    std::vector<Eigen::Vector3d> eyes;
    for (const auto& c : s.cameras) eyes.push_back(c.eye);
    std::vector<std::uint32_t> order;
    quantize_scene(r.processed, {}, eyes, cfg.encode_params(), &order);
    REQUIRE(order.size() == d.splats.size());

    std::vector<Eigen::Vector3f> positions;
    for (const auto& sp : r.processed) positions.push_back(sp.position);
    const QuantParams sf = cfg.encode_params().sf;
    const auto tol = position_tolerances(positions, eyes, static_cast<float>(cfg.beta), static_cast<float>(cfg.gamma));
    const double sh_step = 0.5 / sf.sf_sh + 1e-5, op_step = 0.75 / sf.sf_opacity + 1e-6;
    const double rot_step = 0.5 / sf.sf_rotation + 1e-6, scale_step = 0.5 / sf.sf_scale + 1e-6;
    std::size_t violations = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Splat& in = r.processed[order[i]];
        const Splat& out = d.splats[i];
        if (d.octree.leaf_depth[i] < d.header.max_depth) {
            violations += (in.position - out.position).cast<double>().norm() < tol[order[i]] ? 0 : 1;
        }
        const YcocgCoeffs a = to_ycocg(in.sh);
        for (int ch = 0; ch < 3; ++ch) {
            for (int b = 0; b < kShCoeffs; ++b) violations += std::abs(d.ycocg[i][ch][b] - a[ch][b]) <= sh_step ? 0 : 1;
        }
        violations += std::abs(out.opacity - in.opacity) <= op_step ? 0 : 1;
        Eigen::Vector4f rot = in.rotation;
        if (rot[0] < 0) rot = -rot;
        for (int k = 0; k < 3; ++k) {
            violations += std::abs(std::log(out.scale[k]) - std::log(in.scale[k])) <= scale_step ? 0 : 1;
            violations += std::abs(out.rotation[k + 1] - rot[k + 1]) <= rot_step ? 0 : 1;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("max_depth is read from the header") {
    const Scene s = small_fixture();
    EncodeConfig cfg = config_from_q(0.5);
    cfg.max_depth = 6;
    const EncodeResult r = encode_scene(s.splats, s.cameras, cfg);
    CHECK(read_header(r.container).max_depth == 6);
    const DecodedScene d = decode_container(r.container);
    CHECK(d.splats.size() == r.processed.size());
    for (auto depth : d.octree.leaf_depth) CHECK(depth <= 6);
}

TEST_CASE("file round trip and truncated input") {
    const fs::path dir = scratch_dir("codec_files");
    const Scene s = small_fixture();
    save_ply(dir / "in.ply", s.splats);
    save_cameras(dir / "cams.json", s.cameras);
    const EncodeReport report = encode_file(dir / "in.ply", dir / "cams.json", config_from_q(0.5), dir / "out.potr");
    CHECK(fs::file_size(dir / "out.potr") == report.file_bytes);
    CHECK(decode_file(dir / "out.potr", dir / "out.ply") == report.output_splats);
    CHECK(load_ply(dir / "out.ply").size() == report.output_splats);

    auto bytes = read_file(dir / "out.potr");
    bytes.resize(bytes.size() / 2);
    write_file_atomic(dir / "cut.potr", bytes);
    CHECK_THROWS_AS(decode_file(dir / "cut.potr", dir / "cut.ply"), IntegrityError);
    CHECK_FALSE(fs::exists(dir / "cut.ply"));
    fs::remove_all(dir);
}

TEST_CASE("size attribution on the compacted fixture") {
    FixtureConfig fc;
    fc.splats = 2000;
    const Scene s = make_fixture(fc);
    const EncodeResult r = encode_scene(s.splats, s.cameras, config_from_q(0.5));
    const SizeReport report = size_report(r.container);
    double total = 0.0;
    for (const auto& st : report.streams) total += st.attributed;
    CHECK(total / static_cast<double>(report.payload_bytes) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(report.streams[2].attributed < report.streams[0].attributed);  // ac below position
}

TEST_CASE("q = 0 is near-lossless on the fixture") {
    FixtureConfig fc;
    fc.splats = 2000;
    const Scene s = make_fixture(fc);
    const auto targets = render_all(s.splats, s.cameras);
    const EncodeResult r = encode_scene(s.splats, s.cameras, config_from_q(0.0), &targets);
    const auto decoded = render_all(decode_container(r.container).splats, s.cameras);
    const double value = compare_images(decoded, targets).mean_psnr;
    MESSAGE("q = 0 PSNR vs targets: " << value << " dB");
    CHECK(value >= 45.0);
}
