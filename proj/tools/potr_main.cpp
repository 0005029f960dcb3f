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

// potr: command-line front end for the splat codec.

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "potr/bitstream.hpp"
#include "potr/cameras.hpp"
#include "potr/config.hpp"
#include "potr/errors.hpp"
#include "potr/fixture.hpp"
#include "potr/image_io.hpp"
#include "potr/metrics.hpp"
#include "potr/pipeline.hpp"
#include "potr/ply.hpp"
#include "potr/pruning.hpp"
#include "potr/rasterizer.hpp"

namespace fs = std::filesystem;

namespace {

void emit(const nlohmann::json& j, const std::string& report_path) {
    const std::string text = j.dump(2) + "\n";
    if (report_path.empty()) {
        std::cout << text;
    } else {
        potr::write_file_atomic(report_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"potr: post-training compression for Gaussian splat models"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker thread cap (0 = OpenMP default)")->check(CLI::NonNegativeNumber);

    // encode
    auto* encode = app.add_subcommand("encode", "Compress a PLY model");
    std::string enc_in, enc_cams, enc_out, enc_report;
    double enc_q = 0.5;
    std::optional<int> enc_level;
    std::vector<std::string> enc_overrides;
    encode->add_option("-i,--input", enc_in, "Input PLY")->required()->check(CLI::ExistingFile);
    encode->add_option("-c,--cameras", enc_cams, "Cameras JSON")->required()->check(CLI::ExistingFile);
    encode->add_option("-o,--output", enc_out, "Output .potr")->required();
    encode->add_option("-q,--quality", enc_q, "Quality parameter in [0,1]")->check(CLI::Range(0.0, 1.0));
    encode->add_option("--zstd-level", enc_level, "zstd level 1..22")->check(CLI::Range(1, 22));
    encode->add_option("--override", enc_overrides, "Replace one config field: key=value (repeatable)");
    encode->add_option("--report", enc_report, "Write the JSON report here instead of stdout");

    // decode
    auto* decode = app.add_subcommand("decode", "Decompress to PLY");
    std::string dec_in, dec_out;
    decode->add_option("-i,--input", dec_in, "Input .potr")->required()->check(CLI::ExistingFile);
    decode->add_option("-o,--output", dec_out, "Output PLY")->required();

    // metrics
    auto* metrics = app.add_subcommand("metrics", "Compare two models by rendering both");
    std::string met_a, met_b, met_cams, met_potr, met_report;
    metrics->add_option("-a", met_a, "Reference PLY")->required()->check(CLI::ExistingFile);
    metrics->add_option("-b", met_b, "Test PLY")->required()->check(CLI::ExistingFile);
    metrics->add_option("-c,--cameras", met_cams, "Cameras JSON")->required()->check(CLI::ExistingFile);
    metrics->add_option("--potr", met_potr, "Container of model b, for size figures")->check(CLI::ExistingFile);
    metrics->add_option("--report", met_report, "Write the JSON report here instead of stdout");

    // info
    auto* info = app.add_subcommand("info", "Header fields and per-stream size attribution");
    std::string info_in;
    info->add_option("input", info_in, "Container")->required()->check(CLI::ExistingFile);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Compaction regularization sweep (CSV)");
    std::string sw_in, sw_cams, sw_out;
    std::vector<double> sw_lambdas{0.01, 0.1, 1.0, 10.0, 100.0};
    std::vector<double> sw_alphas;
    std::optional<double> sw_prune_q;
    double sw_q = 0.5;
    sweep->add_option("-i,--input", sw_in, "Input PLY")->required()->check(CLI::ExistingFile);
    sweep->add_option("-c,--cameras", sw_cams, "Cameras JSON")->required()->check(CLI::ExistingFile);
    sweep->add_option("--lambda", sw_lambdas, "Luminance regularization values")->delimiter(',');
    sweep->add_option("--alpha", sw_alphas, "Parallel-column thresholds (default from -q)")->delimiter(',');
    sweep->add_option("-q,--quality", sw_q, "Quality for SF_SH and default alpha")->check(CLI::Range(0.0, 1.0));
    sweep->add_option("--prune-q", sw_prune_q, "Prune at this quality before sweeping")->check(CLI::Range(0.0, 1.0));
    sweep->add_option("-o,--output", sw_out, "CSV path (default stdout)");

    // gen-fixture
    auto* gen = app.add_subcommand("gen-fixture", "Write the synthetic sphere-shell scene");
    potr::FixtureConfig fix;
    std::string gen_ply = "fixture.ply", gen_cams = "fixture_cameras.json";
    gen->add_option("--splats", fix.splats, "Splat count");
    gen->add_option("--cameras", fix.cameras, "Camera count");
    gen->add_option("--seed", fix.seed, "Random seed");
    gen->add_option("--width", fix.width, "Image width");
    gen->add_option("--height", fix.height, "Image height");
    gen->add_option("-o,--output", gen_ply, "PLY path");
    gen->add_option("--cameras-out", gen_cams, "Cameras JSON path");

    // render
    auto* render = app.add_subcommand("render", "Render every camera to PNG");
    std::string ren_in, ren_cams, ren_dir;
    render->add_option("-i,--input", ren_in, "Model PLY")->required()->check(CLI::ExistingFile);
    render->add_option("-c,--cameras", ren_cams, "Cameras JSON")->required()->check(CLI::ExistingFile);
    render->add_option("-o,--output-dir", ren_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (*encode) {
            potr::EncodeConfig config = potr::config_from_q(enc_q);
            for (const auto& o : enc_overrides) config.apply_override(o);
            if (enc_level) config.zstd_level = *enc_level;
            const potr::EncodeReport report = potr::encode_file(enc_in, enc_cams, config, enc_out);
            emit(report.to_json(), enc_report);
        } else if (*decode) {
            const std::size_t n = potr::decode_file(dec_in, dec_out);
            std::cerr << "decoded " << n << " splats to " << dec_out << "\n";
        } else if (*metrics) {
            const auto a = potr::load_ply(met_a);
            const auto b = potr::load_ply(met_b);
            const auto cams = potr::load_cameras(met_cams);
            const auto report = potr::compare_images(potr::render_all(a, cams), potr::render_all(b, cams));
            nlohmann::json j = report.to_json();
            j["splats_a"] = a.size();
            j["splats_b"] = b.size();
            if (!met_potr.empty()) {
                const auto bytes = potr::read_file(met_potr);
                const auto size = potr::size_report(bytes);
                j["model_bytes"] = size.file_bytes;
                j["bytes_per_splat"] = size.bytes_per_splat();
                j["size"] = nlohmann::json::parse(size.to_json());
            }
            emit(j, met_report);
        } else if (*info) {
            const auto bytes = potr::read_file(info_in);
            std::cout << potr::size_report(bytes).to_json() << "\n";
        } else if (*sweep) {
            std::vector<potr::Splat> splats = potr::load_ply(sw_in);
            const auto cams = potr::load_cameras(sw_cams);
            const potr::TargetSet targets = potr::render_all(splats, cams);
            if (sw_prune_q) {
                const potr::EncodeConfig pc = potr::config_from_q(*sw_prune_q);
                splats = potr::run_pruning(std::move(splats), cams, targets, pc.prune_config()).splats;
            }
            const potr::EncodeConfig qc = potr::config_from_q(sw_q);
            if (sw_alphas.empty()) sw_alphas.push_back(qc.alpha_par);
            const auto result = potr::run_compaction_sweep(splats, cams, targets, sw_lambdas, sw_alphas, qc.sf_sh);
            const std::string csv = result.to_csv();
            if (sw_out.empty()) {
                std::cout << csv;
            } else {
                potr::write_file_atomic(sw_out, std::span(reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));
            }
        } else if (*gen) {
            const potr::Scene scene = potr::make_fixture(fix);
            potr::save_ply(gen_ply, scene.splats);
            potr::save_cameras(gen_cams, scene.cameras);
            std::cerr << "wrote " << scene.splats.size() << " splats to " << gen_ply << " and " << scene.cameras.size()
                      << " cameras to " << gen_cams << "\n";
        } else if (*render) {
            const auto splats = potr::load_ply(ren_in);
            const auto cams = potr::load_cameras(ren_cams);
            fs::create_directories(ren_dir);
            const auto images = potr::render_all(splats, cams);
            for (std::size_t i = 0; i < images.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof name, "view_%03zu.png", i);
                potr::write_png(fs::path(ren_dir) / name, images[i]);
            }
        }
    } catch (const potr::ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
