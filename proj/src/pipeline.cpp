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

#include "potr/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "potr/cameras.hpp"
#include "potr/compaction.hpp"
#include "potr/errors.hpp"
#include "potr/ply.hpp"
#include "potr/rasterizer.hpp"

namespace potr {

namespace {

class Stopwatch {
public:
    explicit Stopwatch(std::vector<StageTiming>& sink) : sink_(sink) {}

    void lap(std::string stage) {
        const auto now = std::chrono::steady_clock::now();
        sink_.push_back({std::move(stage), std::chrono::duration<double>(now - last_).count()});
        last_ = now;
    }

private:
    std::vector<StageTiming>& sink_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

double quantized_zero_fraction(const QuantizedScene& q) {
    if (q.ac.empty()) return 0.0;
    std::size_t zeros = 0;
    for (auto v : q.ac) zeros += (v == 0);
    return static_cast<double>(zeros) / static_cast<double>(q.ac.size());
}

} // namespace

double EncodeReport::bytes_per_splat() const {
    return output_splats == 0 ? 0.0 : static_cast<double>(file_bytes) / static_cast<double>(output_splats);
}

nlohmann::json EncodeReport::to_json() const {
    nlohmann::json j;
    j["config"] = config.to_json();
    j["input_splats"] = input_splats;
    j["output_splats"] = output_splats;
    j["compaction_placement"] = config.placement == CompactionPlacement::interleaved ? "interleaved" : "after";
    j["compaction_iteration"] = compaction_iteration;
    j["compaction_fallbacks"] = compaction_fallbacks;
    j["compaction_failures"] = compaction_failures;
    j["ac_zero_fraction"] = ac_zero_fraction;
    j["quantized_ac_zero_fraction"] = quantized_ac_zero_fraction;
    j["file_bytes"] = file_bytes;
    j["bytes_per_splat"] = bytes_per_splat();
    nlohmann::json iters = nlohmann::json::array();
    for (const auto& r : prune_iterations) iters.push_back(nlohmann::json::parse(r.to_json_line()));
    j["prune_iterations"] = iters;
    nlohmann::json t = nlohmann::json::object();
    for (const auto& s : timings) t[s.stage] = s.seconds;
    j["timings_seconds"] = t;
    return j;
}

EncodeResult encode_scene(const std::vector<Splat>& splats, std::span<const Camera> cameras,
                          const EncodeConfig& config, const TargetSet* targets) {
    config.validate();
    EncodeResult result;
    EncodeReport& report = result.report;
    report.config = config;
    report.input_splats = splats.size();
    Stopwatch clock(report.timings);

    TargetSet rendered;
    if (!targets) {
        rendered = render_all(splats, cameras);
        targets = &rendered;
        clock.lap("render_targets");
    }

    const CompactionConfig compaction = config.compaction_config();
    std::vector<YcocgCoeffs> ycocg;  // indexed like result.processed

    if (config.prune) {
        PruningController controller(splats, cameras, *targets, config.prune_config());
        std::vector<YcocgCoeffs> by_original;
        if (config.compact && config.placement == CompactionPlacement::interleaved) {
            controller.run(config.interleave_at);
            clock.lap("prune_first_half");
            const ImpactReport impact = compute_importance(controller.splats(), cameras);
            CompactionResult c = compact_scene(controller.splats(), cameras, impact, compaction);
            controller.replace_splats(std::move(c.splats));
            by_original.resize(splats.size());
            for (std::size_t i = 0; i < c.ycocg.size(); ++i) by_original[controller.surviving_ids()[i]] = c.ycocg[i];
            report.compaction_iteration = static_cast<int>(controller.reports().size());
            report.compaction_fallbacks = c.fallback_count;
            report.compaction_failures = c.failure_count;
            clock.lap("compact");
        }
        controller.run();
        clock.lap("prune");
        result.processed = controller.splats();
        result.surviving_ids = controller.surviving_ids();
        report.prune_iterations = controller.reports();
        if (!by_original.empty()) {
            for (std::uint32_t id : result.surviving_ids) ycocg.push_back(by_original[id]);
        }
    } else {
        result.processed = splats;
        result.surviving_ids.resize(splats.size());
        for (std::size_t i = 0; i < splats.size(); ++i) result.surviving_ids[i] = static_cast<std::uint32_t>(i);
    }

    if (config.compact && (config.placement == CompactionPlacement::after_pruning || !config.prune)) {
        const ImpactReport impact = compute_importance(result.processed, cameras);
        CompactionResult c = compact_scene(result.processed, cameras, impact, compaction);
        result.processed = std::move(c.splats);
        ycocg = std::move(c.ycocg);
        report.compaction_iteration = static_cast<int>(report.prune_iterations.size());
        report.compaction_fallbacks = c.fallback_count;
        report.compaction_failures = c.failure_count;
        clock.lap("compact");
    }
    if (!ycocg.empty()) report.ac_zero_fraction = ac_zero_fraction(ycocg);

    std::vector<Eigen::Vector3d> eyes;
    for (const auto& cam : cameras) eyes.push_back(cam.eye);
    result.quantized = quantize_scene(result.processed, ycocg, eyes, config.encode_params());
    report.quantized_ac_zero_fraction = quantized_zero_fraction(result.quantized);
    clock.lap("quantize");

    result.container = write_container(result.quantized, config.zstd_level);
    clock.lap("entropy_code");

    report.output_splats = result.processed.size();
    report.file_bytes = result.container.size();
    return result;
}

DecodedScene decode_container(std::span<const std::uint8_t> container) {
    return dequantize_scene(read_container(container));
}

EncodeReport encode_file(const std::filesystem::path& ply, const std::filesystem::path& cameras,
                         const EncodeConfig& config, const std::filesystem::path& out) {
    const std::vector<Splat> splats = load_ply(ply);
    const std::vector<Camera> cams = load_cameras(cameras);
    EncodeResult r = encode_scene(splats, cams, config);
    write_file_atomic(out, r.container);
    return r.report;
}

std::size_t decode_file(const std::filesystem::path& container, const std::filesystem::path& ply) {
    const auto bytes = read_file(container);
    const DecodedScene scene = decode_container(bytes);
    save_ply(ply, scene.splats);
    return scene.splats.size();
}

std::string SweepResult::to_csv() const {
    std::ostringstream os;
    os << std::setprecision(10);
    os << "lambda,alpha,ac_zero_fraction,mean_abs_nonzero_ac,mse,baseline_mse\n";
    for (const auto& r : rows) {
        os << r.lambda << ',' << r.alpha << ',' << r.ac_zero_fraction << ',' << r.mean_abs_nonzero_ac << ','
           << r.mse << ',' << baseline_mse << '\n';
    }
    return os.str();
}

SweepResult run_compaction_sweep(std::span<const Splat> splats, std::span<const Camera> cameras,
                                 const TargetSet& targets, std::span<const double> lambdas,
                                 std::span<const double> alphas, double sf_sh) {
    SweepResult result;
    const auto before = render_all(splats, cameras);
    result.baseline_mse = mean_mse(before, targets);
    const ImpactReport impact = compute_importance(splats, cameras);
    for (double lambda : lambdas) {
        for (double alpha : alphas) {
            CompactionConfig cfg;
            cfg.lambda = lambda;
            cfg.parallel_threshold = alpha;
            cfg.zero_threshold = 0.5 / sf_sh;
            const CompactionResult c = compact_scene(splats, cameras, impact, cfg);
            SweepRow row;
            row.lambda = lambda;
            row.alpha = alpha;
            row.ac_zero_fraction = ac_zero_fraction(c.ycocg);
            double sum = 0.0;
            std::size_t nonzero = 0;
            for (const auto& coeffs : c.ycocg) {
                for (int ch = 0; ch < 3; ++ch) {
                    for (int b = 1; b < kShCoeffs; ++b) {
                        if (coeffs[ch][b] != 0.0) {
                            sum += std::abs(coeffs[ch][b]);
                            ++nonzero;
                        }
                    }
                }
            }
            row.mean_abs_nonzero_ac = nonzero ? sum / static_cast<double>(nonzero) : 0.0;
            row.mse = mean_mse(render_all(c.splats, cameras), targets);
            result.rows.push_back(row);
        }
    }
    return result;
}

} // namespace potr
