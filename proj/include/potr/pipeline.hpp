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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "potr/bitstream.hpp"
#include "potr/config.hpp"
#include "potr/pruning.hpp"
#include "potr/scene.hpp"

namespace potr {

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct EncodeReport {
    EncodeConfig config;
    std::size_t input_splats = 0;
    std::size_t output_splats = 0;
    std::vector<PruneIterationReport> prune_iterations;
    int compaction_iteration = 0;  // pruning iterations completed when compaction ran
    std::size_t compaction_fallbacks = 0;
    std::size_t compaction_failures = 0;
    double ac_zero_fraction = 0.0;            // exact zeros after compaction
    double quantized_ac_zero_fraction = 0.0;  // zeros among the stored integers
    std::size_t file_bytes = 0;
    std::vector<StageTiming> timings;

    [[nodiscard]] double bytes_per_splat() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

struct EncodeResult {
    std::vector<std::uint8_t> container;
    QuantizedScene quantized;
    std::vector<Splat> processed;               // pruned and compacted, before quantization
    std::vector<std::uint32_t> surviving_ids;   // original index of each processed splat
    EncodeReport report;
};

/// Full encoder. `targets` defaults to renders of the input splats.
EncodeResult encode_scene(const std::vector<Splat>& splats, std::span<const Camera> cameras,
                          const EncodeConfig& config, const TargetSet* targets = nullptr);

DecodedScene decode_container(std::span<const std::uint8_t> container);

/// File-level wrappers; outputs are written atomically.
EncodeReport encode_file(const std::filesystem::path& ply, const std::filesystem::path& cameras,
                         const EncodeConfig& config, const std::filesystem::path& out);
std::size_t decode_file(const std::filesystem::path& container, const std::filesystem::path& ply);

struct SweepRow {
    double lambda = 0.0;
    double alpha = 0.0;
    double ac_zero_fraction = 0.0;
    double mean_abs_nonzero_ac = 0.0;  // over non-zero AC entries, YCoCg
    double mse = 0.0;                  // vs targets, unclamped
};

struct SweepResult {
    double baseline_mse = 0.0;  // input splats, before compaction
    std::vector<SweepRow> rows;

    [[nodiscard]] std::string to_csv() const;
};

/// Compacts the same splats once per (lambda, alpha) pair, lambda-major.
SweepResult run_compaction_sweep(std::span<const Splat> splats, std::span<const Camera> cameras,
                                 const TargetSet& targets, std::span<const double> lambdas,
                                 std::span<const double> alphas, double sf_sh);

} // namespace potr
