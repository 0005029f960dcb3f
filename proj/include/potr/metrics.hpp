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

#include <span>
#include <vector>

#include "json.hpp"

#include "potr/scene.hpp"

namespace potr {

inline constexpr double kPsnrCap = 99.0;

/// MSE over all pixels and channels after clamping both images to [0,1].
double clamped_mse(const Image& a, const Image& b);

/// -10 log10(mse) with peak 1, capped at 99 dB.
double psnr_from_mse(double mse);
double psnr(const Image& a, const Image& b);

/// 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03, zero padding with
/// same-size output; mean over pixels and channels. Inputs clamped to [0,1].
double ssim(const Image& a, const Image& b);

struct MetricsReport {
    std::vector<double> psnr;
    std::vector<double> ssim;
    std::vector<double> mse;
    double mean_psnr = 0.0;
    double mean_ssim = 0.0;
    double mean_mse = 0.0;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// Per-view comparison. Throws ArgumentError on count or resolution mismatch.
MetricsReport compare_images(std::span<const Image> a, std::span<const Image> b);

} // namespace potr
