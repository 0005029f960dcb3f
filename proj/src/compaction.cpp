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

#include "potr/compaction.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "potr/color.hpp"
#include "potr/errors.hpp"
#include "potr/sh.hpp"

namespace potr {

void CompactionConfig::validate() const {
    if (!(lambda >= 0.0)) throw ArgumentError("lambda must be >= 0");
    if (!(chroma_factor >= 0.0)) throw ArgumentError("chroma factor must be >= 0");
    if (!(parallel_threshold > 0.0 && parallel_threshold <= 1.0)) {
        throw ArgumentError("parallel threshold must be in (0, 1]");
    }
    if (!(zero_threshold >= 0.0)) throw ArgumentError("zero threshold must be >= 0");
}

YcocgCoeffs to_ycocg(const ShCoeffs& rgb) {
    YcocgCoeffs out{};
    for (int i = 0; i < kShCoeffs; ++i) {
        const Color3 c = rgb_to_ycocg({rgb[0][i], rgb[1][i], rgb[2][i]});
        for (int ch = 0; ch < 3; ++ch) out[ch][i] = c[ch];
    }
    return out;
}

ShCoeffs to_rgb(const YcocgCoeffs& ycocg) {
    ShCoeffs out{};
    for (int i = 0; i < kShCoeffs; ++i) {
        const Color3 c = ycocg_to_rgb({ycocg[0][i], ycocg[1][i], ycocg[2][i]});
        for (int ch = 0; ch < 3; ++ch) out[ch][i] = static_cast<float>(c[ch]);
    }
    return out;
}

SplatSystem build_weighted_system(const Splat& splat, std::span<const Camera> cameras,
                                  std::span<const double> view_importance) {
    std::vector<std::size_t> rows;
    for (std::size_t s = 0; s < cameras.size(); ++s) {
        if (view_importance[s] > 0.0) rows.push_back(s);
    }
    SplatSystem sys;
    const auto n = static_cast<Eigen::Index>(rows.size());
    sys.basis.resize(n, kShCoeffs);
    sys.colors.resize(n, 3);
    sys.weights.resize(n);
    sys.cameras = rows;

    const Eigen::Vector3d mu = splat.position.cast<double>();
    for (Eigen::Index r = 0; r < n; ++r) {
        const Camera& cam = cameras[rows[r]];
        const double w = view_importance[rows[r]];
        const Eigen::Vector3d d = (mu - cam.eye).normalized();
        const auto y = sh_basis_all(d);
        Color3 rgb{};
        for (int ch = 0; ch < 3; ++ch) {
            double c = 0.0;
            for (int i = 0; i < kShCoeffs; ++i) c += static_cast<double>(splat.sh[ch][i]) * y[i];
            rgb[ch] = c;
        }
        const Color3 yc = rgb_to_ycocg(rgb);
        for (int i = 0; i < kShCoeffs; ++i) sys.basis(r, i) = w * y[i];
        for (int ch = 0; ch < 3; ++ch) sys.colors(r, ch) = w * yc[ch];
        sys.weights[r] = w;
    }
    return sys;
}

ColumnMask sparsify_parallel_columns(const Eigen::MatrixXd& basis, double threshold) {
    ColumnMask mask{};
    mask[0] = true;
    std::array<double, kShCoeffs> norms{};
    for (int i = 0; i < kShCoeffs; ++i) norms[i] = basis.col(i).norm();
    const double zero_norm = 1e-12 * norms[0];
    for (int i = 1; i < kShCoeffs; ++i) {
        if (!(norms[i] > zero_norm)) continue;
        bool keep = true;
        for (int j = 0; j < i && keep; ++j) {
            if (!mask[j]) continue;
            const double cosine = basis.col(j).dot(basis.col(i)) / (norms[j] * norms[i]);
            if (std::abs(cosine) > threshold) keep = false;
        }
        mask[i] = keep;
    }
    return mask;
}

std::optional<Coeffs16> ridge_solve(const Eigen::MatrixXd& basis, const Eigen::VectorXd& colors,
                                    const ColumnMask& mask, double lambda) {
    std::vector<int> cols;
    for (int i = 0; i < kShCoeffs; ++i) {
        if (mask[i]) cols.push_back(i);
    }
    Coeffs16 out = Coeffs16::Zero();
    if (cols.empty()) return out;

    const auto r = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd y(basis.rows(), r);
    for (Eigen::Index k = 0; k < r; ++k) y.col(k) = basis.col(cols[k]);
    Eigen::MatrixXd normal = y.transpose() * y;
    for (Eigen::Index k = 0; k < r; ++k) {
        if (cols[k] != 0) normal(k, k) += lambda;
    }
    const Eigen::VectorXd rhs = y.transpose() * colors;

    for (int attempt = 0; attempt < 2; ++attempt) {
        if (attempt == 1) normal.diagonal().array() += 1e-10;
        Eigen::LLT<Eigen::MatrixXd> llt(normal);
        if (llt.info() != Eigen::Success) continue;
        const Eigen::VectorXd x = llt.solve(rhs);
        if (!x.allFinite()) continue;
        for (Eigen::Index k = 0; k < r; ++k) out[cols[k]] = x[k];
        return out;
    }
    return std::nullopt;
}

namespace {

CompactedSplat keep_original(const Splat& splat) {
    CompactedSplat out;
    out.rgb = splat.sh;
    out.ycocg = to_ycocg(splat.sh);
    return out;
}

/// DC-only approximation from the mean color over 26 fixed probe directions.
CompactedSplat dc_fallback(const Splat& splat) {
    Color3 mean{0.0, 0.0, 0.0};
    int count = 0;
    for (int x = -1; x <= 1; ++x) {
        for (int y = -1; y <= 1; ++y) {
            for (int z = -1; z <= 1; ++z) {
                if (x == 0 && y == 0 && z == 0) continue;
                const Eigen::Vector3d d = Eigen::Vector3d(x, y, z).normalized();
                for (int ch = 0; ch < 3; ++ch) mean[ch] += eval_sh_color(std::span<const float, 16>(splat.sh[ch]), d);
                ++count;
            }
        }
    }
    CompactedSplat out;
    out.fallback = true;
    Color3 dc{};
    for (int ch = 0; ch < 3; ++ch) dc[ch] = mean[ch] / count / kShC0;
    const Color3 dc_ycocg = rgb_to_ycocg(dc);
    for (int ch = 0; ch < 3; ++ch) out.ycocg[ch][0] = dc_ycocg[ch];
    out.rgb = to_rgb(out.ycocg);
    for (auto& m : out.masks) m[0] = true;
    return out;
}

} // namespace

CompactedSplat compact_splat(const Splat& splat, std::span<const Camera> cameras,
                             std::span<const double> view_importance, const CompactionConfig& config) {
    const SplatSystem sys = build_weighted_system(splat, cameras, view_importance);
    if (sys.basis.rows() == 0) return dc_fallback(splat);

    const ColumnMask shared = sparsify_parallel_columns(sys.basis, config.parallel_threshold);
    const auto lambdas = config.channel_lambdas();

    CompactedSplat out;
    for (int ch = 0; ch < 3; ++ch) {
        const Eigen::VectorXd c = sys.colors.col(ch);
        const auto first = ridge_solve(sys.basis, c, shared, lambdas[ch]);
        if (!first) {
            auto kept = keep_original(splat);
            kept.failed = true;
            return kept;
        }
        ColumnMask mask = shared;
        for (int i = 1; i < kShCoeffs; ++i) {
            if (mask[i] && std::abs((*first)[i]) < config.zero_threshold) mask[i] = false;
        }
        const auto second = ridge_solve(sys.basis, c, mask, lambdas[ch]);
        if (!second) {
            auto kept = keep_original(splat);
            kept.failed = true;
            return kept;
        }
        for (int i = 0; i < kShCoeffs; ++i) out.ycocg[ch][i] = (*second)[i];
        out.masks[ch] = mask;
    }
    out.rgb = to_rgb(out.ycocg);
    return out;
}

CompactionResult compact_scene(std::span<const Splat> splats, std::span<const Camera> cameras,
                               const ImpactReport& impact, const CompactionConfig& config) {
    config.validate();
    if (impact.splat_count != splats.size() || impact.camera_count != cameras.size()) {
        throw ArgumentError("impact report does not match the scene being compacted");
    }
    const auto n = static_cast<std::int64_t>(splats.size());
    CompactionResult result;
    result.splats.assign(splats.begin(), splats.end());
    result.ycocg.resize(splats.size());
    std::vector<char> fallback(splats.size(), 0), failed(splats.size(), 0);
    std::vector<double> pixels(cameras.size());
    for (std::size_t s = 0; s < cameras.size(); ++s) {
        pixels[s] = static_cast<double>(cameras[s].width) * static_cast<double>(cameras[s].height);
    }

#pragma omp parallel
    {
        std::vector<double> weights(cameras.size());
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t k = 0; k < n; ++k) {
            for (std::size_t s = 0; s < cameras.size(); ++s) {
                weights[s] = impact.view_importance_at(s, k) * pixels[s];
            }
            const CompactedSplat c = compact_splat(splats[k], cameras, weights, config);
            result.splats[k].sh = c.rgb;
            result.ycocg[k] = c.ycocg;
            fallback[k] = c.fallback;
            failed[k] = c.failed;
        }
    }
    for (std::size_t k = 0; k < splats.size(); ++k) {
        result.fallback_count += fallback[k];
        result.failure_count += failed[k];
    }
    return result;
}

double ac_zero_fraction(std::span<const YcocgCoeffs> coeffs) {
    if (coeffs.empty()) return 0.0;
    std::size_t zeros = 0;
    for (const auto& c : coeffs) {
        for (int ch = 0; ch < 3; ++ch) {
            for (int i = 1; i < kShCoeffs; ++i) zeros += (c[ch][i] == 0.0);
        }
    }
    return static_cast<double>(zeros) / (static_cast<double>(coeffs.size()) * 45.0);
}

} // namespace potr
