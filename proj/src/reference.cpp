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

#include "potr/reference.hpp"

#include <algorithm>

#include "potr/errors.hpp"
#include "raster_common.hpp"

namespace potr::reference {

RecordedView render_with_records(std::span<const Splat> splats, const Camera& camera) {
    std::vector<Projected2D> sorted;
    for (std::size_t i = 0; i < splats.size(); ++i) {
        if (auto p = project_splat(splats[i], camera, static_cast<std::uint32_t>(i))) sorted.push_back(*p);
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Projected2D& a, const Projected2D& b) { return a.depth < b.depth; });

    RecordedView out;
    out.image = Image(camera.width, camera.height);
    out.pixels.resize(out.image.pixel_count());
    for (int y = 0; y < camera.height; ++y) {
        for (int x = 0; x < camera.width; ++x) {
            PixelRecord& rec = out.pixels[static_cast<std::size_t>(y) * camera.width + x];
            rec.color = detail::composite_pixel(sorted, x, y, rec.contributions);
            double* px = out.image.pixel(x, y);
            for (int ch = 0; ch < 3; ++ch) px[ch] = rec.color[ch];
        }
    }
    return out;
}

ImpactReport compute_delta_mse(std::span<const Splat> splats, std::span<const Camera> cameras,
                               const TargetSet& targets) {
    if (targets.size() != cameras.size()) throw ArgumentError("target count mismatch");
    const std::size_t n = splats.size();
    ImpactReport report;
    report.splat_count = n;
    report.camera_count = cameras.size();
    report.delta_mse.assign(n, 0.0);
    report.importance.assign(n, 0.0);
    report.view_importance.assign(n * cameras.size(), 0.0);
    report.view_mse.assign(cameras.size(), 0.0);

    for (std::size_t s = 0; s < cameras.size(); ++s) {
        const Camera& cam = cameras[s];
        const Image& target = targets[s];
        if (target.width != cam.width || target.height != cam.height) {
            throw ArgumentError("target does not match camera resolution");
        }
        const RecordedView view = reference::render_with_records(splats, cam);
        std::vector<double> weight(n, 0.0);
        std::vector<double> dse(n, 0.0);
        double se = 0.0;
        for (int y = 0; y < cam.height; ++y) {
            double row_se = 0.0;
            for (int x = 0; x < cam.width; ++x) {
                const PixelRecord& rec = view.pixels[static_cast<std::size_t>(y) * cam.width + x];
                const double* ct = target.pixel(x, y);
                for (int ch = 0; ch < 3; ++ch) row_se += (rec.color[ch] - ct[ch]) * (rec.color[ch] - ct[ch]);
                for (const auto& k : rec.contributions) {
                    weight[k.splat] += k.transmittance * k.alpha;
                    dse[k.splat] += detail::delta_squared_error(prune_difference(rec, k.splat), rec.color, ct);
                }
            }
            se += row_se;
        }
        const double pixels = static_cast<double>(cam.width) * cam.height;
        for (std::size_t k = 0; k < n; ++k) {
            report.view_importance[s * n + k] = weight[k] / pixels;
            report.importance[k] += weight[k] / pixels;
            report.delta_mse[k] += dse[k] / (3.0 * pixels);
        }
        report.view_mse[s] = se / (3.0 * pixels);
    }
    const double cams = cameras.empty() ? 1.0 : static_cast<double>(cameras.size());
    for (std::size_t k = 0; k < n; ++k) {
        report.importance[k] /= cams;
        report.delta_mse[k] /= cams;
    }
    for (double m : report.view_mse) report.mse += m;
    report.mse /= cams;
    return report;
}

} // namespace potr::reference
