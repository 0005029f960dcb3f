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

#include "potr/rasterizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <omp.h>

#include "potr/errors.hpp"
#include "potr/sh.hpp"
#include "raster_common.hpp"

namespace potr {
namespace {

constexpr int kTile = 16;

Eigen::Matrix3d quaternion_matrix(const Eigen::Vector4f& qf) {
    // Renormalize in double: a unit float quaternion is only unit to ~1e-7.
    const Eigen::Vector4d q = qf.cast<double>().normalized();
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    Eigen::Matrix3d r;
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),  //
        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),    //
        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return r;
}

/// Depth-sorted visible splats plus per-tile candidate lists for one camera.
struct PreparedView {
    std::vector<Projected2D> sorted;
    int tiles_x = 0;
    int tiles_y = 0;
    std::vector<std::vector<std::uint32_t>> tile_lists;  // indices into `sorted`
};

PreparedView prepare_view(std::span<const Splat> splats, const Camera& camera) {
    const auto n = static_cast<std::int64_t>(splats.size());
    std::vector<std::optional<Projected2D>> projected(splats.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        projected[i] = project_splat(splats[i], camera, static_cast<std::uint32_t>(i));
    }

    PreparedView view;
    for (auto& p : projected) {
        if (p) view.sorted.push_back(*p);
    }
    std::sort(view.sorted.begin(), view.sorted.end(), detail::depth_less);

    view.tiles_x = (camera.width + kTile - 1) / kTile;
    view.tiles_y = (camera.height + kTile - 1) / kTile;
    const int tile_count = view.tiles_x * view.tiles_y;
    view.tile_lists.resize(tile_count);
#pragma omp parallel for schedule(dynamic, 4)
    for (int t = 0; t < tile_count; ++t) {
        const int x0 = (t % view.tiles_x) * kTile, x1 = x0 + kTile - 1;
        const int y0 = (t / view.tiles_x) * kTile, y1 = y0 + kTile - 1;
        auto& list = view.tile_lists[t];
        for (std::size_t i = 0; i < view.sorted.size(); ++i) {
            const auto& p = view.sorted[i];
            if (p.x_max < x0 || p.x_min > x1 || p.y_max < y0 || p.y_min > y1) continue;
            list.push_back(static_cast<std::uint32_t>(i));
        }
    }
    return view;
}

/// Iterates a tile list as Projected2D references.
struct TileRange {
    const std::vector<Projected2D>* sorted;
    const std::vector<std::uint32_t>* indices;

    struct Iter {
        const std::vector<Projected2D>* sorted;
        std::vector<std::uint32_t>::const_iterator it;
        const Projected2D& operator*() const { return (*sorted)[*it]; }
        Iter& operator++() {
            ++it;
            return *this;
        }
        bool operator!=(const Iter& o) const { return it != o.it; }
    };
    [[nodiscard]] Iter begin() const { return {sorted, indices->begin()}; }
    [[nodiscard]] Iter end() const { return {sorted, indices->end()}; }
};

TileRange tile_candidates(const PreparedView& view, int x, int y) {
    return {&view.sorted, &view.tile_lists[(y / kTile) * view.tiles_x + x / kTile]};
}

/// Per-row output of the impact kernel; merged serially in raster order.
struct RowImpact {
    struct Entry {
        std::uint32_t splat;
        double weight;  // T * alpha
        double dse;     // sum over channels of delta squared error
    };
    std::vector<Entry> entries;
    double squared_error = 0.0;
};

/// Accumulates sum_x T*alpha and sum_x dSE for every splat seen by `camera`.
void accumulate_view(std::span<const Splat> splats, const Camera& camera, const Image* target,
                     std::span<double> weight_sum, std::span<double> dse_sum, double& squared_error) {
    const PreparedView view = prepare_view(splats, camera);
    std::vector<RowImpact> rows(static_cast<std::size_t>(camera.height));

#pragma omp parallel
    {
        std::vector<Contribution> contributions;
#pragma omp for schedule(dynamic, 1)
        for (int y = 0; y < camera.height; ++y) {
            RowImpact& row = rows[y];
            for (int x = 0; x < camera.width; ++x) {
                const Color3 c = detail::composite_pixel(tile_candidates(view, x, y), x, y, contributions);
                if (target == nullptr) {
                    for (const auto& k : contributions) {
                        row.entries.push_back({k.splat, k.transmittance * k.alpha, 0.0});
                    }
                    continue;
                }
                const double* ct = target->pixel(x, y);
                for (int ch = 0; ch < 3; ++ch) row.squared_error += (c[ch] - ct[ch]) * (c[ch] - ct[ch]);
                Color3 partial{0.0, 0.0, 0.0};
                for (const auto& k : contributions) {
                    const double w = k.transmittance * k.alpha;
                    Color3 next = partial;
                    for (int ch = 0; ch < 3; ++ch) next[ch] += w * k.color[ch];
                    const Color3 pd = detail::prune_difference_at(partial, next, c, k.alpha);
                    row.entries.push_back({k.splat, w, detail::delta_squared_error(pd, c, ct)});
                    partial = next;
                }
            }
        }
    }

    squared_error = 0.0;
    for (const auto& row : rows) {
        for (const auto& e : row.entries) {
            weight_sum[e.splat] += e.weight;
            dse_sum[e.splat] += e.dse;
        }
        squared_error += row.squared_error;
    }
}

ImpactReport compute_impact(std::span<const Splat> splats, std::span<const Camera> cameras,
                            const TargetSet* targets) {
    const std::size_t n = splats.size();
    ImpactReport report;
    report.splat_count = n;
    report.camera_count = cameras.size();
    report.delta_mse.assign(n, 0.0);
    report.importance.assign(n, 0.0);
    report.view_importance.assign(n * cameras.size(), 0.0);
    report.view_mse.assign(cameras.size(), 0.0);

    std::vector<double> dse(n);
    for (std::size_t s = 0; s < cameras.size(); ++s) {
        const Camera& cam = cameras[s];
        const Image* target = nullptr;
        if (targets != nullptr) {
            target = &(*targets)[s];
            if (target->width != cam.width || target->height != cam.height) {
                throw ArgumentError("target " + std::to_string(s) + " does not match camera resolution");
            }
        }
        std::span<double> weight(report.view_importance.data() + s * n, n);
        std::fill(dse.begin(), dse.end(), 0.0);
        double se = 0.0;
        accumulate_view(splats, cam, target, weight, dse, se);

        const double pixels = static_cast<double>(cam.width) * cam.height;
        for (std::size_t k = 0; k < n; ++k) {
            weight[k] /= pixels;
            report.importance[k] += weight[k];
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

} // namespace

Eigen::Matrix3d splat_covariance(const Splat& splat) {
    const Eigen::Matrix3d r = quaternion_matrix(splat.rotation);
    const Eigen::Vector3d s = splat.scale.cast<double>();
    return r * s.cwiseProduct(s).asDiagonal() * r.transpose();
}

Color3 splat_color(const Splat& splat, const Eigen::Vector3d& eye) {
    const Eigen::Vector3d d = (splat.position.cast<double>() - eye).normalized();
    const auto basis = sh_basis_all(d);
    Color3 c{};
    for (int ch = 0; ch < 3; ++ch) {
        double v = 0.0;
        for (int i = 0; i < kShCoeffs; ++i) v += static_cast<double>(splat.sh[ch][i]) * basis[i];
        c[ch] = std::max(0.0, v + kColorOffset);
    }
    return c;
}

std::optional<Projected2D> project_splat(const Splat& splat, const Camera& camera, std::uint32_t id) {
    const Eigen::Vector3d t = camera.rotation * (splat.position.cast<double>() - camera.eye);
    if (t.z() <= kNearClip) return std::nullopt;

    const double z = t.z();
    Eigen::Matrix<double, 2, 3> j;
    j << camera.fx / z, 0.0, -camera.fx * t.x() / (z * z),  //
        0.0, camera.fy / z, -camera.fy * t.y() / (z * z);
    const Eigen::Matrix<double, 2, 3> m = j * camera.rotation;

    Projected2D p;
    p.cov = m * splat_covariance(splat) * m.transpose();
    p.cov(0, 0) += kCovarianceDilation;
    p.cov(1, 1) += kCovarianceDilation;
    const double a = p.cov(0, 0), b = p.cov(0, 1), c = p.cov(1, 1);
    const double det = a * c - b * b;
    if (!(det > 0.0)) return std::nullopt;
    p.conic = Eigen::Vector3d(c / det, -b / det, a / det);

    p.mean = Eigen::Vector2d(camera.fx * t.x() / z + camera.cx, camera.fy * t.y() / z + camera.cy);
    const double mid = 0.5 * (a + c);
    const double lambda_max = mid + std::sqrt(std::max(0.0, mid * mid - det));
    const double radius = kSigmaExtent * std::sqrt(lambda_max);

    // pixel x is covered when |x + 0.5 - mean| <= radius
    p.x_min = std::max(0, static_cast<int>(std::ceil(p.mean.x() - radius - 0.5)));
    p.x_max = std::min(camera.width - 1, static_cast<int>(std::floor(p.mean.x() + radius - 0.5)));
    p.y_min = std::max(0, static_cast<int>(std::ceil(p.mean.y() - radius - 0.5)));
    p.y_max = std::min(camera.height - 1, static_cast<int>(std::floor(p.mean.y() + radius - 0.5)));
    if (!std::isfinite(radius) || p.x_min > p.x_max || p.y_min > p.y_max) return std::nullopt;

    p.depth = z;
    p.opacity = splat.opacity;
    p.color = splat_color(splat, camera.eye);
    p.splat_id = id;
    return p;
}

Image render(std::span<const Splat> splats, const Camera& camera) {
    const PreparedView view = prepare_view(splats, camera);
    Image image(camera.width, camera.height);
#pragma omp parallel
    {
        std::vector<Contribution> contributions;
#pragma omp for schedule(dynamic, 1)
        for (int y = 0; y < camera.height; ++y) {
            for (int x = 0; x < camera.width; ++x) {
                const Color3 c = detail::composite_pixel(tile_candidates(view, x, y), x, y, contributions);
                double* px = image.pixel(x, y);
                for (int ch = 0; ch < 3; ++ch) px[ch] = c[ch];
            }
        }
    }
    return image;
}

std::vector<Image> render_all(std::span<const Splat> splats, std::span<const Camera> cameras) {
    std::vector<Image> out;
    out.reserve(cameras.size());
    for (const auto& cam : cameras) out.push_back(render(splats, cam));
    return out;
}

RecordedView render_with_records(std::span<const Splat> splats, const Camera& camera) {
    const PreparedView view = prepare_view(splats, camera);
    RecordedView out;
    out.image = Image(camera.width, camera.height);
    out.pixels.resize(out.image.pixel_count());
#pragma omp parallel for schedule(dynamic, 1)
    for (int y = 0; y < camera.height; ++y) {
        for (int x = 0; x < camera.width; ++x) {
            PixelRecord& rec = out.pixels[static_cast<std::size_t>(y) * camera.width + x];
            rec.color = detail::composite_pixel(tile_candidates(view, x, y), x, y, rec.contributions);
            double* px = out.image.pixel(x, y);
            for (int ch = 0; ch < 3; ++ch) px[ch] = rec.color[ch];
        }
    }
    return out;
}

Color3 prune_difference(const PixelRecord& record, std::uint32_t splat) {
    Color3 partial{0.0, 0.0, 0.0};
    for (const auto& k : record.contributions) {
        const double w = k.transmittance * k.alpha;
        Color3 next = partial;
        for (int ch = 0; ch < 3; ++ch) next[ch] += w * k.color[ch];
        if (k.splat == splat) return detail::prune_difference_at(partial, next, record.color, k.alpha);
        partial = next;
    }
    return {0.0, 0.0, 0.0};
}

ImpactReport compute_importance(std::span<const Splat> splats, std::span<const Camera> cameras) {
    return compute_impact(splats, cameras, nullptr);
}

ImpactReport compute_delta_mse(std::span<const Splat> splats, std::span<const Camera> cameras,
                               const TargetSet& targets) {
    if (targets.size() != cameras.size()) {
        throw ArgumentError("expected " + std::to_string(cameras.size()) + " targets, got " +
                            std::to_string(targets.size()));
    }
    return compute_impact(splats, cameras, &targets);
}

double mse(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height) throw ArgumentError("image resolution mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rgb.size(); ++i) {
        const double d = a.rgb[i] - b.rgb[i];
        s += d * d;
    }
    return a.rgb.empty() ? 0.0 : s / static_cast<double>(a.rgb.size());
}

double mean_mse(std::span<const Image> a, std::span<const Image> b) {
    if (a.size() != b.size()) throw ArgumentError("image count mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += mse(a[i], b[i]);
    return a.empty() ? 0.0 : s / static_cast<double>(a.size());
}

} // namespace potr
