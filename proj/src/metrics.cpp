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

#include "potr/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "potr/errors.hpp"

namespace potr {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

void check_same_size(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height) {
        throw ArgumentError("image size mismatch: " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                            " vs " + std::to_string(b.width) + "x" + std::to_string(b.height));
    }
}

std::array<double, kWindow> gaussian_window() {
    std::array<double, kWindow> w{};
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
        const double x = i - kWindow / 2;
        w[i] = std::exp(-x * x / (2.0 * kSigma * kSigma));
        sum += w[i];
    }
    for (auto& v : w) v /= sum;
    return w;
}

/// Separable Gaussian filter, zero outside the image, same-size output.
std::vector<double> blur(const std::vector<double>& plane, int width, int height) {
    static const auto w = gaussian_window();
    constexpr int r = kWindow / 2;
    std::vector<double> tmp(plane.size(), 0.0), out(plane.size(), 0.0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double s = 0.0;
            for (int i = -r; i <= r; ++i) {
                const int xx = x + i;
                if (xx >= 0 && xx < width) s += w[i + r] * plane[static_cast<std::size_t>(y) * width + xx];
            }
            tmp[static_cast<std::size_t>(y) * width + x] = s;
        }
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double s = 0.0;
            for (int i = -r; i <= r; ++i) {
                const int yy = y + i;
                if (yy >= 0 && yy < height) s += w[i + r] * tmp[static_cast<std::size_t>(yy) * width + x];
            }
            out[static_cast<std::size_t>(y) * width + x] = s;
        }
    }
    return out;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

} // namespace

double clamped_mse(const Image& a, const Image& b) {
    check_same_size(a, b);
    if (a.rgb.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rgb.size(); ++i) {
        const double d = clamp01(a.rgb[i]) - clamp01(b.rgb[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(a.rgb.size());
}

double psnr_from_mse(double mse) {
    if (!(mse > 0.0)) return kPsnrCap;
    return std::min(kPsnrCap, -10.0 * std::log10(mse));
}

double psnr(const Image& a, const Image& b) { return psnr_from_mse(clamped_mse(a, b)); }

double ssim(const Image& a, const Image& b) {
    check_same_size(a, b);
    const int w = a.width, h = a.height;
    const std::size_t n = a.pixel_count();
    if (n == 0) return 1.0;
    double total = 0.0;
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (int ch = 0; ch < 3; ++ch) {
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = clamp01(a.rgb[i * 3 + ch]);
            y[i] = clamp01(b.rgb[i * 3 + ch]);
            xx[i] = x[i] * x[i];
            yy[i] = y[i] * y[i];
            xy[i] = x[i] * y[i];
        }
        const auto mx = blur(x, w, h), my = blur(y, w, h);
        const auto sxx = blur(xx, w, h), syy = blur(yy, w, h), sxy = blur(xy, w, h);
        for (std::size_t i = 0; i < n; ++i) {
            const double mx2 = mx[i] * mx[i], my2 = my[i] * my[i], mxy = mx[i] * my[i];
            const double vx = sxx[i] - mx2, vy = syy[i] - my2, cov = sxy[i] - mxy;
            total += ((2.0 * mxy + kC1) * (2.0 * cov + kC2)) / ((mx2 + my2 + kC1) * (vx + vy + kC2));
        }
    }
    return total / (3.0 * static_cast<double>(n));
}

nlohmann::json MetricsReport::to_json() const {
    return {{"psnr", psnr},           {"ssim", ssim},           {"mse", mse},
            {"mean_psnr", mean_psnr}, {"mean_ssim", mean_ssim}, {"mean_mse", mean_mse}};
}

MetricsReport compare_images(std::span<const Image> a, std::span<const Image> b) {
    if (a.size() != b.size()) throw ArgumentError("image count mismatch");
    MetricsReport r;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double m = clamped_mse(a[i], b[i]);
        r.mse.push_back(m);
        r.psnr.push_back(psnr_from_mse(m));
        r.ssim.push_back(ssim(a[i], b[i]));
    }
    if (!a.empty()) {
        const double n = static_cast<double>(a.size());
        r.mean_psnr = std::accumulate(r.psnr.begin(), r.psnr.end(), 0.0) / n;
        r.mean_ssim = std::accumulate(r.ssim.begin(), r.ssim.end(), 0.0) / n;
        r.mean_mse = std::accumulate(r.mse.begin(), r.mse.end(), 0.0) / n;
    }
    return r;
}

} // namespace potr
