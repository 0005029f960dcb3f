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

#include "potr/sh.hpp"

#include <cassert>

namespace potr {
namespace {

constexpr double kC1 = 0.4886025119029199;
constexpr double kC2[5] = {1.0925484305920792, -1.0925484305920792, 0.31539156525252005, -1.0925484305920792,
                           0.5462742152960396};
constexpr double kC3[7] = {-0.5900435899266435, 2.890611442640554, -0.4570457994644658, 0.3731763325901154,
                           -0.4570457994644658, 1.445305721320277, -0.5900435899266435};

template <typename T>
double eval(std::span<const T, 16> coeffs, const Eigen::Vector3d& d) {
    const auto y = sh_basis_all(d);
    double c = 0.0;
    for (int i = 0; i < 16; ++i) c += static_cast<double>(coeffs[i]) * y[i];
    return c;
}

} // namespace

std::array<double, 16> sh_basis_all(const Eigen::Vector3d& d) {
    const double x = d.x(), y = d.y(), z = d.z();
    const double xx = x * x, yy = y * y, zz = z * z;
    return {
        kShC0,
        -kC1 * y,
        kC1 * z,
        -kC1 * x,
        kC2[0] * x * y,
        kC2[1] * y * z,
        kC2[2] * (2.0 * zz - xx - yy),
        kC2[3] * x * z,
        kC2[4] * (xx - yy),
        kC3[0] * y * (3.0 * xx - yy),
        kC3[1] * x * y * z,
        kC3[2] * y * (4.0 * zz - xx - yy),
        kC3[3] * z * (2.0 * zz - 3.0 * xx - 3.0 * yy),
        kC3[4] * x * (4.0 * zz - xx - yy),
        kC3[5] * z * (xx - yy),
        kC3[6] * x * (xx - 3.0 * yy),
    };
}

double sh_basis_eval(int index, const Eigen::Vector3d& d) {
    assert(index >= 1 && index <= 16);
    return sh_basis_all(d)[static_cast<std::size_t>(index - 1)];
}

double eval_sh_color(std::span<const float, 16> coeffs, const Eigen::Vector3d& d) { return eval(coeffs, d); }
double eval_sh_color(std::span<const double, 16> coeffs, const Eigen::Vector3d& d) { return eval(coeffs, d); }

} // namespace potr
