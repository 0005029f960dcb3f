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

#include <filesystem>

#include "potr/scene.hpp"

namespace potr {

/// 8-bit PNG to linear [0,1] by /255 (no gamma transform). Alpha is dropped.
Image read_png(const std::filesystem::path& path);

/// Clamps to [0,1], scales by 255 and rounds half up.
void write_png(const std::filesystem::path& path, const Image& image);

} // namespace potr
