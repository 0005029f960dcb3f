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

#include "potr/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#include <png.h>

#include "potr/errors.hpp"

namespace potr {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

} // namespace

Image read_png(const std::filesystem::path& path) {
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&img, path.c_str())) {
        throw FormatError("cannot read PNG " + path.string() + ": " + img.message);
    }
    img.format = PNG_FORMAT_RGB;
    std::vector<png_byte> buffer(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr)) {
        png_image_free(&img);
        throw FormatError("cannot decode PNG " + path.string() + ": " + img.message);
    }
    Image out(static_cast<int>(img.width), static_cast<int>(img.height));
    for (std::size_t i = 0; i < buffer.size(); ++i) out.rgb[i] = buffer[i] / 255.0;
    return out;
}

void write_png(const std::filesystem::path& path, const Image& image) {
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(image.width);
    img.height = static_cast<png_uint_32>(image.height);
    img.format = PNG_FORMAT_RGB;
    std::vector<png_byte> buffer(image.rgb.size());
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        const double v = std::clamp(image.rgb[i], 0.0, 1.0);
        buffer[i] = static_cast<png_byte>(std::floor(v * 255.0 + 0.5));
    }
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw Error("cannot write " + path.string());
    if (!png_image_write_to_stdio(&img, f.get(), 0, buffer.data(), 0, nullptr)) {
        throw Error("PNG encode failed for " + path.string() + ": " + img.message);
    }
}

} // namespace potr
