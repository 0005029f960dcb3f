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

#include <stdexcept>
#include <string>

namespace potr {

/// Base class for every error raised by the codec.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structurally invalid input (missing PLY property, bad occupancy byte, ...).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Input ended before the declared payload did.
class LengthError : public Error {
public:
    using Error::Error;
};

/// Semantically invalid values (non-orthonormal rotation, bad focal length).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Non-finite or otherwise unusable per-splat data.
class DataError : public Error {
public:
    using Error::Error;
};

/// Wrong magic or version in a container.
class UnsupportedFormatError : public Error {
public:
    using Error::Error;
};

/// Compressed payload failed to decompress or checksum.
class IntegrityError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

} // namespace potr
