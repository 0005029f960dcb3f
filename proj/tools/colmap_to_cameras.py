#!/usr/bin/env python3
# Copyright 2026 The potr Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Convert a COLMAP text model (cameras.txt + images.txt) to potr cameras JSON.

COLMAP stores each image pose as world-to-camera: p_cam = R(q) p_world + t,
with q = (qw, qx, qy, qz). potr wants the same rotation R (row-major) and the
camera center eye = -R^T t. Only undistorted models are accepted
(SIMPLE_PINHOLE, PINHOLE); undistort with COLMAP's image_undistorter first.

Usage:
    colmap_to_cameras.py MODEL_DIR -o cameras.json [--images-dir DIR]

Cameras are written in images.txt order. With --images-dir, each camera gets
an "image" entry pointing at DIR/NAME.
"""

import argparse
import json
import math
import os
import sys


def read_cameras(path):
    intrinsics = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            cam_id, model = int(fields[0]), fields[1]
            width, height = int(fields[2]), int(fields[3])
            params = [float(v) for v in fields[4:]]
            if model == "SIMPLE_PINHOLE":
                fx = fy = params[0]
                cx, cy = params[1], params[2]
            elif model == "PINHOLE":
                fx, fy, cx, cy = params[:4]
            else:
                raise ValueError(f"camera {cam_id}: unsupported model {model} (undistort first)")
            intrinsics[cam_id] = dict(fx=fx, fy=fy, cx=cx, cy=cy, width=width, height=height)
    return intrinsics


def read_images(path):
    """Yields (qvec, tvec, camera_id, name); every image uses two lines."""
    with open(path, encoding="utf-8") as f:
        lines = [l.rstrip("\n") for l in f if not l.startswith("#")]
    i = 0
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        fields = lines[i].split()
        if len(fields) < 10:
            raise ValueError(f"malformed image line: {lines[i]!r}")
        qvec = [float(v) for v in fields[1:5]]
        tvec = [float(v) for v in fields[5:8]]
        yield qvec, tvec, int(fields[8]), " ".join(fields[9:])
        i += 2  # skip the POINTS2D line


def quat_to_matrix(q):
    w, x, y, z = q
    n = math.sqrt(w * w + x * x + y * y + z * z)
    if n == 0.0:
        raise ValueError("zero quaternion")
    w, x, y, z = w / n, x / n, y / n, z / n
    return [
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ]


def convert(model_dir, images_dir=None):
    intrinsics = read_cameras(os.path.join(model_dir, "cameras.txt"))
    out = []
    for qvec, t, cam_id, name in read_images(os.path.join(model_dir, "images.txt")):
        if cam_id not in intrinsics:
            raise ValueError(f"image {name}: unknown camera id {cam_id}")
        r = quat_to_matrix(qvec)
        eye = [-sum(r[row][col] * t[row] for row in range(3)) for col in range(3)]
        cam = dict(eye=eye, rotation=[v for row in r for v in row], **intrinsics[cam_id])
        if images_dir is not None:
            cam["image"] = os.path.join(images_dir, name)
        out.append(cam)
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("model_dir", help="directory holding cameras.txt and images.txt")
    parser.add_argument("-o", "--output", required=True, help="cameras JSON to write")
    parser.add_argument("--images-dir", help="prefix for per-camera target images")
    args = parser.parse_args(argv)
    try:
        cams = convert(args.model_dir, args.images_dir)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    with open(args.output, "w", encoding="utf-8") as f:
        json.dump(cams, f, indent=1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
