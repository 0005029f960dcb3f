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
"""End-to-end checks of the potr CLI and the COLMAP camera converter.

Usage: cli_test.py PATH_TO_POTR PATH_TO_colmap_to_cameras.py
"""

import json
import math
import os
import random
import subprocess
import sys
import tempfile
import unittest

POTR = None
CONVERTER = None


def run(*args, check=True):
    proc = subprocess.run([POTR, *args], capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(f"potr {' '.join(args)} failed:\n{proc.stderr}")
    return proc


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = cls.tmp.name
        cls.ply = os.path.join(cls.dir, "fixture.ply")
        cls.cams = os.path.join(cls.dir, "cams.json")
        run("gen-fixture", "--splats", "400", "--cameras", "4", "--width", "32", "--height", "32",
            "--seed", "3", "-o", cls.ply, "--cameras-out", cls.cams)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.dir, name)

    def encode(self, out, *extra):
        proc = run("encode", "-i", self.ply, "-c", self.cams, "-o", out, *extra)
        return json.loads(proc.stdout) if proc.stdout.strip() else None

    def test_encode_decode_info_metrics(self):
        report = self.encode(self.path("a.potr"), "-q", "0.5")
        self.assertEqual(report["input_splats"], 400)
        self.assertEqual(len(report["prune_iterations"]), 48)
        self.assertEqual(report["file_bytes"], os.path.getsize(self.path("a.potr")))

        info = json.loads(run("info", self.path("a.potr")).stdout)
        self.assertEqual(info["splat_count"], report["output_splats"])
        self.assertEqual([s["name"] for s in info["streams"]],
                         ["position", "dc", "ac", "opacity", "scale", "rotation"])

        run("decode", "-i", self.path("a.potr"), "-o", self.path("a.ply"))
        metrics = json.loads(run("metrics", "-a", self.ply, "-b", self.path("a.ply"), "-c", self.cams,
                                 "--potr", self.path("a.potr")).stdout)
        self.assertEqual(len(metrics["psnr"]), 4)
        self.assertTrue(0.0 < metrics["mean_psnr"] <= 99.0)
        self.assertTrue(0.0 < metrics["mean_ssim"] <= 1.0)
        self.assertEqual(metrics["model_bytes"], report["file_bytes"])

    def test_identical_models_hit_the_cap(self):
        metrics = json.loads(run("metrics", "-a", self.ply, "-b", self.ply, "-c", self.cams).stdout)
        self.assertEqual(metrics["mean_psnr"], 99.0)
        self.assertAlmostEqual(metrics["mean_ssim"], 1.0, places=12)

    def test_deterministic_across_runs_and_threads(self):
        self.encode(self.path("d1.potr"))
        run("--threads", "1", "encode", "-i", self.ply, "-c", self.cams, "-o", self.path("d2.potr"))
        run("--threads", "4", "encode", "-i", self.ply, "-c", self.cams, "-o", self.path("d3.potr"))
        blobs = [open(self.path(n), "rb").read() for n in ("d1.potr", "d2.potr", "d3.potr")]
        self.assertEqual(blobs[0], blobs[1])
        self.assertEqual(blobs[0], blobs[2])

    def test_overrides_and_report_file(self):
        self.encode(self.path("o.potr"), "--override", "max_depth=8", "--override", "placement=interleaved",
                    "--zstd-level", "5", "--report", self.path("o.json"))
        report = json.load(open(self.path("o.json")))
        self.assertEqual(report["compaction_placement"], "interleaved")
        self.assertEqual(report["compaction_iteration"], 24)
        info = json.loads(run("info", self.path("o.potr")).stdout)
        self.assertEqual(info["max_depth"], 8)
        self.assertEqual(info["zstd_level"], 5)

    def test_errors(self):
        self.assertNotEqual(run("encode", "-i", self.ply, "-c", self.cams, "-o", self.path("x.potr"),
                                "-q", "1.5", check=False).returncode, 0)
        self.assertNotEqual(run("encode", "-i", self.ply, "-c", self.cams, "-o", self.path("x.potr"),
                                "--override", "bogus=1", check=False).returncode, 0)
        self.assertFalse(os.path.exists(self.path("x.potr")))

        self.encode(self.path("t.potr"))
        data = open(self.path("t.potr"), "rb").read()
        with open(self.path("cut.potr"), "wb") as f:
            f.write(data[: len(data) // 2])
        proc = run("decode", "-i", self.path("cut.potr"), "-o", self.path("cut.ply"), check=False)
        self.assertNotEqual(proc.returncode, 0)
        self.assertIn("error", proc.stderr.lower())
        self.assertFalse(os.path.exists(self.path("cut.ply")))

    def test_sweep_csv(self):
        proc = run("sweep", "-i", self.ply, "-c", self.cams, "--lambda", "0.1,10", "--alpha", "0.8")
        rows = proc.stdout.strip().splitlines()
        self.assertTrue(rows[0].startswith("lambda,alpha,ac_zero_fraction"))
        self.assertEqual(len(rows), 3)

    def test_colmap_conversion(self):
        rng = random.Random(7)
        model = self.path("colmap")
        os.makedirs(model, exist_ok=True)
        poses = []
        with open(os.path.join(model, "cameras.txt"), "w") as f:
            f.write("# CAMERA_ID, MODEL, WIDTH, HEIGHT, PARAMS[]\n")
            f.write("1 PINHOLE 32 32 40 41 16 16\n")
            f.write("2 SIMPLE_PINHOLE 32 32 38 15.5 16.5\n")
        with open(os.path.join(model, "images.txt"), "w") as f:
            f.write("# IMAGE_ID, QW, QX, QY, QZ, TX, TY, TZ, CAMERA_ID, NAME\n")
            for i in range(6):
                q = [rng.gauss(0, 1) for _ in range(4)]
                t = [rng.uniform(-3, 3) for _ in range(3)]
                poses.append((q, t))
                f.write(f"{i + 1} {' '.join(map(repr, q))} {' '.join(map(repr, t))} {1 + i % 2} img{i}.png\n")
                f.write("\n")
        out = self.path("colmap.json")
        subprocess.run([sys.executable, CONVERTER, model, "-o", out], check=True)
        cams = json.load(open(out))
        self.assertEqual(len(cams), 6)
        for (q, t), cam in zip(poses, cams):
            # The camera center is the world point that maps to the camera origin.
            r = [cam["rotation"][0:3], cam["rotation"][3:6], cam["rotation"][6:9]]
            mapped = [sum(r[i][j] * cam["eye"][j] for j in range(3)) + t[i] for i in range(3)]
            self.assertLess(max(abs(v) for v in mapped), 1e-6)
            # Rotation of the quaternion's own axis leaves it fixed.
            axis = q[1:]
            norm = math.sqrt(sum(v * v for v in axis))
            rotated = [sum(r[i][j] * axis[j] for j in range(3)) for i in range(3)]
            for a, b in zip(rotated, axis):
                self.assertAlmostEqual(a / norm, b / norm, places=9)
        self.assertEqual(cams[1]["fx"], 38.0)
        self.assertEqual(cams[1]["fy"], 38.0)
        # The converted file is accepted by the codec.
        run("render", "-i", self.ply, "-c", out, "-o", self.path("renders"))
        self.assertEqual(len([n for n in os.listdir(self.path("renders")) if n.endswith(".png")]), 6)

    def test_colmap_rejects_distorted_models(self):
        model = self.path("colmap_bad")
        os.makedirs(model, exist_ok=True)
        with open(os.path.join(model, "cameras.txt"), "w") as f:
            f.write("1 OPENCV 32 32 40 40 16 16 0.1 0 0 0\n")
        with open(os.path.join(model, "images.txt"), "w") as f:
            f.write("1 1 0 0 0 0 0 3 1 a.png\n\n")
        proc = subprocess.run([sys.executable, CONVERTER, model, "-o", self.path("bad.json")],
                              capture_output=True, text=True)
        self.assertNotEqual(proc.returncode, 0)
        self.assertIn("OPENCV", proc.stderr)


if __name__ == "__main__":
    POTR, CONVERTER = sys.argv[1], sys.argv[2]
    unittest.main(argv=[sys.argv[0]], verbosity=2)
