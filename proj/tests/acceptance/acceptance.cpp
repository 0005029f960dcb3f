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

// Runs the eleven acceptance criteria at their stated sizes and tolerances and
// prints one PASS/FAIL line per criterion. Exit status is non-zero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <omp.h>

#include "CLI11.hpp"
#include "potr/bitstream.hpp"
#include "potr/compaction.hpp"
#include "potr/config.hpp"
#include "potr/fixture.hpp"
#include "potr/metrics.hpp"
#include "potr/pipeline.hpp"
#include "potr/pruning.hpp"
#include "potr/quantization.hpp"
#include "potr/rasterizer.hpp"
#include "potr/sh.hpp"
#include "support/test_support.hpp"

using namespace potr;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

/// The default fixture and its reference renders, built once.
struct FixtureData {
    Scene scene;
    TargetSet targets;
    std::vector<Eigen::Vector3d> eyes;
};

const FixtureData& fixture() {
    static const FixtureData data = [] {
        FixtureData d;
        d.scene = make_fixture(FixtureConfig{});
        d.targets = render_all(d.scene.splats, d.scene.cameras);
        for (const auto& c : d.scene.cameras) d.eyes.push_back(c.eye);
        return d;
    }();
    return data;
}

/// Encodes of the fixture per quality, shared by criteria 9 and 10.
const EncodeResult& fixture_encode(double q) {
    static std::vector<std::pair<double, EncodeResult>> cache;
    for (const auto& [cq, r] : cache) {
        if (cq == q) return r;
    }
    const auto& f = fixture();
    cache.emplace_back(q, encode_scene(f.scene.splats, f.scene.cameras, config_from_q(q), &f.targets));
    return cache.back().second;
}

std::vector<Image> decoded_renders(const EncodeResult& r) {
    return render_all(decode_container(r.container).splats, fixture().scene.cameras);
}

std::vector<Splat> without(const std::vector<Splat>& splats, std::size_t k) {
    std::vector<Splat> out = splats;
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

// 1. Analytic prune difference vs re-rendering without the splat.
Outcome pd_oracle() {
    double worst = 0.0;
    std::size_t over = 0, over_open = 0, checked = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Scene scene = test::random_scene(1000 + seed, 50, 4, 32);
        for (const auto& cam : scene.cameras) {
            const RecordedView view = render_with_records(scene.splats, cam);
            for (std::size_t k = 0; k < scene.splats.size(); ++k) {
                const Image other = render(without(scene.splats, k), cam);
                for (std::size_t p = 0; p < view.pixels.size(); ++p) {
                    const auto& record = view.pixels[p];
                    const Color3 pd = prune_difference(record, static_cast<std::uint32_t>(k));
                    const bool open = record.contributions.empty() ||
                                      record.contributions.back().transmittance *
                                              (1.0 - record.contributions.back().alpha) >= kTransmittanceCutoff;
                    for (int ch = 0; ch < 3; ++ch) {
                        const double err = std::abs(pd[ch] - (other.rgb[p * 3 + ch] - view.image.rgb[p * 3 + ch]));
                        worst = std::max(worst, err);
                        over += err > 1e-5 ? 1 : 0;
                        over_open += (err > 1e-5 && open) ? 1 : 0;
                        ++checked;
                    }
                }
            }
        }
    }
    return {over == 0, "max |PD - brute force| = " + fmt("%.3g", worst) + ", " + std::to_string(over) + " of " +
                           std::to_string(checked) + " values above 1e-5, " + std::to_string(over_open) +
                           " of them in pixels that did not stop early"};
}

// 2. Delta MSE vs brute-force MSE differences.
Outcome delta_mse_oracle() {
    double worst = 0.0;
    std::size_t over = 0, checked = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Scene scene = test::random_scene(1000 + seed, 50, 4, 32);
        auto perturbed = scene.splats;
        for (auto& s : perturbed) s.sh[0][0] += 0.1f;
        const TargetSet targets = render_all(perturbed, scene.cameras);
        const ImpactReport impact = compute_delta_mse(scene.splats, scene.cameras, targets);
        const double base = mean_mse(render_all(scene.splats, scene.cameras), targets);
        for (std::size_t k = 0; k < scene.splats.size(); ++k) {
            const double removed = mean_mse(render_all(without(scene.splats, k), scene.cameras), targets);
            const double err = std::abs(impact.delta_mse[k] - (removed - base));
            worst = std::max(worst, err);
            over += err > 1e-9 ? 1 : 0;
            ++checked;
        }
    }
    return {over == 0, "max |dMSE - brute force| = " + fmt("%.3g", worst) + ", " + std::to_string(over) + " of " +
                           std::to_string(checked) + " splats above 1e-9"};
}

Eigen::MatrixXd gauss_jordan_inverse(Eigen::MatrixXd a) {
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index pivot = c;
        for (Eigen::Index r = c + 1; r < n; ++r) {
            if (std::abs(a(r, c)) > std::abs(a(pivot, c))) pivot = r;
        }
        a.row(c).swap(a.row(pivot));
        inv.row(c).swap(inv.row(pivot));
        const double p = a(c, c);
        a.row(c) /= p;
        inv.row(c) /= p;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a(r, c);
            a.row(r) -= f * a.row(c);
            inv.row(r) -= f * inv.row(c);
        }
    }
    return inv;
}

// 3. Ridge closed form on 100 random 16-column systems.
Outcome ridge_systems() {
    test::Rng rng(3);
    ColumnMask all{};
    all.fill(true);
    double inv_err = 0.0, grad_err = 0.0, recover_err = 0.0, ac_max = 0.0, dc_err = 0.0;
    int failed_solves = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int rows = 16 + static_cast<int>(rng.uniform(0, 33));
        Eigen::MatrixXd y(rows, kShCoeffs);
        std::vector<double> w(rows);
        std::vector<std::array<double, kShCoeffs>> raw(rows);
        for (int r = 0; r < rows; ++r) {
            raw[r] = sh_basis_all(rng.unit_vector());
            w[r] = rng.uniform(0.2, 3.0);
            for (int i = 0; i < kShCoeffs; ++i) y(r, i) = w[r] * raw[r][i];
        }
        Eigen::VectorXd c_raw(rows), c(rows);
        for (int r = 0; r < rows; ++r) {
            c_raw(r) = rng.normal();
            c(r) = w[r] * c_raw(r);
        }

        const double lambda = std::pow(10.0, rng.uniform(-3, 1));
        const auto x = ridge_solve(y, c, all, lambda);
        if (!x) {
            ++failed_solves;
            continue;
        }
        Eigen::MatrixXd normal = y.transpose() * y;
        for (int i = 1; i < kShCoeffs; ++i) normal(i, i) += lambda;
        const Eigen::VectorXd oracle = gauss_jordan_inverse(normal) * (y.transpose() * c);
        inv_err = std::max(inv_err, (*x - oracle).cwiseAbs().maxCoeff());
        Eigen::VectorXd grad = 2.0 * y.transpose() * (y * *x - c);
        for (int i = 1; i < kShCoeffs; ++i) grad(i) += 2.0 * lambda * (*x)(i);
        grad_err = std::max(grad_err, grad.cwiseAbs().maxCoeff());

        Coeffs16 truth;
        for (int i = 0; i < kShCoeffs; ++i) truth(i) = rng.normal();
        const auto back = ridge_solve(y, y * truth, all, 0.0);
        if (!back) {
            ++failed_solves;
            continue;
        }
        recover_err = std::max(recover_err, (*back - truth).cwiseAbs().maxCoeff());

        const auto flat = ridge_solve(y, c, all, 1e12);
        if (!flat) {
            ++failed_solves;
            continue;
        }
        ac_max = std::max(ac_max, flat->tail(kShCoeffs - 1).cwiseAbs().maxCoeff());
        double num = 0.0, den = 0.0;
        for (int r = 0; r < rows; ++r) {
            num += w[r] * w[r] * raw[r][0] * c_raw(r);
            den += w[r] * w[r] * raw[r][0] * raw[r][0];
        }
        dc_err = std::max(dc_err, std::abs((*flat)(0) - num / den));
    }
    const bool pass = failed_solves == 0 && inv_err <= 1e-8 && grad_err <= 1e-6 && recover_err <= 1e-4 &&
                      ac_max < 1e-6 && dc_err <= 1e-8;
    return {pass, "inverse " + fmt("%.2g", inv_err) + ", gradient " + fmt("%.2g", grad_err) + ", recovery " +
                      fmt("%.2g", recover_err) + ", lambda=1e12 AC " + fmt("%.2g", ac_max) + " DC " +
                      fmt("%.2g", dc_err) + ", failed solves " + std::to_string(failed_solves)};
}

// 4. Sparsity and quality across a lambda sweep on the pruned fixture.
Outcome compaction_sweep() {
    const auto& f = fixture();
    const EncodeConfig cfg = config_from_q(0.5);
    const PruneResult pruned = run_pruning(f.scene.splats, f.scene.cameras, f.targets, cfg.prune_config());
    const std::vector<double> lambdas{1e-2, 1e-1, 1.0, 10.0, 100.0};
    const std::vector<double> alphas{cfg.alpha_par};
    const SweepResult sweep = run_compaction_sweep(pruned.splats, f.scene.cameras, f.targets, lambdas, alphas,
                                                   cfg.sf_sh);
    bool monotone = true;
    for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
        monotone = monotone && sweep.rows[i].ac_zero_fraction >= sweep.rows[i - 1].ac_zero_fraction;
    }
    // The increase is measured against the model before compaction. For
    // context the report also gives it against an unregularized compaction
    // with the same column threshold, and against the first sweep row.
    const std::vector<double> zero{0.0};
    const double unregularized =
        run_compaction_sweep(pruned.splats, f.scene.cameras, f.targets, zero, alphas, cfg.sf_sh).rows[0].mse;
    const double before = sweep.baseline_mse;
    bool found = false;
    std::ostringstream os;
    os << "zero fraction";
    for (const auto& r : sweep.rows) os << ' ' << fmt("%.4f", r.ac_zero_fraction);
    os << "; MSE";
    for (const auto& r : sweep.rows) os << ' ' << fmt("%.3g", r.mse);
    os << "; before compaction " << fmt("%.3g", before) << ", lambda=0 " << fmt("%.3g", unregularized);
    for (const auto& r : sweep.rows) {
        if (r.ac_zero_fraction < 0.9) continue;
        found = found || r.mse <= 1.25 * before;
    }
    const auto first = std::find_if(sweep.rows.begin(), sweep.rows.end(),
                                    [](const SweepRow& r) { return r.ac_zero_fraction >= 0.9; });
    if (first != sweep.rows.end()) {
        os << "; first lambda with >= 0.9 is " << fmt("%g", first->lambda) << ": +"
           << fmt("%.0f", 100.0 * (first->mse / before - 1.0)) << "% vs before compaction, +"
           << fmt("%.0f", 100.0 * (first->mse / unregularized - 1.0)) << "% vs lambda=0, +"
           << fmt("%.0f", 100.0 * (first->mse / sweep.rows.front().mse - 1.0)) << "% vs first row";
    }
    return {monotone && found, os.str()};
}

// 5. Budgeted pruning vs the single-shot importance baseline at equal size.
Outcome pruning_dominance() {
    const auto& f = fixture();
    const std::size_t n = f.scene.splats.size();
    std::ostringstream os;
    bool pass = true;
    for (int iterations : {48, 4}) {
        const auto start = std::chrono::steady_clock::now();
        PruneConfig pc = config_from_q(0.5).prune_config();
        pc.iterations = iterations;
        os << iterations << " iterations:";
        for (double fraction : {0.5, 0.7, 0.85}) {
            const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(n) * (1.0 - fraction)));
            const PruneResult ours = run_pruning_to_count(f.scene.splats, f.scene.cameras, f.targets, target, pc);
            const auto base = prune_by_importance(f.scene.splats, f.scene.cameras, n - target);
            const double ours_mse = mean_mse(render_all(ours.splats, f.scene.cameras), f.targets);
            const double base_mse = mean_mse(render_all(base, f.scene.cameras), f.targets);
            pass = pass && ours.splats.size() == target && base.size() == target && ours_mse <= base_mse;
            os << ' ' << fmt("%.0f", fraction * 100) << "% " << fmt("%.3g", ours_mse) << " vs "
               << fmt("%.3g", base_mse);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const double limit = iterations == 48 ? 600.0 : 60.0;
        pass = pass && secs <= limit;
        os << " (" << fmt("%.0f", secs) << " s); ";
    }
    return {pass, os.str()};
}

// 6. Uniform quantizer bound, 10^6 samples per attribute.
Outcome quantizer_bounds() {
    std::mt19937_64 gen(6);
    double worst = 0.0;
    for (double q : {0.0, 0.5, 1.0}) {
        const QuantParams sf = config_from_q(q).encode_params().sf;
        struct Attr {
            double sf, shift, lo, hi;
        };
        const Attr attrs[] = {{sf.sf_sh, 0.0, -4.0, 4.0},
                              {sf.sf_opacity, kOpacityShift, 0.0, 1.0},
                              {sf.sf_rotation, 0.0, -1.0, 1.0},
                              {sf.sf_scale, 0.0, -12.0, 3.0}};
        for (const auto& a : attrs) {
            std::uniform_real_distribution<double> dist(a.lo, a.hi);
            for (int i = 0; i < 1000000; ++i) {
                const double x = dist(gen);
                const double back = dequantize_uniform(quantize_uniform(x, a.sf), a.sf, a.shift);
                worst = std::max(worst, std::abs(back - x) * a.sf / (0.5 + std::abs(a.shift)));
            }
        }
    }
    return {worst <= 1.0 + 1e-12, "max error / bound = " + fmt("%.12f", worst) + " over 12 x 10^6 samples"};
}

// 7. Octree precision criterion on decoded positions, plus the hand example.
Outcome octree_criterion() {
    std::size_t violations = 0, checked = 0, at_max = 0;
    auto check = [&](const std::vector<Eigen::Vector3f>& pos, const std::vector<Eigen::Vector3d>& eyes, float beta,
                     float gamma) {
        const Octree tree = build_octree(pos, eyes, beta, gamma);
        const Octree back = deserialize_octree(serialize_octree(tree), tree.root, tree.max_depth, pos.size());
        const auto tol = position_tolerances(pos, eyes, beta, gamma);
        for (std::size_t i = 0; i < pos.size(); ++i) {
            if (back.leaf_depth[i] == tree.max_depth) {
                ++at_max;
                continue;
            }
            const auto k = tree.order[i];
            ++checked;
            violations += (pos[k].cast<double>() - back.leaf_positions[i].cast<double>()).norm() < tol[k] ? 0 : 1;
        }
    };
    test::Rng rng(7);
    for (double q : {0.1, 0.5, 1.0}) {
        const EncodeConfig cfg = config_from_q(q);
        for (std::size_t n : {1u, 10u, 1000u, 10000u}) {
            std::vector<Eigen::Vector3f> pos(n);
            const double spread = rng.uniform(0.1, 50.0);
            for (auto& p : pos) p = (spread * Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal())).cast<float>();
            std::vector<Eigen::Vector3d> eyes;
            for (int s = 0; s < 6; ++s) eyes.push_back(3.0 * spread * rng.unit_vector());
            check(pos, eyes, static_cast<float>(cfg.beta), static_cast<float>(cfg.gamma));
        }
    }
    std::vector<Eigen::Vector3f> fixture_pos;
    for (const auto& s : fixture().scene.splats) fixture_pos.push_back(s.position);
    const EncodeConfig mid = config_from_q(0.5);
    check(fixture_pos, fixture().eyes, static_cast<float>(mid.beta), static_cast<float>(mid.gamma));

    const std::vector<Eigen::Vector3f> far{{100.0f, 0.0f, 0.0f}};
    const std::vector<Eigen::Vector3d> origin{{0, 0, 0}};
    const double example = position_tolerances(far, origin, 7e-5f, static_cast<float>(mid.gamma))[0];
    const bool example_ok = std::abs(example - 7e-3) <= 7e-3 * 1e-6;
    return {violations == 0 && example_ok,
            std::to_string(violations) + " violations among " + std::to_string(checked) + " splats (" +
                std::to_string(at_max) + " at max depth, exempt); distance-100 tolerance " + fmt("%.7g", example)};
}

// 8. Container round trip and zstd level independence.
Outcome container_round_trip() {
    bool identical = true, levels = true;
    std::ostringstream sizes;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Scene scene = test::random_scene(800 + seed, 400, 4, 32);
        const EncodeResult r = encode_scene(scene.splats, scene.cameras, config_from_q(0.5));
        const DecodedScene decoded = decode_container(r.container);
        identical = identical && write_container(requantize_scene(decoded), decoded.header.zstd_level) == r.container;

        const auto fast = write_container(r.quantized, 4);
        const auto slow = write_container(r.quantized, 19);
        const DecodedScene a = decode_container(fast), b = decode_container(slow);
        bool same = a.splats.size() == b.splats.size();
        for (std::size_t k = 0; same && k < a.splats.size(); ++k) {
            const Splat &x = a.splats[k], &y = b.splats[k];
            same = x.position == y.position && x.scale == y.scale && x.rotation == y.rotation &&
                   x.opacity == y.opacity && x.sh == y.sh;
        }
        levels = levels && same && slow.size() < fast.size();
        if (seed < 3) sizes << ' ' << fast.size() << '/' << slow.size();
    }
    return {identical && levels, std::string("re-encode ") + (identical ? "identical" : "DIFFERS") +
                                     " on 10 scenes; level 4/19 sizes" + sizes.str() + " ..." +
                                     (levels ? "" : " (level check failed)")};
}

// 9. End-to-end size and quality on the fixture at q = 0.5.
Outcome fixture_compression() {
    const EncodeResult& r = fixture_encode(0.5);
    const double bps = static_cast<double>(r.container.size()) / static_cast<double>(fixture().scene.splats.size());
    const double db = compare_images(decoded_renders(r), fixture().targets).mean_psnr;
    return {bps <= 47.2 && db >= 35.0, fmt("%.2f", bps) + " bytes/splat (" + fmt("%.1f", kRawBytesPerSplat / bps) +
                                           "x vs raw), PSNR " + fmt("%.2f", db) + " dB, " +
                                           std::to_string(r.processed.size()) + " splats kept"};
}

// 10. Size and quality move monotonically with q.
Outcome rate_quality() {
    std::vector<double> sizes, errors;
    std::ostringstream os;
    for (double q : {0.1, 0.5, 0.9}) {
        const EncodeResult& r = fixture_encode(q);
        sizes.push_back(static_cast<double>(r.container.size()));
        errors.push_back(compare_images(decoded_renders(r), fixture().targets).mean_mse);
        os << "q=" << q << ": " << r.container.size() << " B, MSE " << fmt("%.3g", errors.back()) << "; ";
    }
    const bool pass = sizes[1] <= sizes[0] && sizes[2] <= sizes[1] && errors[1] >= errors[0] && errors[2] >= errors[1];
    return {pass, os.str()};
}

// 11. Every stage is bit-identical across runs and thread counts.
Outcome determinism() {
    FixtureConfig fc;
    fc.splats = 2000;
    const Scene scene = make_fixture(fc);
    struct Run {
        std::vector<Image> renders;
        ImpactReport impact;
        std::vector<Splat> pruned;
        std::vector<YcocgCoeffs> compacted;
        std::vector<std::uint8_t> container;
        std::vector<Splat> decoded;
    };
    auto run = [&](int threads) {
        omp_set_num_threads(threads);
        Run r;
        r.renders = render_all(scene.splats, scene.cameras);
        r.impact = compute_delta_mse(scene.splats, scene.cameras, r.renders);
        const EncodeConfig cfg = config_from_q(0.5);
        r.pruned = run_pruning(scene.splats, scene.cameras, r.renders, cfg.prune_config()).splats;
        r.compacted = compact_scene(r.pruned, scene.cameras, compute_importance(r.pruned, scene.cameras),
                                    cfg.compaction_config())
                          .ycocg;
        r.container = encode_scene(scene.splats, scene.cameras, cfg, &r.renders).container;
        r.decoded = decode_container(r.container).splats;
        return r;
    };
    auto same_splats = [](const std::vector<Splat>& a, const std::vector<Splat>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (!(a[k].position == b[k].position && a[k].scale == b[k].scale && a[k].rotation == b[k].rotation &&
                  a[k].opacity == b[k].opacity && a[k].sh == b[k].sh)) {
                return false;
            }
        }
        return true;
    };
    const int saved = omp_get_max_threads();
    const Run ref = run(1);
    std::vector<std::string> differing;
    for (int threads : {1, 4, 16}) {
        const Run other = run(threads);
        const std::string tag = std::to_string(threads) + "t:";
        bool renders = ref.renders.size() == other.renders.size();
        for (std::size_t i = 0; renders && i < ref.renders.size(); ++i) renders = ref.renders[i].rgb == other.renders[i].rgb;
        if (!renders) differing.push_back(tag + "render");
        if (ref.impact.delta_mse != other.impact.delta_mse || ref.impact.importance != other.impact.importance) {
            differing.push_back(tag + "analysis");
        }
        if (!same_splats(ref.pruned, other.pruned)) differing.push_back(tag + "pruning");
        if (ref.compacted != other.compacted) differing.push_back(tag + "compaction");
        if (ref.container != other.container) differing.push_back(tag + "container");
        if (!same_splats(ref.decoded, other.decoded)) differing.push_back(tag + "decode");
    }
    omp_set_num_threads(saved);
    std::string detail = "render, analysis, pruning, compaction, container, decode at 1 (twice), 4, 16 threads: ";
    if (differing.empty()) return {true, detail + "identical"};
    for (const auto& d : differing) detail += d + ' ';
    return {false, detail};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    app.add_option("--only", only, "Run only these criteria (1-11)")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"prune difference oracle (20 scenes, 1e-5)", pd_oracle},
        {"delta MSE oracle (20 scenes, 1e-9)", delta_mse_oracle},
        {"ridge closed form (100 systems)", ridge_systems},
        {"compaction sparsity-quality sweep", compaction_sweep},
        {"pruning beats importance baseline at 50/70/85%", pruning_dominance},
        {"quantizer bounds (10^6 samples per attribute)", quantizer_bounds},
        {"octree precision criterion", octree_criterion},
        {"container round trip and zstd levels", container_round_trip},
        {"fixture at q=0.5: <= 47.2 B/splat, >= 35 dB", fixture_compression},
        {"rate-quality monotonicity in q", rate_quality},
        {"determinism across runs and 1/4/16 threads", determinism},
    };
    const std::set<int> selected(only.begin(), only.end());
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += out.pass ? 0 : 1;
        std::cout << (out.pass ? "PASS" : "FAIL") << "  " << id << ". " << criteria[i].first << " -- " << out.detail
                  << " [" << fmt("%.1f", secs) << " s]" << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
    return failures == 0 ? 0 : 1;
}
