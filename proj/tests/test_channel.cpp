// SPDX-License-Identifier: Apache-2.0
//
// risloc - RIS-aided mmWave indoor positioning workbench
// Copyright (C) 2026 The risloc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include "risloc/channel.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <random>

// Covered tests:
// - 1-bit quantization and its tie rule
// - Steering phases, codewords and the mirror symmetry of real codewords
// - Array factor: coherent sum, ideal steering, 1-bit loss, mirror lobe
// - Single-path tensors: constant magnitude, delay-phase slope, AoA phase across the RX grid
// - Energy additivity and scaling, noise statistics and seeding
// - Clutter generation
// - Sweeps: angles, roles, shared clutter, RIS peak near the geometric bearing
// - Sub-band synthesis equivalence

using namespace risloc;
using Catch::Approx;

namespace
{

const double fc = 28.0e9;
const ArrayGeometry arr = ArrayGeometry::half_wavelength(fc, 32);

// Array factor evaluated directly from its definition with independent loops.
double af_mag(const Codeword &w, double deg)
{
    const double lambda = kSpeedOfLight / fc;
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
    {
        const double ph = 2.0 * kPi / lambda * double(k) * (lambda / 2.0) * std::sin(deg * kPi / 180.0) + w[k];
        re += std::cos(ph);
        im += std::sin(ph);
    }
    return std::hypot(re, im);
}

ScenePlan tiny_scene()
{
    ScenePlan s;
    s.bs = {{0.0, 0.0}, 0.0, AnchorKind::BS, "BS"};
    s.ris_list = {{{0.0, 4.0}, -90.0, AnchorKind::RIS, "RIS1"}};
    s.bs_illumination_deg = {80.0};
    s.ue_truths = {{3.0, 1.0}};
    s.room = {-1.0, 6.0, -1.0, 6.0};
    return s;
}

ChannelModel model_for(const FrequencyGrid &g)
{
    return {g, ArrayGeometry::half_wavelength(g.carrier), ArrayGeometry::half_wavelength(g.carrier)};
}

} // namespace

TEST_CASE("Channel - 1-bit quantization")
{
    CHECK(quantize_1bit(0.3 * kPi) == 0.0);
    CHECK(quantize_1bit(0.6 * kPi) == kPi);
    CHECK(quantize_1bit(0.5 * kPi) == 0.0);
    CHECK(quantize_1bit(-0.5 * kPi) == 0.0);
    CHECK(quantize_1bit(kPi) == kPi);
    CHECK(quantize_1bit(-kPi) == kPi);
    CHECK(quantize_1bit(2.0 * kPi + 0.1) == 0.0);
    CHECK(quantize_1bit(-1.327) == 0.0); // |w| = 1.327 < pi/2

    // Minimal wrapped distance, checked against a brute force over both members
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 5000; ++i)
    {
        const double x = u(rng);
        auto dist = [&](double m) { return std::abs(std::atan2(std::sin(x - m), std::cos(x - m))); };
        const double q = quantize_1bit(x);
        CHECK((q == 0.0 || q == kPi));
        CHECK(dist(q) <= dist(q == 0.0 ? kPi : 0.0) + 1e-12);
    }
}

TEST_CASE("Channel - Steering codewords")
{
    const auto broadside = steering_phases(arr, fc, 0.0);
    CHECK(std::all_of(broadside.begin(), broadside.end(), [](double p) { return p == 0.0; }));
    const auto q0 = steering_codeword(arr, fc, 0.0);
    CHECK(std::all_of(q0.begin(), q0.end(), [](double p) { return p == 0.0; }));

    const auto ideal25 = steering_phases(arr, fc, 25.0);
    CHECK(ideal25[1] == Approx(-kPi * std::sin(25.0 * kPi / 180.0)).epsilon(1e-12));
    CHECK(ideal25[1] == Approx(-1.327).margin(1e-3));
    // Nearest member of {0, pi} for -1.327 rad is 0
    CHECK(steering_codeword(arr, fc, 25.0)[1] == 0.0);

    for (double a : {5.0, 17.5, 25.0, 40.0, 60.0})
    {
        const auto p = steering_phases(arr, fc, a), m = steering_phases(arr, fc, -a);
        const auto qp = steering_codeword(arr, fc, a), qm = steering_codeword(arr, fc, -a);
        for (std::size_t k = 0; k < p.size(); ++k)
        {
            CHECK(p[k] > -kPi);
            CHECK(p[k] <= kPi);
            CHECK(test_support::angle_gap(p[k] * 180 / kPi, -m[k] * 180 / kPi) < 1e-9);
            CHECK((qp[k] == 0.0 || qp[k] == kPi));
        }
        CHECK(qp == qm);
    }
    CHECK_THROWS_AS(steering_phases(arr, fc, 90.0), std::domain_error);
    CHECK_THROWS_AS(steering_codeword(arr, fc, -95.0), std::domain_error);

    const auto cb = make_codebook(arr, fc, SweepPlan{});
    CHECK(cb.words.size() == 25);
    CHECK(cb.pointing_deg.size() == 25);
}

TEST_CASE("Channel - Array factor")
{
    const Codeword zero(32, 0.0);
    CHECK(std::abs(array_factor(arr, fc, zero, 0.0)) == Approx(32.0));

    // Ideal steering reaches the coherent maximum
    for (double a : {-50.0, -12.0, 0.0, 25.0, 33.3})
        CHECK(std::abs(array_factor(arr, fc, steering_phases(arr, fc, a), a)) == Approx(32.0).epsilon(1e-9));

    // Independent evaluation
    const auto w = steering_codeword(arr, fc, 25.0);
    for (double a = -89.0; a < 90.0; a += 7.3)
        CHECK(std::abs(array_factor(arr, fc, w, a)) == Approx(af_mag(w, a)).epsilon(1e-9));

    // All-zero codeword: even in theta and real up to the common phase
    for (double a : {3.0, 18.0, 47.0})
    {
        const cd p = array_factor(arr, fc, zero, a), m = array_factor(arr, fc, zero, -a);
        CHECK(std::abs(p) == Approx(std::abs(m)));
        // Removing the phase centre of the aperture leaves a real number
        const double psi = kPi * std::sin(a * kPi / 180.0);
        CHECK(std::abs((p * std::polar(1.0, -15.5 * psi)).imag()) < 1e-9);
    }

    // 1-bit loss stays near 2/pi at the steering angle
    for (double a : {5.0, 15.0, 25.0, 35.0, 45.0, 55.0})
        CHECK(std::abs(array_factor(arr, fc, steering_codeword(arr, fc, a), a)) >= 2.0 / kPi * 32.0 - 3.0);

    // Mirror lobe: 0.1 deg scan of the pattern steered to +25
    double main = 0.0, mirror = 0.0;
    for (int i = -900; i <= 900; ++i)
    {
        const double a = 0.1 * i;
        const double v = af_mag(w, a);
        if (std::abs(a - 25.0) <= 2.0)
            main = std::max(main, v);
        if (std::abs(a + 25.0) <= 2.0)
            mirror = std::max(mirror, v);
    }
    CHECK(20.0 * std::log10(main / mirror) <= 4.0);

    CHECK_THROWS_AS(array_factor(arr, fc, Codeword(31, 0.0), 0.0), std::invalid_argument);
}

TEST_CASE("Channel - Frequency grid")
{
    FrequencyGrid g;
    CHECK(g.size() == 1001);
    CHECK(g.freq(200) == Approx(27.0e9));
    CHECK_NOTHROW(g.validate());
    CHECK_THROWS((FrequencyGrid{35e9, 25e9, 10e6, 28e9}.validate()));
    CHECK_THROWS((FrequencyGrid{25e9, 35e9, 3e6, 28e9}.validate()));
    CHECK_THROWS((FrequencyGrid{25e9, 35e9, 10e6, 40e9}.validate()));

    const auto off = rx_grid_offsets(1.0);
    CHECK(off[4] == Point2D{0.0, 0.0});
    CHECK(off[0] == Point2D{-1.0, -1.0});
    CHECK(off[5] == Point2D{1.0, 0.0});
    CHECK(off[7] == Point2D{0.0, 1.0});
}

TEST_CASE("Channel - Single path tensor")
{
    const auto scene = tiny_scene();
    const auto model = model_for(FrequencyGrid{});
    PathComponent pc;
    pc.origin = PathOrigin::Clutter;
    pc.ota_distance = 6.0;
    pc.aoa_ue_deg = 30.0;
    pc.complex_gain = std::polar(2e-3, 0.4);
    const std::vector<PathComponent> paths{pc};
    const auto t = synthesize_channel(model, scene, BeamState{}, 0, paths, 0.0, 1);
    REQUIRE(t.n_freq() == 1001);
    REQUIRE(t.n_pos() == 9);

    const double tau = 6.0 / kSpeedOfLight;
    const double expected_step = std::remainder(-2.0 * kPi * 10e6 * tau, 2.0 * kPi);
    for (Eigen::Index n = 0; n < t.values.rows(); n += 37)
        for (Eigen::Index p = 0; p < 9; ++p)
        {
            CHECK(std::abs(t.values(n, p)) == Approx(2e-3).epsilon(1e-9));
            if (n + 1 < t.values.rows())
                CHECK(std::remainder(std::arg(t.values(n + 1, p) / t.values(n, p)) - expected_step, 2.0 * kPi) ==
                      Approx(0.0).margin(1e-9));
        }
    // AoA phase across the grid: offset +x (position 5) vs centre (position 4)
    const double kc = 2.0 * kPi * fc / kSpeedOfLight;
    const double d = model.bs_array.rx_spacing;
    CHECK(std::remainder(std::arg(t.values(0, 5) / t.values(0, 4)) - kc * d * std::cos(kPi / 6), 2.0 * kPi) ==
          Approx(0.0).margin(1e-9));
    CHECK(std::remainder(std::arg(t.values(0, 7) / t.values(0, 4)) - kc * d * std::sin(kPi / 6), 2.0 * kPi) ==
          Approx(0.0).margin(1e-9));

    // DP gain carries the BS array factor
    PathComponent dp = pc;
    dp.origin = PathOrigin::DP;
    dp.aod_anchor_deg = 20.0;
    BeamState beams;
    beams.bs_pointing_deg = 20.0;
    const std::vector<PathComponent> dps{dp};
    const auto tdp = synthesize_channel(model, scene, beams, 0, dps, 0.0, 1);
    const double g = std::abs(array_factor(model.bs_array, fc, steering_codeword(model.bs_array, fc, 20.0), 20.0));
    CHECK(std::abs(tdp.values(10, 3)) == Approx(2e-3 * g).epsilon(1e-9));

    // RP needs its RIS to be active
    PathComponent rp = pc;
    rp.origin = PathOrigin::RP;
    const std::vector<PathComponent> rps{rp};
    CHECK_THROWS_AS(synthesize_channel(model, scene, beams, 0, rps, 0.0, 1), std::invalid_argument);

    CHECK_THROWS_AS(synthesize_channel(model, scene, beams, 0, {}, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(synthesize_channel(model, scene, beams, 0, paths, -1.0, 1), std::invalid_argument);
    CHECK_NOTHROW(synthesize_channel(model, scene, beams, 0, {}, 1.0, 1));
}

TEST_CASE("Channel - Energy and noise")
{
    const auto scene = tiny_scene();
    const auto model = model_for(FrequencyGrid{});
    PathComponent a, b;
    a.origin = b.origin = PathOrigin::Clutter;
    a.ota_distance = 5.0;
    b.ota_distance = 9.0; // delay gap far above 1 / bandwidth
    a.aoa_ue_deg = 10.0;
    b.aoa_ue_deg = -70.0;
    a.complex_gain = 1e-3;
    b.complex_gain = std::polar(1e-3, 1.0);

    auto energy = [](const ChannelTensor &t) { return t.values.squaredNorm(); };
    const std::vector<PathComponent> pa{a}, pb{b}, pab{a, b};
    const double ea = energy(synthesize_channel(model, scene, {}, 0, pa, 0.0, 1));
    const double eb = energy(synthesize_channel(model, scene, {}, 0, pb, 0.0, 1));
    const double eab = energy(synthesize_channel(model, scene, {}, 0, pab, 0.0, 1));
    CHECK(std::abs(eab - (ea + eb)) / (ea + eb) < 0.01);

    // Scaling
    auto scaled = pab;
    for (auto &p : scaled)
        p.complex_gain *= 3.0;
    CHECK(energy(synthesize_channel(model, scene, {}, 0, scaled, 0.0, 1)) == Approx(9.0 * eab).epsilon(1e-9));

    // Noise only: E|n|^2 = sigma^2 per entry, seeded
    const auto n1 = synthesize_channel(model, scene, {}, 0, {}, 0.5, 42);
    const auto n2 = synthesize_channel(model, scene, {}, 0, {}, 0.5, 42);
    const auto n3 = synthesize_channel(model, scene, {}, 0, {}, 0.5, 43);
    CHECK(n1.values == n2.values);
    CHECK(n1.values != n3.values);
    const double per_entry = energy(n1) / double(n1.values.size());
    CHECK(per_entry == Approx(0.25).epsilon(0.05));
    CHECK(std::abs(n1.values.mean()) < 0.05);
}

TEST_CASE("Channel - Clutter")
{
    const auto cfg = test_support::default_config();
    ClutterParams p;
    p.count = 0;
    CHECK(generate_clutter(cfg.scene, 0, p, 1).empty());

    p.count = 10000;
    p.gain = 1e-3;
    p.jitter_db = 0.0;
    for (std::size_t u = 0; u < cfg.scene.ue_truths.size(); ++u)
    {
        const auto c = generate_clutter(cfg.scene, u, p, 99);
        REQUIRE(c.size() == 10000);
        const double dp = distance(cfg.scene.bs.position, cfg.scene.ue_truths[u]);
        for (const auto &x : c)
        {
            CHECK(x.ota_distance >= dp - 1e-12);
            CHECK(std::abs(x.complex_gain) == Approx(1e-3 / x.ota_distance).epsilon(1e-12));
            CHECK(x.origin == PathOrigin::Clutter);
        }
    }
    p.count = 20;
    p.jitter_db = 3.0;
    const auto c1 = generate_clutter(cfg.scene, 2, p, 7), c2 = generate_clutter(cfg.scene, 2, p, 7);
    REQUIRE(c1.size() == c2.size());
    for (std::size_t i = 0; i < c1.size(); ++i)
    {
        CHECK(c1[i].ota_distance == c2[i].ota_distance);
        CHECK(c1[i].complex_gain == c2[i].complex_gain);
    }
}

TEST_CASE("Channel - Sweeps")
{
    auto cfg = test_support::default_config();
    const auto &scene = cfg.scene;

    const auto bs = run_sweep(cfg.model, scene, cfg.sweep, SweepRole::bs_scan(), 0, cfg.synth, 5);
    REQUIRE(bs.size() == 25);
    for (std::size_t i = 0; i < bs.size(); ++i)
    {
        CHECK(bs[i].meta.pointing_deg == -60.0 + 5.0 * double(i));
        CHECK(bs[i].meta.role_tag == 0);
        CHECK(bs[i].meta.seed == 5);
        CHECK(bs[i].values.allFinite());
    }
    // Reproducible
    const auto again = run_sweep(cfg.model, scene, cfg.sweep, SweepRole::bs_scan(), 0, cfg.synth, 5);
    CHECK(again[7].values == bs[7].values);
    CHECK_THROWS(run_sweep(cfg.model, scene, cfg.sweep, SweepRole::ris_scan(5, 0.0), 0, cfg.synth, 5));
    CHECK_THROWS(run_sweep(cfg.model, scene, cfg.sweep, SweepRole::bs_scan(), 9, cfg.synth, 5));

    // Noise-free, clutter-free: the BS scan contains the DP only, the RIS scan adds the RP
    cfg.synth.noise_sigma = 0.0;
    cfg.synth.clutter.count = 0;
    const auto quiet = run_sweep(cfg.model, scene, cfg.sweep, SweepRole::bs_scan(), 0, cfg.synth, 5);
    const auto dp = geometric_path(cfg.model, scene, cfg.synth, PathSpec::direct(), 0);
    for (std::size_t i = 0; i < quiet.size(); ++i)
    {
        const double g = std::abs(array_factor(cfg.model.bs_array, fc, steering_codeword(cfg.model.bs_array, fc,
                                                                                          quiet[i].meta.pointing_deg),
                                               dp.aod_anchor_deg));
        CHECK(quiet[i].values.cwiseAbs().maxCoeff() == Approx(std::abs(dp.complex_gain) * g).epsilon(1e-9));
    }

    // DP-only acquisition: steering at the ground truth beats GT + 30 deg by >= 10 dB
    {
        ChannelModel m = cfg.model;
        const std::vector<PathComponent> p{dp};
        BeamState on{dp.aod_anchor_deg, std::nullopt, std::nullopt}, off{dp.aod_anchor_deg + 30.0, std::nullopt,
                                                                            std::nullopt};
        const double e_on = synthesize_channel(m, scene, on, 0, p, 0.0, 1).values.squaredNorm();
        const double e_off = synthesize_channel(m, scene, off, 0, p, 0.0, 1).values.squaredNorm();
        CHECK(10.0 * std::log10(e_on / e_off) >= 10.0);
    }

    // RIS scan with low clutter: the overall-gain peak sits within 5 deg of the RIS1 -> UE1 bearing (24.6 deg, 3.4 m)
    cfg.synth.noise_sigma.reset();
    cfg.synth.clutter.count = 2;
    const auto ris = run_sweep(cfg.model, scene, cfg.sweep, SweepRole::ris_scan(0, -35.0), 0, cfg.synth, 5);
    std::size_t best = 0;
    std::vector<double> gains;
    for (std::size_t i = 0; i < ris.size(); ++i)
    {
        CHECK(ris[i].meta.role_tag == 1);
        gains.push_back(ris[i].values.squaredNorm());
        if (gains[i] > gains[best])
            best = i;
    }
    const double gt = bearing_from_anchor(scene.ris(0), scene.ue_truths[0]);
    // Real 1-bit codewords cannot tell +a from -a; the mirror peak is the same beam.
    CHECK(std::min(std::abs(ris[best].meta.pointing_deg - gt), std::abs(-ris[best].meta.pointing_deg - gt)) <= 5.0);

    // Clutter is identical across pointing angles: noise-free difference between two BS angles comes only
    // from the DP beam gain
    cfg.synth.noise_sigma = 0.0;
    cfg.synth.clutter.count = 6;
    const auto cl = run_sweep(cfg.model, scene, cfg.sweep, SweepRole::bs_scan(), 1, cfg.synth, 5);
    const auto dp1 = geometric_path(cfg.model, scene, cfg.synth, PathSpec::direct(), 1);
    BeamState b0{cl[0].meta.pointing_deg, std::nullopt, std::nullopt};
    BeamState b1{cl[9].meta.pointing_deg, std::nullopt, std::nullopt};
    const std::vector<PathComponent> only_dp{dp1};
    const Eigen::MatrixXcd diff = cl[0].values - cl[9].values;
    const Eigen::MatrixXcd dp_diff = synthesize_channel(cfg.model, scene, b0, 1, only_dp, 0.0, 1).values -
                                     synthesize_channel(cfg.model, scene, b1, 1, only_dp, 0.0, 1).values;
    CHECK((diff - dp_diff).norm() < 1e-12 * std::max(1.0, diff.norm()));
}

TEST_CASE("Channel - Sub-band synthesis")
{
    const auto scene = tiny_scene();
    PathComponent pc;
    pc.origin = PathOrigin::Clutter;
    pc.ota_distance = 4.2;
    pc.aoa_ue_deg = -20.0;
    pc.complex_gain = std::polar(1e-3, -0.3);
    const std::vector<PathComponent> p{pc};
    const auto full = synthesize_channel(model_for(FrequencyGrid{}), scene, {}, 0, p, 0.0, 1);
    const auto sub = synthesize_channel(model_for(FrequencyGrid{27e9, 29e9, 10e6, 28e9}), scene, {}, 0, p, 0.0, 1);
    REQUIRE(sub.n_freq() == 201);
    CHECK((full.values.middleRows(200, 201) - sub.values).norm() < 1e-12 * sub.values.norm());
}

TEST_CASE("Channel - Seed derivation")
{
    CHECK(derive_seed(1, kStreamNoise, 0, 1, 2) == derive_seed(1, kStreamNoise, 0, 1, 2));
    CHECK(derive_seed(1, kStreamNoise, 0, 1, 2) != derive_seed(1, kStreamNoise, 0, 2, 1));
    CHECK(derive_seed(1, kStreamNoise) != derive_seed(1, kStreamClutter));
    CHECK(derive_seed(1, kStreamNoise) != derive_seed(2, kStreamNoise));
    CHECK(SweepRole::bs_scan().tag() == 0);
    CHECK(SweepRole::ris_scan(1, 0.0).tag() == 2);
}
