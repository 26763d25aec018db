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

#include "risloc/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace risloc
{

void FrequencyGrid::validate() const
{
    if (!(f_step > 0.0))
        throw std::invalid_argument("frequency step must be positive");
    if (!(f_start < f_stop))
        throw std::invalid_argument("frequency grid needs f_start < f_stop");
    const double n = (f_stop - f_start) / f_step;
    if (std::abs(n - std::round(n)) > 1e-6)
        throw std::invalid_argument("frequency span is not an integer number of steps");
    if (carrier < f_start || carrier > f_stop)
        throw std::invalid_argument("carrier lies outside the frequency grid");
}

std::size_t FrequencyGrid::size() const
{
    return static_cast<std::size_t>(std::llround((f_stop - f_start) / f_step)) + 1;
}

void ArrayGeometry::validate() const
{
    if (n_elements == 0)
        throw std::invalid_argument("array needs at least one element");
    if (!(element_spacing > 0.0) || !(rx_spacing > 0.0))
        throw std::invalid_argument("array spacings must be positive");
}

ArrayGeometry ArrayGeometry::half_wavelength(double carrier_hz, std::size_t n_elements)
{
    const double half = 0.5 * kSpeedOfLight / carrier_hz;
    return {n_elements, half, half};
}

std::array<Point2D, kRxPositions> rx_grid_offsets(double spacing)
{
    std::array<Point2D, kRxPositions> out{};
    for (std::size_t row = 0; row < 3; ++row)
        for (std::size_t col = 0; col < 3; ++col)
            out[3 * row + col] = {(static_cast<double>(col) - 1.0) * spacing, (static_cast<double>(row) - 1.0) * spacing};
    return out;
}

double quantize_1bit(double ideal_phase)
{
    // Distance to 0 is |w|, distance to pi is pi - |w|; ties resolve to 0.
    const double w = std::abs(std::remainder(ideal_phase, 2.0 * kPi));
    return w <= 0.5 * kPi ? 0.0 : kPi;
}

Codeword steering_phases(const ArrayGeometry &array, double carrier_hz, double aod_deg)
{
    if (!(std::abs(aod_deg) < 90.0))
        throw std::domain_error("steering angle must satisfy |aod| < 90 deg");
    const double kd = 2.0 * kPi * carrier_hz / kSpeedOfLight * array.element_spacing;
    const double s = std::sin(deg2rad(aod_deg));
    Codeword w(array.n_elements);
    for (std::size_t k = 0; k < array.n_elements; ++k)
    {
        double ph = std::remainder(-kd * static_cast<double>(k) * s, 2.0 * kPi);
        if (ph <= -kPi)
            ph += 2.0 * kPi;
        w[k] = ph;
    }
    return w;
}

Codeword steering_codeword(const ArrayGeometry &array, double carrier_hz, double aod_deg)
{
    Codeword w = steering_phases(array, carrier_hz, aod_deg);
    for (auto &ph : w)
        ph = quantize_1bit(ph);
    return w;
}

BeamCodebook make_codebook(const ArrayGeometry &array, double carrier_hz, const SweepPlan &sweep)
{
    BeamCodebook cb;
    cb.pointing_deg = sweep.angles();
    cb.words.reserve(cb.pointing_deg.size());
    for (double a : cb.pointing_deg)
        cb.words.push_back(steering_codeword(array, carrier_hz, a));
    return cb;
}

cd array_factor(const ArrayGeometry &array, double carrier_hz, std::span<const double> codeword, double eval_deg)
{
    if (codeword.size() != array.n_elements)
        throw std::invalid_argument("codeword length " + std::to_string(codeword.size()) + " does not match " +
                                    std::to_string(array.n_elements) + " elements");
    const double kd = 2.0 * kPi * carrier_hz / kSpeedOfLight * array.element_spacing;
    const double s = std::sin(deg2rad(eval_deg));
    cd acc{0.0, 0.0};
    for (std::size_t k = 0; k < codeword.size(); ++k)
        acc += std::polar(1.0, kd * static_cast<double>(k) * s + codeword[k]);
    return acc;
}

ChannelTensor synthesize_channel(const ChannelModel &model, const ScenePlan &scene, const BeamState &beams,
                                 std::size_t ue_index, std::span<const PathComponent> paths, double noise_sigma,
                                 std::uint64_t seed)
{
    if (!(noise_sigma >= 0.0))
        throw std::invalid_argument("noise_sigma must be non-negative");
    if (paths.empty() && noise_sigma == 0.0)
        throw std::invalid_argument("nothing to synthesize: no paths and no noise");
    if (ue_index >= scene.ue_truths.size())
        throw std::out_of_range("UE index out of range");
    model.grid.validate();

    const double fc = model.grid.carrier;
    const std::size_t n_freq = model.grid.size();
    const auto offsets = rx_grid_offsets(model.bs_array.rx_spacing);
    const double kc = 2.0 * kPi * fc / kSpeedOfLight;

    const Codeword bs_word = steering_codeword(model.bs_array, fc, beams.bs_pointing_deg);
    std::optional<Codeword> ris_word;
    if (beams.ris_index && beams.ris_pointing_deg)
        ris_word = steering_codeword(model.ris_array, fc, *beams.ris_pointing_deg);

    ChannelTensor t;
    t.grid = model.grid;
    t.values = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n_freq), static_cast<Eigen::Index>(kRxPositions));
    t.meta.ue_index = ue_index;
    t.meta.pointing_deg = beams.ris_pointing_deg.value_or(beams.bs_pointing_deg);
    t.meta.role_tag = beams.ris_index ? static_cast<std::uint16_t>(*beams.ris_index + 1) : 0;
    t.meta.seed = seed;

    Eigen::VectorXcd freq_phasor(static_cast<Eigen::Index>(n_freq));
    Eigen::RowVectorXcd space_phasor(static_cast<Eigen::Index>(kRxPositions));

    for (const auto &pc : paths)
    {
        if (!(pc.ota_distance > 0.0))
            throw std::invalid_argument("path OTA distance must be positive");

        cd g_beam{1.0, 0.0};
        switch (pc.origin)
        {
        case PathOrigin::DP:
            g_beam = array_factor(model.bs_array, fc, bs_word, pc.aod_anchor_deg);
            break;
        case PathOrigin::RP: {
            if (!ris_word || *beams.ris_index != pc.ris_index)
                throw std::invalid_argument("reflected path via RIS" + std::to_string(pc.ris_index + 1) +
                                            " needs that RIS to be active");
            const double toward_ris = bearing_from_anchor(scene.bs, scene.ris(pc.ris_index).position);
            g_beam = array_factor(model.bs_array, fc, bs_word, toward_ris) *
                     array_factor(model.ris_array, fc, *ris_word, pc.aod_anchor_deg);
            break;
        }
        case PathOrigin::Clutter:
            break;
        }

        const cd amp = g_beam * pc.complex_gain;
        const double tau = pc.ota_distance / kSpeedOfLight;
        for (std::size_t n = 0; n < n_freq; ++n)
            freq_phasor(static_cast<Eigen::Index>(n)) = std::polar(1.0, -2.0 * kPi * model.grid.freq(n) * tau);
        const double phi = deg2rad(pc.aoa_ue_deg);
        const double ux = std::cos(phi), uy = std::sin(phi);
        for (std::size_t p = 0; p < kRxPositions; ++p)
            space_phasor(static_cast<Eigen::Index>(p)) =
                amp * std::polar(1.0, kc * (offsets[p].x * ux + offsets[p].y * uy));
        t.values.noalias() += freq_phasor * space_phasor;
    }

    if (noise_sigma > 0.0)
    {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> nd(0.0, noise_sigma / std::sqrt(2.0));
        for (Eigen::Index n = 0; n < t.values.rows(); ++n)
            for (Eigen::Index p = 0; p < t.values.cols(); ++p)
            {
                const double re = nd(rng);
                const double im = nd(rng);
                t.values(n, p) += cd{re, im};
            }
    }
    return t;
}

std::vector<PathComponent> generate_clutter(const ScenePlan &scene, std::size_t ue_index, const ClutterParams &params,
                                            std::uint64_t seed)
{
    std::vector<PathComponent> out;
    if (params.count == 0)
        return out;
    const Point2D ue = scene.ue_truths.at(ue_index);
    const double orientation = scene.ue_orientation(ue_index);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(scene.room.x_min, scene.room.x_max);
    std::uniform_real_distribution<double> uy(scene.room.y_min, scene.room.y_max);
    std::uniform_real_distribution<double> uphase(-kPi, kPi);
    std::normal_distribution<double> jitter(0.0, params.jitter_db);

    out.reserve(params.count);
    while (out.size() < params.count)
    {
        const Point2D s{ux(rng), uy(rng)};
        const double phase = uphase(rng);
        const double j_db = jitter(rng);
        const double d_in = distance(scene.bs.position, s);
        const double d_out = distance(s, ue);
        // Scatterers on top of an endpoint carry no usable geometry.
        if (d_in < 1e-6 || d_out < 1e-6)
            continue;
        PathComponent pc;
        pc.origin = PathOrigin::Clutter;
        pc.ota_distance = d_in + d_out;
        pc.aoa_ue_deg = wrap180(rad2deg(std::atan2(s.y - ue.y, s.x - ue.x)) - orientation);
        pc.aod_anchor_deg = bearing_from_anchor(scene.bs, s);
        const double amplitude = params.gain * std::pow(pc.ota_distance, -params.exponent) * std::pow(10.0, j_db / 20.0);
        pc.complex_gain = std::polar(amplitude, phase);
        out.push_back(pc);
    }
    return out;
}

PathComponent geometric_path(const ChannelModel &model, const ScenePlan &scene, const SynthConfig &cfg,
                             const PathSpec &path, std::size_t ue_index)
{
    const Point2D ue = scene.ue_truths.at(ue_index);
    const double lambda = model.grid.wavelength();
    PathComponent pc;
    pc.ota_distance = ota_distance(scene, path, ue);
    pc.aoa_ue_deg = aoa_at_ue(scene, path, ue, scene.ue_orientation(ue_index));
    pc.aod_anchor_deg = bearing_from_anchor(departure_anchor(scene, path), ue);
    if (path.kind == PathKind::DP)
    {
        pc.origin = PathOrigin::DP;
        pc.complex_gain = cfg.tx_gain * lambda / (4.0 * kPi * pc.ota_distance);
    }
    else
    {
        pc.origin = PathOrigin::RP;
        pc.ris_index = *path.via_ris;
        const auto &ris = scene.ris(pc.ris_index);
        const double d1 = distance(scene.bs.position, ris.position);
        const double d2 = distance(ris.position, ue);
        pc.complex_gain = cfg.ris_illumination * lambda * lambda / (16.0 * kPi * kPi * d1 * d2);
    }
    return pc;
}

double noise_sigma_for(const ChannelModel &model, const ScenePlan &scene, const SynthConfig &cfg)
{
    if (cfg.noise_sigma)
    {
        if (*cfg.noise_sigma < 0.0)
            throw std::invalid_argument("noise_sigma must be non-negative");
        return *cfg.noise_sigma;
    }
    const PathComponent dp = geometric_path(model, scene, cfg, PathSpec::direct(), 0);
    const double peak = std::abs(dp.complex_gain) * static_cast<double>(model.bs_array.n_elements);
    return peak * std::pow(10.0, -cfg.snr_db / 20.0);
}

std::uint16_t SweepRole::tag() const
{
    return kind == Kind::BsScanRisOff ? 0 : static_cast<std::uint16_t>(ris_index + 1);
}

namespace
{
std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t kind, std::uint64_t a, std::uint64_t b, std::uint64_t c)
{
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t v : {kind, a, b, c})
        h = splitmix64(h ^ v);
    return h;
}

std::vector<ChannelTensor> run_sweep(const ChannelModel &model, const ScenePlan &scene, const SweepPlan &sweep,
                                     const SweepRole &role, std::size_t ue_index, const SynthConfig &cfg,
                                     std::uint64_t seed)
{
    if (ue_index >= scene.ue_truths.size())
        throw std::out_of_range("UE index out of range");
    if (role.kind == SweepRole::Kind::RisScan && role.ris_index >= scene.ris_list.size())
        throw std::out_of_range("RIS index out of range");
    if (role.kind != SweepRole::Kind::BsScanRisOff && role.kind != SweepRole::Kind::RisScan)
        throw std::invalid_argument("invalid sweep role");

    std::vector<PathComponent> paths;
    paths.push_back(geometric_path(model, scene, cfg, PathSpec::direct(), ue_index));
    if (role.kind == SweepRole::Kind::RisScan)
        paths.push_back(geometric_path(model, scene, cfg, PathSpec::reflected(role.ris_index), ue_index));
    const auto clutter = generate_clutter(scene, ue_index, cfg.clutter, derive_seed(seed, kStreamClutter, ue_index));
    paths.insert(paths.end(), clutter.begin(), clutter.end());

    const double sigma = noise_sigma_for(model, scene, cfg);
    const auto angles = sweep.angles();

    std::vector<ChannelTensor> out;
    out.reserve(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i)
    {
        BeamState beams;
        if (role.kind == SweepRole::Kind::BsScanRisOff)
        {
            beams.bs_pointing_deg = angles[i];
        }
        else
        {
            beams.bs_pointing_deg = role.bs_pointing_deg;
            beams.ris_index = role.ris_index;
            beams.ris_pointing_deg = angles[i];
        }
        const std::uint64_t stream = derive_seed(seed, kStreamNoise, role.tag(), i, ue_index);
        ChannelTensor t = synthesize_channel(model, scene, beams, ue_index, paths, sigma, stream);
        t.meta.seed = seed;
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace risloc
