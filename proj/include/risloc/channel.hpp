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

#ifndef RISLOC_CHANNEL_HPP
#define RISLOC_CHANNEL_HPP

#include "risloc/geometry.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace risloc
{

using cd = std::complex<double>;

// Uniform frequency grid, all values in Hz.
struct FrequencyGrid
{
    double f_start = 25.0e9;
    double f_stop = 35.0e9;
    double f_step = 10.0e6;
    double carrier = 28.0e9;

    void validate() const;
    std::size_t size() const;
    double freq(std::size_t i) const { return f_start + static_cast<double>(i) * f_step; }
    double wavelength() const { return kSpeedOfLight / carrier; }
};

// Linear BS/RIS arrays (azimuth only) and the 3x3 virtual RX grid.
struct ArrayGeometry
{
    std::size_t n_elements = 32;
    double element_spacing = 0.0; // meters
    double rx_spacing = 0.0;      // meters, 3x3 square lattice pitch

    void validate() const;

    // Half-wavelength element and RX spacing at the given carrier.
    static ArrayGeometry half_wavelength(double carrier_hz, std::size_t n_elements = 32);
};

constexpr std::size_t kRxPositions = 9;

// Offsets of the 3x3 RX grid around its centroid. Position p = 3 * row + col
// sits at ((col - 1) * spacing, (row - 1) * spacing).
std::array<Point2D, kRxPositions> rx_grid_offsets(double spacing);

enum class PathOrigin
{
    DP,
    RP,
    Clutter
};

struct PathComponent
{
    double ota_distance = 0.0;   // meters
    double aoa_ue_deg = 0.0;     // UE array frame
    double aod_anchor_deg = 0.0; // departure angle at the beamforming anchor
    cd complex_gain{1.0, 0.0};   // path amplitude before beam gains
    PathOrigin origin = PathOrigin::DP;
    std::size_t ris_index = 0; // valid when origin == RP
};

// role_tag 0 is the BS scan with every RIS off; tag k >= 1 is the scan of RIS k (1-based).
struct TensorMeta
{
    std::size_t ue_index = 0;
    double pointing_deg = 0.0;
    std::uint16_t role_tag = 0;
    std::uint64_t seed = 0;

    bool ris_on() const { return role_tag != 0; }
};

struct ChannelTensor
{
    Eigen::MatrixXcd values; // [n_freq x n_pos]
    FrequencyGrid grid;
    TensorMeta meta;

    std::size_t n_freq() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t n_pos() const { return static_cast<std::size_t>(values.cols()); }
};

using Codeword = std::vector<double>; // element phases in radians

struct BeamCodebook
{
    std::vector<double> pointing_deg;
    std::vector<Codeword> words;
};

// Nearest member of {0, pi} in wrapped angular distance; the pi/2 tie goes to 0.
double quantize_1bit(double ideal_phase);

// Ideal (unquantized) phase-gradient steering phases, wrapped to (-pi, pi].
// Throws std::domain_error unless |aod| < 90 deg.
Codeword steering_phases(const ArrayGeometry &array, double carrier_hz, double aod_deg);

// 1-bit quantized steering codeword.
Codeword steering_codeword(const ArrayGeometry &array, double carrier_hz, double aod_deg);

BeamCodebook make_codebook(const ArrayGeometry &array, double carrier_hz, const SweepPlan &sweep);

// Unnormalized array factor sum_k exp(j (k d sin(theta) 2 pi / lambda + phase_k)).
cd array_factor(const ArrayGeometry &array, double carrier_hz, std::span<const double> codeword, double eval_deg);

// Beam state of one acquisition.
struct BeamState
{
    double bs_pointing_deg = 0.0;
    std::optional<std::size_t> ris_index;   // active RIS, if any
    std::optional<double> ris_pointing_deg; // its codebook pointing
};

// Everything the synthesizer needs besides the scene.
struct ChannelModel
{
    FrequencyGrid grid;
    ArrayGeometry bs_array;
    ArrayGeometry ris_array;
};

// Sums the paths over the frequency grid and the 3x3 RX grid and adds circular
// complex Gaussian noise with E|n|^2 = noise_sigma^2 per entry.
ChannelTensor synthesize_channel(const ChannelModel &model, const ScenePlan &scene, const BeamState &beams,
                                 std::size_t ue_index, std::span<const PathComponent> paths, double noise_sigma,
                                 std::uint64_t seed);

struct ClutterParams
{
    std::size_t count = 0;
    double gain = 1.0e-3;      // amplitude at 1 m total path length
    double exponent = 1.0;     // amplitude ~ d^-exponent
    double jitter_db = 3.0;    // log-normal spread (std of 20 log10 amplitude)
};

// Random single-bounce scatterers drawn uniformly in the room (BS -> scatterer -> UE).
std::vector<PathComponent> generate_clutter(const ScenePlan &scene, std::size_t ue_index, const ClutterParams &params,
                                            std::uint64_t seed);

struct SynthConfig
{
    double tx_gain = 1.0;             // DP amplitude scale on top of free-space lambda / (4 pi d)
    double ris_illumination = 1.0;    // RP amplitude scale on top of lambda^2 / ((4 pi)^2 d1 d2)
    ClutterParams clutter;
    double snr_db = 30.0;             // per-entry SNR of the perfectly steered DP at UE1
    std::optional<double> noise_sigma; // overrides snr_db when set
};

// Geometric DP or RP component for one UE.
PathComponent geometric_path(const ChannelModel &model, const ScenePlan &scene, const SynthConfig &cfg,
                             const PathSpec &path, std::size_t ue_index);

// Noise standard deviation implied by cfg (snr_db relative to the steered DP at UE1 unless overridden).
double noise_sigma_for(const ChannelModel &model, const ScenePlan &scene, const SynthConfig &cfg);

struct SweepRole
{
    enum class Kind
    {
        BsScanRisOff,
        RisScan
    };
    Kind kind = Kind::BsScanRisOff;
    std::size_t ris_index = 0;       // RisScan only
    double bs_pointing_deg = 0.0;    // RisScan only: static BS beam

    static SweepRole bs_scan() { return {}; }
    static SweepRole ris_scan(std::size_t ris, double bs_pointing) { return {Kind::RisScan, ris, bs_pointing}; }

    std::uint16_t tag() const;
};

// Stream seed for (campaign seed, stream kind, a, b, c), splitmix64-mixed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t kind, std::uint64_t a = 0, std::uint64_t b = 0,
                          std::uint64_t c = 0);

constexpr std::uint64_t kStreamClutter = 1;
constexpr std::uint64_t kStreamNoise = 2;
constexpr std::uint64_t kStreamInit = 3;

// Acquisitions for every pointing angle of the sweep. Clutter is drawn once per UE and
// shared by all roles and angles; noise uses one stream per (role, angle, UE).
std::vector<ChannelTensor> run_sweep(const ChannelModel &model, const ScenePlan &scene, const SweepPlan &sweep,
                                     const SweepRole &role, std::size_t ue_index, const SynthConfig &cfg,
                                     std::uint64_t seed);

} // namespace risloc

#endif
