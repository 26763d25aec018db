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

#ifndef RISLOC_SAGE_HPP
#define RISLOC_SAGE_HPP

#include "risloc/channel.hpp"

#include <vector>

namespace risloc
{

struct SageConfig
{
    std::size_t max_mpcs = 20;
    double energy_fraction = 0.99;
    double subband_start = 27.0e9; // Hz
    double subband_stop = 29.0e9;  // Hz
    double delay_grid_step = 0.0;  // seconds; 0 selects 1 / (2 * subband width)
    double angle_grid_step = 1.0;  // degrees
    std::size_t polish_rounds = 3;
    std::size_t refinement_iters = 10;
    double convergence_eps = 1e-4;
    double rx_spacing = 0.0;       // meters; must match the acquisition grid
    double carrier = 28.0e9;       // Hz; reference for the RX spatial phase

    void validate() const;
};

struct MpcEstimate
{
    double ota_distance = 0.0; // meters
    double aoa_deg = 0.0;      // (-180, 180]
    cd gain{0.0, 0.0};         // referenced to the first sub-band bin and the RX grid centroid
    double power_db = 0.0;     // 20 log10 |gain|
};

// Restricts a tensor to the bins inside [f_lo, f_hi]. Throws std::invalid_argument
// for a malformed interval or an empty intersection with the tensor grid.
ChannelTensor subband_select(const ChannelTensor &tensor, double f_lo, double f_hi);

// Mean channel power in dB over all entries of the tensor.
double overall_gain_db(const ChannelTensor &tensor);

// SAGE multipath extraction on the configured sub-band. Components are added one at
// a time by a coarse delay/AoA search on the residual, then all components are refined
// cyclically until the residual energy settles. Extraction stops once the modeled
// energy reaches energy_fraction of the total, or after max_mpcs components.
// Returned in descending power. An all-zero tensor yields an empty list.
std::vector<MpcEstimate> sage_extract(const ChannelTensor &tensor, const SageConfig &config);

// Noise-free tensor re-synthesized from estimates on the grid of `like`.
Eigen::MatrixXcd reconstruct(const std::vector<MpcEstimate> &mpcs, const FrequencyGrid &grid, double rx_spacing,
                             double carrier);

} // namespace risloc

#endif
