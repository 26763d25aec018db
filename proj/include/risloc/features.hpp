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

#ifndef RISLOC_FEATURES_HPP
#define RISLOC_FEATURES_HPP

#include "risloc/sage.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace risloc
{

// Raised when a path never shows up in the isolation window over a whole sweep.
class UnobservablePath : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct IsolationWindow
{
    double distance_m = 1.0;
    double aoa_deg = 15.0;
};

struct SweepSeries
{
    std::vector<double> pointing_deg;
    std::vector<double> overall_gain_db;
    std::vector<std::optional<MpcEstimate>> isolated;

    // Equal lengths and strictly increasing angles, else std::invalid_argument.
    void validate() const;
};

struct AodCandidates
{
    double top1 = 0.0;
    std::vector<double> top3; // descending rank, top3[0] == top1
};

// Highest-power MPC inside the distance/AoA window around the expected path, if any.
std::optional<MpcEstimate> isolate_mpc(std::span<const MpcEstimate> mpcs, double expected_distance,
                                       double expected_aoa_deg, const IsolationWindow &window = {});

// Pointing angles of the three largest overall gains.
AodCandidates coarse_aod(const SweepSeries &series);

// Pointing angles of the three largest isolated-MPC powers. Angles without an isolated MPC
// rank below every angle that has one. Throws UnobservablePath if none has one.
AodCandidates fine_aod(const SweepSeries &series);

// Genie selection: the candidate closest to the ground truth.
double best_candidate(std::span<const double> candidates, double ground_truth_deg);

// OTA distance of the isolated MPC at `pointing_deg`. Throws UnobservablePath when missing.
double path_distance_estimate(const SweepSeries &series, double pointing_deg);

// Everything one anchor contributes for one UE.
struct AnchorFeatures
{
    std::string anchor; // "BS", "RIS1", ...
    double gt_aod_deg = 0.0;
    double gt_distance_m = 0.0; // OTA distance of the DP (BS) or RP (RIS)
    double anchor_ue_distance_m = 0.0;

    AodCandidates coarse;
    double coarse_best_deg = 0.0;

    std::optional<AodCandidates> fine; // empty when the path was never isolated
    std::optional<double> fine_best_deg;
    std::optional<double> path_distance_m;
    std::optional<double> path_aoa_deg;

    double aod(bool fine_method, bool genie) const;
};

struct FeatureSet
{
    std::size_t ue_index = 0;
    AnchorFeatures bs;
    std::vector<AnchorFeatures> ris;
};

// Builds one series from per-angle gains and MPC lists with genie isolation.
SweepSeries make_series(std::span<const double> pointing_deg, std::span<const double> overall_gain_db,
                        std::span<const std::vector<MpcEstimate>> mpcs, double expected_distance,
                        double expected_aoa_deg, const IsolationWindow &window);

// Coarse, fine and distance features of one anchor from its sweep series.
AnchorFeatures anchor_features(const std::string &name, const SweepSeries &series, double gt_aod_deg,
                               double gt_distance_m, double anchor_ue_distance_m);

} // namespace risloc

#endif
