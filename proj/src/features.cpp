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

#include "risloc/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace risloc
{

void SweepSeries::validate() const
{
    if (overall_gain_db.size() != pointing_deg.size() || isolated.size() != pointing_deg.size())
        throw std::invalid_argument("sweep series columns differ in length");
    for (std::size_t i = 1; i < pointing_deg.size(); ++i)
        if (!(pointing_deg[i] > pointing_deg[i - 1]))
            throw std::invalid_argument("sweep angles must be strictly increasing");
}

std::optional<MpcEstimate> isolate_mpc(std::span<const MpcEstimate> mpcs, double expected_distance,
                                       double expected_aoa_deg, const IsolationWindow &window)
{
    std::optional<MpcEstimate> best;
    for (const auto &m : mpcs)
    {
        if (std::abs(m.ota_distance - expected_distance) > window.distance_m)
            continue;
        if (std::abs(wrap180(m.aoa_deg - expected_aoa_deg)) > window.aoa_deg)
            continue;
        if (!best || m.power_db > best->power_db)
            best = m;
    }
    return best;
}

namespace
{

// Ranks by score (descending); ties go to the smaller |angle|, then to the positive side.
AodCandidates rank_top3(std::span<const double> angles, std::span<const double> score)
{
    std::vector<std::size_t> idx(angles.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        if (score[i] != score[j])
            return score[i] > score[j];
        if (std::abs(angles[i]) != std::abs(angles[j]))
            return std::abs(angles[i]) < std::abs(angles[j]);
        return angles[i] > angles[j];
    });
    AodCandidates out;
    for (std::size_t r = 0; r < std::min<std::size_t>(3, idx.size()); ++r)
        out.top3.push_back(angles[idx[r]]);
    out.top1 = out.top3.front();
    return out;
}

} // namespace

AodCandidates coarse_aod(const SweepSeries &series)
{
    series.validate();
    if (series.pointing_deg.empty())
        throw std::invalid_argument("coarse AoD of an empty sweep");
    return rank_top3(series.pointing_deg, series.overall_gain_db);
}

AodCandidates fine_aod(const SweepSeries &series)
{
    series.validate();
    std::vector<double> score(series.pointing_deg.size(), -std::numeric_limits<double>::infinity());
    bool any = false;
    for (std::size_t i = 0; i < score.size(); ++i)
        if (series.isolated[i])
        {
            score[i] = series.isolated[i]->power_db;
            any = true;
        }
    if (!any)
        throw UnobservablePath("no isolated MPC at any pointing angle");
    return rank_top3(series.pointing_deg, score);
}

double best_candidate(std::span<const double> candidates, double ground_truth_deg)
{
    if (candidates.empty())
        throw std::invalid_argument("no AoD candidates");
    double best = candidates.front();
    double best_err = std::abs(wrap180(best - ground_truth_deg));
    for (double c : candidates.subspan(1))
    {
        const double err = std::abs(wrap180(c - ground_truth_deg));
        if (err < best_err || (err == best_err && std::abs(c) < std::abs(best)))
        {
            best = c;
            best_err = err;
        }
    }
    return best;
}

double path_distance_estimate(const SweepSeries &series, double pointing_deg)
{
    series.validate();
    for (std::size_t i = 0; i < series.pointing_deg.size(); ++i)
        if (series.pointing_deg[i] == pointing_deg)
        {
            if (!series.isolated[i])
                throw UnobservablePath("no isolated MPC at the selected pointing angle");
            return series.isolated[i]->ota_distance;
        }
    throw std::invalid_argument("pointing angle is not part of the sweep");
}

double AnchorFeatures::aod(bool fine_method, bool genie) const
{
    if (!fine_method)
        return genie ? coarse_best_deg : coarse.top1;
    if (!fine)
        throw UnobservablePath(anchor + " path was never isolated");
    return genie ? *fine_best_deg : fine->top1;
}

SweepSeries make_series(std::span<const double> pointing_deg, std::span<const double> overall_gain_db,
                        std::span<const std::vector<MpcEstimate>> mpcs, double expected_distance,
                        double expected_aoa_deg, const IsolationWindow &window)
{
    if (mpcs.size() != pointing_deg.size())
        throw std::invalid_argument("one MPC list per pointing angle expected");
    SweepSeries s;
    s.pointing_deg.assign(pointing_deg.begin(), pointing_deg.end());
    s.overall_gain_db.assign(overall_gain_db.begin(), overall_gain_db.end());
    for (const auto &list : mpcs)
        s.isolated.push_back(isolate_mpc(list, expected_distance, expected_aoa_deg, window));
    s.validate();
    return s;
}

AnchorFeatures anchor_features(const std::string &name, const SweepSeries &series, double gt_aod_deg,
                               double gt_distance_m, double anchor_ue_distance_m)
{
    AnchorFeatures f;
    f.anchor = name;
    f.gt_aod_deg = gt_aod_deg;
    f.gt_distance_m = gt_distance_m;
    f.anchor_ue_distance_m = anchor_ue_distance_m;
    f.coarse = coarse_aod(series);
    f.coarse_best_deg = best_candidate(f.coarse.top3, gt_aod_deg);
    try
    {
        f.fine = fine_aod(series);
    }
    catch (const UnobservablePath &)
    {
        return f;
    }
    f.fine_best_deg = best_candidate(f.fine->top3, gt_aod_deg);
    for (std::size_t i = 0; i < series.pointing_deg.size(); ++i)
        if (series.pointing_deg[i] == f.fine->top1 && series.isolated[i])
        {
            f.path_distance_m = series.isolated[i]->ota_distance;
            f.path_aoa_deg = series.isolated[i]->aoa_deg;
        }
    return f;
}

} // namespace risloc
