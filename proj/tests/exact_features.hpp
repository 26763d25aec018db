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

#ifndef RISLOC_TEST_EXACT_FEATURES_HPP
#define RISLOC_TEST_EXACT_FEATURES_HPP

#include "risloc/features.hpp"
#include "risloc/geometry.hpp"

#include <cmath>
#include <string>

namespace test_support
{

// Anchor features whose top-ranked coarse and fine AoDs equal `aod` and whose path distance equals `dist`.
// The other two candidates sit `spread` degrees to either side. With `quantum` > 0 the AoDs are rounded
// to that grid, like a pointing sweep would report them.
inline risloc::AnchorFeatures exact_anchor(const std::string &name, double aod, double dist, double spread = 30.0,
                                           double quantum = 0.0)
{
    const double q = quantum > 0.0 ? std::round(aod / quantum) * quantum : aod;
    risloc::AnchorFeatures f;
    f.anchor = name;
    f.gt_aod_deg = aod;
    f.gt_distance_m = dist;
    f.coarse.top1 = q;
    f.coarse.top3 = {q, q + spread, q - spread};
    f.coarse_best_deg = q;
    f.fine = f.coarse;
    f.fine_best_deg = q;
    f.path_distance_m = dist;
    f.path_aoa_deg = 0.0;
    return f;
}

// Error-free features of one UE for every anchor of the scene.
inline risloc::FeatureSet exact_features(const risloc::ScenePlan &scene, std::size_t ue, double quantum = 0.0)
{
    using namespace risloc;
    const Point2D p = scene.ue_truths.at(ue);
    FeatureSet fs;
    fs.ue_index = ue;
    fs.bs = exact_anchor("BS", bearing_from_anchor(scene.bs, p), ota_distance(scene, PathSpec::direct(), p), 30.0,
                         quantum);
    for (std::size_t k = 0; k < scene.ris_list.size(); ++k)
        fs.ris.push_back(exact_anchor("RIS" + std::to_string(k + 1), bearing_from_anchor(scene.ris(k), p),
                                      ota_distance(scene, PathSpec::reflected(k), p), 30.0, quantum));
    return fs;
}

} // namespace test_support

#endif
