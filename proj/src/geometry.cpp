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

#include "risloc/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace risloc
{

double wrap180(double deg)
{
    double r = std::fmod(deg + 180.0, 360.0);
    if (r <= 0.0)
        r += 360.0;
    return r - 180.0;
}

double norm(const Point2D &v)
{
    return std::hypot(v.x, v.y);
}

double distance(const Point2D &a, const Point2D &b)
{
    return norm(a - b);
}

void SweepPlan::validate() const
{
    if (!(step_deg > 0.0))
        throw std::invalid_argument("sweep step must be positive");
    if (!(stop_deg >= start_deg))
        throw std::invalid_argument("sweep stop must not precede start");
    const double n = (stop_deg - start_deg) / step_deg;
    if (std::abs(n - std::round(n)) > 1e-9)
        throw std::invalid_argument("sweep span is not an integer multiple of the step");
}

std::vector<double> SweepPlan::angles() const
{
    validate();
    const auto n = static_cast<std::size_t>(std::llround((stop_deg - start_deg) / step_deg));
    std::vector<double> out(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        out[i] = start_deg + static_cast<double>(i) * step_deg;
    return out;
}

void ScenePlan::validate() const
{
    if (!(room.x_max > room.x_min && room.y_max > room.y_min))
        throw std::invalid_argument("room bounds are empty");
    if (ue_truths.empty())
        throw std::invalid_argument("scene needs at least one UE");
    for (std::size_t i = 0; i < ue_truths.size(); ++i)
    {
        const auto &u = ue_truths[i];
        if (!std::isfinite(u.x) || !std::isfinite(u.y))
            throw std::invalid_argument("UE" + std::to_string(i + 1) + " has non-finite coordinates");
        if (!room.contains(u))
            throw std::invalid_argument("UE" + std::to_string(i + 1) + " lies outside the room");
    }
    auto check_pose = [](const AnchorPose &p, const std::string &what) {
        if (!std::isfinite(p.position.x) || !std::isfinite(p.position.y))
            throw std::invalid_argument(what + " has non-finite coordinates");
        if (!(p.boresight_deg > -180.0 && p.boresight_deg <= 180.0))
            throw std::invalid_argument(what + " boresight must lie in (-180, 180]");
    };
    check_pose(bs, "BS");
    for (std::size_t k = 0; k < ris_list.size(); ++k)
        check_pose(ris_list[k], "RIS" + std::to_string(k + 1));
    if (!ue_array_orientation_deg.empty() && ue_array_orientation_deg.size() != ue_truths.size())
        throw std::invalid_argument("UE array orientation list must match the UE count");
    if (!bs_illumination_deg.empty() && bs_illumination_deg.size() != ris_list.size())
        throw std::invalid_argument("BS illumination list must match the RIS count");
}

const AnchorPose &ScenePlan::ris(std::size_t index) const
{
    if (index >= ris_list.size())
        throw std::out_of_range("RIS index " + std::to_string(index) + " out of range");
    return ris_list[index];
}

double ScenePlan::ue_orientation(std::size_t ue_index) const
{
    if (ue_array_orientation_deg.empty())
        return 0.0;
    return ue_array_orientation_deg.at(ue_index);
}

double bearing_from_anchor(const AnchorPose &pose, const Point2D &target)
{
    const Point2D d = target - pose.position;
    if (d.x == 0.0 && d.y == 0.0)
        throw std::domain_error("bearing undefined: target coincides with anchor");
    return wrap180(rad2deg(std::atan2(d.y, d.x)) - pose.boresight_deg);
}

const AnchorPose &departure_anchor(const ScenePlan &scene, const PathSpec &path)
{
    if (path.kind == PathKind::DP)
        return scene.bs;
    if (!path.via_ris)
        throw std::invalid_argument("reflected path needs a RIS index");
    return scene.ris(*path.via_ris);
}

double ota_distance(const ScenePlan &scene, const PathSpec &path, const Point2D &ue)
{
    if (path.kind == PathKind::DP)
        return distance(scene.bs.position, ue);
    const auto &ris = departure_anchor(scene, path);
    return distance(scene.bs.position, ris.position) + distance(ris.position, ue);
}

double aoa_at_ue(const ScenePlan &scene, const PathSpec &path, const Point2D &ue, double ue_array_orientation_deg)
{
    const Point2D d = departure_anchor(scene, path).position - ue;
    if (d.x == 0.0 && d.y == 0.0)
        throw std::domain_error("arrival angle undefined: UE coincides with the last scatterer");
    return wrap180(rad2deg(std::atan2(d.y, d.x)) - ue_array_orientation_deg);
}

} // namespace risloc
