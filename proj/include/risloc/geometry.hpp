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

#ifndef RISLOC_GEOMETRY_HPP
#define RISLOC_GEOMETRY_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace risloc
{

constexpr double kPi = 3.14159265358979323846;
constexpr double kSpeedOfLight = 299792458.0; // m/s

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Wraps an angle in degrees to the half-open interval (-180, 180].
double wrap180(double deg);

struct Point2D
{
    double x = 0.0; // meters
    double y = 0.0; // meters

    Point2D operator+(const Point2D &o) const { return {x + o.x, y + o.y}; }
    Point2D operator-(const Point2D &o) const { return {x - o.x, y - o.y}; }
    Point2D operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Point2D &o) const = default;
};

double norm(const Point2D &v);
double distance(const Point2D &a, const Point2D &b);

// Axis-aligned room rectangle in meters.
struct Room
{
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;

    bool contains(const Point2D &p) const
    {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
};

enum class AnchorKind
{
    BS,
    RIS
};

// Anchor pose. The boresight is the world-frame direction of the array normal
// (degrees, anticlockwise from +x). Departure angles are measured from it,
// positive anticlockwise.
struct AnchorPose
{
    Point2D position;
    double boresight_deg = 0.0;
    AnchorKind kind = AnchorKind::BS;
    std::string name;
};

struct SweepPlan
{
    double start_deg = -60.0;
    double stop_deg = 60.0;
    double step_deg = 5.0;

    // Throws std::invalid_argument on step <= 0 or a span that is not a whole number of steps.
    void validate() const;
    std::vector<double> angles() const;
};

enum class PathKind
{
    DP,
    RP
};

struct PathSpec
{
    PathKind kind = PathKind::DP;
    std::optional<std::size_t> via_ris; // required iff kind == RP

    static PathSpec direct() { return {PathKind::DP, std::nullopt}; }
    static PathSpec reflected(std::size_t ris) { return {PathKind::RP, ris}; }
};

struct ScenePlan
{
    AnchorPose bs;
    std::vector<AnchorPose> ris_list;
    std::vector<Point2D> ue_truths;
    std::vector<double> ue_array_orientation_deg; // per UE, empty means all 0
    std::vector<double> bs_illumination_deg;      // static BS pointing used during each RIS scan
    Room room;

    // Throws std::invalid_argument when UEs fall outside the room or poses are malformed.
    void validate() const;

    const AnchorPose &ris(std::size_t index) const;
    double ue_orientation(std::size_t ue_index) const;
};

// Departure angle of `target` seen from `pose`, in the anchor frame, wrapped to (-180, 180].
// Throws std::domain_error when target coincides with the anchor.
double bearing_from_anchor(const AnchorPose &pose, const Point2D &target);

// Over-the-air travelled distance of a geometric path.
// DP: |bs - ue|. RP: |bs - ris| + |ris - ue|.
double ota_distance(const ScenePlan &scene, const PathSpec &path, const Point2D &ue);

// Arrival angle of the last path segment at the UE, expressed in the UE array frame.
// The angle points from the UE toward where the wave comes from.
double aoa_at_ue(const ScenePlan &scene, const PathSpec &path, const Point2D &ue, double ue_array_orientation_deg);

// Point the path departs from towards the UE (BS for DP, RIS for RP).
const AnchorPose &departure_anchor(const ScenePlan &scene, const PathSpec &path);

} // namespace risloc

#endif
