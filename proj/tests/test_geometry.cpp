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

#include "risloc/geometry.hpp"
#include "support.hpp"

#include <cmath>
#include <random>

// Covered tests:
// - Angle wrapping
// - Bearings in the anchor frame, anticlockwise convention
// - OTA distances of direct and reflected paths
// - AoA at the UE
// - Default scene ground truth
// - Sweep plan and scene validation

using namespace risloc;
using Catch::Approx;

TEST_CASE("Geometry - wrap180")
{
    CHECK(wrap180(0.0) == 0.0);
    CHECK(wrap180(180.0) == 180.0);
    CHECK(wrap180(-180.0) == 180.0);
    CHECK(wrap180(540.0) == 180.0);
    CHECK(wrap180(190.0) == Approx(-170.0));
    CHECK(wrap180(-190.0) == Approx(170.0));
    CHECK(wrap180(720.0 + 33.0) == Approx(33.0));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5000.0, 5000.0);
    for (int i = 0; i < 2000; ++i)
    {
        const double a = u(rng);
        const double w = wrap180(a);
        CHECK(w > -180.0);
        CHECK(w <= 180.0);
        CHECK(wrap180(w) == w);
        // Same direction as the input
        CHECK(std::abs(std::remainder(a - w, 360.0)) < 1e-9);
    }
}

TEST_CASE("Geometry - Bearing from anchor")
{
    AnchorPose p{{0.0, 0.0}, 0.0, AnchorKind::BS, "A"};
    CHECK(bearing_from_anchor(p, {1.0, 0.0}) == Approx(0.0).margin(1e-12));
    CHECK(bearing_from_anchor(p, {0.0, 1.0}) == Approx(90.0));
    CHECK(bearing_from_anchor(p, {0.0, -1.0}) == Approx(-90.0));
    CHECK(bearing_from_anchor(p, {-1.0, 0.0}) == 180.0);
    CHECK_THROWS_AS(bearing_from_anchor(p, {0.0, 0.0}), std::domain_error);

    // Anticlockwise sign for a small rotation off the normal
    const double eps = 1e-3;
    CHECK(bearing_from_anchor(p, {std::cos(deg2rad(eps)), std::sin(deg2rad(eps))}) == Approx(eps));

    // Rotation covariance
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10.0, 10.0), ang(-179.0, 179.0);
    for (int i = 0; i < 500; ++i)
    {
        AnchorPose a{{u(rng), u(rng)}, ang(rng), AnchorKind::RIS, "R"};
        const Point2D t{u(rng), u(rng)};
        const double delta = ang(rng);
        AnchorPose b = a;
        b.boresight_deg = wrap180(a.boresight_deg + delta);
        CHECK(test_support::angle_gap(bearing_from_anchor(b, t), bearing_from_anchor(a, t) - delta) < 1e-9);
    }
}

TEST_CASE("Geometry - OTA distance")
{
    ScenePlan s;
    s.bs = {{0.0, 0.0}, 0.0, AnchorKind::BS, "BS"};
    s.ris_list = {{{3.0, 0.0}, 180.0, AnchorKind::RIS, "RIS1"}};
    s.bs_illumination_deg = {0.0};
    s.room = {-10, 10, -10, 10};
    CHECK(ota_distance(s, PathSpec::direct(), {3.0, 4.0}) == Approx(5.0));
    CHECK(ota_distance(s, PathSpec::reflected(0), {3.0, 4.0}) == Approx(7.0));
    CHECK_THROWS(ota_distance(s, PathSpec::reflected(1), {3.0, 4.0}));

    // Triangle inequality, equality for a RIS between BS and UE
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-9.0, 9.0);
    for (int i = 0; i < 1000; ++i)
    {
        const Point2D ue{u(rng), u(rng)};
        CHECK(ota_distance(s, PathSpec::reflected(0), ue) >= ota_distance(s, PathSpec::direct(), ue) - 1e-12);
    }
    CHECK(ota_distance(s, PathSpec::reflected(0), {6.0, 0.0}) == Approx(ota_distance(s, PathSpec::direct(), {6.0, 0.0})));
}

TEST_CASE("Geometry - AoA at the UE")
{
    ScenePlan s;
    s.bs = {{0.0, 5.0}, -90.0, AnchorKind::BS, "BS"};
    s.ris_list = {{{-1.0, 0.0}, 0.0, AnchorKind::RIS, "RIS1"}};
    s.bs_illumination_deg = {0.0};
    s.room = {-10, 10, -10, 10};
    CHECK(aoa_at_ue(s, PathSpec::direct(), {0.0, 0.0}, 0.0) == Approx(90.0));
    CHECK(aoa_at_ue(s, PathSpec::reflected(0), {0.0, 0.0}, 0.0) == 180.0);
    // A rotated UE array sees the same wave rotated the other way
    CHECK(aoa_at_ue(s, PathSpec::direct(), {0.0, 0.0}, 30.0) == Approx(60.0));
}

TEST_CASE("Geometry - Default scene ground truth")
{
    const auto cfg = test_support::default_config();
    const auto &s = cfg.scene;
    REQUIRE(s.ue_truths.size() == 5);
    REQUIRE(s.ris_list.size() == 2);

    CHECK(bearing_from_anchor(s.bs, s.ue_truths[0]) == Approx(32.0).margin(0.5));
    CHECK(bearing_from_anchor(s.ris(0), s.ue_truths[0]) == Approx(24.6).margin(0.05));
    CHECK(bearing_from_anchor(s.ris(1), s.ue_truths[0]) == Approx(31.9).margin(0.05));

    const double d1[] = {3.37, 3.12, 4.02, 5.69, 7.53};
    const double d2[] = {4.41, 2.51, 1.04, 3.01, 5.01};
    for (std::size_t u = 0; u < 5; ++u)
    {
        CHECK(distance(s.ris(0).position, s.ue_truths[u]) == Approx(d1[u]).margin(0.006));
        CHECK(distance(s.ris(1).position, s.ue_truths[u]) == Approx(d2[u]).margin(0.006));
        CHECK(s.room.contains(s.ue_truths[u]));
    }
    // Fixed UE coordinates
    CHECK(s.ue_truths[0] == Point2D{7.06, 10.00});
    CHECK(s.ue_truths[3] == Point2D{9.06, 5.99});

    // RIS1 leg to UE1
    CHECK(ota_distance(s, PathSpec::reflected(0), s.ue_truths[0]) - distance(s.bs.position, s.ris(0).position) ==
          Approx(3.37).margin(0.005));

    // DP and RP1 arrive from clearly different directions at UE1
    CHECK(test_support::angle_gap(aoa_at_ue(s, PathSpec::direct(), s.ue_truths[0], 0.0),
                                  aoa_at_ue(s, PathSpec::reflected(0), s.ue_truths[0], 0.0)) > 30.0);
}

TEST_CASE("Geometry - Sweep plan")
{
    SweepPlan p;
    const auto a = p.angles();
    REQUIRE(a.size() == 25);
    CHECK(a.front() == -60.0);
    CHECK(a.back() == 60.0);
    CHECK(a[13] == 5.0);

    CHECK_THROWS_AS((SweepPlan{-60, 60, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SweepPlan{-60, 60, 7}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SweepPlan{60, -60, 5}.validate()), std::invalid_argument);
    CHECK(SweepPlan{0, 0, 1}.angles().size() == 1);
}

TEST_CASE("Geometry - Scene validation")
{
    auto s = test_support::default_config().scene;
    CHECK_NOTHROW(s.validate());
    auto bad = s;
    bad.ue_truths.push_back({100.0, 100.0});
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.bs_illumination_deg.pop_back();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.ue_truths.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
