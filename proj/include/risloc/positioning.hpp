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

#ifndef RISLOC_POSITIONING_HPP
#define RISLOC_POSITIONING_HPP

#include "risloc/features.hpp"
#include "risloc/geometry.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace risloc
{

// Positioning scenarios: which radio metrics feed the LS solver.
enum class ScenarioId
{
    S0,
    S1a,
    S1b,
    S1c,
    S1d,
    S2a,
    S2b,
    S2c,
    S2d,
    S2e,
    S2f
};

inline constexpr std::array<ScenarioId, 11> kAllScenarios = {
    ScenarioId::S0,  ScenarioId::S1a, ScenarioId::S1b, ScenarioId::S1c, ScenarioId::S1d, ScenarioId::S2a,
    ScenarioId::S2b, ScenarioId::S2c, ScenarioId::S2d, ScenarioId::S2e, ScenarioId::S2f};

std::string to_string(ScenarioId id);
// Throws std::invalid_argument for anything outside the closed set.
ScenarioId parse_scenario(std::string_view text);

// Raised when a scenario needs a metric that the feature set does not provide.
class MissingMetric : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

struct RadioMeasurement
{
    enum class Kind
    {
        AoD,
        Distance
    };
    Kind kind = Kind::AoD;
    double value = 0.0;       // degrees for AoD, meters for Distance
    std::size_t anchor = 0;   // AoD: 0 = BS, k = RIS k (1-based)
    PathSpec path;            // Distance: DP or RP via a RIS
    double weight = 1.0;      // per radian or per meter
};

struct MeasurementOptions
{
    bool genie = true; // best-of-3 AoD candidates instead of the top-ranked one
    double angle_weight = 1.0;
    double distance_weight = 1.0;
};

std::vector<RadioMeasurement> build_measurements(ScenarioId scenario, const FeatureSet &features,
                                                 const MeasurementOptions &options = {});

// Residual assigned to a measurement whose anchor coincides with the evaluation point.
constexpr double kCoincidentPenalty = 1.0e3;

// AoD residuals are wrapped angle differences in radians, distance residuals are in meters,
// both multiplied by the measurement weight.
std::vector<double> residuals(std::span<const RadioMeasurement> measurements, const Point2D &p,
                              const ScenePlan &scene);

double objective(std::span<const RadioMeasurement> measurements, const Point2D &p, const ScenePlan &scene);

struct SolverSettings
{
    std::size_t max_iterations = 100;
    double step_tolerance = 1e-6;  // meters
    double fd_step = 1e-3;         // meters, central differences
    double initial_damping = 1e-3;
};

struct LsProblem
{
    std::vector<RadioMeasurement> measurements;
    Room room;
    Point2D init;
    SolverSettings settings;
};

struct LsSolution
{
    Point2D estimate;
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    bool in_room = false;
    std::vector<double> objective_trace; // objective after the start and each accepted step
};

// Levenberg-Marquardt on the sum of squared residuals. The estimate is not clamped;
// in_room reports whether it landed inside the room.
LsSolution solve_ls(const LsProblem &problem, const ScenePlan &scene);

struct ScenarioResult
{
    ScenarioId scenario = ScenarioId::S0;
    std::size_t ue_index = 0;
    Point2D estimate;
    double error = 0.0;
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    bool in_room = false;
    std::string failure; // non-empty when the scenario could not be set up
};

struct CampaignOptions
{
    MeasurementOptions measurement;
    SolverSettings solver;
    std::size_t starts = 1; // random initial guesses per UE; the best objective wins
};

// Uniform initial guess in the room for one UE, shared by all scenarios.
std::vector<Point2D> initial_guesses(const ScenePlan &scene, std::size_t ue_index, std::size_t starts,
                                     std::uint64_t seed);

// Solves every (UE, scenario) pair. Results are ordered scenario-major.
std::vector<ScenarioResult> run_campaign(const ScenePlan &scene, std::span<const FeatureSet> features,
                                         std::span<const ScenarioId> scenarios, std::uint64_t seed,
                                         const CampaignOptions &options = {});

} // namespace risloc

#endif
