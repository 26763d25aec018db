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

#include "risloc/positioning.hpp"

#include "risloc/channel.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace risloc
{

namespace
{

constexpr std::array<std::string_view, 11> kScenarioNames = {"0",  "1a", "1b", "1c", "1d", "2a",
                                                             "2b", "2c", "2d", "2e", "2f"};

enum class Metric
{
    AodCoarse,
    AodFine,
    Distance
};

struct MetricRef
{
    Metric metric;
    std::size_t anchor; // 0 = BS / DP, k = RIS k / RP k
};

std::vector<MetricRef> scenario_metrics(ScenarioId id)
{
    using M = Metric;
    switch (id)
    {
    case ScenarioId::S0:
        return {{M::AodFine, 0}, {M::Distance, 0}};
    case ScenarioId::S1a:
        return {{M::AodCoarse, 0}, {M::AodCoarse, 1}};
    case ScenarioId::S1b:
        return {{M::AodCoarse, 0}, {M::AodCoarse, 2}};
    case ScenarioId::S1c:
        return {{M::AodCoarse, 0}, {M::AodCoarse, 1}, {M::AodCoarse, 2}};
    case ScenarioId::S1d:
        return {{M::AodCoarse, 1}, {M::AodCoarse, 2}};
    case ScenarioId::S2a:
        return {{M::AodFine, 0}, {M::Distance, 0}, {M::AodFine, 1}, {M::Distance, 1}};
    case ScenarioId::S2b:
        return {{M::AodFine, 0}, {M::Distance, 0}, {M::AodFine, 2}, {M::Distance, 2}};
    case ScenarioId::S2c:
        return {{M::AodFine, 0}, {M::Distance, 0}, {M::AodFine, 1},
                {M::Distance, 1}, {M::AodFine, 2}, {M::Distance, 2}};
    case ScenarioId::S2d:
        return {{M::AodFine, 1}, {M::Distance, 1}};
    case ScenarioId::S2e:
        return {{M::AodFine, 2}, {M::Distance, 2}};
    case ScenarioId::S2f:
        return {{M::AodFine, 1}, {M::Distance, 1}, {M::AodFine, 2}, {M::Distance, 2}};
    }
    throw std::invalid_argument("unknown scenario");
}

std::string metric_name(const MetricRef &m)
{
    const std::string who = m.anchor == 0 ? "BS" : "RIS" + std::to_string(m.anchor);
    switch (m.metric)
    {
    case Metric::AodCoarse:
        return "coarse AoD of " + who;
    case Metric::AodFine:
        return "fine AoD of " + who;
    case Metric::Distance:
        return m.anchor == 0 ? std::string("DP distance") : "RP" + std::to_string(m.anchor) + " distance";
    }
    return "metric";
}

} // namespace

std::string to_string(ScenarioId id)
{
    return std::string(kScenarioNames[static_cast<std::size_t>(id)]);
}

ScenarioId parse_scenario(std::string_view text)
{
    for (std::size_t i = 0; i < kScenarioNames.size(); ++i)
        if (kScenarioNames[i] == text)
            return kAllScenarios[i];
    throw std::invalid_argument("unknown scenario id '" + std::string(text) + "'");
}

std::vector<RadioMeasurement> build_measurements(ScenarioId scenario, const FeatureSet &features,
                                                 const MeasurementOptions &options)
{
    std::vector<RadioMeasurement> out;
    for (const auto &m : scenario_metrics(scenario))
    {
        auto missing = [&]() {
            return MissingMetric("scenario " + to_string(scenario) + " needs the " + metric_name(m) + " of UE" +
                                 std::to_string(features.ue_index + 1) + ", which is unavailable");
        };
        if (m.anchor > features.ris.size())
            throw missing();
        const AnchorFeatures &af = m.anchor == 0 ? features.bs : features.ris[m.anchor - 1];

        RadioMeasurement r;
        if (m.metric == Metric::Distance)
        {
            if (!af.path_distance_m)
                throw missing();
            r.kind = RadioMeasurement::Kind::Distance;
            r.value = *af.path_distance_m;
            r.path = m.anchor == 0 ? PathSpec::direct() : PathSpec::reflected(m.anchor - 1);
            r.weight = options.distance_weight;
        }
        else
        {
            const bool fine = m.metric == Metric::AodFine;
            if (fine && !af.fine)
                throw missing();
            r.kind = RadioMeasurement::Kind::AoD;
            r.value = af.aod(fine, options.genie);
            r.anchor = m.anchor;
            r.weight = options.angle_weight;
        }
        out.push_back(r);
    }
    return out;
}

std::vector<double> residuals(std::span<const RadioMeasurement> measurements, const Point2D &p, const ScenePlan &scene)
{
    std::vector<double> r;
    r.reserve(measurements.size());
    for (const auto &m : measurements)
    {
        if (m.kind == RadioMeasurement::Kind::AoD)
        {
            const AnchorPose &pose = m.anchor == 0 ? scene.bs : scene.ris(m.anchor - 1);
            if (p == pose.position)
            {
                r.push_back(kCoincidentPenalty * m.weight);
                continue;
            }
            r.push_back(deg2rad(wrap180(bearing_from_anchor(pose, p) - m.value)) * m.weight);
        }
        else
        {
            r.push_back((ota_distance(scene, m.path, p) - m.value) * m.weight);
        }
    }
    return r;
}

double objective(std::span<const RadioMeasurement> measurements, const Point2D &p, const ScenePlan &scene)
{
    double f = 0.0;
    for (double v : residuals(measurements, p, scene))
        f += v * v;
    return f;
}

LsSolution solve_ls(const LsProblem &problem, const ScenePlan &scene)
{
    if (problem.measurements.size() < 2)
        throw std::invalid_argument("LS problem needs at least two scalar measurements");
    const auto &st = problem.settings;
    const auto &meas = problem.measurements;

    LsSolution sol;
    Point2D p = problem.init;
    std::vector<double> r = residuals(meas, p, scene);
    double f = 0.0;
    for (double v : r)
        f += v * v;
    sol.objective_trace.push_back(f);

    double lambda = st.initial_damping;
    const double h = st.fd_step;
    const std::size_t m = r.size();

    for (std::size_t it = 0; it < st.max_iterations; ++it)
    {
        sol.iterations = it + 1;
        if (f == 0.0)
        {
            sol.converged = true;
            break;
        }

        // Central-difference Jacobian, columns for x and y.
        const auto rxp = residuals(meas, {p.x + h, p.y}, scene);
        const auto rxm = residuals(meas, {p.x - h, p.y}, scene);
        const auto ryp = residuals(meas, {p.x, p.y + h}, scene);
        const auto rym = residuals(meas, {p.x, p.y - h}, scene);
        double a11 = 0.0, a12 = 0.0, a22 = 0.0, g1 = 0.0, g2 = 0.0;
        for (std::size_t i = 0; i < m; ++i)
        {
            const double jx = (rxp[i] - rxm[i]) / (2.0 * h);
            const double jy = (ryp[i] - rym[i]) / (2.0 * h);
            a11 += jx * jx;
            a12 += jx * jy;
            a22 += jy * jy;
            g1 += jx * r[i];
            g2 += jy * r[i];
        }

        bool accepted = false;
        bool tiny_step = false;
        while (lambda < 1e16)
        {
            const double d11 = a11 + lambda * std::max(a11, 1e-12);
            const double d22 = a22 + lambda * std::max(a22, 1e-12);
            const double det = d11 * d22 - a12 * a12;
            if (!(std::abs(det) > 0.0))
            {
                lambda *= 10.0;
                continue;
            }
            const double dx = -(d22 * g1 - a12 * g2) / det;
            const double dy = -(d11 * g2 - a12 * g1) / det;
            const double step = std::hypot(dx, dy);
            const Point2D trial{p.x + dx, p.y + dy};
            const auto rt = residuals(meas, trial, scene);
            double ft = 0.0;
            for (double v : rt)
                ft += v * v;
            if (std::isfinite(ft) && ft < f)
            {
                p = trial;
                r = rt;
                f = ft;
                sol.objective_trace.push_back(f);
                lambda = std::max(lambda * 0.1, 1e-12);
                accepted = true;
                tiny_step = step < st.step_tolerance;
                break;
            }
            if (step < st.step_tolerance)
            {
                tiny_step = true;
                break;
            }
            lambda *= 10.0;
        }
        if (tiny_step)
        {
            sol.converged = true;
            break;
        }
        if (!accepted)
            break;
    }

    sol.estimate = p;
    sol.objective = f;
    sol.in_room = problem.room.contains(p);
    return sol;
}

std::vector<Point2D> initial_guesses(const ScenePlan &scene, std::size_t ue_index, std::size_t starts,
                                     std::uint64_t seed)
{
    std::mt19937_64 rng(derive_seed(seed, kStreamInit, ue_index));
    std::uniform_real_distribution<double> ux(scene.room.x_min, scene.room.x_max);
    std::uniform_real_distribution<double> uy(scene.room.y_min, scene.room.y_max);
    std::vector<Point2D> out;
    for (std::size_t i = 0; i < std::max<std::size_t>(starts, 1); ++i)
    {
        const double x = ux(rng);
        const double y = uy(rng);
        out.push_back({x, y});
    }
    return out;
}

std::vector<ScenarioResult> run_campaign(const ScenePlan &scene, std::span<const FeatureSet> features,
                                         std::span<const ScenarioId> scenarios, std::uint64_t seed,
                                         const CampaignOptions &options)
{
    std::vector<std::vector<Point2D>> inits;
    for (const auto &fs : features)
        inits.push_back(initial_guesses(scene, fs.ue_index, options.starts, seed));

    std::vector<ScenarioResult> out;
    out.reserve(scenarios.size() * features.size());
    for (ScenarioId sc : scenarios)
    {
        for (std::size_t u = 0; u < features.size(); ++u)
        {
            const FeatureSet &fs = features[u];
            ScenarioResult res;
            res.scenario = sc;
            res.ue_index = fs.ue_index;
            try
            {
                LsProblem prob;
                prob.measurements = build_measurements(sc, fs, options.measurement);
                prob.room = scene.room;
                prob.settings = options.solver;
                LsSolution best;
                best.objective = std::numeric_limits<double>::infinity();
                for (const auto &init : inits[u])
                {
                    prob.init = init;
                    LsSolution s = solve_ls(prob, scene);
                    if (s.objective < best.objective)
                        best = std::move(s);
                }
                res.estimate = best.estimate;
                res.objective = best.objective;
                res.iterations = best.iterations;
                res.converged = best.converged;
                res.in_room = best.in_room;
                res.error = distance(best.estimate, scene.ue_truths.at(fs.ue_index));
            }
            catch (const std::exception &e)
            {
                res.failure = e.what();
                res.estimate = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
                res.error = std::numeric_limits<double>::quiet_NaN();
                res.objective = std::numeric_limits<double>::quiet_NaN();
            }
            out.push_back(std::move(res));
        }
    }
    return out;
}

} // namespace risloc
