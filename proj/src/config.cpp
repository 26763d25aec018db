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

#include "risloc/config.hpp"

#include "json.hpp"

#include <fstream>

namespace risloc
{

using nlohmann::json;

namespace
{

json read_json(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open " + path.string());
    try
    {
        return json::parse(in);
    }
    catch (const json::exception &e)
    {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

template <typename T>
T get_or(const json &j, const char *key, T fallback)
{
    if (!j.contains(key) || j.at(key).is_null())
        return fallback;
    return j.at(key).get<T>();
}

AnchorPose parse_pose(const json &j, AnchorKind kind, const std::string &fallback_name)
{
    AnchorPose p;
    p.kind = kind;
    p.position = {j.at("x").get<double>(), j.at("y").get<double>()};
    p.boresight_deg = j.at("boresight_deg").get<double>();
    p.name = get_or<std::string>(j, "name", fallback_name);
    return p;
}

ScenePlan parse_scene(const json &j)
{
    ScenePlan s;
    const auto &room = j.at("room");
    s.room = {room.at("x_min").get<double>(), room.at("x_max").get<double>(), room.at("y_min").get<double>(),
              room.at("y_max").get<double>()};
    s.bs = parse_pose(j.at("bs"), AnchorKind::BS, "BS");
    if (j.contains("ris"))
    {
        std::size_t k = 0;
        for (const auto &r : j.at("ris"))
        {
            s.ris_list.push_back(parse_pose(r, AnchorKind::RIS, "RIS" + std::to_string(++k)));
            s.bs_illumination_deg.push_back(r.at("bs_illumination_deg").get<double>());
        }
    }
    bool any_orientation = false;
    for (const auto &u : j.at("ues"))
    {
        s.ue_truths.push_back({u.at("x").get<double>(), u.at("y").get<double>()});
        s.ue_array_orientation_deg.push_back(get_or<double>(u, "array_orientation_deg", 0.0));
        any_orientation = any_orientation || u.contains("array_orientation_deg");
    }
    if (!any_orientation)
        s.ue_array_orientation_deg.clear();
    s.validate();
    return s;
}

} // namespace

ScenePlan load_scene(const std::filesystem::path &path)
{
    const json j = read_json(path);
    try
    {
        return parse_scene(j);
    }
    catch (const json::exception &e)
    {
        throw ConfigError(path.string() + ": " + e.what());
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

CampaignConfig load_config(const std::filesystem::path &path)
{
    const json j = read_json(path);
    CampaignConfig c;
    try
    {
        if (!j.contains("scene_file"))
            throw ConfigError(path.string() + ": missing 'scene_file'");
        c.scene_file = path.parent_path() / j.at("scene_file").get<std::string>();
        if (!std::filesystem::exists(c.scene_file))
            throw ConfigError("scene file " + c.scene_file.string() + " does not exist");
        c.scene = load_scene(c.scene_file);

        if (!j.contains("seed"))
            throw ConfigError(path.string() + ": the campaign seed must be explicit");
        c.seed = j.at("seed").get<std::uint64_t>();
        c.output_dir = get_or<std::string>(j, "output_dir", "out");

        const json band = get_or<json>(j, "band", json::object());
        c.model.grid.f_start = get_or(band, "f_start_hz", c.model.grid.f_start);
        c.model.grid.f_stop = get_or(band, "f_stop_hz", c.model.grid.f_stop);
        c.model.grid.f_step = get_or(band, "f_step_hz", c.model.grid.f_step);
        c.model.grid.carrier = get_or(band, "carrier_hz", c.model.grid.carrier);

        const json sweep = get_or<json>(j, "sweep", json::object());
        c.sweep.start_deg = get_or(sweep, "start_deg", c.sweep.start_deg);
        c.sweep.stop_deg = get_or(sweep, "stop_deg", c.sweep.stop_deg);
        c.sweep.step_deg = get_or(sweep, "step_deg", c.sweep.step_deg);

        const json arrays = get_or<json>(j, "arrays", json::object());
        const double lambda = kSpeedOfLight / c.model.grid.carrier;
        const double el = get_or(arrays, "element_spacing_wavelengths", 0.5) * lambda;
        const double rx = get_or(arrays, "rx_spacing_wavelengths", 0.5) * lambda;
        c.model.bs_array = {get_or<std::size_t>(arrays, "bs_elements", 32), el, rx};
        c.model.ris_array = {get_or<std::size_t>(arrays, "ris_elements", 32), el, rx};

        const json syn = get_or<json>(j, "synthesis", json::object());
        c.synth.tx_gain = get_or(syn, "tx_gain", c.synth.tx_gain);
        c.synth.ris_illumination = get_or(syn, "ris_illumination", c.synth.ris_illumination);
        c.synth.snr_db = get_or(syn, "snr_db", c.synth.snr_db);
        if (syn.contains("noise_sigma") && !syn.at("noise_sigma").is_null())
            c.synth.noise_sigma = syn.at("noise_sigma").get<double>();
        const json clutter = get_or<json>(syn, "clutter", json::object());
        c.synth.clutter.count = get_or(clutter, "count", c.synth.clutter.count);
        c.synth.clutter.gain = get_or(clutter, "gain", c.synth.clutter.gain);
        c.synth.clutter.exponent = get_or(clutter, "exponent", c.synth.clutter.exponent);
        c.synth.clutter.jitter_db = get_or(clutter, "jitter_db", c.synth.clutter.jitter_db);

        const json sage = get_or<json>(j, "sage", json::object());
        c.sage.max_mpcs = get_or(sage, "max_mpcs", c.sage.max_mpcs);
        c.sage.energy_fraction = get_or(sage, "energy_fraction", c.sage.energy_fraction);
        c.sage.subband_start = get_or(sage, "subband_start_hz", c.sage.subband_start);
        c.sage.subband_stop = get_or(sage, "subband_stop_hz", c.sage.subband_stop);
        c.sage.delay_grid_step = get_or(sage, "delay_grid_step_s", c.sage.delay_grid_step);
        c.sage.angle_grid_step = get_or(sage, "angle_grid_step_deg", c.sage.angle_grid_step);
        c.sage.polish_rounds = get_or(sage, "polish_rounds", c.sage.polish_rounds);
        c.sage.refinement_iters = get_or(sage, "refinement_iters", c.sage.refinement_iters);
        c.sage.convergence_eps = get_or(sage, "convergence_eps", c.sage.convergence_eps);
        c.sage.rx_spacing = rx;
        c.sage.carrier = c.model.grid.carrier;

        const json iso = get_or<json>(j, "isolation", json::object());
        c.isolation.distance_m = get_or(iso, "distance_m", c.isolation.distance_m);
        c.isolation.aoa_deg = get_or(iso, "aoa_deg", c.isolation.aoa_deg);

        const json pos = get_or<json>(j, "positioning", json::object());
        if (pos.contains("scenarios"))
        {
            c.scenarios.clear();
            for (const auto &s : pos.at("scenarios"))
                c.scenarios.push_back(parse_scenario(s.get<std::string>()));
        }
        auto &po = c.positioning;
        po.measurement.genie = get_or(pos, "genie", po.measurement.genie);
        po.measurement.angle_weight = get_or(pos, "angle_weight", po.measurement.angle_weight);
        po.measurement.distance_weight = get_or(pos, "distance_weight", po.measurement.distance_weight);
        po.starts = get_or(pos, "starts", po.starts);
        po.solver.max_iterations = get_or(pos, "max_iterations", po.solver.max_iterations);
        po.solver.step_tolerance = get_or(pos, "step_tolerance_m", po.solver.step_tolerance);
        po.solver.fd_step = get_or(pos, "fd_step_m", po.solver.fd_step);

        const json ev = get_or<json>(j, "evaluation", json::object());
        c.significance_threshold = get_or(ev, "threshold", c.significance_threshold);
        const std::string alt = get_or<std::string>(ev, "alternative", "two-sided");
        if (alt == "two-sided")
            c.alternative = Alternative::TwoSided;
        else if (alt == "greater")
            c.alternative = Alternative::Greater;
        else
            throw ConfigError("evaluation.alternative must be 'two-sided' or 'greater'");
    }
    catch (const json::exception &e)
    {
        throw ConfigError(path.string() + ": " + e.what());
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(path.string() + ": " + e.what());
    }
    c.validate();
    return c;
}

void CampaignConfig::validate() const
{
    try
    {
        scene.validate();
        sweep.validate();
        model.grid.validate();
        model.bs_array.validate();
        model.ris_array.validate();
        sage.validate();
        for (double a : sweep.angles())
            if (!(std::abs(a) < 90.0))
                throw std::invalid_argument("sweep angles must stay inside (-90, 90) deg");
        if (sage.subband_start < model.grid.f_start || sage.subband_stop > model.grid.f_stop)
            throw std::invalid_argument("SAGE sub-band lies outside the frequency grid");
        if (!(isolation.distance_m > 0.0 && isolation.aoa_deg > 0.0))
            throw std::invalid_argument("isolation tolerances must be positive");
        if (scenarios.empty())
            throw std::invalid_argument("no scenarios selected");
        if (!(significance_threshold > 0.0 && significance_threshold < 1.0))
            throw std::invalid_argument("significance threshold must lie in (0, 1)");
        if (!(synth.snr_db == synth.snr_db) || (synth.noise_sigma && *synth.noise_sigma < 0.0))
            throw std::invalid_argument("noise settings are malformed");
        for (double b : scene.bs_illumination_deg)
            if (!(std::abs(b) < 90.0))
                throw std::invalid_argument("BS illumination angles must stay inside (-90, 90) deg");
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
}

} // namespace risloc
