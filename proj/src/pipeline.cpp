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

#include "risloc/pipeline.hpp"

#include "risloc/container.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

namespace risloc
{

namespace fs = std::filesystem;

std::vector<SweepRole> sweep_roles(const CampaignConfig &cfg)
{
    std::vector<SweepRole> roles{SweepRole::bs_scan()};
    for (std::size_t k = 0; k < cfg.scene.ris_list.size(); ++k)
        roles.push_back(SweepRole::ris_scan(k, cfg.scene.bs_illumination_deg.at(k)));
    return roles;
}

std::vector<ChannelTensor> synthesize_ue(const CampaignConfig &cfg, std::size_t ue_index)
{
    std::vector<ChannelTensor> out;
    for (const auto &role : sweep_roles(cfg))
    {
        auto part = run_sweep(cfg.model, cfg.scene, cfg.sweep, role, ue_index, cfg.synth, cfg.seed);
        std::move(part.begin(), part.end(), std::back_inserter(out));
    }
    return out;
}

Extraction extract(const ChannelTensor &tensor, const CampaignConfig &cfg, std::size_t ue_index)
{
    Extraction e;
    e.ue_index = ue_index;
    e.role_tag = tensor.meta.role_tag;
    e.pointing_deg = tensor.meta.pointing_deg;
    e.overall_gain_db = overall_gain_db(subband_select(tensor, cfg.sage.subband_start, cfg.sage.subband_stop));
    e.mpcs = sage_extract(tensor, cfg.sage);
    return e;
}

UeFeatures build_features(const CampaignConfig &cfg, std::size_t ue_index, std::span<const Extraction> items)
{
    const auto &scene = cfg.scene;
    const Point2D ue = scene.ue_truths.at(ue_index);
    const double orient = scene.ue_orientation(ue_index);
    const auto angles = cfg.sweep.angles();

    auto one = [&](std::uint16_t tag, const PathSpec &path, const std::string &name) {
        std::vector<double> gains(angles.size());
        std::vector<std::vector<MpcEstimate>> mpcs(angles.size());
        std::vector<bool> seen(angles.size(), false);
        for (const auto &e : items)
        {
            if (e.ue_index != ue_index || e.role_tag != tag)
                continue;
            const auto it = std::find(angles.begin(), angles.end(), e.pointing_deg);
            if (it == angles.end())
                throw std::invalid_argument(name + ": pointing angle outside the sweep plan");
            const auto i = static_cast<std::size_t>(it - angles.begin());
            gains[i] = e.overall_gain_db;
            mpcs[i] = e.mpcs;
            seen[i] = true;
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end())
            throw std::invalid_argument("UE" + std::to_string(ue_index + 1) + " " + name +
                                        ": sweep is incomplete");
        const double d_expected = ota_distance(scene, path, ue);
        const double aoa_expected = aoa_at_ue(scene, path, ue, orient);
        SeriesRecord rec{ue_index, name,
                         make_series(angles, gains, mpcs, d_expected, aoa_expected, cfg.isolation)};
        const AnchorPose &anchor = departure_anchor(scene, path);
        AnchorFeatures f = anchor_features(name, rec.series, bearing_from_anchor(anchor, ue), d_expected,
                                           distance(anchor.position, ue));
        return std::make_pair(std::move(f), std::move(rec));
    };

    UeFeatures out;
    out.features.ue_index = ue_index;
    auto [bs, bs_series] = one(0, PathSpec::direct(), "BS");
    out.features.bs = std::move(bs);
    out.series.push_back(std::move(bs_series));
    for (std::size_t k = 0; k < scene.ris_list.size(); ++k)
    {
        auto [f, s] = one(static_cast<std::uint16_t>(k + 1), PathSpec::reflected(k), "RIS" + std::to_string(k + 1));
        out.features.ris.push_back(std::move(f));
        out.series.push_back(std::move(s));
    }
    return out;
}

ErrorReport build_report(const CampaignConfig &cfg, const std::vector<ScenarioResult> &results)
{
    ErrorReport rep = make_report(errors_by_scenario(results));
    if (rep.rows.size() >= 2)
        rep = mark_significance(std::move(rep), cfg.significance_threshold, cfg.alternative);
    return rep;
}

CampaignRun run_in_memory(const CampaignConfig &cfg)
{
    CampaignRun run;
    for (std::size_t u = 0; u < cfg.scene.ue_truths.size(); ++u)
    {
        const std::size_t first = run.extractions.size();
        for (const auto &t : synthesize_ue(cfg, u))
            run.extractions.push_back(extract(t, cfg, u));
        auto uf = build_features(cfg, u, std::span(run.extractions).subspan(first));
        run.features.push_back(std::move(uf.features));
        std::move(uf.series.begin(), uf.series.end(), std::back_inserter(run.series));
    }
    run.results = run_campaign(cfg.scene, run.features, cfg.scenarios, cfg.seed, cfg.positioning);
    run.report = build_report(cfg, run.results);
    return run;
}

namespace
{

template <typename F>
auto guarded(const char *stage, F &&body)
{
    try
    {
        return body();
    }
    catch (const StageError &)
    {
        throw;
    }
    catch (const std::exception &e)
    {
        throw StageError(stage, e.what());
    }
}

void require(const fs::path &p)
{
    if (!fs::exists(p))
        throw std::runtime_error("missing input " + p.string() + " (run the previous stage first)");
}

std::string container_name(std::size_t ue, std::uint16_t role, std::size_t i)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "ue%zu_role%u_%02zu.risc", ue + 1, static_cast<unsigned>(role), i);
    return buf;
}

void write_text(const fs::path &p, const std::string &text)
{
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + p.string());
    out << text;
}

} // namespace

void stage_validate(const CampaignConfig &cfg)
{
    guarded("validate", [&] { cfg.validate(); });
}

void stage_synth(const CampaignConfig &cfg, const fs::path &out)
{
    guarded("synth", [&] {
        cfg.validate();
        const fs::path dir = out / "containers";
        fs::create_directories(dir);
        CsvTable index{{"file", "ue", "role", "pointing_deg"}, {}};
        const std::size_t n_angles = cfg.sweep.angles().size();
        for (std::size_t u = 0; u < cfg.scene.ue_truths.size(); ++u)
        {
            const auto tensors = synthesize_ue(cfg, u);
            for (std::size_t i = 0; i < tensors.size(); ++i)
            {
                const auto &t = tensors[i];
                const std::string name = container_name(u, t.meta.role_tag, i % n_angles);
                write_container(dir / name, t);
                index.rows.push_back(
                    {name, std::to_string(u + 1), std::to_string(t.meta.role_tag), format_double(t.meta.pointing_deg)});
            }
        }
        write_csv(dir / "index.csv", index);
    });
}

void stage_extract(const CampaignConfig &cfg, const fs::path &out)
{
    guarded("extract", [&] {
        const fs::path dir = out / "containers";
        require(dir / "index.csv");
        const CsvTable index = read_csv(dir / "index.csv");
        const auto cf = index.column("file"), cu = index.column("ue");
        std::vector<Extraction> items;
        for (const auto &row : index.rows)
        {
            const std::size_t ue = static_cast<std::size_t>(std::stoul(row[cu]));
            if (ue == 0 || ue > cfg.scene.ue_truths.size())
                throw std::runtime_error("index.csv names UE " + row[cu] + " which the scene does not have");
            const ChannelTensor t = read_container(dir / row[cf], cfg.model.grid.carrier);
            items.push_back(extract(t, cfg, ue - 1));
        }
        write_extractions(out / "mpcs.csv", out / "gains.csv", items);
    });
}

void stage_features(const CampaignConfig &cfg, const fs::path &out)
{
    guarded("features", [&] {
        require(out / "mpcs.csv");
        require(out / "gains.csv");
        const auto items = read_extractions(out / "mpcs.csv", out / "gains.csv");
        std::vector<FeatureSet> sets;
        std::vector<SeriesRecord> series;
        for (std::size_t u = 0; u < cfg.scene.ue_truths.size(); ++u)
        {
            auto uf = build_features(cfg, u, items);
            sets.push_back(std::move(uf.features));
            std::move(uf.series.begin(), uf.series.end(), std::back_inserter(series));
        }
        write_features(out / "features.csv", sets);
        write_series(out / "series.csv", series);
    });
}

void stage_localize(const CampaignConfig &cfg, const fs::path &out)
{
    guarded("localize", [&] {
        require(out / "features.csv");
        const auto sets = read_features(out / "features.csv");
        for (const auto &s : sets)
            if (s.ue_index >= cfg.scene.ue_truths.size())
                throw std::runtime_error("features.csv names a UE the scene does not have");
        const auto results = run_campaign(cfg.scene, sets, cfg.scenarios, cfg.seed, cfg.positioning);
        write_results(out / "results.csv", results);
    });
}

std::string stage_report(const CampaignConfig &cfg, const fs::path &out, const fs::path &results)
{
    return guarded("report", [&] {
        const fs::path src = results.empty() ? out / "results.csv" : results;
        require(src);
        fs::create_directories(out);
        const ErrorReport rep = build_report(cfg, read_results(src));
        write_report(out / "report.csv", rep);
        const std::string text = format_table(rep);
        write_text(out / "report.txt", text);
        return text;
    });
}

void stage_figdata(const CampaignConfig &cfg, const fs::path &out)
{
    guarded("figdata", [&] {
        for (const char *f : {"mpcs.csv", "gains.csv", "features.csv", "results.csv"})
            require(out / f);
        const fs::path dir = out / "figdata";
        fs::create_directories(dir);

        // Extracted MPC gains over distance and AoA.
        const auto items = read_extractions(out / "mpcs.csv", out / "gains.csv");
        CsvTable scatter{{"ue", "role", "pointing_deg", "ota_distance_m", "aoa_deg", "power_db"}, {}};
        for (const auto &e : items)
            for (const auto &m : e.mpcs)
                scatter.rows.push_back({std::to_string(e.ue_index + 1), std::to_string(e.role_tag),
                                        format_double(e.pointing_deg), format_double(m.ota_distance),
                                        format_double(m.aoa_deg), format_double(m.power_db)});
        write_csv(dir / "mpc_scatter.csv", scatter);

        // AoD and distance errors per anchor.
        const auto sets = read_features(out / "features.csv");
        CsvTable aod{{"ue", "anchor", "method", "estimate_deg", "gt_aod_deg", "error_deg", "anchor_ue_distance_m"}, {}};
        CsvTable dist{{"ue", "anchor", "estimate_m", "gt_distance_m", "error_m"}, {}};
        for (const auto &s : sets)
        {
            std::vector<const AnchorFeatures *> anchors{&s.bs};
            for (const auto &r : s.ris)
                anchors.push_back(&r);
            for (const auto *a : anchors)
            {
                const std::string ue = std::to_string(s.ue_index + 1);
                auto row = [&](const char *method, std::optional<double> est) {
                    if (!est)
                        return;
                    aod.rows.push_back({ue, a->anchor, method, format_double(*est), format_double(a->gt_aod_deg),
                                        format_double(std::abs(wrap180(*est - a->gt_aod_deg))),
                                        format_double(a->anchor_ue_distance_m)});
                };
                row("coarse_top1", a->coarse.top1);
                row("coarse_best", a->coarse_best_deg);
                row("fine_top1", a->fine ? std::optional<double>(a->fine->top1) : std::nullopt);
                row("fine_best", a->fine_best_deg);
                if (a->path_distance_m)
                    dist.rows.push_back({ue, a->anchor, format_double(*a->path_distance_m),
                                         format_double(a->gt_distance_m),
                                         format_double(std::abs(*a->path_distance_m - a->gt_distance_m))});
            }
        }
        write_csv(dir / "aod_errors.csv", aod);
        write_csv(dir / "distance_errors.csv", dist);

        // Position estimates next to the truth.
        CsvTable pos{{"scenario", "ue", "x", "y", "true_x", "true_y", "error_m"}, {}};
        for (const auto &r : read_results(out / "results.csv"))
        {
            const Point2D t = cfg.scene.ue_truths.at(r.ue_index);
            pos.rows.push_back({to_string(r.scenario), std::to_string(r.ue_index + 1), format_double(r.estimate.x),
                                format_double(r.estimate.y), format_double(t.x), format_double(t.y),
                                format_double(r.error)});
        }
        write_csv(dir / "positions.csv", pos);
    });
}

std::string run_pipeline(const CampaignConfig &cfg, const fs::path &out)
{
    stage_validate(cfg);
    stage_synth(cfg, out);
    stage_extract(cfg, out);
    stage_features(cfg, out);
    stage_localize(cfg, out);
    const std::string text = stage_report(cfg, out);
    stage_figdata(cfg, out);
    return text;
}

} // namespace risloc
