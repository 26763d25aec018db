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

// Command line front end: one subcommand per pipeline stage.

#include "risloc/pipeline.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace
{

struct Options
{
    std::string config = "config/default_campaign.json";
    std::optional<std::uint64_t> seed;
    std::string out;
    std::vector<std::string> scenarios;
    std::string results; // report only
};

risloc::CampaignConfig load(const Options &o)
{
    risloc::CampaignConfig cfg;
    try
    {
        cfg = risloc::load_config(o.config);
        if (o.seed)
            cfg.seed = *o.seed;
        if (!o.out.empty())
            cfg.output_dir = o.out;
        if (!o.scenarios.empty())
        {
            cfg.scenarios.clear();
            for (const auto &s : o.scenarios)
                cfg.scenarios.push_back(risloc::parse_scenario(s));
        }
        cfg.validate();
    }
    catch (const std::exception &e)
    {
        throw risloc::StageError("validate", e.what());
    }
    return cfg;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"risloc - RIS-aided mmWave indoor positioning workbench"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("-c,--config", o.config, "campaign configuration (JSON)")->capture_default_str();
        sub->add_option("--seed", o.seed, "override the campaign seed");
        sub->add_option("-o,--out", o.out, "output directory (default: output_dir from the config)");
        sub->add_option("--scenario", o.scenarios, "restrict to scenario ids (0, 1a..1d, 2a..2f)");
    };

    auto *validate = app.add_subcommand("validate", "check the configuration and the scene");
    auto *synth = app.add_subcommand("synth", "synthesize channel containers");
    auto *extract = app.add_subcommand("extract", "SAGE extraction: containers -> mpcs.csv, gains.csv");
    auto *features = app.add_subcommand("features", "AoD and distance features: mpcs.csv -> features.csv");
    auto *localize = app.add_subcommand("localize", "LS positioning: features.csv -> results.csv");
    auto *report = app.add_subcommand("report", "RMSE / median / rank-sum table from results.csv");
    auto *pipeline = app.add_subcommand("pipeline", "all stages in order");
    auto *figdata = app.add_subcommand("figdata", "plot-ready CSVs from previous stage outputs");
    for (auto *s : {validate, synth, extract, features, localize, report, pipeline, figdata})
        add_common(s);
    report->add_option("--results", o.results, "results CSV to summarize (default: <out>/results.csv)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        const risloc::CampaignConfig cfg = load(o);
        const auto out = cfg.output_dir;
        if (validate->parsed())
        {
            risloc::stage_validate(cfg);
            std::cout << "configuration ok: " << cfg.scene.ue_truths.size() << " UEs, "
                      << cfg.scene.ris_list.size() << " RIS, " << cfg.scenarios.size() << " scenarios\n";
        }
        else if (synth->parsed())
            risloc::stage_synth(cfg, out);
        else if (extract->parsed())
            risloc::stage_extract(cfg, out);
        else if (features->parsed())
            risloc::stage_features(cfg, out);
        else if (localize->parsed())
            risloc::stage_localize(cfg, out);
        else if (report->parsed())
            std::cout << risloc::stage_report(cfg, out, o.results);
        else if (pipeline->parsed())
            std::cout << risloc::run_pipeline(cfg, out);
        else if (figdata->parsed())
            risloc::stage_figdata(cfg, out);
    }
    catch (const risloc::StageError &e)
    {
        std::cerr << "risloc: stage " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "risloc: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
