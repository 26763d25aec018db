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

#ifndef RISLOC_CONFIG_HPP
#define RISLOC_CONFIG_HPP

#include "risloc/channel.hpp"
#include "risloc/evaluation.hpp"
#include "risloc/features.hpp"
#include "risloc/positioning.hpp"
#include "risloc/sage.hpp"

#include <filesystem>
#include <string>

namespace risloc
{

// Configuration file problems (missing files, malformed values).
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct CampaignConfig
{
    std::filesystem::path scene_file;
    ScenePlan scene;
    SweepPlan sweep;
    ChannelModel model;
    SynthConfig synth;
    SageConfig sage;
    IsolationWindow isolation;
    std::vector<ScenarioId> scenarios{kAllScenarios.begin(), kAllScenarios.end()};
    CampaignOptions positioning;
    double significance_threshold = 0.01;
    Alternative alternative = Alternative::TwoSided;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "out";

    // Cross-checks every section; throws ConfigError.
    void validate() const;
};

// Reads a campaign file. The scene file path is resolved relative to the campaign file.
CampaignConfig load_config(const std::filesystem::path &path);

ScenePlan load_scene(const std::filesystem::path &path);

} // namespace risloc

#endif
