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

#ifndef RISLOC_PIPELINE_HPP
#define RISLOC_PIPELINE_HPP

#include "risloc/config.hpp"
#include "risloc/csv.hpp"

#include <filesystem>
#include <string>

namespace risloc
{

// Failure inside one pipeline stage; what() is prefixed with the stage name.
class StageError : public std::runtime_error
{
  public:
    StageError(std::string stage, const std::string &message)
        : std::runtime_error(stage + ": " + message), stage_(std::move(stage))
    {
    }
    const std::string &stage() const { return stage_; }

  private:
    std::string stage_;
};

// BS scan first, then one scan per RIS.
std::vector<SweepRole> sweep_roles(const CampaignConfig &cfg);

// All acquisitions of one UE, role-major then pointing angle.
std::vector<ChannelTensor> synthesize_ue(const CampaignConfig &cfg, std::size_t ue_index);

// SAGE plus the overall gain over the SAGE sub-band.
Extraction extract(const ChannelTensor &tensor, const CampaignConfig &cfg, std::size_t ue_index);

struct UeFeatures
{
    FeatureSet features;
    std::vector<SeriesRecord> series; // BS, RIS1, RIS2, ...
};

// Feature extraction for one UE from its extractions (any order).
UeFeatures build_features(const CampaignConfig &cfg, std::size_t ue_index, std::span<const Extraction> items);

ErrorReport build_report(const CampaignConfig &cfg, const std::vector<ScenarioResult> &results);

struct CampaignRun
{
    std::vector<Extraction> extractions;
    std::vector<FeatureSet> features;
    std::vector<SeriesRecord> series;
    std::vector<ScenarioResult> results;
    ErrorReport report;
};

// Whole campaign without touching the file system.
CampaignRun run_in_memory(const CampaignConfig &cfg);

// File-based stages. Each reads the previous stage's outputs from `out` and throws StageError.
void stage_validate(const CampaignConfig &cfg);
void stage_synth(const CampaignConfig &cfg, const std::filesystem::path &out);
void stage_extract(const CampaignConfig &cfg, const std::filesystem::path &out);
void stage_features(const CampaignConfig &cfg, const std::filesystem::path &out);
void stage_localize(const CampaignConfig &cfg, const std::filesystem::path &out);
// Reads `results` (defaults to out/results.csv), writes report.csv and report.txt, returns the table text.
std::string stage_report(const CampaignConfig &cfg, const std::filesystem::path &out,
                         const std::filesystem::path &results = {});
void stage_figdata(const CampaignConfig &cfg, const std::filesystem::path &out);
// validate -> synth -> extract -> features -> localize -> report -> figdata
std::string run_pipeline(const CampaignConfig &cfg, const std::filesystem::path &out);

} // namespace risloc

#endif
