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

#ifndef RISLOC_CSV_HPP
#define RISLOC_CSV_HPP

#include "risloc/evaluation.hpp"
#include "risloc/features.hpp"
#include "risloc/positioning.hpp"
#include "risloc/sage.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace risloc
{

class CsvError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Plain comma separated table; no quoting (none of our fields contain commas).
struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string &name) const; // throws CsvError when absent
};

CsvTable read_csv(const std::filesystem::path &path);
void write_csv(const std::filesystem::path &path, const CsvTable &table);

// Shortest text that reads back to the same double; "nan" for NaN and "" never.
std::string format_double(double v);
double parse_double(const std::string &text);

// Extraction output of one acquisition.
struct Extraction
{
    std::size_t ue_index = 0;
    std::uint16_t role_tag = 0;
    double pointing_deg = 0.0;
    double overall_gain_db = 0.0;
    std::vector<MpcEstimate> mpcs;
};

// mpcs.csv:  ue,role,pointing_deg,rank,ota_distance_m,aoa_deg,gain_re,gain_im,power_db
// gains.csv: ue,role,pointing_deg,overall_gain_db
// UEs are written 1-based. Reading needs both files.
void write_extractions(const std::filesystem::path &mpc_csv, const std::filesystem::path &gains_csv,
                       const std::vector<Extraction> &items);
std::vector<Extraction> read_extractions(const std::filesystem::path &mpc_csv, const std::filesystem::path &gains_csv);

// series.csv: ue,anchor,pointing_deg,overall_gain_db,isolated,ota_distance_m,aoa_deg,power_db
struct SeriesRecord
{
    std::size_t ue_index = 0;
    std::string anchor;
    SweepSeries series;
};
void write_series(const std::filesystem::path &path, const std::vector<SeriesRecord> &records);

// features.csv, one row per (UE, anchor):
//   ue,anchor,gt_aod_deg,gt_distance_m,anchor_ue_distance_m,coarse_1,coarse_2,coarse_3,coarse_best_deg,
//   fine_1,fine_2,fine_3,fine_best_deg,path_distance_m,path_aoa_deg
// Empty cells stand for missing values.
void write_features(const std::filesystem::path &path, const std::vector<FeatureSet> &sets);
std::vector<FeatureSet> read_features(const std::filesystem::path &path);

// results.csv: scenario,ue,x,y,error_m,converged
void write_results(const std::filesystem::path &path, const std::vector<ScenarioResult> &results);
std::vector<ScenarioResult> read_results(const std::filesystem::path &path);

// Groups results by scenario (first-appearance order), errors in UE order.
std::vector<ScenarioErrors> errors_by_scenario(const std::vector<ScenarioResult> &results);

// report.csv: scenario,rmse_m,median_m,p_value,significantly_worse,best
void write_report(const std::filesystem::path &path, const ErrorReport &report);

} // namespace risloc

#endif
