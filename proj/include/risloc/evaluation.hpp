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

#ifndef RISLOC_EVALUATION_HPP
#define RISLOC_EVALUATION_HPP

#include <span>
#include <string>
#include <vector>

namespace risloc
{

// Root mean square. Throws std::invalid_argument on an empty sample.
double rmse(std::span<const double> errors);

// Sample median; mean of the middle two for even sizes. NaN if any entry is NaN. Throws on an empty sample.
double median(std::span<const double> errors);

enum class Alternative
{
    TwoSided,
    Greater // first sample tends to be larger
};

// Wilcoxon rank-sum test with mid-ranks for ties. Exact enumeration of all rank splits
// when n + m <= 12, normal approximation with tie and continuity correction otherwise.
double wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b,
                         Alternative alternative = Alternative::TwoSided);

double wilcoxon_exact(std::span<const double> a, std::span<const double> b,
                      Alternative alternative = Alternative::TwoSided);
double wilcoxon_normal(std::span<const double> a, std::span<const double> b,
                       Alternative alternative = Alternative::TwoSided);

constexpr std::size_t kExactLimit = 12;

struct ScenarioErrors
{
    std::string scenario;
    std::vector<double> errors; // one per UE, in UE order
    double rmse = 0.0;
    double median = 0.0;
    double p_value = 1.0; // against the best scenario
    bool significantly_worse = false;
};

struct ErrorReport
{
    std::vector<ScenarioErrors> rows;
    std::string best;
    double threshold = 0.01;
};

ErrorReport make_report(std::vector<ScenarioErrors> rows);

// Flags every scenario whose errors are significantly larger than those of the
// minimum-RMSE scenario (p < threshold). Needs at least two scenarios.
ErrorReport mark_significance(ErrorReport report, double threshold = 0.01,
                              Alternative alternative = Alternative::TwoSided);

// Human-readable table, one row per scenario with a down arrow on flagged RMSEs.
std::string format_table(const ErrorReport &report);

} // namespace risloc

#endif
