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

#include "risloc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace risloc
{

double rmse(std::span<const double> errors)
{
    if (errors.empty())
        throw std::invalid_argument("RMSE of an empty sample");
    double acc = 0.0;
    for (double e : errors)
        acc += e * e;
    return std::sqrt(acc / static_cast<double>(errors.size()));
}

double median(std::span<const double> errors)
{
    if (errors.empty())
        throw std::invalid_argument("median of an empty sample");
    // A NaN would break the sort ordering; a failed sample has no median.
    if (std::any_of(errors.begin(), errors.end(), [](double e) { return std::isnan(e); }))
        return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> v(errors.begin(), errors.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

namespace
{

// Mid-ranks of the pooled sample (a first, then b), 1-based.
std::vector<double> pooled_ranks(std::span<const double> a, std::span<const double> b)
{
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<std::size_t> idx(pooled.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
    std::vector<double> ranks(pooled.size());
    for (std::size_t i = 0; i < idx.size();)
    {
        std::size_t j = i;
        while (j + 1 < idx.size() && pooled[idx[j + 1]] == pooled[idx[i]])
            ++j;
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[idx[k]] = mid;
        i = j + 1;
    }
    return ranks;
}

void check_samples(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("rank-sum test needs two non-empty samples");
}

} // namespace

double wilcoxon_exact(std::span<const double> a, std::span<const double> b, Alternative alternative)
{
    check_samples(a, b);
    const std::size_t n = a.size();
    const std::size_t total = a.size() + b.size();
    if (total > 24)
        throw std::invalid_argument("exact rank-sum enumeration limited to 24 observations");
    const auto ranks = pooled_ranks(a, b);
    const double w_obs = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
    const double mean = static_cast<double>(n) * static_cast<double>(total + 1) / 2.0;
    const double dev_obs = std::abs(w_obs - mean);
    constexpr double tol = 1e-9;

    // Walk every n-subset of the pooled ranks.
    std::vector<std::size_t> pick(n);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    std::size_t extreme = 0, count = 0;
    while (true)
    {
        double w = 0.0;
        for (std::size_t i : pick)
            w += ranks[i];
        ++count;
        if (alternative == Alternative::TwoSided ? std::abs(w - mean) >= dev_obs - tol : w >= w_obs - tol)
            ++extreme;

        std::size_t i = n;
        while (i > 0 && pick[i - 1] == total - n + (i - 1))
            --i;
        if (i == 0)
            break;
        ++pick[i - 1];
        for (std::size_t j = i; j < n; ++j)
            pick[j] = pick[j - 1] + 1;
    }
    return std::min(1.0, static_cast<double>(extreme) / static_cast<double>(count));
}

double wilcoxon_normal(std::span<const double> a, std::span<const double> b, Alternative alternative)
{
    check_samples(a, b);
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());
    const double total = n + m;
    const auto ranks = pooled_ranks(a, b);
    const double w = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);
    const double mean = n * (total + 1.0) / 2.0;

    std::vector<double> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < sorted.size();)
    {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i])
            ++j;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    const double var = n * m / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
    if (!(var > 0.0))
        return 1.0;
    const double sd = std::sqrt(var);
    double p = 1.0;
    if (alternative == Alternative::TwoSided)
    {
        const double z = std::max(0.0, std::abs(w - mean) - 0.5) / sd;
        p = std::erfc(z / std::sqrt(2.0));
    }
    else
    {
        const double z = (w - mean - 0.5) / sd;
        p = 0.5 * std::erfc(z / std::sqrt(2.0));
    }
    return std::min(1.0, p);
}

double wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b, Alternative alternative)
{
    check_samples(a, b);
    if (a.size() + b.size() <= kExactLimit)
        return wilcoxon_exact(a, b, alternative);
    return wilcoxon_normal(a, b, alternative);
}

ErrorReport make_report(std::vector<ScenarioErrors> rows)
{
    ErrorReport rep;
    for (auto &r : rows)
    {
        r.rmse = rmse(r.errors);
        r.median = median(r.errors);
    }
    rep.rows = std::move(rows);
    return rep;
}

ErrorReport mark_significance(ErrorReport report, double threshold, Alternative alternative)
{
    if (report.rows.size() < 2)
        throw std::invalid_argument("significance marking needs at least two scenarios");
    // Rows with failed UEs carry NaN errors; they can neither be the reference nor be ranked.
    std::size_t best = report.rows.size();
    for (std::size_t i = 0; i < report.rows.size(); ++i)
        if (std::isfinite(report.rows[i].rmse) && (best == report.rows.size() || report.rows[i].rmse < report.rows[best].rmse))
            best = i;
    if (best == report.rows.size())
        throw std::invalid_argument("no scenario with finite errors");
    report.best = report.rows[best].scenario;
    report.threshold = threshold;
    for (std::size_t i = 0; i < report.rows.size(); ++i)
    {
        auto &row = report.rows[i];
        if (i == best)
        {
            row.p_value = 1.0;
            row.significantly_worse = false;
            continue;
        }
        if (!std::isfinite(row.rmse))
        {
            row.p_value = std::numeric_limits<double>::quiet_NaN();
            row.significantly_worse = false;
            continue;
        }
        row.p_value = wilcoxon_rank_sum(row.errors, report.rows[best].errors, alternative);
        row.significantly_worse = row.p_value < threshold;
    }
    return report;
}

std::string format_table(const ErrorReport &report)
{
    std::ostringstream os;
    std::size_t n_ue = 0;
    for (const auto &r : report.rows)
        n_ue = std::max(n_ue, r.errors.size());

    char buf[64];
    os << "Scenario";
    for (std::size_t u = 0; u < n_ue; ++u)
    {
        std::snprintf(buf, sizeof buf, " %7s", ("UE" + std::to_string(u + 1)).c_str());
        os << buf;
    }
    os << "    RMSE  Median\n";
    for (const auto &r : report.rows)
    {
        std::snprintf(buf, sizeof buf, "%-8s", r.scenario.c_str());
        os << buf;
        for (double e : r.errors)
        {
            std::snprintf(buf, sizeof buf, " %7.2f", e);
            os << buf;
        }
        std::snprintf(buf, sizeof buf, " %7.2f", r.rmse);
        os << buf << (r.significantly_worse ? "↓" : " ");
        std::snprintf(buf, sizeof buf, " %6.2f", r.median);
        os << buf << '\n';
    }
    os << "best: " << report.best << "  (↓ = rank-sum p < " << report.threshold << " against best)\n";
    return os.str();
}

} // namespace risloc
