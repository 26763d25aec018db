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

#include "risloc/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <tuple>

namespace risloc
{

std::size_t CsvTable::column(const std::string &name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw CsvError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

namespace
{

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

std::string opt(const std::optional<double> &v) { return v ? format_double(*v) : std::string(); }

std::optional<double> parse_opt(const std::string &s)
{
    if (s.empty())
        return std::nullopt;
    return parse_double(s);
}

std::size_t parse_index(const std::string &s)
{
    char *end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || errno != 0)
        throw CsvError("not an integer: '" + s + "'");
    return static_cast<std::size_t>(v);
}

std::size_t parse_ue(const std::string &s)
{
    const std::size_t ue = parse_index(s);
    if (ue == 0)
        throw CsvError("UE numbers are 1-based");
    return ue - 1;
}

std::string join(const std::vector<std::string> &cells)
{
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        if (i)
            out += ',';
        out += cells[i];
    }
    return out;
}

} // namespace

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string &text)
{
    char *end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0')
        throw CsvError("not a number: '" + text + "'");
    return v;
}

CsvTable read_csv(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw CsvError("cannot open " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line))
        throw CsvError(path.string() + ": empty file");
    t.header = split(line);
    std::size_t lineno = 1;
    while (std::getline(in, line))
    {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto cells = split(line);
        if (cells.size() != t.header.size())
            throw CsvError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                           std::to_string(t.header.size()) + " cells");
        t.rows.push_back(std::move(cells));
    }
    return t;
}

void write_csv(const std::filesystem::path &path, const CsvTable &table)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw CsvError("cannot write " + path.string());
    out << join(table.header) << '\n';
    for (const auto &r : table.rows)
        out << join(r) << '\n';
    if (!out)
        throw CsvError("write failed for " + path.string());
}

void write_extractions(const std::filesystem::path &mpc_csv, const std::filesystem::path &gains_csv,
                       const std::vector<Extraction> &items)
{
    CsvTable m{{"ue", "role", "pointing_deg", "rank", "ota_distance_m", "aoa_deg", "gain_re", "gain_im", "power_db"},
               {}};
    CsvTable g{{"ue", "role", "pointing_deg", "overall_gain_db"}, {}};
    for (const auto &e : items)
    {
        const std::string ue = std::to_string(e.ue_index + 1), role = std::to_string(e.role_tag);
        const std::string ang = format_double(e.pointing_deg);
        g.rows.push_back({ue, role, ang, format_double(e.overall_gain_db)});
        for (std::size_t r = 0; r < e.mpcs.size(); ++r)
        {
            const auto &x = e.mpcs[r];
            m.rows.push_back({ue, role, ang, std::to_string(r + 1), format_double(x.ota_distance),
                              format_double(x.aoa_deg), format_double(x.gain.real()), format_double(x.gain.imag()),
                              format_double(x.power_db)});
        }
    }
    write_csv(mpc_csv, m);
    write_csv(gains_csv, g);
}

std::vector<Extraction> read_extractions(const std::filesystem::path &mpc_csv, const std::filesystem::path &gains_csv)
{
    const CsvTable g = read_csv(gains_csv);
    const CsvTable m = read_csv(mpc_csv);
    std::vector<Extraction> out;
    std::map<std::tuple<std::size_t, std::uint16_t, double>, std::size_t> where;
    const auto gu = g.column("ue"), gr = g.column("role"), ga = g.column("pointing_deg"),
               gg = g.column("overall_gain_db");
    for (const auto &r : g.rows)
    {
        Extraction e;
        e.ue_index = parse_ue(r[gu]);
        e.role_tag = static_cast<std::uint16_t>(parse_index(r[gr]));
        e.pointing_deg = parse_double(r[ga]);
        e.overall_gain_db = parse_double(r[gg]);
        if (!where.emplace(std::make_tuple(e.ue_index, e.role_tag, e.pointing_deg), out.size()).second)
            throw CsvError(gains_csv.string() + ": duplicate acquisition");
        out.push_back(e);
    }
    const auto mu = m.column("ue"), mr = m.column("role"), ma = m.column("pointing_deg"),
               md = m.column("ota_distance_m"), mo = m.column("aoa_deg"), mre = m.column("gain_re"),
               mim = m.column("gain_im"), mp = m.column("power_db");
    for (const auto &r : m.rows)
    {
        const auto key = std::make_tuple(parse_ue(r[mu]), static_cast<std::uint16_t>(parse_index(r[mr])),
                                         parse_double(r[ma]));
        const auto it = where.find(key);
        if (it == where.end())
            throw CsvError(mpc_csv.string() + ": MPC row without a matching gains row");
        MpcEstimate x;
        x.ota_distance = parse_double(r[md]);
        x.aoa_deg = parse_double(r[mo]);
        x.gain = {parse_double(r[mre]), parse_double(r[mim])};
        x.power_db = parse_double(r[mp]);
        out[it->second].mpcs.push_back(x);
    }
    return out;
}

void write_series(const std::filesystem::path &path, const std::vector<SeriesRecord> &records)
{
    CsvTable t{{"ue", "anchor", "pointing_deg", "overall_gain_db", "isolated", "ota_distance_m", "aoa_deg",
                "power_db"},
               {}};
    for (const auto &rec : records)
        for (std::size_t i = 0; i < rec.series.pointing_deg.size(); ++i)
        {
            const auto &iso = rec.series.isolated[i];
            t.rows.push_back({std::to_string(rec.ue_index + 1), rec.anchor, format_double(rec.series.pointing_deg[i]),
                              format_double(rec.series.overall_gain_db[i]), iso ? "1" : "0",
                              iso ? format_double(iso->ota_distance) : "", iso ? format_double(iso->aoa_deg) : "",
                              iso ? format_double(iso->power_db) : ""});
        }
    write_csv(path, t);
}

void write_features(const std::filesystem::path &path, const std::vector<FeatureSet> &sets)
{
    CsvTable t{{"ue", "anchor", "gt_aod_deg", "gt_distance_m", "anchor_ue_distance_m", "coarse_1", "coarse_2",
                "coarse_3", "coarse_best_deg", "fine_1", "fine_2", "fine_3", "fine_best_deg", "path_distance_m",
                "path_aoa_deg"},
               {}};
    for (const auto &fs : sets)
    {
        auto emit = [&](const AnchorFeatures &a) {
            std::vector<std::string> row{std::to_string(fs.ue_index + 1), a.anchor, format_double(a.gt_aod_deg),
                                         format_double(a.gt_distance_m), format_double(a.anchor_ue_distance_m)};
            for (std::size_t k = 0; k < 3; ++k)
                row.push_back(k < a.coarse.top3.size() ? format_double(a.coarse.top3[k]) : "");
            row.push_back(format_double(a.coarse_best_deg));
            for (std::size_t k = 0; k < 3; ++k)
                row.push_back(a.fine && k < a.fine->top3.size() ? format_double(a.fine->top3[k]) : "");
            row.push_back(opt(a.fine_best_deg));
            row.push_back(opt(a.path_distance_m));
            row.push_back(opt(a.path_aoa_deg));
            t.rows.push_back(std::move(row));
        };
        emit(fs.bs);
        for (const auto &r : fs.ris)
            emit(r);
    }
    write_csv(path, t);
}

std::vector<FeatureSet> read_features(const std::filesystem::path &path)
{
    const CsvTable t = read_csv(path);
    std::vector<FeatureSet> out;
    const auto cu = t.column("ue"), ca = t.column("anchor");
    for (const auto &r : t.rows)
    {
        AnchorFeatures a;
        a.anchor = r[ca];
        a.gt_aod_deg = parse_double(r[t.column("gt_aod_deg")]);
        a.gt_distance_m = parse_double(r[t.column("gt_distance_m")]);
        a.anchor_ue_distance_m = parse_double(r[t.column("anchor_ue_distance_m")]);
        for (const char *c : {"coarse_1", "coarse_2", "coarse_3"})
            if (auto v = parse_opt(r[t.column(c)]))
                a.coarse.top3.push_back(*v);
        if (a.coarse.top3.empty())
            throw CsvError(path.string() + ": anchor " + a.anchor + " has no coarse candidates");
        a.coarse.top1 = a.coarse.top3.front();
        a.coarse_best_deg = parse_double(r[t.column("coarse_best_deg")]);
        AodCandidates fine;
        for (const char *c : {"fine_1", "fine_2", "fine_3"})
            if (auto v = parse_opt(r[t.column(c)]))
                fine.top3.push_back(*v);
        if (!fine.top3.empty())
        {
            fine.top1 = fine.top3.front();
            a.fine = fine;
        }
        a.fine_best_deg = parse_opt(r[t.column("fine_best_deg")]);
        a.path_distance_m = parse_opt(r[t.column("path_distance_m")]);
        a.path_aoa_deg = parse_opt(r[t.column("path_aoa_deg")]);

        const std::size_t ue = parse_ue(r[cu]);
        if (a.anchor == "BS")
        {
            out.push_back({});
            out.back().ue_index = ue;
            out.back().bs = std::move(a);
        }
        else
        {
            if (out.empty() || out.back().ue_index != ue)
                throw CsvError(path.string() + ": RIS row before the BS row of UE " + r[cu]);
            out.back().ris.push_back(std::move(a));
        }
    }
    return out;
}

void write_results(const std::filesystem::path &path, const std::vector<ScenarioResult> &results)
{
    CsvTable t{{"scenario", "ue", "x", "y", "error_m", "converged"}, {}};
    for (const auto &r : results)
        t.rows.push_back({to_string(r.scenario), std::to_string(r.ue_index + 1), format_double(r.estimate.x),
                          format_double(r.estimate.y), format_double(r.error), r.converged ? "1" : "0"});
    write_csv(path, t);
}

std::vector<ScenarioResult> read_results(const std::filesystem::path &path)
{
    const CsvTable t = read_csv(path);
    const auto cs = t.column("scenario"), cu = t.column("ue"), cx = t.column("x"), cy = t.column("y"),
               ce = t.column("error_m"), cc = t.column("converged");
    std::vector<ScenarioResult> out;
    for (const auto &r : t.rows)
    {
        ScenarioResult s;
        s.scenario = parse_scenario(r[cs]);
        s.ue_index = parse_ue(r[cu]);
        s.estimate = {parse_double(r[cx]), parse_double(r[cy])};
        s.error = parse_double(r[ce]);
        s.converged = r[cc] == "1";
        out.push_back(s);
    }
    return out;
}

std::vector<ScenarioErrors> errors_by_scenario(const std::vector<ScenarioResult> &results)
{
    std::vector<ScenarioErrors> rows;
    std::vector<std::vector<std::pair<std::size_t, double>>> per;
    for (const auto &r : results)
    {
        const std::string name = to_string(r.scenario);
        auto it = std::find_if(rows.begin(), rows.end(), [&](const ScenarioErrors &e) { return e.scenario == name; });
        if (it == rows.end())
        {
            rows.push_back({});
            rows.back().scenario = name;
            per.emplace_back();
            it = rows.end() - 1;
        }
        per[static_cast<std::size_t>(it - rows.begin())].emplace_back(r.ue_index, r.error);
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        std::stable_sort(per[i].begin(), per[i].end(),
                         [](const auto &a, const auto &b) { return a.first < b.first; });
        for (const auto &[ue, e] : per[i])
            rows[i].errors.push_back(e);
    }
    return rows;
}

void write_report(const std::filesystem::path &path, const ErrorReport &report)
{
    CsvTable t{{"scenario", "rmse_m", "median_m", "p_value", "significantly_worse", "best"}, {}};
    for (const auto &r : report.rows)
        t.rows.push_back({r.scenario, format_double(r.rmse), format_double(r.median), format_double(r.p_value),
                          r.significantly_worse ? "1" : "0", r.scenario == report.best ? "1" : "0"});
    write_csv(path, t);
}

} // namespace risloc
