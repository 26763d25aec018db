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

#ifndef RISLOC_TEST_SUPPORT_HPP
#define RISLOC_TEST_SUPPORT_HPP

#include "risloc/config.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace test_support
{

inline std::filesystem::path source_dir() { return RISLOC_SOURCE_DIR; }
inline std::filesystem::path default_config_path() { return source_dir() / "config" / "default_campaign.json"; }
inline risloc::CampaignConfig default_config() { return risloc::load_config(default_config_path()); }

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string &name)
{
    auto p = std::filesystem::temp_directory_path() / ("risloc_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

// Smallest angular distance in degrees, computed without the library helpers.
inline double angle_gap(double a, double b)
{
    double d = std::fmod(std::abs(a - b), 360.0);
    return d > 180.0 ? 360.0 - d : d;
}

} // namespace test_support

#endif
