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

#ifndef RISLOC_CONTAINER_HPP
#define RISLOC_CONTAINER_HPP

#include "risloc/channel.hpp"

#include <filesystem>
#include <stdexcept>

namespace risloc
{

// Binary tensor container. 48-byte little-endian header:
//   "RISC" | version u16 | n_freq u32 | n_pos u32 | f_start f64 | f_step f64 |
//   pointing_deg f64 | role_tag u16 | seed u64
// followed by n_freq * n_pos interleaved (re, im) f64 pairs, frequency-major.
class ContainerError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

constexpr std::uint16_t kContainerVersion = 1;
constexpr std::size_t kContainerHeaderBytes = 48;

// The UE index is not stored; callers recover it from the file name or an index file.
void write_container(const std::filesystem::path &path, const ChannelTensor &tensor);

// The carrier is not part of the header; it defaults to the 28 GHz reference.
ChannelTensor read_container(const std::filesystem::path &path, double carrier_hz = 28.0e9);

std::vector<unsigned char> encode_container(const ChannelTensor &tensor);
ChannelTensor decode_container(std::span<const unsigned char> bytes, double carrier_hz = 28.0e9);

} // namespace risloc

#endif
