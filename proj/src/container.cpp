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

#include "risloc/container.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace risloc
{

namespace
{

template <typename U>
void put(std::vector<unsigned char> &out, U v)
{
    for (std::size_t i = 0; i < sizeof(U); ++i)
        out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFFu));
}

void put_f64(std::vector<unsigned char> &out, double v) { put(out, std::bit_cast<std::uint64_t>(v)); }

template <typename U>
U get(std::span<const unsigned char> in, std::size_t &pos)
{
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
        v |= static_cast<U>(static_cast<U>(in[pos + i]) << (8 * i));
    pos += sizeof(U);
    return v;
}

double get_f64(std::span<const unsigned char> in, std::size_t &pos)
{
    return std::bit_cast<double>(get<std::uint64_t>(in, pos));
}

} // namespace

std::vector<unsigned char> encode_container(const ChannelTensor &t)
{
    const std::size_t nf = t.n_freq(), np = t.n_pos();
    if (nf > 0xFFFFFFFFu || np > 0xFFFFFFFFu)
        throw ContainerError("tensor too large for the container format");
    std::vector<unsigned char> out;
    out.reserve(kContainerHeaderBytes + nf * np * 16);
    for (char c : {'R', 'I', 'S', 'C'})
        out.push_back(static_cast<unsigned char>(c));
    put<std::uint16_t>(out, kContainerVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(nf));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(np));
    put_f64(out, t.grid.f_start);
    put_f64(out, t.grid.f_step);
    put_f64(out, t.meta.pointing_deg);
    put<std::uint16_t>(out, t.meta.role_tag);
    put<std::uint64_t>(out, t.meta.seed);
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t p = 0; p < np; ++p)
        {
            const cd v = t.values(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(p));
            put_f64(out, v.real());
            put_f64(out, v.imag());
        }
    return out;
}

ChannelTensor decode_container(std::span<const unsigned char> in, double carrier_hz)
{
    if (in.size() < kContainerHeaderBytes)
        throw ContainerError("truncated container header");
    if (std::memcmp(in.data(), "RISC", 4) != 0)
        throw ContainerError("bad container magic");
    std::size_t pos = 4;
    const auto version = get<std::uint16_t>(in, pos);
    if (version != kContainerVersion)
        throw ContainerError("unsupported container version " + std::to_string(version));
    const auto nf = get<std::uint32_t>(in, pos);
    const auto np = get<std::uint32_t>(in, pos);
    ChannelTensor t;
    t.grid.f_start = get_f64(in, pos);
    t.grid.f_step = get_f64(in, pos);
    t.meta.pointing_deg = get_f64(in, pos);
    t.meta.role_tag = get<std::uint16_t>(in, pos);
    t.meta.seed = get<std::uint64_t>(in, pos);
    const std::uint64_t expected = kContainerHeaderBytes + std::uint64_t(nf) * np * 16;
    if (in.size() != expected)
        throw ContainerError("container length " + std::to_string(in.size()) + " does not match header (" +
                             std::to_string(expected) + ")");
    if (nf == 0 || !(t.grid.f_step > 0.0) || !std::isfinite(t.grid.f_start))
        throw ContainerError("malformed frequency axis in container header");
    t.grid.f_stop = t.grid.f_start + (nf - 1) * t.grid.f_step;
    t.grid.carrier = carrier_hz;
    t.values.resize(nf, np);
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t p = 0; p < np; ++p)
        {
            const double re = get_f64(in, pos);
            const double im = get_f64(in, pos);
            t.values(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(p)) = {re, im};
        }
    return t;
}

void write_container(const std::filesystem::path &path, const ChannelTensor &tensor)
{
    const auto bytes = encode_container(tensor);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ContainerError("cannot write " + path.string());
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw ContainerError("write failed for " + path.string());
}

ChannelTensor read_container(const std::filesystem::path &path, double carrier_hz)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ContainerError("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try
    {
        return decode_container(bytes, carrier_hz);
    }
    catch (const ContainerError &e)
    {
        throw ContainerError(path.string() + ": " + e.what());
    }
}

} // namespace risloc
