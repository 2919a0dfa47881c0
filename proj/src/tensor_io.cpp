// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The ramode Authors
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

#include "ramode/tensor_io.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <vector>

namespace ramode
{
    namespace
    {
        constexpr std::array<char, 4> kMagic{'R', 'A', 'C', 'T'};

        template <typename U>
        void put_le(std::vector<char> &buf, U value)
        {
            for (std::size_t i = 0; i < sizeof(U); ++i)
                buf.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
        }

        template <typename U>
        U get_le(const char *p)
        {
            U value = 0;
            for (std::size_t i = 0; i < sizeof(U); ++i)
                value |= static_cast<U>(static_cast<unsigned char>(p[i])) << (8 * i);
            return value;
        }

        std::string context(const std::filesystem::path &path, const std::string &what)
        {
            return path.string() + ": " + what;
        }
    } // namespace

    void write_channel_tensor(const std::filesystem::path &path, const ChannelSet &channels, const nlohmann::json &geometry)
    {
        const auto &d = channels.dims();
        nlohmann::json header = {
            {"dims", {d.snapshots, d.users, d.subcarriers, d.modes, d.rx, d.tx}},
            {"dim_order", {"sample", "user", "subcarrier", "mode", "rx", "tx"}},
            {"dtype", "c64-interleaved"},
            {"seed", channels.seed},
            {"geometry", geometry},
        };
        const std::string text = header.dump();

        std::vector<char> buf(kMagic.begin(), kMagic.end());
        put_le<std::uint32_t>(buf, kTensorFormatVersion);
        put_le<std::uint64_t>(buf, text.size());
        buf.insert(buf.end(), text.begin(), text.end());
        buf.reserve(buf.size() + 8ull * d.snapshots * d.users * d.subcarriers * d.modes * d.rx * d.tx);
        for (int s = 0; s < d.snapshots; ++s)
            for (int k = 0; k < d.users; ++k)
                for (int f = 0; f < d.subcarriers; ++f)
                    for (int v = 0; v < d.modes; ++v)
                    {
                        const auto &h = channels.at(k, f, s, v);
                        for (int r = 0; r < d.rx; ++r)
                            for (int c = 0; c < d.tx; ++c)
                            {
                                put_le(buf, std::bit_cast<std::uint32_t>(static_cast<float>(h(r, c).real())));
                                put_le(buf, std::bit_cast<std::uint32_t>(static_cast<float>(h(r, c).imag())));
                            }
                    }

        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError(context(path, "cannot open for writing"));
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out)
            throw IoError(context(path, "write failed"));
    }

    ChannelTensorFile read_channel_tensor(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError(context(path, "cannot open for reading"));
        const std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (buf.size() < 16 || !std::equal(kMagic.begin(), kMagic.end(), buf.begin()))
            throw IoError(context(path, "not a channel tensor file (bad magic)"));
        const auto version = get_le<std::uint32_t>(buf.data() + 4);
        if (version != kTensorFormatVersion)
            throw IoError(context(path, "unsupported tensor version " + std::to_string(version)));
        const auto header_len = get_le<std::uint64_t>(buf.data() + 8);
        if (header_len > buf.size() - 16)
            throw IoError(context(path, "truncated header"));

        ChannelTensorFile file;
        try
        {
            file.header = nlohmann::json::parse(buf.begin() + 16, buf.begin() + 16 + static_cast<std::ptrdiff_t>(header_len));
        }
        catch (const nlohmann::json::exception &e)
        {
            throw IoError(context(path, std::string("bad header: ") + e.what()));
        }
        if (file.header.value("dtype", "") != "c64-interleaved")
            throw IoError(context(path, "unsupported dtype"));
        const auto dims_json = file.header.at("dims");
        if (!dims_json.is_array() || dims_json.size() != 6)
            throw IoError(context(path, "header dims must have 6 entries"));

        const ChannelDims d{dims_json[1].get<int>(), dims_json[2].get<int>(), dims_json[0].get<int>(),
                            dims_json[3].get<int>(), dims_json[4].get<int>(), dims_json[5].get<int>()};
        const std::size_t expected = 8ull * d.snapshots * d.users * d.subcarriers * d.modes * d.rx * d.tx;
        const std::size_t payload = buf.size() - 16 - header_len;
        if (payload != expected)
            throw IoError(context(path, "payload size " + std::to_string(payload) + " does not match dims (" + std::to_string(expected) + ")"));

        file.channels = ChannelSet(d);
        file.channels.seed = file.header.value("seed", std::uint64_t{0});
        const char *p = buf.data() + 16 + header_len;
        for (int s = 0; s < d.snapshots; ++s)
            for (int k = 0; k < d.users; ++k)
                for (int f = 0; f < d.subcarriers; ++f)
                    for (int v = 0; v < d.modes; ++v)
                    {
                        auto &h = file.channels.at(k, f, s, v);
                        for (int r = 0; r < d.rx; ++r)
                            for (int c = 0; c < d.tx; ++c)
                            {
                                const float re = std::bit_cast<float>(get_le<std::uint32_t>(p));
                                const float im = std::bit_cast<float>(get_le<std::uint32_t>(p + 4));
                                h(r, c) = {re, im};
                                p += 8;
                            }
                    }
        return file;
    }

    ChannelSet round_to_float(const ChannelSet &channels)
    {
        ChannelSet out = channels;
        const auto &d = channels.dims();
        for (int k = 0; k < d.users; ++k)
            for (int f = 0; f < d.subcarriers; ++f)
                for (int s = 0; s < d.snapshots; ++s)
                    for (int v = 0; v < d.modes; ++v)
                        out.at(k, f, s, v) = channels.at(k, f, s, v).cast<std::complex<float>>().cast<std::complex<double>>();
        return out;
    }
} // namespace ramode
