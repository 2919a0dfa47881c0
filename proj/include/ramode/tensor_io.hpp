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

#pragma once

#include <cstdint>
#include <filesystem>

#include <json.hpp>

#include "ramode/channel.hpp"

namespace ramode
{
    // Channel tensor file layout:
    //   "RACT" | u32 LE version | u64 LE header length | UTF-8 JSON header | payload
    // The payload holds little-endian float32 (re, im) pairs in row-major
    // order over dims [sample, user, subcarrier, mode, rx, tx].
    inline constexpr std::uint32_t kTensorFormatVersion = 1;

    struct ChannelTensorFile
    {
        ChannelSet channels;
        nlohmann::json header;
    };

    void write_channel_tensor(const std::filesystem::path &path, const ChannelSet &channels,
                              const nlohmann::json &geometry = nlohmann::json::object());

    ChannelTensorFile read_channel_tensor(const std::filesystem::path &path);

    /// Copy of `channels` with every entry rounded through float32, i.e. what
    /// a write/read cycle reproduces.
    ChannelSet round_to_float(const ChannelSet &channels);
} // namespace ramode
