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
#include <vector>

#include <Eigen/Core>

namespace ramode
{
    /// Number of joint RA states n_modes^n_antennas. Throws InvalidArgument on
    /// overflow of 64 bits.
    std::uint64_t state_count(int n_antennas, int n_modes);

    /// Per-antenna mode vector. Modes are 0-based: antenna m uses pattern
    /// modes()[m] in [0, n_modes).
    ///
    /// The state index is the mixed-radix number whose most significant digit
    /// is antenna 0, so index 0 is "every antenna on mode 0" and the
    /// enumeration order is lexicographic in the mode vector.
    class ModeAssignment
    {
    public:
        ModeAssignment(std::vector<int> modes, int n_modes);

        static ModeAssignment uniform(int n_antennas, int n_modes, int mode = 0);
        static ModeAssignment from_state_index(std::uint64_t index, int n_antennas, int n_modes);

        /// Accepts a binary selection matrix (antennas x modes). Every entry must
        /// be exactly 0 or 1 and every row must sum to 1.
        static ModeAssignment from_one_hot(const Eigen::MatrixXd &w);

        std::uint64_t state_index() const;
        Eigen::MatrixXd one_hot() const;

        int antennas() const { return static_cast<int>(modes_.size()); }
        int n_modes() const { return n_modes_; }
        const std::vector<int> &modes() const { return modes_; }
        int operator[](int antenna) const { return modes_[static_cast<std::size_t>(antenna)]; }

        friend bool operator==(const ModeAssignment &, const ModeAssignment &) = default;

    private:
        std::vector<int> modes_;
        int n_modes_;
    };
} // namespace ramode
