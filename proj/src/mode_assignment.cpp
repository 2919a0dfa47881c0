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

#include "ramode/mode_assignment.hpp"

#include <limits>
#include <string>

#include "ramode/types.hpp"

namespace ramode
{
    std::uint64_t state_count(int n_antennas, int n_modes)
    {
        if (n_antennas < 1 || n_modes < 1)
            throw InvalidArgument("state_count: antennas and modes must be positive");
        std::uint64_t count = 1;
        for (int m = 0; m < n_antennas; ++m)
        {
            if (count > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(n_modes))
                throw InvalidArgument("state_count: state space does not fit in 64 bits");
            count *= static_cast<std::uint64_t>(n_modes);
        }
        return count;
    }

    ModeAssignment::ModeAssignment(std::vector<int> modes, int n_modes)
        : modes_(std::move(modes)), n_modes_(n_modes)
    {
        if (n_modes_ < 1)
            throw InvalidArgument("ModeAssignment: n_modes must be >= 1");
        if (modes_.empty())
            throw InvalidArgument("ModeAssignment: at least one antenna required");
        for (int mode : modes_)
            if (mode < 0 || mode >= n_modes_)
                throw InvalidArgument("ModeAssignment: mode " + std::to_string(mode) + " out of range");
    }

    ModeAssignment ModeAssignment::uniform(int n_antennas, int n_modes, int mode)
    {
        return ModeAssignment(std::vector<int>(static_cast<std::size_t>(n_antennas), mode), n_modes);
    }

    ModeAssignment ModeAssignment::from_state_index(std::uint64_t index, int n_antennas, int n_modes)
    {
        if (index >= state_count(n_antennas, n_modes))
            throw InvalidArgument("ModeAssignment: state index out of range");
        std::vector<int> modes(static_cast<std::size_t>(n_antennas));
        const auto radix = static_cast<std::uint64_t>(n_modes);
        for (int m = n_antennas - 1; m >= 0; --m)
        {
            modes[static_cast<std::size_t>(m)] = static_cast<int>(index % radix);
            index /= radix;
        }
        return ModeAssignment(std::move(modes), n_modes);
    }

    ModeAssignment ModeAssignment::from_one_hot(const Eigen::MatrixXd &w)
    {
        if (w.rows() < 1 || w.cols() < 1)
            throw InvalidArgument("invalid one-hot assignment: empty matrix");
        std::vector<int> modes(static_cast<std::size_t>(w.rows()), -1);
        for (Eigen::Index m = 0; m < w.rows(); ++m)
        {
            int ones = 0;
            for (Eigen::Index v = 0; v < w.cols(); ++v)
            {
                const double entry = w(m, v);
                if (entry == 1.0)
                {
                    ++ones;
                    modes[static_cast<std::size_t>(m)] = static_cast<int>(v);
                }
                else if (entry != 0.0)
                {
                    throw InvalidArgument("invalid one-hot assignment: non-binary entry in row " + std::to_string(m));
                }
            }
            if (ones != 1)
                throw InvalidArgument("invalid one-hot assignment: row " + std::to_string(m) + " does not sum to 1");
        }
        return ModeAssignment(std::move(modes), static_cast<int>(w.cols()));
    }

    std::uint64_t ModeAssignment::state_index() const
    {
        std::uint64_t index = 0;
        for (int mode : modes_)
            index = index * static_cast<std::uint64_t>(n_modes_) + static_cast<std::uint64_t>(mode);
        return index;
    }

    Eigen::MatrixXd ModeAssignment::one_hot() const
    {
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(antennas(), n_modes_);
        for (int m = 0; m < antennas(); ++m)
            w(m, (*this)[m]) = 1.0;
        return w;
    }
} // namespace ramode
