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
#include <random>
#include <span>

#include <Eigen/Dense>

#include "ramode/channel.hpp"
#include "ramode/mode_assignment.hpp"
#include "ramode/precoding.hpp"

namespace ramode
{
    struct SelectionResult
    {
        ModeAssignment assignment;
        double se = 0.0;
        std::uint64_t evaluations = 0;
        std::uint64_t infeasible = 0;  // states skipped because BD had no null space
    };

    struct SearchOptions
    {
        std::uint64_t cap = 1'000'000;
        int workers = 1;
        int subcarrier = -1;  // -1 averages over all subcarriers
    };

    /// Sum rate of one joint state with BD precoding, averaged over subcarriers
    /// when `subcarrier` is -1. Throws InfeasibleError when BD has no null space.
    double state_spectral_efficiency(const ChannelSet &channels, const ModeAssignment &assignment, int snapshot,
                                     const Eigen::MatrixXd &f_rf, const LinkParams &params, int subcarrier = -1);

    /// Scores every state; the best one wins and ties go to the smallest state
    /// index, so the result does not depend on the worker count.
    SelectionResult exhaustive_search(const ChannelSet &channels, int snapshot, const Eigen::MatrixXd &f_rf,
                                      const LinkParams &params, const SearchOptions &options = {});

    /// SE of every state at every listed snapshot (rows: snapshots, cols:
    /// states). BD-infeasible entries hold -infinity.
    Eigen::MatrixXd state_se_table(const ChannelSet &channels, std::span<const int> snapshots, const Eigen::MatrixXd &f_rf,
                                   const LinkParams &params, const SearchOptions &options = {});

    ModeAssignment random_selection(int n_t, int n_p, std::uint64_t seed);

    template <typename Rng>
    ModeAssignment random_selection(int n_t, int n_p, Rng &rng)
    {
        std::uniform_int_distribution<std::uint64_t> pick(0, state_count(n_t, n_p) - 1);
        return ModeAssignment::from_state_index(pick(rng), n_t, n_p);
    }

    /// exp(alpha x) / sum exp(alpha x), evaluated after subtracting max(x).
    template <typename Derived>
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> annealed_softmax(const Eigen::MatrixBase<Derived> &x,
                                                                               typename Derived::Scalar alpha)
    {
        using Scalar = typename Derived::Scalar;
        if (x.size() == 0)
            return {};
        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> e = (alpha * (x.derived().reshaped().array() - x.maxCoeff())).exp().matrix();
        return e / e.sum();
    }

    /// Row-wise annealed softmax of an antennas x modes score matrix.
    template <typename Derived>
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> annealed_softmax_rows(const Eigen::MatrixBase<Derived> &x,
                                                                                                  typename Derived::Scalar alpha)
    {
        Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(x.rows(), x.cols());
        for (Eigen::Index r = 0; r < x.rows(); ++r)
            out.row(r) = annealed_softmax(x.row(r).transpose(), alpha).transpose();
        return out;
    }

    /// Per-row argmax; ties go to the smallest mode.
    ModeAssignment project_to_one_hot(const Eigen::MatrixXd &soft);
} // namespace ramode
