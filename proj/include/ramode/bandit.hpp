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
#include <functional>
#include <random>

#include <Eigen/Core>

namespace ramode
{
    /// Offline SE range used to map raw SE onto [0, 1] rewards.
    struct RewardStats
    {
        double se_min = 0.0;
        double se_max = 1.0;
    };

    /// clamp((se - se_min) / (se_max - se_min), 0, 1).
    double normalize_reward(double se, const RewardStats &stats);

    /// Per-arm bookkeeping shared by both policies. `t` counts completed steps.
    struct PolicyState
    {
        explicit PolicyState(int arms = 0);

        int arms() const { return static_cast<int>(r_bar.size()); }

        std::int64_t t = 0;
        Eigen::VectorXd r_bar;                              // running mean of normalized rewards
        Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> n;   // selection counts
        Eigen::VectorXd successes;                          // S_i
        Eigen::VectorXd failures;                           // F_i
    };

    struct UcbParams
    {
        double gamma = 5.0;  // weight on the exploitation term
    };

    struct TsParams
    {
        double lambda = 1.0;   // added to S_i in the Beta prior
        double omega = 1.0;    // added to F_i
        double delta_s = 10.0; // success increment
        double delta_f = 50.0; // failure increment

        void validate() const;
    };

    /// Any never-played arm first (smallest index); afterwards
    /// argmax gamma * r_bar_i + sqrt(2 ln t / n_i), ties to the smallest index.
    int ucb_select(const PolicyState &state, const UcbParams &params);

    /// Running-mean and count update of the played arm; every other arm is
    /// left untouched. Rewards must already be normalized to [0, 1].
    PolicyState ucb_update(PolicyState state, int arm, double reward);

    struct TsOutcome
    {
        int arm = 0;
        double reward = 0.0;  // probability handed to the Bernoulli trial
        bool success = false;
        PolicyState state;
    };

    double sample_beta(double a, double b, std::mt19937_64 &rng);

    /// One Thompson-sampling round: draw eta_i ~ Beta(S_i + lambda, F_i + omega),
    /// play the argmax, run a Bernoulli trial with the observed reward and add
    /// delta_s to S or delta_f to F of the played arm. Counts and running means
    /// are tracked as in UCB.
    TsOutcome ts_step(PolicyState state, const TsParams &params, const std::function<double(int)> &reward_fn, std::mt19937_64 &rng);
} // namespace ramode
