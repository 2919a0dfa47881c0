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

#include "ramode/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ramode/types.hpp"

namespace ramode
{
    namespace
    {
        void check_reward(double reward)
        {
            if (!(reward >= 0.0 && reward <= 1.0))
                throw InvalidArgument("reward " + std::to_string(reward) + " outside [0, 1]; normalize first");
        }

        void check_arm(const PolicyState &state, int arm)
        {
            if (arm < 0 || arm >= state.arms())
                throw InvalidArgument("arm index " + std::to_string(arm) + " out of range");
        }

        void record(PolicyState &state, int arm, double reward)
        {
            const auto n_prev = static_cast<double>(state.n(arm));
            state.r_bar(arm) = (state.r_bar(arm) * n_prev + reward) / (n_prev + 1.0);
            state.n(arm) += 1;
            state.t += 1;
        }
    } // namespace

    double normalize_reward(double se, const RewardStats &stats)
    {
        if (!(stats.se_min < stats.se_max))
            throw InvalidArgument("normalize_reward: degenerate reward statistics");
        return std::clamp((se - stats.se_min) / (stats.se_max - stats.se_min), 0.0, 1.0);
    }

    PolicyState::PolicyState(int arms)
        : r_bar(Eigen::VectorXd::Zero(arms)),
          n(Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(arms)),
          successes(Eigen::VectorXd::Zero(arms)),
          failures(Eigen::VectorXd::Zero(arms))
    {
        if (arms < 0)
            throw InvalidArgument("PolicyState: negative arm count");
    }

    void TsParams::validate() const
    {
        if (!(lambda > 0.0) || !(omega > 0.0) || !(delta_s > 0.0) || !(delta_f > 0.0))
            throw InvalidArgument("TS parameters must all be > 0");
    }

    int ucb_select(const PolicyState &state, const UcbParams &params)
    {
        if (state.arms() < 1)
            throw InvalidArgument("ucb_select: no arms");
        for (int i = 0; i < state.arms(); ++i)
            if (state.n(i) == 0)
                return i;

        const double log_t = std::log(static_cast<double>(std::max<std::int64_t>(state.t, 1)));
        int best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < state.arms(); ++i)
        {
            const double score = params.gamma * state.r_bar(i) + std::sqrt(2.0 * log_t / static_cast<double>(state.n(i)));
            if (score > best_score)
            {
                best_score = score;
                best = i;
            }
        }
        return best;
    }

    PolicyState ucb_update(PolicyState state, int arm, double reward)
    {
        check_arm(state, arm);
        check_reward(reward);
        record(state, arm, reward);
        return state;
    }

    double sample_beta(double a, double b, std::mt19937_64 &rng)
    {
        const double x = std::gamma_distribution<double>(a, 1.0)(rng);
        const double y = std::gamma_distribution<double>(b, 1.0)(rng);
        const double sum = x + y;
        return sum > 0.0 ? x / sum : 0.5;
    }

    TsOutcome ts_step(PolicyState state, const TsParams &params, const std::function<double(int)> &reward_fn, std::mt19937_64 &rng)
    {
        params.validate();
        if (state.arms() < 1)
            throw InvalidArgument("ts_step: no arms");

        int arm = 0;
        double best = -1.0;
        for (int i = 0; i < state.arms(); ++i)
        {
            const double eta = sample_beta(state.successes(i) + params.lambda, state.failures(i) + params.omega, rng);
            if (eta > best)
            {
                best = eta;
                arm = i;
            }
        }

        const double reward = reward_fn(arm);
        check_reward(reward);
        const bool success = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < reward;
        if (success)
            state.successes(arm) += params.delta_s;
        else
            state.failures(arm) += params.delta_f;
        record(state, arm, reward);
        return {arm, reward, success, std::move(state)};
    }
} // namespace ramode
