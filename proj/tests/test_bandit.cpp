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

#include <doctest.h>

#include <cmath>
#include <random>

#include "ramode/bandit.hpp"
#include "ramode/types.hpp"

using namespace ramode;

TEST_SUITE("bandit")
{
    TEST_CASE("UCB plays unplayed arms first, smallest index")
    {
        PolicyState s(3);
        s.n << 1, 0, 1;
        s.t = 2;
        CHECK(ucb_select(s, {}) == 1);
        PolicyState fresh(4);
        CHECK(ucb_select(fresh, {}) == 0);
    }

    TEST_CASE("UCB score examples")
    {
        PolicyState s(2);
        s.r_bar << 0.9, 0.1;
        s.n << 5, 5;
        s.t = 10;
        CHECK(ucb_select(s, {5.0}) == 0);

        PolicyState e(2);
        e.r_bar << 0.4, 0.4;
        e.n << 10, 2;
        e.t = 12;
        CHECK(ucb_select(e, {5.0}) == 1);

        PolicyState tie(3);
        tie.r_bar << 0.5, 0.5, 0.5;
        tie.n << 3, 3, 3;
        tie.t = 9;
        CHECK(ucb_select(tie, {5.0}) == 0);
    }

    TEST_CASE("running mean update")
    {
        PolicyState s(2);
        s = ucb_update(s, 0, 0.7);
        CHECK(s.r_bar(0) == 0.7);
        CHECK(s.n(0) == 1);
        CHECK(s.t == 1);

        PolicyState m(3);
        m.r_bar << 0.5, 0.25, 0.125;
        m.n << 4, 2, 7;
        const PolicyState before = m;
        m = ucb_update(m, 0, 1.0);
        CHECK(std::abs(m.r_bar(0) - 0.6) < 1e-15);
        CHECK(m.n(0) == 5);
        CHECK(m.r_bar(1) == before.r_bar(1));
        CHECK(m.r_bar(2) == before.r_bar(2));
        CHECK(m.n(1) == 2);
        CHECK(m.n(2) == 7);

        CHECK_THROWS_AS(ucb_update(m, 0, 1.5), InvalidArgument);
        CHECK_THROWS_AS(ucb_update(m, 0, -0.1), InvalidArgument);
        CHECK_THROWS_AS(ucb_update(m, 3, 0.5), InvalidArgument);
    }

    TEST_CASE("running means equal history means")
    {
        std::mt19937_64 rng(31);
        std::uniform_int_distribution<int> arm_dist(0, 4);
        std::uniform_real_distribution<double> reward_dist(0.0, 1.0);
        PolicyState s(5);
        std::vector<std::vector<double>> history(5);
        for (int step = 0; step < 2000; ++step)
        {
            const int arm = arm_dist(rng);
            const double r = reward_dist(rng);
            history[static_cast<std::size_t>(arm)].push_back(r);
            s = ucb_update(std::move(s), arm, r);
        }
        CHECK(s.n.sum() == 2000);
        CHECK(s.t == 2000);
        for (int i = 0; i < 5; ++i)
        {
            double mean = 0.0;
            for (double r : history[static_cast<std::size_t>(i)])
                mean += r;
            mean /= static_cast<double>(history[static_cast<std::size_t>(i)].size());
            CHECK(std::abs(s.r_bar(i) - mean) <= 1e-12);
        }
    }

    TEST_CASE("Beta(1, 1) is uniform")
    {
        std::mt19937_64 rng(1);
        double sum = 0.0;
        for (int i = 0; i < 100000; ++i)
            sum += sample_beta(1.0, 1.0, rng);
        CHECK(std::abs(sum / 100000.0 - 0.5) <= 0.01);

        double skewed = 0.0;
        for (int i = 0; i < 100000; ++i)
            skewed += sample_beta(11.0, 51.0, rng);
        CHECK(std::abs(skewed / 100000.0 - 11.0 / 62.0) <= 0.005);
    }

    TEST_CASE("TS success and failure branches")
    {
        std::mt19937_64 rng(5);
        const TsParams params;
        auto hit = ts_step(PolicyState(3), params, [](int) { return 1.0; }, rng);
        CHECK(hit.success);
        CHECK(hit.state.successes(hit.arm) == 10.0);
        CHECK(hit.state.failures.sum() == 0.0);

        auto miss = ts_step(PolicyState(3), params, [](int) { return 0.0; }, rng);
        CHECK_FALSE(miss.success);
        CHECK(miss.state.failures(miss.arm) == 50.0);
        CHECK(miss.state.successes.sum() == 0.0);

        CHECK_THROWS_AS(ts_step(PolicyState(3), params, [](int) { return 2.0; }, rng), InvalidArgument);
        TsParams bad;
        bad.lambda = 0.0;
        CHECK_THROWS_AS(ts_step(PolicyState(3), bad, [](int) { return 0.5; }, rng), InvalidArgument);
    }

    TEST_CASE("TS mass conservation")
    {
        std::mt19937_64 rng(9);
        const TsParams params{1.0, 1.0, 10.0, 50.0};
        const std::vector<double> means{0.2, 0.5, 0.8, 0.4};
        PolicyState s(4);
        std::vector<int> wins(4, 0), losses(4, 0);
        for (int step = 0; step < 3000; ++step)
        {
            auto out = ts_step(std::move(s), params, [&](int a) { return means[static_cast<std::size_t>(a)]; }, rng);
            (out.success ? wins : losses)[static_cast<std::size_t>(out.arm)]++;
            s = std::move(out.state);
        }
        for (int i = 0; i < 4; ++i)
        {
            CHECK(s.successes(i) == 10.0 * wins[static_cast<std::size_t>(i)]);
            CHECK(s.failures(i) == 50.0 * losses[static_cast<std::size_t>(i)]);
            CHECK(s.n(i) == wins[static_cast<std::size_t>(i)] + losses[static_cast<std::size_t>(i)]);
        }
        CHECK(s.n.sum() == 3000);
    }

    TEST_CASE("reward normalization")
    {
        const RewardStats stats{2.0, 6.0};
        CHECK(normalize_reward(2.0, stats) == 0.0);
        CHECK(normalize_reward(6.0, stats) == 1.0);
        CHECK(normalize_reward(4.0, stats) == 0.5);
        CHECK(normalize_reward(9.0, stats) == 1.0);
        CHECK(normalize_reward(-1.0, stats) == 0.0);
        CHECK_THROWS_AS(normalize_reward(1.0, RewardStats{3.0, 3.0}), InvalidArgument);
    }
}
