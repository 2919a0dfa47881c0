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
#include <limits>

#include "ramode/selection.hpp"
#include "support.hpp"

using namespace ramode;

namespace
{
    ChannelSet small_set(int n_t_side, int n_modes, int users, std::uint64_t seed)
    {
        GeometrySpec g;
        g.array_x = n_t_side;
        g.array_y = 1;
        g.modes = evenly_spread_modes(n_modes, 2.0, 0.0, 2.0);
        g.random_scatterers.count = 3;
        std::vector<UserMotion> motions;
        for (int k = 0; k < users; ++k)
            motions.emplace_back(Vec3(55.0 + 10.0 * k, -20.0 + 35.0 * k, 1.5));
        return generate_channels(g, motions, seed);
    }

    LinkParams link(int n_s)
    {
        LinkParams p;
        p.rho = 10.0;
        p.n_s = n_s;
        return p;
    }

    // Enumerates mode vectors by nested counting and builds channels column by column.
    std::pair<std::uint64_t, double> brute_force(const ChannelSet &set, const Eigen::MatrixXd &f_rf, const LinkParams &p)
    {
        const auto &d = set.dims();
        std::vector<int> modes(static_cast<std::size_t>(d.tx), 0);
        std::uint64_t best_index = 0, index = 0;
        double best = -std::numeric_limits<double>::infinity();
        while (true)
        {
            std::vector<Eigen::MatrixXcd> h;
            for (int k = 0; k < d.users; ++k)
            {
                Eigen::MatrixXcd hk(d.rx, d.tx);
                for (int m = 0; m < d.tx; ++m)
                    hk.col(m) = set.at(k, 0, 0, modes[static_cast<std::size_t>(m)]).col(m);
                h.push_back(hk);
            }
            const auto bf = bd_beamformer<double>(h, f_rf, p);
            const double se = spectral_efficiency<double>(h, bf, p);
            if (se > best)
            {
                best = se;
                best_index = index;
            }
            int pos = d.tx - 1;
            while (pos >= 0 && ++modes[static_cast<std::size_t>(pos)] == d.modes)
                modes[static_cast<std::size_t>(pos--)] = 0;
            if (pos < 0)
                break;
            ++index;
        }
        return {best_index, best};
    }
}

TEST_SUITE("selection")
{
    TEST_CASE("exhaustive search matches brute-force enumeration")
    {
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
        {
            const auto set = small_set(3, 3, 1, seed);
            const Eigen::MatrixXd f_rf = default_rf_selector(3, 3);
            const auto result = exhaustive_search(set, 0, f_rf, link(1));
            const auto [index, se] = brute_force(set, f_rf, link(1));
            CHECK(result.assignment.state_index() == index);
            CHECK(result.se == se);
            CHECK(result.evaluations == 27);
            CHECK(result.infeasible == 0);
        }
    }

    TEST_CASE("worker count does not change the answer")
    {
        const auto set = small_set(4, 3, 2, 4);
        const Eigen::MatrixXd f_rf = default_rf_selector(4, 4);
        SearchOptions one, three;
        three.workers = 3;
        const auto a = exhaustive_search(set, 0, f_rf, link(2), one);
        const auto b = exhaustive_search(set, 0, f_rf, link(2), three);
        CHECK(a.assignment == b.assignment);
        CHECK(a.se == b.se);
        const std::vector<int> snaps{0};
        CHECK(state_se_table(set, snaps, f_rf, link(2), one) == state_se_table(set, snaps, f_rf, link(2), three));
    }

    TEST_CASE("single mode has a single state")
    {
        const auto set = small_set(3, 1, 1, 2);
        const auto r = exhaustive_search(set, 0, default_rf_selector(3, 3), link(1));
        CHECK(r.assignment.state_index() == 0);
        CHECK(r.evaluations == 1);
    }

    TEST_CASE("identical modes tie and resolve to state 0")
    {
        GeometrySpec g;
        g.array_x = 3;
        g.array_y = 1;
        g.modes = {{0.0, 0.0, 2.0}, {0.0, 0.0, 2.0}};
        std::vector<UserMotion> users{Vec3(60.0, 0.0, 1.5)};
        const auto set = generate_channels(g, users, 1);
        CHECK(exhaustive_search(set, 0, default_rf_selector(3, 3), link(1)).assignment.state_index() == 0);
    }

    TEST_CASE("table row maximum equals the exhaustive optimum")
    {
        const auto set = small_set(3, 3, 1, 8);
        const Eigen::MatrixXd f_rf = default_rf_selector(3, 3);
        const std::vector<int> snaps{0};
        const Eigen::MatrixXd table = state_se_table(set, snaps, f_rf, link(1));
        Eigen::Index arg = 0;
        CHECK(table.row(0).maxCoeff(&arg) == exhaustive_search(set, 0, f_rf, link(1)).se);
        CHECK(static_cast<std::uint64_t>(arg) == exhaustive_search(set, 0, f_rf, link(1)).assignment.state_index());
    }

    TEST_CASE("cap and BD infeasibility surface as InfeasibleError")
    {
        const auto set = small_set(3, 3, 1, 1);
        SearchOptions tight;
        tight.cap = 26;
        CHECK_THROWS_AS(exhaustive_search(set, 0, default_rf_selector(3, 3), link(1), tight), InfeasibleError);

        GeometrySpec g;
        g.array_x = 1;
        g.array_y = 1;
        g.rx_antennas = 1;
        std::vector<UserMotion> users{Vec3(60.0, -10.0, 1.5), Vec3(60.0, 10.0, 1.5)};
        const auto crowded = generate_channels(g, users, 1);
        CHECK_THROWS_AS(exhaustive_search(crowded, 0, default_rf_selector(1, 1), link(2)), InfeasibleError);
        const std::vector<int> snaps{0};
        CHECK(std::isinf(state_se_table(crowded, snaps, default_rf_selector(1, 1), link(2))(0, 0)));
    }

    TEST_CASE("random selection is uniform over states")
    {
        std::mt19937_64 rng(2024);
        std::vector<double> counts(9, 0.0);
        const int draws = 100000;
        for (int i = 0; i < draws; ++i)
            counts[random_selection(2, 3, rng).state_index()] += 1.0;
        double chi2 = 0.0;
        const double expected = draws / 9.0;
        for (double c : counts)
            chi2 += (c - expected) * (c - expected) / expected;
        CHECK(chi2 < 20.09);  // chi-square 8 dof, p = 0.01
        CHECK(random_selection(4, 3, 7) == random_selection(4, 3, 7));
    }

    TEST_CASE("annealed softmax")
    {
        const Eigen::VectorXd flat = Eigen::VectorXd::Constant(5, 2.5);
        for (double alpha : {0.1, 1.0, 1e4})
            CHECK((annealed_softmax(flat, alpha).array() - 0.2).abs().maxCoeff() <= 1e-12);

        Eigen::VectorXd two(2);
        two << 0.0, 1.0;
        const Eigen::VectorXd s = annealed_softmax(two, 1.0);
        const double e = std::exp(1.0);
        CHECK(std::abs(s(0) - 1.0 / (1.0 + e)) < 1e-15);
        CHECK(std::abs(s(1) - e / (1.0 + e)) < 1e-15);

        Eigen::VectorXd x(3);
        x << 0.3, 0.31, -2.0;
        CHECK(annealed_softmax(x, 1e4).maxCoeff() >= 1.0 - 1e-6);
        CHECK((annealed_softmax(x, 3.0) - annealed_softmax((x.array() + 100.0).matrix(), 3.0)).norm() < 1e-12);

        double last = 0.0;
        for (double alpha : {0.1, 1.0, 10.0, 100.0})
        {
            const double top = annealed_softmax(x, alpha)(1);
            CHECK(top >= last);
            last = top;
        }

        Eigen::MatrixXd scores(2, 3);
        scores << 1, 2, 3, 0, 0, 0;
        const Eigen::MatrixXd rows = annealed_softmax_rows(scores, 2.0);
        CHECK((rows.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-15);
    }

    TEST_CASE("projection to one-hot")
    {
        Eigen::MatrixXd soft(3, 3);
        soft << 0.2, 0.5, 0.3, 0.4, 0.4, 0.2, 0.1, 0.1, 0.8;
        CHECK(project_to_one_hot(soft).modes() == std::vector<int>{1, 0, 2});
        soft(0, 0) = NAN;
        CHECK_THROWS_AS(project_to_one_hot(soft), InvalidArgument);
    }
}
