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

#include "ramode/precoding.hpp"
#include "support.hpp"

using namespace ramode;

namespace
{
    std::vector<Eigen::MatrixXcd> draw_users(int users, int n_r, int n_t, std::mt19937_64 &rng)
    {
        std::vector<Eigen::MatrixXcd> h;
        for (int k = 0; k < users; ++k)
            h.push_back(test::random_cmatrix(n_r, n_t, rng));
        return h;
    }

    LinkParams link(int n_s, double rho = 10.0)
    {
        LinkParams p;
        p.rho = rho;
        p.n_s = n_s;
        return p;
    }
}

TEST_SUITE("precoding")
{
    TEST_CASE("RF selector layouts")
    {
        CHECK(default_rf_selector(4, 4) == Eigen::MatrixXd::Identity(4, 4));
        const Eigen::MatrixXd two = default_rf_selector(4, 2);
        Eigen::MatrixXd expected(4, 2);
        expected << 1, 0, 1, 0, 0, 1, 0, 1;
        CHECK(two == expected);
        CHECK_THROWS_AS(default_rf_selector(4, 3), InvalidArgument);
        CHECK_THROWS_AS(default_rf_selector(2, 4), InvalidArgument);
        CHECK_THROWS_AS(default_rf_selector(0, 1), InvalidArgument);
    }

    TEST_CASE("stream bookkeeping")
    {
        CHECK(link(2).streams(2, 2, 4) == std::vector<int>{1, 1});
        CHECK_THROWS_AS(link(3).streams(2, 2, 4), InvalidArgument);
        LinkParams p = link(3);
        p.per_user_streams = {2, 1};
        CHECK(p.streams(2, 2, 4) == std::vector<int>{2, 1});
        p.per_user_streams = {3, 0};
        CHECK_THROWS_AS(p.streams(2, 2, 4), InvalidArgument);
    }

    TEST_CASE("single antenna link reduces to log2(1 + rho |h|^2)")
    {
        Eigen::MatrixXcd h(1, 1);
        h(0, 0) = {0.6, -0.8};
        const std::vector<Eigen::MatrixXcd> hs{h * 2.0};
        const auto bf = bd_beamformer<double>(hs, Eigen::MatrixXd::Ones(1, 1), link(1, 3.0));
        CHECK(bf.total_power() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(spectral_efficiency<double>(hs, bf, link(1, 3.0)) == doctest::Approx(std::log2(1.0 + 3.0 * 4.0)).epsilon(1e-14));
    }

    TEST_CASE("BD nulls inter-user interference and meets the power budget")
    {
        std::mt19937_64 rng(12);
        const Eigen::MatrixXd f_rf = default_rf_selector(8, 8);
        for (int draw = 0; draw < 10; ++draw)
        {
            const auto h = draw_users(3, 2, 8, rng);
            LinkParams p = link(4);
            p.per_user_streams = {2, 1, 1};
            const auto bf = bd_beamformer<double>(h, f_rf, p);
            CHECK(std::abs(bf.total_power() - 4.0) < 1e-9);
            for (int k = 0; k < 3; ++k)
                for (int j = 0; j < 3; ++j)
                    if (j != k)
                        CHECK((h[k] * f_rf * bf.f_bb[j]).norm() / h[k].norm() < 1e-9);
        }
    }

    TEST_CASE("no null space means infeasible")
    {
        std::mt19937_64 rng(3);
        const auto h = draw_users(2, 2, 2, rng);
        CHECK_THROWS_AS(bd_beamformer<double>(h, default_rf_selector(2, 2), link(2)), InfeasibleError);
    }

    TEST_CASE("sum rate matches the eigenvalue oracle")
    {
        std::mt19937_64 rng(99);
        for (int draw = 0; draw < 20; ++draw)
        {
            const int users = 1 + draw % 2;
            const int n_t = users == 1 ? 4 : 8;
            const auto h = draw_users(users, 2, n_t, rng);
            const Eigen::MatrixXd f_rf = default_rf_selector(n_t, n_t / 2);
            const LinkParams p = link(users, 5.0);
            const auto bf = bd_beamformer<double>(h, f_rf, p);
            const double se = spectral_efficiency<double>(h, bf, p);
            const double oracle = test::se_oracle(h, f_rf, bf.f_bb, p.rho, p.noise_power, p.n_s);
            CHECK(std::abs(se - oracle) <= 1e-9 * oracle);
        }
    }

    TEST_CASE("oracle agrees when interference is present")
    {
        std::mt19937_64 rng(7);
        const auto h = draw_users(2, 2, 4, rng);
        const Eigen::MatrixXd f_rf = default_rf_selector(4, 4);
        BeamformerPair<double> bf{f_rf, {test::random_cmatrix(4, 1, rng), test::random_cmatrix(4, 1, rng)}};
        const LinkParams p = link(2, 8.0);
        const double se = spectral_efficiency<double>(h, bf, p);
        CHECK(std::abs(se - test::se_oracle(h, f_rf, bf.f_bb, 8.0, 1.0, 2)) <= 1e-9 * se);
    }

    TEST_CASE("more SNR never lowers the rate")
    {
        std::mt19937_64 rng(5);
        const auto h = draw_users(2, 2, 8, rng);
        const Eigen::MatrixXd f_rf = default_rf_selector(8, 4);
        double last = -1.0;
        for (double rho : {0.1, 1.0, 10.0, 100.0})
        {
            const auto bf = bd_beamformer<double>(h, f_rf, link(2, rho));
            const double se = spectral_efficiency<double>(h, bf, link(2, rho));
            CHECK(se > last);
            last = se;
        }
    }

    TEST_CASE("receive-side unitary rotation leaves the rate unchanged")
    {
        std::mt19937_64 rng(17);
        const auto h = draw_users(2, 2, 8, rng);
        const Eigen::MatrixXd f_rf = default_rf_selector(8, 8);
        auto rotated = h;
        for (auto &m : rotated)
            m = Eigen::HouseholderQR<Eigen::MatrixXcd>(test::random_cmatrix(2, 2, rng)).householderQ() * m;
        const LinkParams p = link(2, 4.0);
        const double a = spectral_efficiency<double>(h, bd_beamformer<double>(h, f_rf, p), p);
        const double b = spectral_efficiency<double>(rotated, bd_beamformer<double>(rotated, f_rf, p), p);
        CHECK(std::abs(a - b) <= 1e-9 * a);
    }

    TEST_CASE("float instantiation tracks double")
    {
        std::mt19937_64 rng(8);
        const auto h = draw_users(1, 2, 4, rng);
        std::vector<CMatrix<float>> hf;
        for (const auto &m : h)
            hf.push_back(m.cast<std::complex<float>>());
        const LinkParams p = link(1, 10.0);
        const double d = spectral_efficiency<double>(h, bd_beamformer<double>(h, default_rf_selector(4, 4), p), p);
        const float f = spectral_efficiency<float>(hf, bd_beamformer<float>(hf, default_rf_selector<float>(4, 4), p), p);
        CHECK(std::abs(d - f) < 1e-4 * d);
    }

    TEST_CASE("dimension mismatches are rejected")
    {
        std::mt19937_64 rng(1);
        const auto h = draw_users(1, 2, 4, rng);
        CHECK_THROWS_AS(bd_beamformer<double>(h, default_rf_selector(8, 4), link(1)), InvalidArgument);
        CHECK_THROWS_AS(bd_beamformer<double>({}, default_rf_selector(4, 4), link(1)), InvalidArgument);
        const auto bf = bd_beamformer<double>(h, default_rf_selector(4, 4), link(1));
        CHECK_THROWS_AS(spectral_efficiency<double>(draw_users(2, 2, 4, rng), bf, link(1)), InvalidArgument);
    }
}
