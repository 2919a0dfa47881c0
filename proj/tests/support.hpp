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

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ramode/precoding.hpp"

namespace ramode::test
{
    inline Eigen::MatrixXcd random_cmatrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> g(0.0, std::sqrt(0.5));
        Eigen::MatrixXcd m(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
                m(r, c) = {g(rng), g(rng)};
        return m;
    }

    inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> g(0.0, 1.0);
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
                m(r, c) = g(rng);
        return m;
    }

    // Sum rate from the eigenvalues of C^-1/2 A A^H C^-1/2, in long double.
    inline double se_oracle(const std::vector<Eigen::MatrixXcd> &h, const Eigen::MatrixXd &f_rf, const std::vector<Eigen::MatrixXcd> &f_bb,
                            double rho, double noise, int n_s)
    {
        using LC = std::complex<long double>;
        using LM = Eigen::Matrix<LC, Eigen::Dynamic, Eigen::Dynamic>;
        const LM frf = f_rf.cast<long double>().cast<LC>();
        long double total = 0;
        for (std::size_t k = 0; k < h.size(); ++k)
        {
            const LM hf = h[k].cast<LC>() * frf;
            const Eigen::Index n_r = hf.rows();
            LM c = LM::Identity(n_r, n_r) * static_cast<long double>(noise);
            for (std::size_t j = 0; j < h.size(); ++j)
                if (j != k)
                {
                    const LM leak = hf * f_bb[j].cast<LC>();
                    c += leak * leak.adjoint();
                }
            Eigen::SelfAdjointEigenSolver<LM> ce(c);
            const LM c_isqrt = ce.eigenvectors() * ce.eigenvalues().cwiseInverse().cwiseSqrt().template cast<LC>().asDiagonal() *
                               ce.eigenvectors().adjoint();
            const LM a = hf * f_bb[k].cast<LC>();
            const LM m = c_isqrt * a * a.adjoint() * c_isqrt;
            Eigen::SelfAdjointEigenSolver<LM> me(m);
            for (Eigen::Index i = 0; i < n_r; ++i)
                total += std::log2(1.0L + static_cast<long double>(rho) / n_s * std::max(me.eigenvalues()(i), 0.0L));
        }
        return static_cast<double>(total);
    }

    // Mean intra-cluster distance vs nearest other cluster, straight from the definition.
    inline double silhouette_oracle(const Eigen::MatrixXd &x, const std::vector<int> &labels)
    {
        const auto n = static_cast<int>(x.rows());
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
        {
            std::vector<double> dist_sum(64, 0.0);
            std::vector<int> count(64, 0);
            for (int j = 0; j < n; ++j)
            {
                if (j == i)
                    continue;
                dist_sum[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])] += (x.row(i) - x.row(j)).norm();
                ++count[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])];
            }
            const int own = labels[static_cast<std::size_t>(i)];
            if (count[static_cast<std::size_t>(own)] == 0)
                continue;  // singleton contributes 0
            const double a = dist_sum[static_cast<std::size_t>(own)] / count[static_cast<std::size_t>(own)];
            double b = INFINITY;
            for (int c = 0; c < 64; ++c)
                if (c != own && count[static_cast<std::size_t>(c)] > 0)
                    b = std::min(b, dist_sum[static_cast<std::size_t>(c)] / count[static_cast<std::size_t>(c)]);
            if (std::max(a, b) > 0.0)
                sum += (b - a) / std::max(a, b);
        }
        return sum / n;
    }

    inline std::filesystem::path scratch_dir(const std::string &name)
    {
        const auto dir = std::filesystem::temp_directory_path() / ("ramode_test_" + name);
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        return dir;
    }

    inline std::string slurp(const std::filesystem::path &path)
    {
        std::FILE *f = std::fopen(path.string().c_str(), "rb");
        if (!f)
            return {};
        std::string out;
        char buf[65536];
        std::size_t got;
        while ((got = std::fread(buf, 1, sizeof buf, f)) > 0)
            out.append(buf, got);
        std::fclose(f);
        return out;
    }
} // namespace ramode::test
