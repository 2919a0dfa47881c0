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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ramode/types.hpp"

namespace ramode
{
    /// Link budget knobs of the sum-rate objective. All values are linear.
    struct LinkParams
    {
        double rho = 1.0;          // SNR scale
        double noise_power = 1.0;  // sigma_n^2
        int n_s = 1;               // total streams
        std::vector<int> per_user_streams;  // empty: n_s split evenly over users

        /// Streams per user; validates against the array dimensions.
        std::vector<int> streams(int users, int n_r, int n_rf) const
        {
            if (!(rho > 0.0) || !(noise_power > 0.0))
                throw InvalidArgument("link: rho and noise_power must be > 0");
            std::vector<int> out = per_user_streams;
            if (out.empty())
            {
                if (users < 1 || n_s % users != 0)
                    throw InvalidArgument("link: n_s=" + std::to_string(n_s) + " not divisible by " + std::to_string(users) + " users");
                out.assign(static_cast<std::size_t>(users), n_s / users);
            }
            if (static_cast<int>(out.size()) != users)
                throw InvalidArgument("link: per_user_streams size does not match user count");
            int total = 0;
            for (int s : out)
            {
                if (s < 1 || s > std::min(n_r, n_rf))
                    throw InvalidArgument("link: per-user streams must lie in [1, min(N_R, N_RF)]");
                total += s;
            }
            if (total != n_s)
                throw InvalidArgument("link: per_user_streams do not sum to n_s");
            return out;
        }
    };

    /// Antenna-to-RF-chain connection without phase shifters: chain j drives
    /// the j-th contiguous block of n_t / n_rf antennas.
    template <typename Scalar = double>
    RMatrix<Scalar> default_rf_selector(int n_t, int n_rf)
    {
        if (n_t < 1 || n_rf < 1)
            throw InvalidArgument("default_rf_selector: counts must be positive");
        if (n_rf > n_t)
            throw InvalidArgument("default_rf_selector: more RF chains than antennas");
        if (n_t % n_rf != 0)
            throw InvalidArgument("default_rf_selector: n_rf must divide n_t");
        const int group = n_t / n_rf;
        RMatrix<Scalar> f_rf = RMatrix<Scalar>::Zero(n_t, n_rf);
        for (int j = 0; j < n_rf; ++j)
            f_rf.block(j * group, j, group, 1).setOnes();
        return f_rf;
    }

    template <typename Scalar>
    struct BeamformerPair
    {
        RMatrix<Scalar> f_rf;               // N_T x N_RF, binary
        std::vector<CMatrix<Scalar>> f_bb;  // per user N_RF x N_s_k

        /// F_RF [F_BB,1 ... F_BB,K].
        CMatrix<Scalar> precoder() const
        {
            Eigen::Index cols = 0;
            for (const auto &b : f_bb)
                cols += b.cols();
            CMatrix<Scalar> stacked(f_rf.cols(), cols);
            Eigen::Index offset = 0;
            for (const auto &b : f_bb)
            {
                stacked.middleCols(offset, b.cols()) = b;
                offset += b.cols();
            }
            return f_rf.template cast<std::complex<Scalar>>() * stacked;
        }

        Scalar total_power() const { return precoder().squaredNorm(); }
    };

    namespace detail
    {
        // Rotate each column so that its largest-magnitude entry is real and
        // positive. Removes the arbitrary phase left by the SVD.
        template <typename Scalar>
        void fix_column_phase(CMatrix<Scalar> &m)
        {
            for (Eigen::Index c = 0; c < m.cols(); ++c)
            {
                Eigen::Index row = 0;
                m.col(c).cwiseAbs().maxCoeff(&row);
                const Scalar mag = std::abs(m(row, c));
                if (mag > Scalar(0))
                    m.col(c) *= std::conj(m(row, c)) / mag;
            }
        }

        // Orthonormal basis of the null space of m (relative rank threshold).
        template <typename Scalar>
        CMatrix<Scalar> null_space(const CMatrix<Scalar> &m, Scalar rel_tol)
        {
            const Eigen::Index n = m.cols();
            if (m.rows() == 0)
                return CMatrix<Scalar>::Identity(n, n);
            Eigen::JacobiSVD<CMatrix<Scalar>> svd(m, Eigen::ComputeFullV);
            const auto &sv = svd.singularValues();
            const Scalar largest = sv.size() > 0 ? sv(0) : Scalar(0);
            Eigen::Index rank = 0;
            if (largest > Scalar(0))
                for (Eigen::Index i = 0; i < sv.size(); ++i)
                    if (sv(i) > rel_tol * largest)
                        ++rank;
            return svd.matrixV().rightCols(n - rank);
        }
    } // namespace detail

    /// Block-diagonalization zero-forcing beamformer.
    ///
    /// For each user the digital precoder lives in the null space of the other
    /// users' compound channels H_j F_RF, and inside that space follows the
    /// top right singular vectors of the user's own projected channel. The
    /// result is scaled so that ||F_RF [F_BB,1 ... F_BB,K]||_F^2 = N_s.
    /// With a single user this is plain SVD eigen-beamforming.
    template <typename Scalar>
    BeamformerPair<Scalar> bd_beamformer(const std::vector<CMatrix<Scalar>> &channels, const RMatrix<Scalar> &f_rf, const LinkParams &params)
    {
        using Complex = std::complex<Scalar>;
        const int users = static_cast<int>(channels.size());
        if (users < 1)
            throw InvalidArgument("bd_beamformer: no user channels");
        const Eigen::Index n_rf = f_rf.cols();
        const Eigen::Index n_r = channels.front().rows();
        for (const auto &h : channels)
            if (h.cols() != f_rf.rows() || h.rows() != n_r)
                throw InvalidArgument("bd_beamformer: channel dimensions do not match F_RF");
        const auto streams = params.streams(users, static_cast<int>(n_r), static_cast<int>(n_rf));

        std::vector<CMatrix<Scalar>> compound;
        compound.reserve(channels.size());
        const CMatrix<Scalar> f_rf_c = f_rf.template cast<Complex>();
        for (const auto &h : channels)
            compound.push_back(h * f_rf_c);

        BeamformerPair<Scalar> out{f_rf, {}};
        for (int k = 0; k < users; ++k)
        {
            CMatrix<Scalar> others((users - 1) * n_r, n_rf);
            for (int j = 0, row = 0; j < users; ++j)
            {
                if (j == k)
                    continue;
                others.middleRows(row * n_r, n_r) = compound[static_cast<std::size_t>(j)];
                ++row;
            }
            const CMatrix<Scalar> basis = detail::null_space<Scalar>(others, Scalar(1e-10));
            const int want = streams[static_cast<std::size_t>(k)];
            if (basis.cols() < want)
                throw InfeasibleError("BD infeasible for dimensions");

            const CMatrix<Scalar> projected = compound[static_cast<std::size_t>(k)] * basis;
            Eigen::JacobiSVD<CMatrix<Scalar>> svd(projected, Eigen::ComputeFullV);
            CMatrix<Scalar> f_bb = basis * svd.matrixV().leftCols(want);
            detail::fix_column_phase(f_bb);
            out.f_bb.push_back(std::move(f_bb));
        }

        const Scalar power = out.total_power();
        if (power > Scalar(0))
        {
            const Scalar scale = std::sqrt(static_cast<Scalar>(params.n_s) / power);
            for (auto &b : out.f_bb)
                b *= scale;
        }
        return out;
    }

    /// Sum over users of log2 det(I + rho/N_s C_k^-1 A_k A_k^H), with
    /// A_k = H_k F_RF F_BB,k and C_k the interference-plus-noise covariance.
    /// Evaluated through Cholesky factors of C_k and of the whitened matrix.
    template <typename Scalar>
    Scalar spectral_efficiency(const std::vector<CMatrix<Scalar>> &channels, const BeamformerPair<Scalar> &bf, const LinkParams &params)
    {
        using Complex = std::complex<Scalar>;
        const std::size_t users = channels.size();
        if (users == 0 || bf.f_bb.size() != users)
            throw InvalidArgument("spectral_efficiency: user count mismatch");
        const Eigen::Index n_r = channels.front().rows();
        for (const auto &h : channels)
            if (h.rows() != n_r || h.cols() != bf.f_rf.rows())
                throw InvalidArgument("spectral_efficiency: channel dimensions do not match F_RF");
        for (const auto &b : bf.f_bb)
            if (b.rows() != bf.f_rf.cols())
                throw InvalidArgument("spectral_efficiency: F_BB rows do not match RF chains");
        if (!(params.noise_power > 0.0) || !(params.rho > 0.0) || params.n_s < 1)
            throw InvalidArgument("spectral_efficiency: invalid link parameters");

        const Scalar snr = static_cast<Scalar>(params.rho) / static_cast<Scalar>(params.n_s);
        const CMatrix<Scalar> f_rf_c = bf.f_rf.template cast<Complex>();
        Scalar total = 0;
        for (std::size_t k = 0; k < users; ++k)
        {
            const CMatrix<Scalar> hf = channels[k] * f_rf_c;
            CMatrix<Scalar> cov = static_cast<Scalar>(params.noise_power) * CMatrix<Scalar>::Identity(n_r, n_r);
            for (std::size_t j = 0; j < users; ++j)
            {
                if (j == k)
                    continue;
                const CMatrix<Scalar> leak = hf * bf.f_bb[j];
                cov.noalias() += leak * leak.adjoint();
            }
            const CMatrix<Scalar> signal = hf * bf.f_bb[k];
            const Eigen::LLT<CMatrix<Scalar>> cov_llt(cov);
            const CMatrix<Scalar> whitened = cov_llt.matrixL().solve(signal);
            CMatrix<Scalar> m = CMatrix<Scalar>::Identity(n_r, n_r);
            m.noalias() += snr * (whitened * whitened.adjoint());
            const Eigen::LLT<CMatrix<Scalar>> m_llt(m);
            Scalar log_det = 0;
            for (Eigen::Index i = 0; i < n_r; ++i)
                log_det += Scalar(2) * std::log(std::real(m_llt.matrixLLT()(i, i)));
            total += log_det / std::log(Scalar(2));
        }
        return std::max(total, Scalar(0));
    }
} // namespace ramode
