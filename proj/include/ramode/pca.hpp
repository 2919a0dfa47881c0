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
#include <string>

#include <Eigen/Dense>

#include "ramode/types.hpp"

namespace ramode
{
    template <typename Scalar>
    struct PcaModel
    {
        RVector<Scalar> mean;                // d
        RMatrix<Scalar> basis;               // d x p, orthonormal columns
        RVector<Scalar> explained_variance;  // p, descending

        template <typename Derived>
        RMatrix<Scalar> project(const Eigen::MatrixBase<Derived> &data) const
        {
            return (data.rowwise() - mean.transpose()) * basis;
        }

        template <typename Derived>
        RMatrix<Scalar> reconstruct(const Eigen::MatrixBase<Derived> &scores) const
        {
            return (scores * basis.transpose()).rowwise() + mean.transpose();
        }
    };

    /// Principal components of the rows of `data` (n samples x d features)
    /// from the eigendecomposition of the sample covariance. Each basis column
    /// has its largest-magnitude entry made positive.
    template <typename Derived>
    PcaModel<typename Derived::Scalar> pca_fit(const Eigen::MatrixBase<Derived> &data, int p)
    {
        using Scalar = typename Derived::Scalar;
        const Eigen::Index n = data.rows();
        const Eigen::Index d = data.cols();
        if (n < 2)
            throw InvalidArgument("pca_fit: at least 2 samples required");
        if (p < 1 || p > std::min(n, d))
            throw InvalidArgument("pca_fit: component count " + std::to_string(p) + " out of range [1, " +
                                  std::to_string(std::min(n, d)) + "]");

        PcaModel<Scalar> model;
        model.mean = data.colwise().mean().transpose();
        const RMatrix<Scalar> centered = data.rowwise() - model.mean.transpose();
        const RMatrix<Scalar> cov = (centered.adjoint() * centered) / Scalar(n - 1);

        Eigen::SelfAdjointEigenSolver<RMatrix<Scalar>> eig(cov);
        if (eig.info() != Eigen::Success)
            throw Error("pca_fit: eigendecomposition failed");

        // Eigen sorts ascending; take the last p columns in reverse.
        model.basis.resize(d, p);
        model.explained_variance.resize(p);
        for (int j = 0; j < p; ++j)
        {
            const Eigen::Index src = d - 1 - j;
            auto column = eig.eigenvectors().col(src);
            Eigen::Index pivot = 0;
            column.cwiseAbs().maxCoeff(&pivot);
            const Scalar sign = column(pivot) < Scalar(0) ? Scalar(-1) : Scalar(1);
            model.basis.col(j) = sign * column;
            model.explained_variance(j) = std::max(eig.eigenvalues()(src), Scalar(0));
        }
        return model;
    }
} // namespace ramode
