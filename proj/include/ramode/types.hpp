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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ramode
{
    template <typename Scalar>
    using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

    template <typename Scalar>
    using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

    template <typename Scalar>
    using RMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    template <typename Scalar>
    using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    using Vec3 = Eigen::Vector3d;

    // Error hierarchy. The CLI maps each family to its own exit code.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class InvalidArgument : public Error
    {
    public:
        using Error::Error;
    };

    class ConfigError : public Error
    {
    public:
        using Error::Error;
    };

    /// Raised when a problem instance is well formed but cannot be solved
    /// (state space above the search cap, no block-diagonalization null space).
    class InfeasibleError : public Error
    {
    public:
        using Error::Error;
    };

    class IoError : public Error
    {
    public:
        using Error::Error;
    };

    inline constexpr const char *kVersion = "0.1.0";
} // namespace ramode
