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
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ramode/mode_assignment.hpp"
#include "ramode/types.hpp"

namespace ramode
{
    inline constexpr double kSpeedOfLight = 299792458.0;

    /// Radiation pattern of one RA mode: g(dir) = max(cos(angle(dir, pointing)), 0)^exponent.
    /// Azimuth is measured from the array boresight (+x) towards +y, elevation
    /// from the xy-plane towards +z.
    struct ModePattern
    {
        double azimuth = 0.0;
        double elevation = 0.0;
        double exponent = 2.0;

        Vec3 pointing() const;
        double gain(const Vec3 &direction) const;
    };

    /// `count` patterns with pointing directions evenly spaced over an azimuth
    /// sector centred on boresight. A single mode points at boresight.
    std::vector<ModePattern> evenly_spread_modes(int count, double sector, double elevation, double exponent);

    struct Scatterer
    {
        Vec3 position = Vec3::Zero();
        std::complex<double> gain{1.0, 0.0};
    };

    /// Scatterers drawn uniformly inside an axis-aligned box from the channel seed.
    struct RandomScatterers
    {
        int count = 0;
        Vec3 lower = Vec3(20.0, -80.0, 0.0);
        Vec3 upper = Vec3(100.0, 80.0, 20.0);
        double gain = 1.0;
    };

    /// Geometric propagation model: one optional LOS path plus single-bounce
    /// paths through fixed scatterers. The BS carries a planar array in the
    /// y-z plane (boresight +x); every user carries a linear array along y.
    struct GeometrySpec
    {
        Vec3 bs_position = Vec3(0.0, 0.0, 10.0);
        int array_x = 2;               // elements along y
        int array_y = 2;               // elements along z
        double element_spacing = 0.5;  // wavelengths
        int rx_antennas = 2;
        double rx_spacing = 0.5;       // wavelengths
        double carrier_frequency = 3.5e9;
        int subcarriers = 1;
        double subcarrier_spacing = 30e3;
        bool los = true;
        double rician_factor = 3.0;    // LOS power / total scattered power
        double pathloss_exponent = 2.0;
        double reference_distance = 50.0;
        std::vector<Scatterer> scatterers;
        RandomScatterers random_scatterers;
        std::vector<ModePattern> modes = evenly_spread_modes(3, 2.0 * 3.14159265358979323846 / 3.0, 0.0, 2.0);

        int tx_antennas() const { return array_x * array_y; }
        int n_modes() const { return static_cast<int>(modes.size()); }
        void validate() const;
    };

    struct LinearPath
    {
        std::vector<Vec3> waypoints;
    };

    struct CircularPath
    {
        Vec3 center = Vec3(60.0, 0.0, 1.5);
        double radius = 10.0;
        double start_angle = 0.0;
    };

    /// Constant-speed motion. A linear path is walked back and forth along its
    /// waypoints when the horizon outlasts it; a circular path loops
    /// counter-clockwise.
    struct TrajectorySpec
    {
        std::variant<LinearPath, CircularPath> path = CircularPath{};
        double speed = 30.0 / 3.6;  // m/s
        double time_step = 0.01;    // s
        int num_steps = 1;

        void validate() const;
        std::vector<Vec3> positions() const;
    };

    /// A user is either parked at one position, follows a trajectory, or is
    /// given an explicit position per snapshot.
    using UserMotion = std::variant<Vec3, TrajectorySpec, std::vector<Vec3>>;

    struct ChannelDims
    {
        int users = 1;
        int subcarriers = 1;
        int snapshots = 1;
        int modes = 1;
        int rx = 1;
        int tx = 1;

        std::uint64_t states() const { return state_count(tx, modes); }
        friend bool operator==(const ChannelDims &, const ChannelDims &) = default;
    };

    /// Per-mode channels H_s[k, f, t, mode], each rx x tx. Read-only after
    /// construction in normal use; `at` hands out mutable references for
    /// builders and readers.
    class ChannelSet
    {
    public:
        ChannelSet() = default;
        explicit ChannelSet(ChannelDims dims);

        const ChannelDims &dims() const { return dims_; }

        Eigen::MatrixXcd &at(int user, int subcarrier, int snapshot, int mode);
        const Eigen::MatrixXcd &at(int user, int subcarrier, int snapshot, int mode) const;

        bool all_finite() const;

        std::uint64_t seed = 0;

        friend bool operator==(const ChannelSet &a, const ChannelSet &b);

    private:
        std::size_t offset(int user, int subcarrier, int snapshot, int mode) const;

        ChannelDims dims_;
        std::vector<Eigen::MatrixXcd> data_;
    };

    /// Synthesizes per-mode channels for every user, subcarrier, snapshot and
    /// mode. Pure function of its arguments.
    ChannelSet generate_channels(const GeometrySpec &geometry, std::span<const UserMotion> users, std::uint64_t seed);

    /// Literal mixing sum over modes: sum_v H_s[v] * Diag(W.col(v)). Works for
    /// soft (relaxed) selection matrices as well as binary ones.
    template <typename Scalar>
    CMatrix<Scalar> mix_modes(std::span<const CMatrix<Scalar>> per_mode, const RMatrix<Scalar> &w)
    {
        if (per_mode.empty() || static_cast<Eigen::Index>(per_mode.size()) != w.cols())
            throw InvalidArgument("mix_modes: mode count mismatch");
        const auto &first = per_mode.front();
        if (first.cols() != w.rows())
            throw InvalidArgument("mix_modes: antenna count mismatch");
        CMatrix<Scalar> result = CMatrix<Scalar>::Zero(first.rows(), first.cols());
        for (Eigen::Index v = 0; v < w.cols(); ++v)
            result += per_mode[static_cast<std::size_t>(v)] * w.col(v).template cast<std::complex<Scalar>>().asDiagonal();
        return result;
    }

    /// Effective channel for one user/subcarrier/snapshot: column m is taken
    /// from the mode-assignment[m] channel.
    Eigen::MatrixXcd effective_channel(const ChannelSet &channels, const ModeAssignment &assignment, int user, int subcarrier, int snapshot);

    /// Same, from a binary selection matrix; rejects matrices that are not one-hot per row.
    Eigen::MatrixXcd effective_channel(const ChannelSet &channels, const Eigen::MatrixXd &one_hot, int user, int subcarrier, int snapshot);

    /// Effective channels of all users for one subcarrier and snapshot.
    std::vector<Eigen::MatrixXcd> effective_channels(const ChannelSet &channels, const ModeAssignment &assignment, int subcarrier, int snapshot);

    /// Snapshot-averaged effective channel flattened as [Re..., Im...]. Length
    /// 2 * users * subcarriers * rx * tx; block order user, subcarrier, then
    /// column-major matrix entries.
    Eigen::VectorXd state_feature_vector(const ChannelSet &channels, std::uint64_t state_index, std::span<const int> snapshots);

    /// Feature vectors of every state stacked as rows (states x features).
    Eigen::MatrixXd state_feature_matrix(const ChannelSet &channels, std::span<const int> snapshots);
} // namespace ramode
