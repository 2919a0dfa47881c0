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

#include "ramode/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace ramode
{
    namespace
    {
        struct Path
        {
            Vec3 departure;  // unit vector leaving the BS
            Vec3 arrival;    // unit vector from the user towards the last interaction point
            double length;   // meters
            std::complex<double> weight;
        };

        Vec3 unit(const Vec3 &v)
        {
            const double norm = v.norm();
            if (norm <= 0.0)
                return Vec3::UnitX();
            return v / norm;
        }

        Eigen::VectorXcd steering(const std::vector<Vec3> &elements, const Vec3 &direction, double wavenumber)
        {
            Eigen::VectorXcd a(static_cast<Eigen::Index>(elements.size()));
            for (std::size_t i = 0; i < elements.size(); ++i)
                a(static_cast<Eigen::Index>(i)) = std::polar(1.0, wavenumber * elements[i].dot(direction));
            return a;
        }

        std::vector<Vec3> tx_elements(const GeometrySpec &g, double wavelength)
        {
            std::vector<Vec3> out;
            out.reserve(static_cast<std::size_t>(g.tx_antennas()));
            const double d = g.element_spacing * wavelength;
            for (int m = 0; m < g.tx_antennas(); ++m)
                out.emplace_back(0.0, d * (m % g.array_x), d * (m / g.array_x));
            return out;
        }

        std::vector<Vec3> rx_elements(const GeometrySpec &g, double wavelength)
        {
            std::vector<Vec3> out;
            const double d = g.rx_spacing * wavelength;
            for (int n = 0; n < g.rx_antennas; ++n)
                out.emplace_back(0.0, d * n, 0.0);
            return out;
        }

        std::vector<Vec3> track_of(const UserMotion &motion)
        {
            return std::visit(
                [](const auto &m) -> std::vector<Vec3>
                {
                    using T = std::decay_t<decltype(m)>;
                    if constexpr (std::is_same_v<T, Vec3>)
                        return {m};
                    else if constexpr (std::is_same_v<T, TrajectorySpec>)
                        return m.positions();
                    else
                        return m;
                },
                motion);
        }

        Vec3 point_on_polyline(const std::vector<Vec3> &points, double s)
        {
            for (std::size_t i = 0; i + 1 < points.size(); ++i)
            {
                const Vec3 seg = points[i + 1] - points[i];
                const double len = seg.norm();
                if (s <= len || i + 2 == points.size())
                    return len > 0.0 ? Vec3(points[i] + seg * std::min(s / len, 1.0)) : points[i];
                s -= len;
            }
            return points.back();
        }
    } // namespace

    Vec3 ModePattern::pointing() const
    {
        return {std::cos(elevation) * std::cos(azimuth), std::cos(elevation) * std::sin(azimuth), std::sin(elevation)};
    }

    double ModePattern::gain(const Vec3 &direction) const
    {
        const double c = std::max(pointing().dot(unit(direction)), 0.0);
        if (exponent == 0.0)
            return 1.0;
        return std::pow(c, exponent);
    }

    std::vector<ModePattern> evenly_spread_modes(int count, double sector, double elevation, double exponent)
    {
        if (count < 1)
            throw InvalidArgument("evenly_spread_modes: count must be >= 1");
        std::vector<ModePattern> modes;
        for (int v = 0; v < count; ++v)
        {
            const double az = count == 1 ? 0.0 : -sector / 2.0 + sector * v / (count - 1);
            modes.push_back({az, elevation, exponent});
        }
        return modes;
    }

    void GeometrySpec::validate() const
    {
        if (array_x < 1 || array_y < 1)
            throw InvalidArgument("geometry: array dimensions must be positive");
        if (rx_antennas < 1)
            throw InvalidArgument("geometry: rx_antennas must be positive");
        if (!(carrier_frequency > 0.0) || !(element_spacing > 0.0) || !(rx_spacing > 0.0))
            throw InvalidArgument("geometry: frequency and spacings must be positive");
        if (subcarriers < 1)
            throw InvalidArgument("geometry: subcarriers must be >= 1");
        if (!(rician_factor >= 0.0) || !(reference_distance > 0.0) || !(pathloss_exponent >= 0.0))
            throw InvalidArgument("geometry: invalid rician factor or pathloss parameters");
        if (modes.empty())
            throw InvalidArgument("geometry: at least one mode pattern required");
        for (const auto &mode : modes)
            if (!(mode.exponent >= 0.0))
                throw InvalidArgument("geometry: pattern exponent must be >= 0");
        if (random_scatterers.count < 0)
            throw InvalidArgument("geometry: negative random scatterer count");
    }

    void TrajectorySpec::validate() const
    {
        if (!(speed > 0.0))
            throw InvalidArgument("trajectory: speed must be > 0");
        if (!(time_step > 0.0))
            throw InvalidArgument("trajectory: time_step must be > 0");
        if (num_steps < 1)
            throw InvalidArgument("trajectory: num_steps must be >= 1");
        if (const auto *linear = std::get_if<LinearPath>(&path); linear && linear->waypoints.size() < 2)
            throw InvalidArgument("trajectory: linear path needs at least 2 waypoints");
        if (const auto *circle = std::get_if<CircularPath>(&path); circle && !(circle->radius > 0.0))
            throw InvalidArgument("trajectory: radius must be > 0");
    }

    std::vector<Vec3> TrajectorySpec::positions() const
    {
        validate();
        std::vector<Vec3> out;
        out.reserve(static_cast<std::size_t>(num_steps));
        if (const auto *linear = std::get_if<LinearPath>(&path))
        {
            double total = 0.0;
            for (std::size_t i = 0; i + 1 < linear->waypoints.size(); ++i)
                total += (linear->waypoints[i + 1] - linear->waypoints[i]).norm();
            for (int step = 0; step < num_steps; ++step)
            {
                double s = speed * time_step * step;
                if (total > 0.0)
                {
                    s = std::fmod(s, 2.0 * total);
                    if (s > total)
                        s = 2.0 * total - s;
                }
                out.push_back(point_on_polyline(linear->waypoints, s));
            }
        }
        else
        {
            const auto &circle = std::get<CircularPath>(path);
            for (int step = 0; step < num_steps; ++step)
            {
                const double angle = circle.start_angle + speed * time_step * step / circle.radius;
                out.push_back(circle.center + circle.radius * Vec3(std::cos(angle), std::sin(angle), 0.0));
            }
        }
        return out;
    }

    ChannelSet::ChannelSet(ChannelDims dims) : dims_(dims)
    {
        if (dims.users < 1 || dims.subcarriers < 1 || dims.snapshots < 1 || dims.modes < 1 || dims.rx < 1 || dims.tx < 1)
            throw InvalidArgument("ChannelSet: all dimensions must be positive");
        const auto count = static_cast<std::size_t>(dims.users) * static_cast<std::size_t>(dims.subcarriers) *
                           static_cast<std::size_t>(dims.snapshots) * static_cast<std::size_t>(dims.modes);
        data_.assign(count, Eigen::MatrixXcd::Zero(dims.rx, dims.tx));
    }

    std::size_t ChannelSet::offset(int user, int subcarrier, int snapshot, int mode) const
    {
        if (user < 0 || user >= dims_.users || subcarrier < 0 || subcarrier >= dims_.subcarriers ||
            snapshot < 0 || snapshot >= dims_.snapshots || mode < 0 || mode >= dims_.modes)
            throw InvalidArgument("ChannelSet: index out of range");
        return ((static_cast<std::size_t>(user) * static_cast<std::size_t>(dims_.subcarriers) + static_cast<std::size_t>(subcarrier)) *
                    static_cast<std::size_t>(dims_.snapshots) +
                static_cast<std::size_t>(snapshot)) *
                   static_cast<std::size_t>(dims_.modes) +
               static_cast<std::size_t>(mode);
    }

    Eigen::MatrixXcd &ChannelSet::at(int user, int subcarrier, int snapshot, int mode)
    {
        return data_[offset(user, subcarrier, snapshot, mode)];
    }

    const Eigen::MatrixXcd &ChannelSet::at(int user, int subcarrier, int snapshot, int mode) const
    {
        return data_[offset(user, subcarrier, snapshot, mode)];
    }

    bool ChannelSet::all_finite() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const Eigen::MatrixXcd &h) { return h.allFinite(); });
    }

    bool operator==(const ChannelSet &a, const ChannelSet &b)
    {
        if (!(a.dims_ == b.dims_) || a.data_.size() != b.data_.size())
            return false;
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            if (a.data_[i] != b.data_[i])
                return false;
        return true;
    }

    ChannelSet generate_channels(const GeometrySpec &geometry, std::span<const UserMotion> users, std::uint64_t seed)
    {
        geometry.validate();
        if (users.empty())
            throw InvalidArgument("generate_channels: at least one user required");

        std::vector<std::vector<Vec3>> tracks;
        int snapshots = 1;
        for (const auto &motion : users)
        {
            tracks.push_back(track_of(motion));
            if (tracks.back().empty())
                throw InvalidArgument("generate_channels: empty user track");
            if (!std::holds_alternative<Vec3>(motion))
            {
                const int len = static_cast<int>(tracks.back().size());
                if (snapshots > 1 && len != snapshots)
                    throw InvalidArgument("generate_channels: user tracks differ in length");
                snapshots = std::max(snapshots, len);
            }
        }

        std::mt19937_64 rng(seed);
        std::vector<Scatterer> scatterers = geometry.scatterers;
        {
            const auto &box = geometry.random_scatterers;
            for (int i = 0; i < box.count; ++i)
            {
                Vec3 p;
                for (int axis = 0; axis < 3; ++axis)
                    p(axis) = std::uniform_real_distribution<double>(box.lower(axis), box.upper(axis))(rng);
                scatterers.push_back({p, {box.gain, 0.0}});
            }
        }
        std::vector<std::complex<double>> scatter_phase;
        for (std::size_t i = 0; i < scatterers.size(); ++i)
            scatter_phase.push_back(std::polar(1.0, std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng)));

        if (!geometry.los && scatterers.empty())
            throw InvalidArgument("empty propagation environment");

        const double n_scatter = static_cast<double>(scatterers.size());
        const double kr = geometry.rician_factor;
        double los_weight = 0.0;
        double scatter_weight = 0.0;
        if (geometry.los && scatterers.empty())
            los_weight = 1.0;
        else if (geometry.los)
        {
            los_weight = std::sqrt(kr / (kr + 1.0));
            scatter_weight = std::sqrt(1.0 / ((kr + 1.0) * n_scatter));
        }
        else
            scatter_weight = std::sqrt(1.0 / n_scatter);

        const ChannelDims dims{static_cast<int>(users.size()), geometry.subcarriers, snapshots, geometry.n_modes(),
                               geometry.rx_antennas, geometry.tx_antennas()};
        ChannelSet out(dims);
        out.seed = seed;

        const double wavelength = kSpeedOfLight / geometry.carrier_frequency;
        const double wavenumber = 2.0 * std::numbers::pi / wavelength;
        const auto tx_pos = tx_elements(geometry, wavelength);
        const auto rx_pos = rx_elements(geometry, wavelength);

        std::vector<double> frequencies;
        for (int f = 0; f < geometry.subcarriers; ++f)
            frequencies.push_back(geometry.carrier_frequency + (f - (geometry.subcarriers - 1) / 2.0) * geometry.subcarrier_spacing);

        std::vector<Path> paths;
        for (int k = 0; k < dims.users; ++k)
        {
            const auto &track = tracks[static_cast<std::size_t>(k)];
            for (int t = 0; t < snapshots; ++t)
            {
                const Vec3 &user = track.size() == 1 ? track.front() : track[static_cast<std::size_t>(t)];
                const Vec3 los_vec = user - geometry.bs_position;
                const double distance = std::max(los_vec.norm(), 1.0);
                const double pathloss = std::pow(geometry.reference_distance / distance, geometry.pathloss_exponent / 2.0);

                paths.clear();
                if (geometry.los)
                    paths.push_back({unit(los_vec), unit(-los_vec), los_vec.norm(), {los_weight, 0.0}});
                for (std::size_t s = 0; s < scatterers.size(); ++s)
                {
                    const Vec3 out_leg = scatterers[s].position - geometry.bs_position;
                    const Vec3 in_leg = scatterers[s].position - user;
                    paths.push_back({unit(out_leg), unit(in_leg), out_leg.norm() + in_leg.norm(),
                                     scatter_weight * scatterers[s].gain * scatter_phase[s]});
                }

                for (const auto &path : paths)
                {
                    const Eigen::VectorXcd a_rx = steering(rx_pos, path.arrival, wavenumber);
                    const Eigen::VectorXcd a_tx = steering(tx_pos, path.departure, wavenumber);
                    const Eigen::MatrixXcd response = a_rx * a_tx.adjoint();
                    for (int f = 0; f < dims.subcarriers; ++f)
                    {
                        const double phase = -2.0 * std::numbers::pi * frequencies[static_cast<std::size_t>(f)] * path.length / kSpeedOfLight;
                        const std::complex<double> beta = pathloss * path.weight * std::polar(1.0, phase);
                        for (int v = 0; v < dims.modes; ++v)
                        {
                            const double g = geometry.modes[static_cast<std::size_t>(v)].gain(path.departure);
                            if (g != 0.0)
                                out.at(k, f, t, v) += (beta * g) * response;
                        }
                    }
                }
            }
        }
        return out;
    }

    Eigen::MatrixXcd effective_channel(const ChannelSet &channels, const ModeAssignment &assignment, int user, int subcarrier, int snapshot)
    {
        const auto &dims = channels.dims();
        if (assignment.antennas() != dims.tx || assignment.n_modes() != dims.modes)
            throw InvalidArgument("effective_channel: assignment does not match channel dimensions");
        Eigen::MatrixXcd h(dims.rx, dims.tx);
        for (int m = 0; m < dims.tx; ++m)
            h.col(m) = channels.at(user, subcarrier, snapshot, assignment[m]).col(m);
        return h;
    }

    Eigen::MatrixXcd effective_channel(const ChannelSet &channels, const Eigen::MatrixXd &one_hot, int user, int subcarrier, int snapshot)
    {
        return effective_channel(channels, ModeAssignment::from_one_hot(one_hot), user, subcarrier, snapshot);
    }

    std::vector<Eigen::MatrixXcd> effective_channels(const ChannelSet &channels, const ModeAssignment &assignment, int subcarrier, int snapshot)
    {
        std::vector<Eigen::MatrixXcd> out;
        out.reserve(static_cast<std::size_t>(channels.dims().users));
        for (int k = 0; k < channels.dims().users; ++k)
            out.push_back(effective_channel(channels, assignment, k, subcarrier, snapshot));
        return out;
    }

    Eigen::VectorXd state_feature_vector(const ChannelSet &channels, std::uint64_t state_index, std::span<const int> snapshots)
    {
        if (snapshots.empty())
            throw InvalidArgument("state_feature_vector: empty snapshot set");
        const auto &dims = channels.dims();
        for (int t : snapshots)
            if (t < 0 || t >= dims.snapshots)
                throw InvalidArgument("state_feature_vector: snapshot " + std::to_string(t) + " out of range");

        const auto assignment = ModeAssignment::from_state_index(state_index, dims.tx, dims.modes);
        const Eigen::Index block = static_cast<Eigen::Index>(dims.rx) * dims.tx;
        const Eigen::Index half = block * dims.users * dims.subcarriers;
        Eigen::VectorXd feature(2 * half);

        Eigen::Index offset = 0;
        for (int k = 0; k < dims.users; ++k)
        {
            for (int f = 0; f < dims.subcarriers; ++f)
            {
                Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(dims.rx, dims.tx);
                for (int t : snapshots)
                    mean += effective_channel(channels, assignment, k, f, t);
                mean /= static_cast<double>(snapshots.size());
                const Eigen::Map<const Eigen::VectorXcd> flat(mean.data(), block);
                feature.segment(offset, block) = flat.real();
                feature.segment(half + offset, block) = flat.imag();
                offset += block;
            }
        }
        return feature;
    }

    Eigen::MatrixXd state_feature_matrix(const ChannelSet &channels, std::span<const int> snapshots)
    {
        const auto n_states = channels.dims().states();
        Eigen::MatrixXd features;
        for (std::uint64_t s = 0; s < n_states; ++s)
        {
            const Eigen::VectorXd row = state_feature_vector(channels, s, snapshots);
            if (s == 0)
                features.resize(static_cast<Eigen::Index>(n_states), row.size());
            features.row(static_cast<Eigen::Index>(s)) = row.transpose();
        }
        return features;
    }
} // namespace ramode
