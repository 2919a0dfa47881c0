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

#include "ramode/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace ramode
{
    namespace
    {
        struct Best
        {
            double se = -std::numeric_limits<double>::infinity();
            std::uint64_t index = std::numeric_limits<std::uint64_t>::max();
            std::uint64_t infeasible = 0;
        };

        // Larger SE wins; equal SE goes to the smaller index.
        bool better(double se, std::uint64_t index, const Best &best)
        {
            return se > best.se || (se == best.se && index < best.index);
        }

        template <typename Fn>
        void parallel_for(std::uint64_t count, int workers, Fn &&fn)
        {
            workers = std::max(1, workers);
            if (workers == 1 || count < 2)
            {
                fn(0, std::uint64_t{0}, count);
                return;
            }
            const auto n = static_cast<std::uint64_t>(workers);
            std::vector<std::jthread> pool;
            for (std::uint64_t w = 0; w < n; ++w)
            {
                const std::uint64_t begin = count * w / n;
                const std::uint64_t end = count * (w + 1) / n;
                pool.emplace_back([&fn, w, begin, end] { fn(static_cast<int>(w), begin, end); });
            }
        }
    } // namespace

    double state_spectral_efficiency(const ChannelSet &channels, const ModeAssignment &assignment, int snapshot,
                                     const Eigen::MatrixXd &f_rf, const LinkParams &params, int subcarrier)
    {
        const auto &dims = channels.dims();
        const int first = subcarrier < 0 ? 0 : subcarrier;
        const int last = subcarrier < 0 ? dims.subcarriers : subcarrier + 1;
        double sum = 0.0;
        for (int f = first; f < last; ++f)
        {
            const auto h = effective_channels(channels, assignment, f, snapshot);
            const auto bf = bd_beamformer<double>(h, f_rf, params);
            sum += spectral_efficiency<double>(h, bf, params);
        }
        return sum / (last - first);
    }

    SelectionResult exhaustive_search(const ChannelSet &channels, int snapshot, const Eigen::MatrixXd &f_rf,
                                      const LinkParams &params, const SearchOptions &options)
    {
        const auto &dims = channels.dims();
        const std::uint64_t n_states = dims.states();
        if (n_states > options.cap)
            throw InfeasibleError("exhaustive search infeasible: " + std::to_string(n_states) + " states exceed cap " +
                                  std::to_string(options.cap) + "; reduce N_T or N_P");

        std::vector<Best> partial(static_cast<std::size_t>(std::max(1, options.workers)));
        parallel_for(n_states, options.workers, [&](int worker, std::uint64_t begin, std::uint64_t end)
                     {
            Best &best = partial[static_cast<std::size_t>(worker)];
            for (std::uint64_t s = begin; s < end; ++s)
            {
                const auto assignment = ModeAssignment::from_state_index(s, dims.tx, dims.modes);
                double se;
                try
                {
                    se = state_spectral_efficiency(channels, assignment, snapshot, f_rf, params, options.subcarrier);
                }
                catch (const InfeasibleError &)
                {
                    ++best.infeasible;
                    continue;
                }
                if (better(se, s, best))
                {
                    best.se = se;
                    best.index = s;
                }
            } });

        Best best;
        for (const auto &p : partial)
        {
            best.infeasible += p.infeasible;
            if (p.index != std::numeric_limits<std::uint64_t>::max() && better(p.se, p.index, best))
            {
                best.se = p.se;
                best.index = p.index;
            }
        }
        if (best.index == std::numeric_limits<std::uint64_t>::max())
            throw InfeasibleError("BD infeasible for dimensions: no state admits a block-diagonal beamformer");
        return {ModeAssignment::from_state_index(best.index, dims.tx, dims.modes), best.se, n_states, best.infeasible};
    }

    Eigen::MatrixXd state_se_table(const ChannelSet &channels, std::span<const int> snapshots, const Eigen::MatrixXd &f_rf,
                                   const LinkParams &params, const SearchOptions &options)
    {
        const auto &dims = channels.dims();
        const std::uint64_t n_states = dims.states();
        if (n_states > options.cap)
            throw InfeasibleError("exhaustive search infeasible: " + std::to_string(n_states) + " states exceed cap " +
                                  std::to_string(options.cap) + "; reduce N_T or N_P");
        Eigen::MatrixXd table(static_cast<Eigen::Index>(snapshots.size()), static_cast<Eigen::Index>(n_states));
        parallel_for(n_states, options.workers, [&](int, std::uint64_t begin, std::uint64_t end)
                     {
            for (std::uint64_t s = begin; s < end; ++s)
            {
                const auto assignment = ModeAssignment::from_state_index(s, dims.tx, dims.modes);
                for (std::size_t i = 0; i < snapshots.size(); ++i)
                {
                    double se;
                    try
                    {
                        se = state_spectral_efficiency(channels, assignment, snapshots[i], f_rf, params, options.subcarrier);
                    }
                    catch (const InfeasibleError &)
                    {
                        se = -std::numeric_limits<double>::infinity();
                    }
                    table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) = se;
                }
            } });
        return table;
    }

    ModeAssignment random_selection(int n_t, int n_p, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        return random_selection(n_t, n_p, rng);
    }

    ModeAssignment project_to_one_hot(const Eigen::MatrixXd &soft)
    {
        if (soft.rows() < 1 || soft.cols() < 1)
            throw InvalidArgument("project_to_one_hot: empty matrix");
        if (!soft.allFinite())
            throw InvalidArgument("project_to_one_hot: non-finite entries");
        std::vector<int> modes(static_cast<std::size_t>(soft.rows()));
        for (Eigen::Index r = 0; r < soft.rows(); ++r)
        {
            Eigen::Index best = 0;
            for (Eigen::Index c = 1; c < soft.cols(); ++c)
                if (soft(r, c) > soft(r, best))
                    best = c;
            modes[static_cast<std::size_t>(r)] = static_cast<int>(best);
        }
        return ModeAssignment(std::move(modes), static_cast<int>(soft.cols()));
    }
} // namespace ramode
