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
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ramode/types.hpp"

namespace ramode
{
    template <typename Scalar>
    struct KMeansResult
    {
        RMatrix<Scalar> centroids;  // k x p
        std::vector<int> labels;    // n
        Scalar wcss = 0;
        std::vector<Scalar> wcss_history;  // after every assign/update pass
        int iterations = 0;
    };

    namespace detail
    {
        template <typename Derived>
        RMatrix<typename Derived::Scalar> kmeanspp_init(const Eigen::MatrixBase<Derived> &points, int k, std::mt19937_64 &rng)
        {
            using Scalar = typename Derived::Scalar;
            const Eigen::Index n = points.rows();
            RMatrix<Scalar> centroids(k, points.cols());
            std::vector<bool> taken(static_cast<std::size_t>(n), false);
            std::vector<Scalar> nearest(static_cast<std::size_t>(n), std::numeric_limits<Scalar>::infinity());

            Eigen::Index pick = static_cast<Eigen::Index>(std::uniform_int_distribution<std::int64_t>(0, n - 1)(rng));
            for (int c = 0; c < k; ++c)
            {
                if (c > 0)
                {
                    Scalar total = 0;
                    for (Eigen::Index i = 0; i < n; ++i)
                        total += nearest[static_cast<std::size_t>(i)];
                    if (total > Scalar(0))
                    {
                        const Scalar target = std::uniform_real_distribution<Scalar>(0, total)(rng);
                        Scalar acc = 0;
                        pick = -1;
                        for (Eigen::Index i = 0; i < n; ++i)
                        {
                            const Scalar w = nearest[static_cast<std::size_t>(i)];
                            if (w <= Scalar(0))
                                continue;
                            acc += w;
                            pick = i;
                            if (acc > target)
                                break;
                        }
                    }
                    else
                    {
                        // Every point coincides with a centroid; take the first unused one.
                        pick = 0;
                        while (taken[static_cast<std::size_t>(pick)])
                            ++pick;
                    }
                }
                taken[static_cast<std::size_t>(pick)] = true;
                centroids.row(c) = points.row(pick);
                for (Eigen::Index i = 0; i < n; ++i)
                {
                    const Scalar d = (points.row(i) - centroids.row(c)).squaredNorm();
                    auto &slot = nearest[static_cast<std::size_t>(i)];
                    slot = std::min(slot, d);
                }
            }
            return centroids;
        }
    } // namespace detail

    /// Lloyd iterations from a seeded k-means++ start. An empty cluster takes
    /// over the point farthest from its current centroid (drawn from a
    /// cluster with at least two members). Stops at a label fixpoint or after
    /// max_iter passes. Throws if WCSS ever increases between passes.
    template <typename Derived>
    KMeansResult<typename Derived::Scalar> kmeans(const Eigen::MatrixBase<Derived> &points, int k, std::uint64_t seed, int max_iter = 300)
    {
        using Scalar = typename Derived::Scalar;
        const Eigen::Index n = points.rows();
        if (k < 1)
            throw InvalidArgument("kmeans: k must be >= 1");
        if (k > n)
            throw InvalidArgument("kmeans: k=" + std::to_string(k) + " exceeds point count " + std::to_string(n));
        if (max_iter < 1)
            throw InvalidArgument("kmeans: max_iter must be >= 1");

        std::mt19937_64 rng(seed);
        KMeansResult<Scalar> out;
        out.centroids = detail::kmeanspp_init(points, k, rng);
        out.labels.assign(static_cast<std::size_t>(n), -1);

        std::vector<int> previous;
        std::vector<Scalar> dist(static_cast<std::size_t>(n));
        std::vector<Eigen::Index> sizes(static_cast<std::size_t>(k));
        for (int iter = 0; iter < max_iter; ++iter)
        {
            previous = out.labels;
            std::fill(sizes.begin(), sizes.end(), 0);
            for (Eigen::Index i = 0; i < n; ++i)
            {
                int best = 0;
                Scalar best_d = std::numeric_limits<Scalar>::infinity();
                for (int c = 0; c < k; ++c)
                {
                    const Scalar d = (points.row(i) - out.centroids.row(c)).squaredNorm();
                    if (d < best_d)
                    {
                        best_d = d;
                        best = c;
                    }
                }
                out.labels[static_cast<std::size_t>(i)] = best;
                dist[static_cast<std::size_t>(i)] = best_d;
                ++sizes[static_cast<std::size_t>(best)];
            }

            for (int c = 0; c < k; ++c)
            {
                if (sizes[static_cast<std::size_t>(c)] > 0)
                    continue;
                Eigen::Index far = -1;
                for (Eigen::Index i = 0; i < n; ++i)
                {
                    const int owner = out.labels[static_cast<std::size_t>(i)];
                    if (sizes[static_cast<std::size_t>(owner)] < 2)
                        continue;
                    if (far < 0 || dist[static_cast<std::size_t>(i)] > dist[static_cast<std::size_t>(far)])
                        far = i;
                }
                --sizes[static_cast<std::size_t>(out.labels[static_cast<std::size_t>(far)])];
                out.labels[static_cast<std::size_t>(far)] = c;
                dist[static_cast<std::size_t>(far)] = 0;
                sizes[static_cast<std::size_t>(c)] = 1;
            }

            out.centroids.setZero();
            for (Eigen::Index i = 0; i < n; ++i)
                out.centroids.row(out.labels[static_cast<std::size_t>(i)]) += points.row(i);
            for (int c = 0; c < k; ++c)
                out.centroids.row(c) /= Scalar(sizes[static_cast<std::size_t>(c)]);

            Scalar wcss = 0;
            for (Eigen::Index i = 0; i < n; ++i)
                wcss += (points.row(i) - out.centroids.row(out.labels[static_cast<std::size_t>(i)])).squaredNorm();
            if (!out.wcss_history.empty())
            {
                const Scalar prev = out.wcss_history.back();
                if (wcss > prev + Scalar(1e-9) * std::max(prev, Scalar(1)))
                    throw Error("kmeans: WCSS increased between Lloyd passes");
            }
            out.wcss_history.push_back(wcss);
            out.wcss = wcss;
            out.iterations = iter + 1;
            if (out.labels == previous)
                break;
        }
        return out;
    }

    /// Mean silhouette (b - a) / max(a, b) with Euclidean distances. A point
    /// alone in its cluster scores 0, as does a point with a = b = 0.
    template <typename Derived>
    typename Derived::Scalar silhouette(const Eigen::MatrixBase<Derived> &points, const std::vector<int> &labels)
    {
        using Scalar = typename Derived::Scalar;
        const Eigen::Index n = points.rows();
        if (static_cast<Eigen::Index>(labels.size()) != n)
            throw InvalidArgument("silhouette: label count does not match points");
        const std::set<int> ids(labels.begin(), labels.end());
        if (ids.size() < 2)
            throw InvalidArgument("silhouette: at least 2 clusters required");
        if (*ids.begin() < 0)
            throw InvalidArgument("silhouette: negative label");
        const int n_ids = *ids.rbegin() + 1;

        std::vector<Eigen::Index> sizes(static_cast<std::size_t>(n_ids), 0);
        for (int l : labels)
            ++sizes[static_cast<std::size_t>(l)];

        Scalar total = 0;
        std::vector<Scalar> sum(static_cast<std::size_t>(n_ids));
        for (Eigen::Index i = 0; i < n; ++i)
        {
            std::fill(sum.begin(), sum.end(), Scalar(0));
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i)
                    sum[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])] += (points.row(i) - points.row(j)).norm();
            const int own = labels[static_cast<std::size_t>(i)];
            const Eigen::Index own_size = sizes[static_cast<std::size_t>(own)];
            if (own_size < 2)
                continue;
            const Scalar a = sum[static_cast<std::size_t>(own)] / Scalar(own_size - 1);
            Scalar b = std::numeric_limits<Scalar>::infinity();
            for (int c = 0; c < n_ids; ++c)
                if (c != own && sizes[static_cast<std::size_t>(c)] > 0)
                    b = std::min(b, sum[static_cast<std::size_t>(c)] / Scalar(sizes[static_cast<std::size_t>(c)]));
            const Scalar denom = std::max(a, b);
            if (denom > Scalar(0))
                total += (b - a) / denom;
        }
        return total / Scalar(n);
    }
} // namespace ramode
