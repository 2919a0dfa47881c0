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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ramode/bandit.hpp"
#include "ramode/channel.hpp"
#include "ramode/precoding.hpp"
#include "ramode/selection.hpp"

namespace ramode
{
    /// Product of offline training: PCA basis, K-means centroids, one
    /// representative RA state per cluster and the reward range seen offline.
    struct ClusterModel
    {
        int antennas = 0;
        int modes = 0;
        Eigen::VectorXd pca_mean;            // d
        Eigen::MatrixXd pca_basis;           // d x p
        Eigen::VectorXd explained_variance;  // p
        Eigen::MatrixXd centroids;           // k x p
        std::vector<int> labels;             // cluster of every state
        std::vector<std::uint64_t> representatives;  // one state index per cluster
        double wcss = 0.0;
        RewardStats reward_stats;

        int clusters() const { return static_cast<int>(representatives.size()); }
        void validate() const;
    };

    struct ClusterOptions
    {
        int components = 8;
        int clusters = 16;
        std::uint64_t seed = 0;
        int max_iter = 300;
        std::uint64_t feature_cap = 100'000;
    };

    /// PCA + K-means + medoid extraction on a precomputed feature matrix
    /// (states x features). Reward statistics are left at their defaults.
    ClusterModel cluster_states(const Eigen::MatrixXd &features, int antennas, int modes, const ClusterOptions &options);

    /// Full offline pipeline on a channel set: snapshot-averaged state
    /// features, clustering, then the SE range of the representatives over
    /// the given snapshots.
    ClusterModel build_cluster_model(const ChannelSet &channels, std::span<const int> snapshots, const ClusterOptions &options,
                                     const Eigen::MatrixXd &f_rf, const LinkParams &params);

    struct ClusterDiagnostic
    {
        int k = 0;
        double wcss = 0.0;
        double silhouette = 0.0;
    };

    std::vector<ClusterDiagnostic> diagnose_cluster_count(const Eigen::MatrixXd &features, int components, std::span<const int> k_range,
                                                          std::uint64_t seed);

    std::vector<ClusterDiagnostic> diagnose_cluster_count(const ChannelSet &channels, std::span<const int> snapshots, int components,
                                                          std::span<const int> k_range, std::uint64_t seed);

    nlohmann::json to_json(const ClusterModel &model);
    ClusterModel cluster_model_from_json(const nlohmann::json &doc);

    void save_cluster_model(const std::filesystem::path &path, const ClusterModel &model);
    ClusterModel load_cluster_model(const std::filesystem::path &path);
} // namespace ramode
