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

#include "ramode/cluster_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "ramode/kmeans.hpp"
#include "ramode/pca.hpp"

namespace ramode
{
    namespace
    {
        nlohmann::json matrix_json(const Eigen::MatrixXd &m)
        {
            auto rows = nlohmann::json::array();
            for (Eigen::Index r = 0; r < m.rows(); ++r)
            {
                auto row = nlohmann::json::array();
                for (Eigen::Index c = 0; c < m.cols(); ++c)
                    row.push_back(m(r, c));
                rows.push_back(std::move(row));
            }
            return rows;
        }

        Eigen::MatrixXd json_matrix(const nlohmann::json &j, Eigen::Index cols_if_empty)
        {
            const auto rows = static_cast<Eigen::Index>(j.size());
            const Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : cols_if_empty;
            Eigen::MatrixXd m(rows, cols);
            for (Eigen::Index r = 0; r < rows; ++r)
            {
                if (static_cast<Eigen::Index>(j[r].size()) != cols)
                    throw ConfigError("cluster model: ragged matrix");
                for (Eigen::Index c = 0; c < cols; ++c)
                    m(r, c) = j[r][c].get<double>();
            }
            return m;
        }

        Eigen::VectorXd json_vector(const nlohmann::json &j)
        {
            Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
            for (Eigen::Index i = 0; i < v.size(); ++i)
                v(i) = j[i].get<double>();
            return v;
        }
    } // namespace

    void ClusterModel::validate() const
    {
        const Eigen::Index p = pca_basis.cols();
        if (pca_basis.rows() != pca_mean.size() || centroids.cols() != p)
            throw InvalidArgument("cluster model: inconsistent PCA/centroid dimensions");
        if (p > 0 && ((pca_basis.transpose() * pca_basis) - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff() > 1e-9)
            throw InvalidArgument("cluster model: PCA basis is not orthonormal");
        if (representatives.empty() || static_cast<Eigen::Index>(representatives.size()) != centroids.rows())
            throw InvalidArgument("cluster model: one representative per cluster required");
        const auto n_states = state_count(antennas, modes);
        const std::set<std::uint64_t> unique(representatives.begin(), representatives.end());
        if (unique.size() != representatives.size())
            throw InvalidArgument("cluster model: duplicate representatives");
        if (*unique.rbegin() >= n_states)
            throw InvalidArgument("cluster model: representative outside the state space");
        if (!(reward_stats.se_min < reward_stats.se_max))
            throw InvalidArgument("cluster model: se_min must be < se_max");
    }

    ClusterModel cluster_states(const Eigen::MatrixXd &features, int antennas, int modes, const ClusterOptions &options)
    {
        const auto n_states = static_cast<Eigen::Index>(state_count(antennas, modes));
        if (features.rows() != n_states)
            throw InvalidArgument("cluster_states: feature rows do not match the state count");

        ClusterModel model;
        model.antennas = antennas;
        model.modes = modes;
        if (n_states == 1)
        {
            // Nothing to reduce or cluster.
            model.pca_mean = features.row(0).transpose();
            model.pca_basis = Eigen::MatrixXd::Zero(features.cols(), 0);
            model.explained_variance = Eigen::VectorXd::Zero(0);
            model.centroids = Eigen::MatrixXd::Zero(1, 0);
            model.labels = {0};
            model.representatives = {0};
            return model;
        }

        const auto pca = pca_fit(features, options.components);
        const Eigen::MatrixXd projected = pca.project(features);
        const auto km = kmeans(projected, options.clusters, options.seed, options.max_iter);

        model.pca_mean = pca.mean;
        model.pca_basis = pca.basis;
        model.explained_variance = pca.explained_variance;
        model.centroids = km.centroids;
        model.labels = km.labels;
        model.wcss = km.wcss;

        // Medoid: member closest to its centroid, ties to the smaller state index.
        model.representatives.assign(static_cast<std::size_t>(options.clusters), std::numeric_limits<std::uint64_t>::max());
        std::vector<double> best(static_cast<std::size_t>(options.clusters), std::numeric_limits<double>::infinity());
        for (Eigen::Index s = 0; s < n_states; ++s)
        {
            const int c = km.labels[static_cast<std::size_t>(s)];
            const double d = (projected.row(s) - km.centroids.row(c)).squaredNorm();
            if (d < best[static_cast<std::size_t>(c)])
            {
                best[static_cast<std::size_t>(c)] = d;
                model.representatives[static_cast<std::size_t>(c)] = static_cast<std::uint64_t>(s);
            }
        }
        return model;
    }

    ClusterModel build_cluster_model(const ChannelSet &channels, std::span<const int> snapshots, const ClusterOptions &options,
                                     const Eigen::MatrixXd &f_rf, const LinkParams &params)
    {
        const auto &dims = channels.dims();
        if (dims.states() > options.feature_cap)
            throw InfeasibleError("feature extraction infeasible: " + std::to_string(dims.states()) + " states exceed cap " +
                                  std::to_string(options.feature_cap));
        const Eigen::MatrixXd features = state_feature_matrix(channels, snapshots);
        ClusterModel model = cluster_states(features, dims.tx, dims.modes, options);

        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (auto state : model.representatives)
        {
            const auto assignment = ModeAssignment::from_state_index(state, dims.tx, dims.modes);
            for (int t : snapshots)
            {
                try
                {
                    const double se = state_spectral_efficiency(channels, assignment, t, f_rf, params);
                    lo = std::min(lo, se);
                    hi = std::max(hi, se);
                }
                catch (const InfeasibleError &)
                {
                }
            }
        }
        if (!(lo < hi))
            throw InvalidArgument("build_cluster_model: degenerate reward statistics (se_min must be < se_max)");
        model.reward_stats = {lo, hi};
        model.validate();
        return model;
    }

    std::vector<ClusterDiagnostic> diagnose_cluster_count(const Eigen::MatrixXd &features, int components, std::span<const int> k_range,
                                                          std::uint64_t seed)
    {
        const Eigen::Index n = features.rows();
        for (int k : k_range)
            if (k < 2 || k > n)
                throw InvalidArgument("diagnose_cluster_count: k=" + std::to_string(k) + " outside [2, " + std::to_string(n) + "]");
        const auto pca = pca_fit(features, components);
        const Eigen::MatrixXd projected = pca.project(features);
        std::vector<ClusterDiagnostic> rows;
        for (int k : k_range)
        {
            const auto km = kmeans(projected, k, seed);
            rows.push_back({k, km.wcss, silhouette(projected, km.labels)});
        }
        return rows;
    }

    std::vector<ClusterDiagnostic> diagnose_cluster_count(const ChannelSet &channels, std::span<const int> snapshots, int components,
                                                          std::span<const int> k_range, std::uint64_t seed)
    {
        return diagnose_cluster_count(state_feature_matrix(channels, snapshots), components, k_range, seed);
    }

    nlohmann::json to_json(const ClusterModel &model)
    {
        return {
            {"antennas", model.antennas},
            {"modes", model.modes},
            {"pca_mean", std::vector<double>(model.pca_mean.data(), model.pca_mean.data() + model.pca_mean.size())},
            {"pca_basis", matrix_json(model.pca_basis)},
            {"explained_variance", std::vector<double>(model.explained_variance.data(),
                                                       model.explained_variance.data() + model.explained_variance.size())},
            {"centroids", matrix_json(model.centroids)},
            {"labels", model.labels},
            {"representatives", model.representatives},
            {"wcss", model.wcss},
            {"reward_stats", {{"se_min", model.reward_stats.se_min}, {"se_max", model.reward_stats.se_max}}},
        };
    }

    ClusterModel cluster_model_from_json(const nlohmann::json &doc)
    {
        try
        {
            ClusterModel model;
            model.antennas = doc.at("antennas").get<int>();
            model.modes = doc.at("modes").get<int>();
            model.pca_mean = json_vector(doc.at("pca_mean"));
            model.pca_basis = json_matrix(doc.at("pca_basis"), 0);
            if (model.pca_basis.rows() == 0)
                model.pca_basis.resize(model.pca_mean.size(), 0);
            model.explained_variance = json_vector(doc.at("explained_variance"));
            model.centroids = json_matrix(doc.at("centroids"), model.pca_basis.cols());
            model.labels = doc.at("labels").get<std::vector<int>>();
            model.representatives = doc.at("representatives").get<std::vector<std::uint64_t>>();
            model.wcss = doc.at("wcss").get<double>();
            model.reward_stats.se_min = doc.at("reward_stats").at("se_min").get<double>();
            model.reward_stats.se_max = doc.at("reward_stats").at("se_max").get<double>();
            model.validate();
            return model;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ConfigError(std::string("cluster model: ") + e.what());
        }
        catch (const InvalidArgument &e)
        {
            throw ConfigError(e.what());
        }
    }

    void save_cluster_model(const std::filesystem::path &path, const ClusterModel &model)
    {
        std::ofstream out(path, std::ios::trunc);
        if (!out)
            throw IoError(path.string() + ": cannot open for writing");
        out << to_json(model).dump(2) << '\n';
        if (!out)
            throw IoError(path.string() + ": write failed");
    }

    ClusterModel load_cluster_model(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError(path.string() + ": cannot open for reading");
        nlohmann::json doc;
        try
        {
            in >> doc;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ConfigError(path.string() + ": " + e.what());
        }
        return cluster_model_from_json(doc);
    }
} // namespace ramode
