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
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ramode/cluster_model.hpp"
#include "ramode/config.hpp"

namespace ramode
{
    /// One row of a method trace. In the static scenario `step` is the sample
    /// index and the reward columns stay at zero. `arm` is -1 for methods that
    /// do not pick among representatives.
    struct StepRecord
    {
        int step = 0;
        int arm = -1;
        std::uint64_t state_index = 0;
        double se = 0.0;
        double normalized = 0.0;
        double cumulative_se = 0.0;
        double cumulative_normalized = 0.0;
    };

    struct MethodTrace
    {
        Method method = Method::Random;
        std::uint64_t seed = 0;
        std::vector<StepRecord> steps;

        double final_cumulative_se() const { return steps.empty() ? 0.0 : steps.back().cumulative_se; }
        double final_cumulative_normalized() const { return steps.empty() ? 0.0 : steps.back().cumulative_normalized; }
    };

    struct RunRecord
    {
        std::string name;
        Scenario scenario = Scenario::Dynamic;
        std::string config_hash;
        std::string version = kVersion;
        std::vector<MethodTrace> traces;
        std::vector<ClusterModel> models;  // dynamic runs: one per seed
        nlohmann::json summary;

        const MethodTrace *find(Method method, std::uint64_t seed) const;
    };

    /// Everything a dynamic run needs that does not depend on the cluster
    /// model: the channel along the trajectory and the SE of every state at
    /// every step (BD-infeasible states count as SE 0).
    struct DynamicEnvironment
    {
        std::uint64_t seed = 0;
        ChannelSet channels;
        Eigen::MatrixXd se_table;            // horizon x states
        std::vector<int> offline_snapshots;  // steps used to train the cluster model
    };

    std::vector<UserMotion> dynamic_motions(const ExperimentConfig &config);
    DynamicEnvironment prepare_dynamic(const ExperimentConfig &config, std::uint64_t seed);

    /// Offline training with `k` clusters on the environment's offline snapshots.
    ClusterModel train_cluster_model(const ExperimentConfig &config, const DynamicEnvironment &env, int k);

    /// Runs every configured dynamic method over the precomputed environment.
    std::vector<MethodTrace> simulate_methods(const ExperimentConfig &config, const DynamicEnvironment &env, const ClusterModel &model);

    /// Steps where max_all < max_selected or max_selected < a representative
    /// policy (UCB or TS). Empty means the dominance chain holds.
    std::vector<std::string> dominance_violations(const std::vector<MethodTrace> &traces);

    RunRecord run_dynamic(const ExperimentConfig &config, const std::optional<ClusterModel> &preset = std::nullopt);

    /// User positions of every static sample (snapshot index = sample index).
    std::vector<UserMotion> static_placements(const ExperimentConfig &config, std::uint64_t seed);

    RunRecord run_static(const ExperimentConfig &config);

    struct SweepRow
    {
        int k = 0;
        Method method = Method::MaxSelected;
        std::vector<double> final_cumulative_se;  // one per seed, in config order
        double median = 0.0;
    };

    struct SweepResult
    {
        std::vector<int> k_values;
        std::vector<std::uint64_t> seeds;
        std::vector<SweepRow> rows;  // grouped by k, then method in config order
        nlohmann::json summary;
    };

    SweepResult run_cluster_sweep(const ExperimentConfig &config, const std::vector<int> &k_values);

    struct Dataset
    {
        ChannelSet channels;  // float32-rounded, as stored on disk
        std::vector<SelectionResult> labels;
    };

    /// Static placements for one seed, rounded through float32, labelled by
    /// exhaustive search on the rounded channels.
    Dataset make_dataset(const ExperimentConfig &config, std::uint64_t seed);

    /// Writes channels.ract and labels.csv into `dir`.
    void export_dataset(const ExperimentConfig &config, std::uint64_t seed, const std::filesystem::path &dir);

    double median(std::vector<double> values);
    double spearman(const std::vector<double> &x, const std::vector<double> &y);

    /// Shortest round-trip decimal text of a double.
    std::string format_double(double value);

    void write_trace_csv(const std::filesystem::path &path, const RunRecord &record);
    void write_json(const std::filesystem::path &path, const nlohmann::json &doc);
    void write_diagnostics_csv(const std::filesystem::path &path, const std::vector<ClusterDiagnostic> &rows);
    void write_sweep_csv(const std::filesystem::path &path, const SweepResult &sweep);
} // namespace ramode
