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
#include <string>
#include <vector>

#include <json.hpp>

#include "ramode/bandit.hpp"
#include "ramode/channel.hpp"
#include "ramode/precoding.hpp"

namespace ramode
{
    enum class Scenario
    {
        Static,
        Dynamic
    };

    enum class Method
    {
        Ucb,
        Ts,
        Random,
        MaxSelected,
        MaxAll,
        Exhaustive
    };

    std::string to_string(Method method);
    Method method_from_string(const std::string &name);

    /// User drop area of the static scenario, relative to the BS foot point.
    struct StaticPlacement
    {
        int samples = 200;
        double min_distance = 50.0;
        double max_distance = 100.0;
        double sector = 2.0 * 3.14159265358979323846 / 3.0;  // azimuth width, radians
        double height = 1.5;
        bool export_dataset = false;
    };

    struct ExperimentConfig
    {
        std::string name = "run";
        Scenario scenario = Scenario::Dynamic;
        GeometrySpec geometry;
        TrajectorySpec trajectory;
        int users = 1;
        std::vector<Vec3> extra_users;  // fixed positions of users 2..K in the dynamic scenario
        int n_rf = 4;
        double snr_db = 10.0;
        LinkParams link;  // rho is derived from snr_db
        std::vector<Method> methods;
        UcbParams ucb;
        TsParams ts;
        int k_clusters = 16;
        int pca_components = 8;
        int horizon = 2000;
        int offline_stride = 10;
        std::vector<std::uint64_t> seeds = {1};
        StaticPlacement placement;
        std::vector<int> sweep_k = {4, 8, 16, 32};
        std::vector<int> diagnose_k;
        std::uint64_t exhaustive_cap = 1'000'000;
        int workers = 1;
        std::string out_dir = "runs";

        Eigen::MatrixXd f_rf() const;
        /// Throws ConfigError on inconsistent counts or invalid parameters.
        void validate() const;
    };

    TrajectorySpec default_linear_trajectory(int steps);
    TrajectorySpec default_circular_trajectory(int steps);

    /// Desk-scale defaults: 2x2 UPA, 3 modes (81 states), 4 RF chains, 2 rx
    /// antennas, 4 random scatterers.
    ExperimentConfig default_dynamic_config();
    ExperimentConfig default_static_config();

    ExperimentConfig config_from_json(const nlohmann::json &doc);
    ExperimentConfig load_config(const std::filesystem::path &path);

    /// Fully resolved config. `out_dir` is excluded so that the same experiment
    /// written to two places hashes identically.
    nlohmann::json canonical_json(const ExperimentConfig &config);
    nlohmann::json geometry_json(const GeometrySpec &geometry);

    /// FNV-1a 64 of the canonical JSON text, as 16 hex digits.
    std::string config_hash(const ExperimentConfig &config);
} // namespace ramode
