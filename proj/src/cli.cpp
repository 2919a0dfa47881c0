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

#include "ramode/cli.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <optional>

#include <CLI11.hpp>

#include "ramode/experiment.hpp"

namespace ramode
{
    namespace
    {
        struct Options
        {
            std::string config;
            std::optional<std::uint64_t> seed;
            std::string out_dir;
            std::string model;
            std::vector<int> k_values;
        };

        ExperimentConfig resolve(const Options &opt, Scenario fallback)
        {
            ExperimentConfig config = opt.config.empty()
                                          ? (fallback == Scenario::Static ? default_static_config() : default_dynamic_config())
                                          : load_config(opt.config);
            if (opt.seed)
                config.seeds = {*opt.seed};
            if (!opt.out_dir.empty())
                config.out_dir = opt.out_dir;
            return config;
        }

        std::filesystem::path run_dir(const ExperimentConfig &config)
        {
            const std::filesystem::path dir = std::filesystem::path(config.out_dir) / config.name;
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (ec)
                throw IoError(dir.string() + ": " + ec.message());
            return dir;
        }

        void cmd_static(const Options &opt, std::ostream &out)
        {
            const auto config = resolve(opt, Scenario::Static);
            const auto record = run_static(config);
            const auto dir = run_dir(config);
            write_trace_csv(dir / "trace.csv", record);
            write_json(dir / "summary.json", record.summary);
            if (config.placement.export_dataset)
                export_dataset(config, config.seeds.front(), dir / "dataset");
            out << "static: " << record.traces.size() << " traces written to " << dir.string() << '\n';
        }

        void cmd_offline(const Options &opt, std::ostream &out)
        {
            const auto config = resolve(opt, Scenario::Dynamic);
            if (config.scenario != Scenario::Dynamic)
                throw ConfigError("offline training needs a dynamic scenario config");
            DynamicEnvironment env;
            env.seed = config.seeds.front();
            env.channels = generate_channels(config.geometry, dynamic_motions(config), env.seed);
            for (int t = 0; t < config.horizon; t += config.offline_stride)
                env.offline_snapshots.push_back(t);
            const auto model = train_cluster_model(config, env, config.k_clusters);

            const auto dir = run_dir(config);
            save_cluster_model(dir / "cluster_model.json", model);
            nlohmann::json summary = {
                {"name", config.name},
                {"scenario", "dynamic"},
                {"version", kVersion},
                {"config_hash", config_hash(config)},
                {"seed", env.seed},
                {"clusters", model.clusters()},
                {"pca_components", model.pca_basis.cols()},
                {"representatives", model.representatives},
                {"wcss", model.wcss},
                {"se_min", model.reward_stats.se_min},
                {"se_max", model.reward_stats.se_max},
            };
            if (!config.diagnose_k.empty())
            {
                const auto rows = diagnose_cluster_count(env.channels, env.offline_snapshots,
                                                         static_cast<int>(model.pca_basis.cols()), config.diagnose_k, env.seed);
                write_diagnostics_csv(dir / "diagnostics.csv", rows);
                const auto best = std::max_element(rows.begin(), rows.end(), [](const auto &a, const auto &b) { return a.silhouette < b.silhouette; });
                summary["best_silhouette_k"] = best->k;
            }
            write_json(dir / "summary.json", summary);
            out << "offline: " << model.clusters() << " representatives written to " << dir.string() << '\n';
        }

        void cmd_dynamic(const Options &opt, std::ostream &out)
        {
            const auto config = resolve(opt, Scenario::Dynamic);
            std::optional<ClusterModel> preset;
            if (!opt.model.empty())
                preset = load_cluster_model(opt.model);
            const auto record = run_dynamic(config, preset);
            const auto dir = run_dir(config);
            write_trace_csv(dir / "trace.csv", record);
            write_json(dir / "summary.json", record.summary);
            save_cluster_model(dir / "cluster_model.json", record.models.front());
            out << "dynamic: " << record.traces.size() << " traces written to " << dir.string() << '\n';
        }

        void cmd_sweep(const Options &opt, std::ostream &out)
        {
            const auto config = resolve(opt, Scenario::Dynamic);
            const auto sweep = run_cluster_sweep(config, opt.k_values.empty() ? config.sweep_k : opt.k_values);
            const auto dir = run_dir(config);
            write_sweep_csv(dir / "sweep.csv", sweep);
            write_json(dir / "summary.json", sweep.summary);
            out << "sweep-clusters: " << sweep.k_values.size() << " cluster counts written to " << dir.string() << '\n';
        }

        void cmd_export(const Options &opt, std::ostream &out)
        {
            const auto config = resolve(opt, Scenario::Static);
            const auto dir = run_dir(config);
            export_dataset(config, config.seeds.front(), dir);
            out << "export-dataset: " << config.placement.samples << " samples written to " << dir.string() << '\n';
        }
    } // namespace

    int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"Reconfigurable-antenna mode selection experiments", "ramode"};
        app.set_version_flag("--version", kVersion);
        app.require_subcommand(1);
        app.fallthrough();

        Options opt;
        std::uint64_t seed = 0;
        app.add_option("--config", opt.config, "JSON experiment config")->check(CLI::ExistingFile);
        auto *seed_opt = app.add_option("--seed", seed, "Run a single seed instead of the configured list");
        app.add_option("--out-dir", opt.out_dir, "Output root (results go to <out-dir>/<name>/)");

        auto *stat = app.add_subcommand("static", "Exhaustive vs random selection over static user drops");
        auto *offline = app.add_subcommand("offline", "Build and save the cluster model");
        auto *dynamic = app.add_subcommand("dynamic", "MAB policies and baselines along a trajectory");
        dynamic->add_option("--model", opt.model, "Use a saved cluster model")->check(CLI::ExistingFile);
        auto *sweep = app.add_subcommand("sweep-clusters", "Final cumulative SE versus the number of clusters");
        sweep->add_option("--k", opt.k_values, "Cluster counts (default: sweep_k from the config)");
        auto *exp = app.add_subcommand("export-dataset", "Write channel tensors and exhaustive labels");

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try
        {
            app.parse(reversed);
        }
        catch (const CLI::ParseError &e)
        {
            const int code = app.exit(e, out, err);
            return code == 0 ? kExitOk : kExitConfig;
        }
        if (seed_opt->count() > 0)
            opt.seed = seed;

        try
        {
            if (stat->parsed())
                cmd_static(opt, out);
            else if (offline->parsed())
                cmd_offline(opt, out);
            else if (dynamic->parsed())
                cmd_dynamic(opt, out);
            else if (sweep->parsed())
                cmd_sweep(opt, out);
            else if (exp->parsed())
                cmd_export(opt, out);
            return kExitOk;
        }
        catch (const ConfigError &e)
        {
            err << "config error: " << e.what() << '\n';
            return kExitConfig;
        }
        catch (const InvalidArgument &e)
        {
            err << "config error: " << e.what() << '\n';
            return kExitConfig;
        }
        catch (const InfeasibleError &e)
        {
            err << "infeasible: " << e.what() << '\n';
            return kExitInfeasible;
        }
        catch (const IoError &e)
        {
            err << "i/o error: " << e.what() << '\n';
            return kExitIo;
        }
        catch (const std::exception &e)
        {
            err << "error: " << e.what() << '\n';
            return kExitFailure;
        }
    }
} // namespace ramode
