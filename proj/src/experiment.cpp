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

#include "ramode/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "ramode/tensor_io.hpp"

namespace ramode
{
    namespace
    {
        std::mt19937_64 method_rng(std::uint64_t seed, std::uint32_t stream)
        {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
            return std::mt19937_64(seq);
        }

        constexpr std::uint32_t kPlacementStream = 0x51ac3;

        SearchOptions search_options(const ExperimentConfig &config)
        {
            SearchOptions options;
            options.cap = config.exhaustive_cap;
            options.workers = config.workers;
            return options;
        }

        class TraceBuilder
        {
        public:
            TraceBuilder(Method method, std::uint64_t seed, const RewardStats *stats) : stats_(stats)
            {
                trace_.method = method;
                trace_.seed = seed;
            }

            void push(int arm, std::uint64_t state, double se)
            {
                StepRecord r;
                r.step = static_cast<int>(trace_.steps.size());
                r.arm = arm;
                r.state_index = state;
                r.se = se;
                r.normalized = stats_ ? normalize_reward(se, *stats_) : 0.0;
                cum_se_ += r.se;
                cum_norm_ += r.normalized;
                r.cumulative_se = cum_se_;
                r.cumulative_normalized = cum_norm_;
                trace_.steps.push_back(r);
            }

            MethodTrace take() { return std::move(trace_); }

        private:
            const RewardStats *stats_;
            MethodTrace trace_;
            double cum_se_ = 0.0;
            double cum_norm_ = 0.0;
        };

        template <typename Fn>
        int argmax_first(int count, Fn &&value)
        {
            int best = 0;
            double best_value = value(0);
            for (int i = 1; i < count; ++i)
            {
                const double v = value(i);
                if (v > best_value)
                {
                    best = i;
                    best_value = v;
                }
            }
            return best;
        }

        void require_dynamic(const ExperimentConfig &config)
        {
            if (config.scenario != Scenario::Dynamic)
                throw ConfigError("this command needs a dynamic scenario config");
        }

        void require_static(const ExperimentConfig &config)
        {
            if (config.scenario != Scenario::Static)
                throw ConfigError("this command needs a static scenario config");
        }

        std::ofstream open_out(const std::filesystem::path &path)
        {
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw IoError(path.string() + ": cannot open for writing");
            return out;
        }

        void finish(std::ofstream &out, const std::filesystem::path &path)
        {
            out.flush();
            if (!out)
                throw IoError(path.string() + ": write failed");
        }

        nlohmann::json seeds_json(const std::vector<std::uint64_t> &seeds) { return seeds; }
    } // namespace

    const MethodTrace *RunRecord::find(Method method, std::uint64_t seed) const
    {
        for (const auto &t : traces)
            if (t.method == method && t.seed == seed)
                return &t;
        return nullptr;
    }

    std::vector<UserMotion> dynamic_motions(const ExperimentConfig &config)
    {
        std::vector<UserMotion> motions;
        TrajectorySpec trajectory = config.trajectory;
        trajectory.num_steps = config.horizon;
        motions.emplace_back(trajectory);
        for (const auto &p : config.extra_users)
            motions.emplace_back(p);
        return motions;
    }

    DynamicEnvironment prepare_dynamic(const ExperimentConfig &config, std::uint64_t seed)
    {
        require_dynamic(config);
        DynamicEnvironment env;
        env.seed = seed;
        const auto motions = dynamic_motions(config);
        env.channels = generate_channels(config.geometry, motions, seed);

        std::vector<int> steps(static_cast<std::size_t>(config.horizon));
        std::iota(steps.begin(), steps.end(), 0);
        env.se_table = state_se_table(env.channels, steps, config.f_rf(), config.link, search_options(config));
        env.se_table = env.se_table.unaryExpr([](double v) { return std::isfinite(v) ? v : 0.0; });

        for (int t = 0; t < config.horizon; t += config.offline_stride)
            env.offline_snapshots.push_back(t);
        return env;
    }

    ClusterModel train_cluster_model(const ExperimentConfig &config, const DynamicEnvironment &env, int k)
    {
        const auto &dims = env.channels.dims();
        const auto n_states = static_cast<std::int64_t>(dims.states());
        if (k < 1 || k > n_states)
            throw ConfigError("k_clusters=" + std::to_string(k) + " must lie in [1, " + std::to_string(n_states) + "]");
        const std::int64_t features = 2LL * dims.users * dims.subcarriers * dims.rx * dims.tx;
        ClusterOptions options;
        options.components = static_cast<int>(std::min<std::int64_t>({config.pca_components, features, n_states}));
        options.clusters = k;
        options.seed = env.seed;
        return build_cluster_model(env.channels, env.offline_snapshots, options, config.f_rf(), config.link);
    }

    std::vector<MethodTrace> simulate_methods(const ExperimentConfig &config, const DynamicEnvironment &env, const ClusterModel &model)
    {
        const auto &table = env.se_table;
        const int horizon = static_cast<int>(table.rows());
        const int n_states = static_cast<int>(table.cols());
        const auto &reps = model.representatives;
        const int arms = static_cast<int>(reps.size());
        const RewardStats &stats = model.reward_stats;
        const auto se_of = [&](int t, std::uint64_t state) { return table(t, static_cast<Eigen::Index>(state)); };

        std::vector<MethodTrace> traces;
        for (Method method : config.methods)
        {
            TraceBuilder trace(method, env.seed, &stats);
            auto rng = method_rng(env.seed, static_cast<std::uint32_t>(method));
            switch (method)
            {
            case Method::Ucb:
            {
                PolicyState state(arms);
                for (int t = 0; t < horizon; ++t)
                {
                    const int arm = ucb_select(state, config.ucb);
                    const double se = se_of(t, reps[static_cast<std::size_t>(arm)]);
                    trace.push(arm, reps[static_cast<std::size_t>(arm)], se);
                    state = ucb_update(std::move(state), arm, normalize_reward(se, stats));
                }
                break;
            }
            case Method::Ts:
            {
                PolicyState state(arms);
                for (int t = 0; t < horizon; ++t)
                {
                    auto outcome = ts_step(std::move(state), config.ts,
                                           [&](int arm) { return normalize_reward(se_of(t, reps[static_cast<std::size_t>(arm)]), stats); }, rng);
                    trace.push(outcome.arm, reps[static_cast<std::size_t>(outcome.arm)], se_of(t, reps[static_cast<std::size_t>(outcome.arm)]));
                    state = std::move(outcome.state);
                }
                break;
            }
            case Method::Random:
            {
                std::uniform_int_distribution<int> pick(0, n_states - 1);
                for (int t = 0; t < horizon; ++t)
                {
                    const auto state = static_cast<std::uint64_t>(pick(rng));
                    trace.push(-1, state, se_of(t, state));
                }
                break;
            }
            case Method::MaxSelected:
                for (int t = 0; t < horizon; ++t)
                {
                    const int arm = argmax_first(arms, [&](int a) { return se_of(t, reps[static_cast<std::size_t>(a)]); });
                    trace.push(arm, reps[static_cast<std::size_t>(arm)], se_of(t, reps[static_cast<std::size_t>(arm)]));
                }
                break;
            case Method::MaxAll:
                for (int t = 0; t < horizon; ++t)
                {
                    const int state = argmax_first(n_states, [&](int s) { return se_of(t, static_cast<std::uint64_t>(s)); });
                    trace.push(-1, static_cast<std::uint64_t>(state), se_of(t, static_cast<std::uint64_t>(state)));
                }
                break;
            case Method::Exhaustive:
                throw ConfigError("use 'max_all' for exhaustive search in the dynamic scenario");
            }
            traces.push_back(trace.take());
        }
        return traces;
    }

    std::vector<std::string> dominance_violations(const std::vector<MethodTrace> &traces)
    {
        std::map<std::uint64_t, std::map<Method, const MethodTrace *>> by_seed;
        for (const auto &t : traces)
            by_seed[t.seed][t.method] = &t;

        std::vector<std::string> out;
        for (const auto &[seed, methods] : by_seed)
        {
            const auto get = [&](Method m) { auto it = methods.find(m); return it == methods.end() ? nullptr : it->second; };
            const MethodTrace *all = get(Method::MaxAll);
            const MethodTrace *selected = get(Method::MaxSelected);
            const auto check = [&](const MethodTrace *upper, const MethodTrace *lower)
            {
                if (!upper || !lower)
                    return;
                const std::size_t n = std::min(upper->steps.size(), lower->steps.size());
                for (std::size_t i = 0; i < n; ++i)
                    if (upper->steps[i].se < lower->steps[i].se)
                        out.push_back("seed " + std::to_string(seed) + " step " + std::to_string(i) + ": " + to_string(lower->method) +
                                      " above " + to_string(upper->method));
            };
            check(all, selected);
            check(all, get(Method::Random));
            check(selected, get(Method::Ucb));
            check(selected, get(Method::Ts));
        }
        return out;
    }

    RunRecord run_dynamic(const ExperimentConfig &config, const std::optional<ClusterModel> &preset)
    {
        require_dynamic(config);
        if (preset && (preset->antennas != config.geometry.tx_antennas() || preset->modes != config.geometry.n_modes()))
            throw ConfigError("cluster model does not match the configured antenna/mode counts");

        RunRecord record;
        record.name = config.name;
        record.scenario = Scenario::Dynamic;
        record.config_hash = config_hash(config);
        for (auto seed : config.seeds)
        {
            const auto env = prepare_dynamic(config, seed);
            ClusterModel model = preset ? *preset : train_cluster_model(config, env, config.k_clusters);
            auto traces = simulate_methods(config, env, model);
            record.traces.insert(record.traces.end(), std::make_move_iterator(traces.begin()), std::make_move_iterator(traces.end()));
            record.models.push_back(std::move(model));
        }

        nlohmann::json methods = nlohmann::json::object();
        for (Method m : config.methods)
        {
            std::vector<double> se, norm, mean_se;
            for (auto seed : config.seeds)
            {
                const auto *t = record.find(m, seed);
                se.push_back(t->final_cumulative_se());
                norm.push_back(t->final_cumulative_normalized());
                mean_se.push_back(t->final_cumulative_se() / static_cast<double>(t->steps.size()));
            }
            methods[to_string(m)] = {
                {"final_cumulative_se", se},
                {"final_cumulative_normalized_reward", norm},
                {"mean_se", mean_se},
                {"median_final_cumulative_se", median(se)},
                {"median_final_cumulative_normalized_reward", median(norm)},
            };
        }
        nlohmann::json models = nlohmann::json::array();
        for (std::size_t i = 0; i < record.models.size(); ++i)
        {
            const auto &m = record.models[i];
            models.push_back({{"seed", config.seeds[i]},
                              {"representatives", m.representatives},
                              {"pca_components", m.pca_basis.cols()},
                              {"wcss", m.wcss},
                              {"se_min", m.reward_stats.se_min},
                              {"se_max", m.reward_stats.se_max}});
        }
        const auto violations = dominance_violations(record.traces);
        record.summary = {
            {"name", config.name},
            {"scenario", "dynamic"},
            {"version", record.version},
            {"config_hash", record.config_hash},
            {"seeds", seeds_json(config.seeds)},
            {"horizon", config.horizon},
            {"states", state_count(config.geometry.tx_antennas(), config.geometry.n_modes())},
            {"clusters", record.models.empty() ? 0 : record.models.front().clusters()},
            {"models", models},
            {"methods", methods},
            {"dominance_violations", violations.size()},
        };
        return record;
    }

    std::vector<UserMotion> static_placements(const ExperimentConfig &config, std::uint64_t seed)
    {
        const auto &p = config.placement;
        auto rng = method_rng(seed, kPlacementStream);
        std::uniform_real_distribution<double> distance(p.min_distance, p.max_distance);
        std::uniform_real_distribution<double> azimuth(-0.5 * p.sector, 0.5 * p.sector);
        std::vector<std::vector<Vec3>> positions(static_cast<std::size_t>(config.users));
        for (int s = 0; s < p.samples; ++s)
            for (int k = 0; k < config.users; ++k)
            {
                const double d = distance(rng);
                const double phi = azimuth(rng);
                positions[static_cast<std::size_t>(k)].emplace_back(config.geometry.bs_position.x() + d * std::cos(phi),
                                                                    config.geometry.bs_position.y() + d * std::sin(phi), p.height);
            }
        return {positions.begin(), positions.end()};
    }

    RunRecord run_static(const ExperimentConfig &config)
    {
        require_static(config);
        RunRecord record;
        record.name = config.name;
        record.scenario = Scenario::Static;
        record.config_hash = config_hash(config);
        const auto f_rf = config.f_rf();
        const int n_t = config.geometry.tx_antennas();
        const int n_p = config.geometry.n_modes();

        nlohmann::json methods = nlohmann::json::object();
        std::map<Method, std::vector<double>> means;
        for (auto seed : config.seeds)
        {
            const auto motions = static_placements(config, seed);
            const auto channels = generate_channels(config.geometry, motions, seed);
            for (Method method : config.methods)
            {
                TraceBuilder trace(method, seed, nullptr);
                auto rng = method_rng(seed, static_cast<std::uint32_t>(method));
                for (int s = 0; s < config.placement.samples; ++s)
                {
                    if (method == Method::Exhaustive)
                    {
                        const auto best = exhaustive_search(channels, s, f_rf, config.link, search_options(config));
                        trace.push(-1, best.assignment.state_index(), best.se);
                    }
                    else
                    {
                        const auto assignment = random_selection(n_t, n_p, rng);
                        double se = 0.0;
                        try
                        {
                            se = state_spectral_efficiency(channels, assignment, s, f_rf, config.link);
                        }
                        catch (const InfeasibleError &)
                        {
                        }
                        trace.push(-1, assignment.state_index(), se);
                    }
                }
                auto done = trace.take();
                means[method].push_back(done.final_cumulative_se() / config.placement.samples);
                record.traces.push_back(std::move(done));
            }
        }
        for (Method m : config.methods)
        {
            const auto &v = means[m];
            methods[to_string(m)] = {{"mean_se", v}, {"overall_mean_se", std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size())}};
        }
        record.summary = {
            {"name", config.name},
            {"scenario", "static"},
            {"version", record.version},
            {"config_hash", record.config_hash},
            {"seeds", seeds_json(config.seeds)},
            {"samples", config.placement.samples},
            {"users", config.users},
            {"states", state_count(n_t, n_p)},
            {"methods", methods},
        };
        return record;
    }

    SweepResult run_cluster_sweep(const ExperimentConfig &config, const std::vector<int> &k_values)
    {
        require_dynamic(config);
        if (k_values.empty())
            throw ConfigError("sweep needs at least one k");
        SweepResult result;
        result.k_values = k_values;
        result.seeds = config.seeds;
        for (int k : k_values)
            for (Method m : config.methods)
                result.rows.push_back({k, m, {}, 0.0});

        for (auto seed : config.seeds)
        {
            const auto env = prepare_dynamic(config, seed);
            std::size_t row = 0;
            for (int k : k_values)
            {
                const auto model = train_cluster_model(config, env, k);
                for (const auto &trace : simulate_methods(config, env, model))
                    result.rows[row++].final_cumulative_se.push_back(trace.final_cumulative_se());
            }
        }

        nlohmann::json rows = nlohmann::json::array();
        for (auto &r : result.rows)
        {
            r.median = median(r.final_cumulative_se);
            rows.push_back({{"k", r.k}, {"method", to_string(r.method)}, {"final_cumulative_se", r.final_cumulative_se}, {"median", r.median}});
        }
        result.summary = {
            {"name", config.name},
            {"scenario", "dynamic"},
            {"version", kVersion},
            {"config_hash", config_hash(config)},
            {"seeds", seeds_json(config.seeds)},
            {"k_values", k_values},
            {"rows", rows},
        };
        if (k_values.size() >= 2)
        {
            nlohmann::json rho = nlohmann::json::object();
            std::vector<double> ks(k_values.begin(), k_values.end());
            for (Method m : config.methods)
            {
                std::vector<double> medians;
                for (const auto &r : result.rows)
                    if (r.method == m)
                        medians.push_back(r.median);
                rho[to_string(m)] = spearman(ks, medians);
            }
            result.summary["spearman_vs_k"] = rho;
        }
        return result;
    }

    Dataset make_dataset(const ExperimentConfig &config, std::uint64_t seed)
    {
        require_static(config);
        Dataset ds;
        ds.channels = round_to_float(generate_channels(config.geometry, static_placements(config, seed), seed));
        const auto f_rf = config.f_rf();
        for (int s = 0; s < ds.channels.dims().snapshots; ++s)
            ds.labels.push_back(exhaustive_search(ds.channels, s, f_rf, config.link, search_options(config)));
        return ds;
    }

    void export_dataset(const ExperimentConfig &config, std::uint64_t seed, const std::filesystem::path &dir)
    {
        const auto ds = make_dataset(config, seed);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            throw IoError(dir.string() + ": " + ec.message());
        write_channel_tensor(dir / "channels.ract", ds.channels, geometry_json(config.geometry));

        const auto path = dir / "labels.csv";
        auto out = open_out(path);
        out << "sample_id,state_index";
        for (int m = 0; m < ds.channels.dims().tx; ++m)
            out << ",mode_" << m;
        out << ",se\n";
        for (std::size_t i = 0; i < ds.labels.size(); ++i)
        {
            const auto &label = ds.labels[i];
            out << i << ',' << label.assignment.state_index();
            for (int mode : label.assignment.modes())
                out << ',' << mode;
            out << ',' << format_double(label.se) << '\n';
        }
        finish(out, path);
    }

    double median(std::vector<double> values)
    {
        if (values.empty())
            throw InvalidArgument("median of an empty set");
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();
        return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    }

    double spearman(const std::vector<double> &x, const std::vector<double> &y)
    {
        if (x.size() != y.size() || x.size() < 2)
            throw InvalidArgument("spearman: need two equally long series of length >= 2");
        // Average ranks for ties, then Pearson on the ranks.
        const auto ranks = [](const std::vector<double> &v)
        {
            std::vector<std::size_t> order(v.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
            std::vector<double> r(v.size());
            for (std::size_t i = 0; i < order.size();)
            {
                std::size_t j = i;
                while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]])
                    ++j;
                const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
                for (std::size_t q = i; q <= j; ++q)
                    r[order[q]] = avg;
                i = j + 1;
            }
            return r;
        };
        const auto rx = ranks(x), ry = ranks(y);
        const double n = static_cast<double>(x.size());
        const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
        const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < rx.size(); ++i)
        {
            sxy += (rx[i] - mx) * (ry[i] - my);
            sxx += (rx[i] - mx) * (rx[i] - mx);
            syy += (ry[i] - my) * (ry[i] - my);
        }
        if (sxx == 0.0 || syy == 0.0)
            return 0.0;
        return sxy / std::sqrt(sxx * syy);
    }

    std::string format_double(double value)
    {
        return nlohmann::json(value).dump();
    }

    void write_trace_csv(const std::filesystem::path &path, const RunRecord &record)
    {
        auto out = open_out(path);
        if (record.scenario == Scenario::Static)
        {
            out << "seed,method,sample,state_index,se,cumulative_se\n";
            for (const auto &trace : record.traces)
                for (const auto &r : trace.steps)
                    out << trace.seed << ',' << to_string(trace.method) << ',' << r.step << ',' << r.state_index << ','
                        << format_double(r.se) << ',' << format_double(r.cumulative_se) << '\n';
        }
        else
        {
            out << "seed,method,t,arm,state_index,se,normalized_reward,cumulative_se,cumulative_normalized_reward,cumulative_mean_reward\n";
            for (const auto &trace : record.traces)
                for (const auto &r : trace.steps)
                {
                    const int t = r.step + 1;
                    out << trace.seed << ',' << to_string(trace.method) << ',' << t << ',' << r.arm << ',' << r.state_index << ','
                        << format_double(r.se) << ',' << format_double(r.normalized) << ',' << format_double(r.cumulative_se) << ','
                        << format_double(r.cumulative_normalized) << ',' << format_double(r.cumulative_normalized / t) << '\n';
                }
        }
        finish(out, path);
    }

    void write_json(const std::filesystem::path &path, const nlohmann::json &doc)
    {
        auto out = open_out(path);
        out << doc.dump(2) << '\n';
        finish(out, path);
    }

    void write_diagnostics_csv(const std::filesystem::path &path, const std::vector<ClusterDiagnostic> &rows)
    {
        auto out = open_out(path);
        out << "k,wcss,silhouette\n";
        for (const auto &r : rows)
            out << r.k << ',' << format_double(r.wcss) << ',' << format_double(r.silhouette) << '\n';
        finish(out, path);
    }

    void write_sweep_csv(const std::filesystem::path &path, const SweepResult &sweep)
    {
        auto out = open_out(path);
        out << "k,method,seed,final_cumulative_se\n";
        for (const auto &r : sweep.rows)
            for (std::size_t i = 0; i < r.final_cumulative_se.size(); ++i)
                out << r.k << ',' << to_string(r.method) << ',' << sweep.seeds[i] << ',' << format_double(r.final_cumulative_se[i]) << '\n';
        finish(out, path);
    }
} // namespace ramode
