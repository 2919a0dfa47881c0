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

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "ramode/cli.hpp"
#include "ramode/experiment.hpp"
#include "ramode/tensor_io.hpp"
#include "support.hpp"

using namespace ramode;

namespace
{
    ExperimentConfig small_dynamic()
    {
        ExperimentConfig c = default_dynamic_config();
        c.name = "small_dynamic";
        c.horizon = 150;
        c.offline_stride = 5;
        c.k_clusters = 8;
        c.seeds = {1, 2};
        c.trajectory.num_steps = c.horizon;
        return c;
    }

    ExperimentConfig small_static()
    {
        ExperimentConfig c = default_static_config();
        c.name = "small_static";
        c.placement.samples = 12;
        c.seeds = {4, 5};
        return c;
    }

    int cli(const std::vector<std::string> &args)
    {
        std::ostringstream out, err;
        return run_cli(args, out, err);
    }

    void write_text(const std::filesystem::path &path, const std::string &text)
    {
        std::ofstream(path) << text;
    }
}

TEST_SUITE("harness")
{
    TEST_CASE("config parsing")
    {
        const auto c = config_from_json(nlohmann::json::parse(R"({"name": "x", "horizon": 50, "link": {"snr_db": 20}})"));
        CHECK(c.horizon == 50);
        CHECK(c.trajectory.num_steps == 50);
        CHECK(std::abs(c.link.rho - 100.0) < 1e-12);
        CHECK(c.scenario == Scenario::Dynamic);

        CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"bogus": 1})")), ConfigError);
        CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"geometry": {"array": [2]}})")), ConfigError);
        CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"link": {"n_rf": 3}})")), ConfigError);
        CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"scenario": "static", "methods": ["ucb"]})")), ConfigError);
        CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"methods": ["greedy"]})")), ConfigError);
        CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"horizon": "long"})")), ConfigError);
        CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
    }

    TEST_CASE("config hash follows the canonical form")
    {
        ExperimentConfig a = small_dynamic();
        ExperimentConfig b = a;
        b.out_dir = "elsewhere";
        CHECK(config_hash(a) == config_hash(b));
        CHECK(config_hash(a).size() == 16);
        b.ucb.gamma = 4.0;
        CHECK(config_hash(a) != config_hash(b));

        const auto again = config_from_json(canonical_json(a));
        CHECK(canonical_json(again) == canonical_json(a));
        CHECK(config_hash(again) == config_hash(a));
    }

    TEST_CASE("dynamic run: prefix sums, dominance, determinism")
    {
        const auto cfg = small_dynamic();
        const auto a = run_dynamic(cfg);
        const auto b = run_dynamic(cfg);
        REQUIRE(a.traces.size() == 10);
        CHECK(dominance_violations(a.traces).empty());
        CHECK(a.summary == b.summary);
        for (std::size_t i = 0; i < a.traces.size(); ++i)
        {
            const auto &t = a.traces[i];
            REQUIRE(t.steps.size() == 150);
            double se = 0.0, norm = 0.0;
            for (std::size_t s = 0; s < t.steps.size(); ++s)
            {
                se += t.steps[s].se;
                norm += t.steps[s].normalized;
                CHECK(t.steps[s].cumulative_se == se);
                CHECK(t.steps[s].cumulative_normalized == norm);
                CHECK((t.steps[s].normalized >= 0.0 && t.steps[s].normalized <= 1.0));
                CHECK(t.steps[s].state_index == b.traces[i].steps[s].state_index);
            }
        }
        const auto *ucb = a.find(Method::Ucb, 1);
        REQUIRE(ucb != nullptr);
        for (int s = 0; s < 8; ++s)
            CHECK(ucb->steps[static_cast<std::size_t>(s)].arm == s);
    }

    TEST_CASE("representatives covering every state make max_selected exhaustive")
    {
        ExperimentConfig cfg = small_dynamic();
        cfg.geometry.array_x = 2;
        cfg.geometry.array_y = 1;
        cfg.n_rf = 2;
        cfg.k_clusters = 9;
        cfg.seeds = {3};
        const auto record = run_dynamic(cfg);
        const auto *all = record.find(Method::MaxAll, 3);
        const auto *sel = record.find(Method::MaxSelected, 3);
        for (std::size_t s = 0; s < all->steps.size(); ++s)
            CHECK(all->steps[s].se == sel->steps[s].se);

        cfg.k_clusters = 10;
        CHECK_THROWS_AS(run_dynamic(cfg), ConfigError);
    }

    TEST_CASE("preset cluster model must match the array")
    {
        const auto cfg = small_dynamic();
        const auto env = prepare_dynamic(cfg, 1);
        auto model = train_cluster_model(cfg, env, 8);
        const auto with_model = run_dynamic(cfg, model);
        CHECK(with_model.models.front().representatives == model.representatives);
        model.antennas = 3;
        CHECK_THROWS_AS(run_dynamic(cfg, model), ConfigError);
    }

    TEST_CASE("cluster sweep")
    {
        ExperimentConfig cfg = small_dynamic();
        cfg.seeds = {1};
        const auto sweep = run_cluster_sweep(cfg, {4, 81});
        CHECK(sweep.rows.size() == 2 * cfg.methods.size());
        double all = 0.0, selected = 0.0;
        for (const auto &r : sweep.rows)
            if (r.k == 81)
            {
                if (r.method == Method::MaxAll)
                    all = r.median;
                if (r.method == Method::MaxSelected)
                    selected = r.median;
            }
        CHECK(all == selected);
    }

    TEST_CASE("static run")
    {
        const auto cfg = small_static();
        const auto record = run_static(cfg);
        CHECK(record.traces.size() == 4);
        for (auto seed : cfg.seeds)
        {
            const auto *ex = record.find(Method::Exhaustive, seed);
            const auto *rnd = record.find(Method::Random, seed);
            for (std::size_t s = 0; s < ex->steps.size(); ++s)
                CHECK(ex->steps[s].se >= rnd->steps[s].se);
        }
        CHECK(run_static(cfg).summary == record.summary);

        ExperimentConfig single = cfg;
        single.geometry.modes = evenly_spread_modes(1, 0.0, 0.0, 2.0);
        const auto one = run_static(single);
        CHECK(one.summary["methods"]["exhaustive"]["overall_mean_se"] == one.summary["methods"]["random"]["overall_mean_se"]);

        ExperimentConfig capped = cfg;
        capped.exhaustive_cap = 10;
        CHECK_THROWS_AS(run_static(capped), InfeasibleError);
        CHECK_THROWS_AS(run_static(small_dynamic()), ConfigError);
    }

    TEST_CASE("dataset export round trip")
    {
        const auto cfg = small_static();
        const auto dir = test::scratch_dir("dataset");
        export_dataset(cfg, 4, dir);
        const auto file = read_channel_tensor(dir / "channels.ract");
        const auto expected = make_dataset(cfg, 4);
        CHECK(file.channels == expected.channels);
        CHECK(file.header["geometry"] == geometry_json(cfg.geometry));

        std::ifstream labels(dir / "labels.csv");
        std::string line;
        std::getline(labels, line);
        CHECK(line == "sample_id,state_index,mode_0,mode_1,mode_2,mode_3,se");
        int rows = 0;
        while (std::getline(labels, line))
        {
            std::stringstream ss(line);
            std::string cell;
            std::getline(ss, cell, ',');
            const int sample = std::stoi(cell);
            std::getline(ss, cell, ',');
            const auto state = std::stoull(cell);
            const auto best = exhaustive_search(file.channels, sample, cfg.f_rf(), cfg.link);
            CHECK(best.assignment.state_index() == state);
            ++rows;
        }
        CHECK(rows == cfg.placement.samples);
    }

    TEST_CASE("statistics helpers")
    {
        CHECK(median({3.0, 1.0, 2.0}) == 2.0);
        CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
        CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
        CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
        CHECK(spearman({1, 2, 3}, {5, 5, 5}) == 0.0);
        CHECK(format_double(0.1) == "0.1");
        CHECK(format_double(2.0) == "2.0");
    }

    TEST_CASE("command line")
    {
        const auto dir = test::scratch_dir("cli");
        auto cfg_json = canonical_json(small_dynamic());
        cfg_json["horizon"] = 60;
        cfg_json["seeds"] = {1};
        write_text(dir / "dyn.json", cfg_json.dump());
        const std::string out = (dir / "out").string();

        CHECK(cli({"--help"}) == kExitOk);
        CHECK(cli({}) == kExitConfig);
        CHECK(cli({"dynamic", "--config", (dir / "dyn.json").string(), "--out-dir", out}) == kExitOk);
        CHECK(std::filesystem::exists(dir / "out" / "small_dynamic" / "trace.csv"));
        CHECK(std::filesystem::exists(dir / "out" / "small_dynamic" / "summary.json"));
        CHECK(std::filesystem::exists(dir / "out" / "small_dynamic" / "cluster_model.json"));

        CHECK(cli({"offline", "--config", (dir / "dyn.json").string(), "--out-dir", (dir / "off").string()}) == kExitOk);
        CHECK(cli({"dynamic", "--config", (dir / "dyn.json").string(), "--out-dir", (dir / "pre").string(), "--model",
                   (dir / "off" / "small_dynamic" / "cluster_model.json").string()}) == kExitOk);
        CHECK(cli({"sweep-clusters", "--config", (dir / "dyn.json").string(), "--out-dir", out, "--k", "4", "8"}) == kExitOk);
        CHECK(std::filesystem::exists(dir / "out" / "small_dynamic" / "sweep.csv"));

        write_text(dir / "bad.json", R"({"horizon": -3})");
        CHECK(cli({"dynamic", "--config", (dir / "bad.json").string(), "--out-dir", out}) == kExitConfig);
        write_text(dir / "broken.json", "{ not json");
        CHECK(cli({"dynamic", "--config", (dir / "broken.json").string()}) == kExitConfig);
        CHECK(cli({"dynamic", "--config", (dir / "missing.json").string()}) == kExitConfig);

        write_text(dir / "capped.json", R"({"scenario": "static", "static": {"samples": 2}, "exhaustive_cap": 5})");
        CHECK(cli({"static", "--config", (dir / "capped.json").string(), "--out-dir", out}) == kExitInfeasible);

        write_text(dir / "tiny.json", R"({"name": "tiny", "scenario": "static", "static": {"samples": 3}})");
        CHECK(cli({"export-dataset", "--config", (dir / "tiny.json").string(), "--out-dir", "/proc/ramode"}) == kExitIo);
        CHECK(cli({"export-dataset", "--config", (dir / "tiny.json").string(), "--out-dir", out, "--seed", "9"}) == kExitOk);
        CHECK(read_channel_tensor(dir / "out" / "tiny" / "channels.ract").channels.seed == 9);
    }
}
