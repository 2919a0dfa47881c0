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

#include "ramode/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>

namespace ramode
{
    namespace
    {
        using nlohmann::json;

        constexpr double kDeg = std::numbers::pi / 180.0;

        Vec3 vec3(const json &j, const char *what)
        {
            if (!j.is_array() || j.size() != 3)
                throw ConfigError(std::string(what) + ": expected [x, y, z]");
            return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
        }

        json vec3_json(const Vec3 &v) { return json::array({v.x(), v.y(), v.z()}); }

        void reject_unknown(const json &obj, const std::set<std::string> &allowed, const std::string &where)
        {
            if (!obj.is_object())
                throw ConfigError(where + ": expected an object");
            for (const auto &item : obj.items())
                if (!allowed.contains(item.key()))
                    throw ConfigError(where + ": unknown key '" + item.key() + "'");
        }

        // Angle given either in radians under `key` or in degrees under `key_deg`.
        void read_angle(const json &obj, const std::string &key, double &out)
        {
            if (obj.contains(key))
                out = obj.at(key).get<double>();
            else if (obj.contains(key + "_deg"))
                out = obj.at(key + "_deg").get<double>() * kDeg;
        }

        template <typename T>
        void read(const json &obj, const char *key, T &out)
        {
            if (obj.contains(key))
                out = obj.at(key).get<T>();
        }

        void read_geometry(const json &j, GeometrySpec &g)
        {
            reject_unknown(j, {"bs_position", "array", "element_spacing", "rx_antennas", "rx_spacing", "carrier_frequency",
                               "subcarriers", "subcarrier_spacing", "los", "rician_factor", "pathloss_exponent",
                               "reference_distance", "scatterers", "random_scatterers", "modes"},
                           "geometry");
            if (j.contains("bs_position"))
                g.bs_position = vec3(j["bs_position"], "geometry.bs_position");
            if (j.contains("array"))
            {
                const auto &a = j["array"];
                if (!a.is_array() || a.size() != 2)
                    throw ConfigError("geometry.array: expected [nx, ny]");
                g.array_x = a[0].get<int>();
                g.array_y = a[1].get<int>();
            }
            read(j, "element_spacing", g.element_spacing);
            read(j, "rx_antennas", g.rx_antennas);
            read(j, "rx_spacing", g.rx_spacing);
            read(j, "carrier_frequency", g.carrier_frequency);
            read(j, "subcarriers", g.subcarriers);
            read(j, "subcarrier_spacing", g.subcarrier_spacing);
            read(j, "los", g.los);
            read(j, "rician_factor", g.rician_factor);
            read(j, "pathloss_exponent", g.pathloss_exponent);
            read(j, "reference_distance", g.reference_distance);
            if (j.contains("scatterers"))
            {
                g.scatterers.clear();
                for (const auto &s : j["scatterers"])
                {
                    reject_unknown(s, {"position", "gain"}, "geometry.scatterers[]");
                    Scatterer sc;
                    sc.position = vec3(s.at("position"), "scatterer position");
                    if (s.contains("gain"))
                    {
                        const auto &gain = s["gain"];
                        sc.gain = gain.is_array() ? std::complex<double>(gain.at(0).get<double>(), gain.at(1).get<double>())
                                                  : std::complex<double>(gain.get<double>(), 0.0);
                    }
                    g.scatterers.push_back(sc);
                }
            }
            if (j.contains("random_scatterers"))
            {
                const auto &r = j["random_scatterers"];
                reject_unknown(r, {"count", "lower", "upper", "gain"}, "geometry.random_scatterers");
                read(r, "count", g.random_scatterers.count);
                if (r.contains("lower"))
                    g.random_scatterers.lower = vec3(r["lower"], "random_scatterers.lower");
                if (r.contains("upper"))
                    g.random_scatterers.upper = vec3(r["upper"], "random_scatterers.upper");
                read(r, "gain", g.random_scatterers.gain);
            }
            if (j.contains("modes"))
            {
                const auto &m = j["modes"];
                if (m.is_array())
                {
                    g.modes.clear();
                    for (const auto &p : m)
                    {
                        reject_unknown(p, {"azimuth", "azimuth_deg", "elevation", "elevation_deg", "exponent"}, "geometry.modes[]");
                        ModePattern pattern;
                        read_angle(p, "azimuth", pattern.azimuth);
                        read_angle(p, "elevation", pattern.elevation);
                        read(p, "exponent", pattern.exponent);
                        g.modes.push_back(pattern);
                    }
                }
                else
                {
                    reject_unknown(m, {"count", "sector", "sector_deg", "elevation", "elevation_deg", "exponent"}, "geometry.modes");
                    int count = 3;
                    double sector = 120.0 * kDeg, elevation = 0.0, exponent = 2.0;
                    read(m, "count", count);
                    read_angle(m, "sector", sector);
                    read_angle(m, "elevation", elevation);
                    read(m, "exponent", exponent);
                    if (count < 1)
                        throw ConfigError("geometry.modes.count must be >= 1");
                    g.modes = evenly_spread_modes(count, sector, elevation, exponent);
                }
            }
        }

        void read_trajectory(const json &j, TrajectorySpec &t)
        {
            reject_unknown(j, {"type", "waypoints", "center", "radius", "start_angle", "start_angle_deg", "speed", "speed_kmh", "time_step"},
                           "trajectory");
            const std::string type = j.value("type", std::holds_alternative<LinearPath>(t.path) ? "linear" : "circular");
            if (type == "linear")
            {
                LinearPath path = std::holds_alternative<LinearPath>(t.path) ? std::get<LinearPath>(t.path) : LinearPath{};
                if (j.contains("waypoints"))
                {
                    path.waypoints.clear();
                    for (const auto &w : j["waypoints"])
                        path.waypoints.push_back(vec3(w, "trajectory.waypoints[]"));
                }
                t.path = path;
            }
            else if (type == "circular")
            {
                CircularPath path = std::holds_alternative<CircularPath>(t.path) ? std::get<CircularPath>(t.path) : CircularPath{};
                if (j.contains("center"))
                    path.center = vec3(j["center"], "trajectory.center");
                read(j, "radius", path.radius);
                read_angle(j, "start_angle", path.start_angle);
                t.path = path;
            }
            else
                throw ConfigError("trajectory.type must be 'linear' or 'circular'");
            read(j, "speed", t.speed);
            if (j.contains("speed_kmh"))
                t.speed = j["speed_kmh"].get<double>() / 3.6;
            read(j, "time_step", t.time_step);
        }

        std::string hex64(std::uint64_t v)
        {
            char buf[17];
            std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
            return buf;
        }
    } // namespace

    std::string to_string(Method method)
    {
        switch (method)
        {
        case Method::Ucb: return "ucb";
        case Method::Ts: return "ts";
        case Method::Random: return "random";
        case Method::MaxSelected: return "max_selected";
        case Method::MaxAll: return "max_all";
        case Method::Exhaustive: return "exhaustive";
        }
        return "unknown";
    }

    Method method_from_string(const std::string &name)
    {
        for (auto m : {Method::Ucb, Method::Ts, Method::Random, Method::MaxSelected, Method::MaxAll, Method::Exhaustive})
            if (to_string(m) == name)
                return m;
        throw ConfigError("unknown method '" + name + "'");
    }

    Eigen::MatrixXd ExperimentConfig::f_rf() const
    {
        try
        {
            return default_rf_selector<double>(geometry.tx_antennas(), n_rf);
        }
        catch (const InvalidArgument &e)
        {
            throw ConfigError(e.what());
        }
    }

    void ExperimentConfig::validate() const
    {
        try
        {
            geometry.validate();
            if (scenario == Scenario::Dynamic)
            {
                trajectory.validate();
                if (static_cast<int>(extra_users.size()) != users - 1)
                    throw ConfigError("extra_users must list positions for users 2.." + std::to_string(users));
            }
            if (users < 1)
                throw ConfigError("users must be >= 1");
            f_rf();
            link.streams(users, geometry.rx_antennas, n_rf);
            ts.validate();
            if (!(ucb.gamma > 0.0))
                throw ConfigError("ucb.gamma must be > 0");
            if (horizon < 1 || offline_stride < 1 || k_clusters < 1 || pca_components < 1 || workers < 1)
                throw ConfigError("horizon, offline_stride, k_clusters, pca_components and workers must be >= 1");
            if (seeds.empty())
                throw ConfigError("at least one seed required");
            if (placement.samples < 1 || !(placement.min_distance > 0.0) || placement.max_distance < placement.min_distance)
                throw ConfigError("static placement: need samples >= 1 and 0 < min_distance <= max_distance");
            for (auto m : methods)
            {
                const bool dynamic_only = m == Method::Ucb || m == Method::Ts || m == Method::MaxSelected || m == Method::MaxAll;
                if (scenario == Scenario::Static && dynamic_only)
                    throw ConfigError("method '" + to_string(m) + "' is not available in the static scenario");
                if (scenario == Scenario::Dynamic && m == Method::Exhaustive)
                    throw ConfigError("use 'max_all' for exhaustive search in the dynamic scenario");
            }
        }
        catch (const ConfigError &)
        {
            throw;
        }
        catch (const Error &e)
        {
            throw ConfigError(e.what());
        }
    }

    TrajectorySpec default_linear_trajectory(int steps)
    {
        TrajectorySpec t;
        t.path = LinearPath{{Vec3(30.0, -70.0, 1.5), Vec3(80.0, 0.0, 1.5), Vec3(30.0, 70.0, 1.5)}};
        t.speed = 30.0 / 3.6;
        t.time_step = 0.01;
        t.num_steps = steps;
        return t;
    }

    TrajectorySpec default_circular_trajectory(int steps)
    {
        TrajectorySpec t;
        t.path = CircularPath{Vec3(60.0, 0.0, 1.5), 10.0, 0.0};
        t.speed = 30.0 / 3.6;
        t.time_step = 0.01;
        t.num_steps = steps;
        return t;
    }

    ExperimentConfig default_dynamic_config()
    {
        ExperimentConfig c;
        c.scenario = Scenario::Dynamic;
        c.geometry.random_scatterers.count = 4;
        c.trajectory = default_linear_trajectory(c.horizon);
        c.users = 1;
        c.link.n_s = 1;
        c.link.rho = std::pow(10.0, c.snr_db / 10.0);
        c.methods = {Method::Ucb, Method::Ts, Method::Random, Method::MaxSelected, Method::MaxAll};
        return c;
    }

    ExperimentConfig default_static_config()
    {
        ExperimentConfig c = default_dynamic_config();
        c.scenario = Scenario::Static;
        c.users = 2;
        c.link.n_s = 2;
        c.methods = {Method::Exhaustive, Method::Random};
        return c;
    }

    ExperimentConfig config_from_json(const nlohmann::json &doc)
    {
        try
        {
            reject_unknown(doc, {"name", "scenario", "geometry", "trajectory", "users", "extra_users", "link", "methods", "ucb", "ts",
                                 "k_clusters", "pca_components", "horizon", "offline_stride", "seeds", "static", "sweep_k",
                                 "diagnose_k", "exhaustive_cap", "workers", "out_dir"},
                           "config");
            const std::string scenario = doc.value("scenario", "dynamic");
            if (scenario != "static" && scenario != "dynamic")
                throw ConfigError("scenario must be 'static' or 'dynamic'");
            ExperimentConfig c = scenario == "static" ? default_static_config() : default_dynamic_config();

            read(doc, "name", c.name);
            if (doc.contains("geometry"))
                read_geometry(doc["geometry"], c.geometry);
            read(doc, "horizon", c.horizon);
            if (doc.contains("trajectory"))
                read_trajectory(doc["trajectory"], c.trajectory);
            c.trajectory.num_steps = c.horizon;

            read(doc, "users", c.users);
            if (doc.contains("extra_users"))
                for (const auto &p : doc["extra_users"])
                    c.extra_users.push_back(vec3(p, "extra_users[]"));
            c.link.n_s = c.users;
            if (doc.contains("link"))
            {
                const auto &l = doc["link"];
                reject_unknown(l, {"n_rf", "snr_db", "noise_power", "n_s", "per_user_streams"}, "link");
                read(l, "n_rf", c.n_rf);
                read(l, "snr_db", c.snr_db);
                read(l, "noise_power", c.link.noise_power);
                read(l, "n_s", c.link.n_s);
                read(l, "per_user_streams", c.link.per_user_streams);
            }
            c.link.rho = std::pow(10.0, c.snr_db / 10.0);

            if (doc.contains("methods"))
            {
                c.methods.clear();
                for (const auto &m : doc["methods"])
                    c.methods.push_back(method_from_string(m.get<std::string>()));
            }
            if (doc.contains("ucb"))
            {
                reject_unknown(doc["ucb"], {"gamma"}, "ucb");
                read(doc["ucb"], "gamma", c.ucb.gamma);
            }
            if (doc.contains("ts"))
            {
                const auto &t = doc["ts"];
                reject_unknown(t, {"lambda", "omega", "delta_s", "delta_f"}, "ts");
                read(t, "lambda", c.ts.lambda);
                read(t, "omega", c.ts.omega);
                read(t, "delta_s", c.ts.delta_s);
                read(t, "delta_f", c.ts.delta_f);
            }
            read(doc, "k_clusters", c.k_clusters);
            read(doc, "pca_components", c.pca_components);
            read(doc, "offline_stride", c.offline_stride);
            read(doc, "seeds", c.seeds);
            if (doc.contains("static"))
            {
                const auto &s = doc["static"];
                reject_unknown(s, {"samples", "min_distance", "max_distance", "sector", "sector_deg", "height", "export_dataset"}, "static");
                read(s, "samples", c.placement.samples);
                read(s, "min_distance", c.placement.min_distance);
                read(s, "max_distance", c.placement.max_distance);
                read_angle(s, "sector", c.placement.sector);
                read(s, "height", c.placement.height);
                read(s, "export_dataset", c.placement.export_dataset);
            }
            read(doc, "sweep_k", c.sweep_k);
            read(doc, "diagnose_k", c.diagnose_k);
            read(doc, "exhaustive_cap", c.exhaustive_cap);
            read(doc, "workers", c.workers);
            read(doc, "out_dir", c.out_dir);
            c.validate();
            return c;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }

    ExperimentConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError(path.string() + ": cannot open config");
        nlohmann::json doc;
        try
        {
            in >> doc;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ConfigError(path.string() + ": " + e.what());
        }
        return config_from_json(doc);
    }

    nlohmann::json geometry_json(const GeometrySpec &g)
    {
        json scatterers = json::array();
        for (const auto &s : g.scatterers)
            scatterers.push_back({{"position", vec3_json(s.position)}, {"gain", {s.gain.real(), s.gain.imag()}}});
        json modes = json::array();
        for (const auto &m : g.modes)
            modes.push_back({{"azimuth", m.azimuth}, {"elevation", m.elevation}, {"exponent", m.exponent}});
        return {
            {"bs_position", vec3_json(g.bs_position)},
            {"array", {g.array_x, g.array_y}},
            {"element_spacing", g.element_spacing},
            {"rx_antennas", g.rx_antennas},
            {"rx_spacing", g.rx_spacing},
            {"carrier_frequency", g.carrier_frequency},
            {"subcarriers", g.subcarriers},
            {"subcarrier_spacing", g.subcarrier_spacing},
            {"los", g.los},
            {"rician_factor", g.rician_factor},
            {"pathloss_exponent", g.pathloss_exponent},
            {"reference_distance", g.reference_distance},
            {"scatterers", scatterers},
            {"random_scatterers",
             {{"count", g.random_scatterers.count},
              {"lower", vec3_json(g.random_scatterers.lower)},
              {"upper", vec3_json(g.random_scatterers.upper)},
              {"gain", g.random_scatterers.gain}}},
            {"modes", modes},
        };
    }

    nlohmann::json canonical_json(const ExperimentConfig &c)
    {
        json trajectory;
        if (const auto *linear = std::get_if<LinearPath>(&c.trajectory.path))
        {
            json points = json::array();
            for (const auto &w : linear->waypoints)
                points.push_back(vec3_json(w));
            trajectory = {{"type", "linear"}, {"waypoints", points}};
        }
        else
        {
            const auto &circle = std::get<CircularPath>(c.trajectory.path);
            trajectory = {{"type", "circular"}, {"center", vec3_json(circle.center)}, {"radius", circle.radius}, {"start_angle", circle.start_angle}};
        }
        trajectory["speed"] = c.trajectory.speed;
        trajectory["time_step"] = c.trajectory.time_step;

        json extra = json::array();
        for (const auto &p : c.extra_users)
            extra.push_back(vec3_json(p));
        json methods = json::array();
        for (auto m : c.methods)
            methods.push_back(to_string(m));

        return {
            {"name", c.name},
            {"scenario", c.scenario == Scenario::Static ? "static" : "dynamic"},
            {"geometry", geometry_json(c.geometry)},
            {"trajectory", trajectory},
            {"users", c.users},
            {"extra_users", extra},
            {"link", {{"n_rf", c.n_rf}, {"snr_db", c.snr_db}, {"noise_power", c.link.noise_power}, {"n_s", c.link.n_s}, {"per_user_streams", c.link.per_user_streams}}},
            {"methods", methods},
            {"ucb", {{"gamma", c.ucb.gamma}}},
            {"ts", {{"lambda", c.ts.lambda}, {"omega", c.ts.omega}, {"delta_s", c.ts.delta_s}, {"delta_f", c.ts.delta_f}}},
            {"k_clusters", c.k_clusters},
            {"pca_components", c.pca_components},
            {"horizon", c.horizon},
            {"offline_stride", c.offline_stride},
            {"seeds", c.seeds},
            {"static",
             {{"samples", c.placement.samples},
              {"min_distance", c.placement.min_distance},
              {"max_distance", c.placement.max_distance},
              {"sector", c.placement.sector},
              {"height", c.placement.height},
              {"export_dataset", c.placement.export_dataset}}},
            {"sweep_k", c.sweep_k},
            {"diagnose_k", c.diagnose_k},
            {"exhaustive_cap", c.exhaustive_cap},
            {"workers", c.workers},
        };
    }

    std::string config_hash(const ExperimentConfig &config)
    {
        const std::string text = canonical_json(config).dump();
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char ch : text)
        {
            h ^= ch;
            h *= 0x100000001b3ull;
        }
        return hex64(h);
    }
} // namespace ramode
