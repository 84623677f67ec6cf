// SPDX-License-Identifier: Apache-2.0
//
// thznoma: outage and user-pairing analysis for downlink THz-NOMA networks
// Copyright (C) 2026 The thznoma Authors
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

#include "thznoma/scenario.hpp"

#include "thznoma/absorption.hpp"
#include "thznoma/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace thznoma::scenario
{
    using nlohmann::json;

    namespace
    {
        const char *const sweep_variables[] = {"k", "a1", "N_subcarriers", "tau1", "tau2", "R"};

        [[noreturn]] void fail(const std::string &what)
        {
            throw ConfigError("Config: " + what);
        }

        void check_keys(const json &j, const std::string &where, std::initializer_list<const char *> allowed)
        {
            if (!j.is_object())
                fail(where + " must be an object.");
            for (auto it = j.begin(); it != j.end(); ++it)
                if (std::find_if(allowed.begin(), allowed.end(), [&](const char *a) { return it.key() == a; }) ==
                    allowed.end())
                    fail("unknown key '" + it.key() + "' in " + where + ".");
        }

        template <typename T>
        void read(const json &j, const char *key, T &out)
        {
            if (!j.contains(key))
                return;
            try
            {
                out = j.at(key).get<T>();
            }
            catch (const json::exception &)
            {
                fail("key '" + std::string(key) + "' has the wrong type.");
            }
        }

        User parse_user(const std::string &s)
        {
            if (s == "near")
                return User::near;
            if (s == "far")
                return User::far;
            fail("unknown user '" + s + "'.");
        }

        Mode parse_mode(const std::string &s)
        {
            if (s == "noma")
                return Mode::noma;
            if (s == "oma")
                return Mode::oma;
            fail("unknown mode '" + s + "'.");
        }

        Method parse_method(const std::string &s)
        {
            for (auto m : {Method::exact_integral, Method::simplified, Method::lemma3, Method::mgf, Method::montecarlo})
                if (s == outage::to_string(m))
                    return m;
            fail("unknown method '" + s + "'.");
        }

        std::string fmt(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.10g", v);
            return buf;
        }
    }

    void ScenarioConfig::validate() const
    {
        try
        {
            budget.validate();
            fading.validate();
            channel::PowerSplit{a1};
            pairing::PairingScheme{pairing::SchemeKind::random, R, users, false}.validate();
            if (plan)
                plan->validate();
        }
        catch (const std::invalid_argument &e)
        {
            fail(e.what());
        }
        if (!(tau1 > 0.0) || !(tau2 > 0.0))
            fail("targets tau1 and tau2 must be positive.");
        if (schemes.empty() || eval_users.empty() || modes.empty() || methods.empty())
            fail("schemes, users, modes and methods must be nonempty.");
        if (trials < 1)
            fail("Monte Carlo needs at least one trial.");
        if (!plan && !(budget.k > 0.0))
            fail("single-carrier scenarios need k > 0.");
        const Tolerances &t = tolerances;
        for (double v : {t.mc_abs, t.mc_sigma, t.exact_vs_simplified, t.lemma3_vs_mgf, t.absorption_rel})
            if (!(v >= 0.0))
                fail("tolerances must be non-negative.");
        if (sweep)
        {
            if (std::find(std::begin(sweep_variables), std::end(sweep_variables), sweep->variable) ==
                std::end(sweep_variables))
                fail("unknown sweep variable '" + sweep->variable + "'.");
            if (sweep->grid.empty())
                fail("sweep grid is empty.");
            for (std::size_t i = 1; i < sweep->grid.size(); ++i)
                if (!(sweep->grid[i] > sweep->grid[i - 1]))
                    fail("sweep grid must be strictly increasing.");
            if (sweep->variable == "k" && plan)
                fail("sweeping k requires a single-carrier scenario.");
            if (sweep->variable == "N_subcarriers")
            {
                if (!plan)
                    fail("sweeping N_subcarriers requires a subcarrier list.");
                for (double v : sweep->grid)
                    if (v != std::floor(v) || v < 1 || v > double(plan->size()))
                        fail("N_subcarriers grid values must be integers within the subcarrier list.");
            }
            for (double v : sweep->grid)
                at_point(*this, v);
        }
    }

    ScenarioConfig parse_config(const json &j)
    {
        check_keys(j, "config",
                   {"name", "radius_m", "users", "truncate_enhanced_near", "schemes", "link", "a1", "fading",
                    "subcarriers", "tau1", "tau2", "users_evaluated", "modes", "methods", "sweep", "montecarlo",
                    "threads", "output", "catalog", "tolerances"});
        ScenarioConfig c;
        read(j, "name", c.name);
        read(j, "radius_m", c.R);
        read(j, "users", c.users);
        read(j, "truncate_enhanced_near", c.truncate_enhanced_near);
        read(j, "a1", c.a1);
        read(j, "tau1", c.tau1);
        read(j, "tau2", c.tau2);
        read(j, "threads", c.threads);
        read(j, "output", c.output);
        if (j.contains("catalog"))
        {
            std::string path;
            read(j, "catalog", path);
            c.catalog = path;
        }
        if (j.contains("schemes"))
        {
            std::vector<std::string> names;
            read(j, "schemes", names);
            c.schemes.clear();
            for (const auto &n : names)
            {
                auto k = pairing::parse_scheme(n);
                if (!k)
                    fail("unknown scheme '" + n + "'.");
                c.schemes.push_back(*k);
            }
        }
        if (j.contains("link"))
        {
            const json &l = j.at("link");
            check_keys(l, "link", {"power_w", "gain_tx_db", "gain_rx_db", "noise_w", "carrier_hz", "k"});
            double P = 1.0, gt = 20.0, gr = 20.0, N0 = 1e-21, f = 1e12, k = 0.05;
            read(l, "power_w", P);
            read(l, "gain_tx_db", gt);
            read(l, "gain_rx_db", gr);
            read(l, "noise_w", N0);
            read(l, "carrier_hz", f);
            read(l, "k", k);
            c.budget = channel::LinkBudget{P, channel::db_to_linear(gt), channel::db_to_linear(gr), N0, f, k};
        }
        if (j.contains("fading"))
        {
            const json &f = j.at("fading");
            check_keys(f, "fading", {"m", "theta", "parameterization"});
            read(f, "m", c.fading.m);
            read(f, "theta", c.fading.theta);
            std::string p = "shape_scale";
            read(f, "parameterization", p);
            if (p == "shape_scale")
                c.fading.parameterization = channel::FadingParameterization::shape_scale;
            else if (p == "mean_power")
                c.fading.parameterization = channel::FadingParameterization::mean_power;
            else
                fail("unknown fading parameterization '" + p + "'.");
        }
        if (j.contains("subcarriers") && !j.at("subcarriers").is_null())
        {
            const json &s = j.at("subcarriers");
            if (!s.is_array())
                fail("subcarriers must be an array.");
            channel::SubcarrierPlan plan;
            for (const auto &e : s)
            {
                check_keys(e, "subcarrier", {"f_hz", "k"});
                if (!e.contains("f_hz") || !e.contains("k"))
                    fail("each subcarrier needs f_hz and k.");
                channel::Subcarrier sc{0.0, 0.0};
                read(e, "f_hz", sc.f);
                read(e, "k", sc.k);
                plan.carriers.push_back(sc);
            }
            c.plan = plan;
        }
        if (j.contains("users_evaluated"))
        {
            std::vector<std::string> v;
            read(j, "users_evaluated", v);
            c.eval_users.clear();
            for (const auto &s : v)
                c.eval_users.push_back(parse_user(s));
        }
        if (j.contains("modes"))
        {
            std::vector<std::string> v;
            read(j, "modes", v);
            c.modes.clear();
            for (const auto &s : v)
                c.modes.push_back(parse_mode(s));
        }
        if (j.contains("methods"))
        {
            std::vector<std::string> v;
            read(j, "methods", v);
            c.methods.clear();
            for (const auto &s : v)
                c.methods.push_back(parse_method(s));
        }
        if (j.contains("sweep") && !j.at("sweep").is_null())
        {
            const json &s = j.at("sweep");
            check_keys(s, "sweep", {"variable", "grid"});
            SweepAxis axis;
            read(s, "variable", axis.variable);
            read(s, "grid", axis.grid);
            c.sweep = axis;
        }
        if (j.contains("montecarlo"))
        {
            const json &m = j.at("montecarlo");
            check_keys(m, "montecarlo", {"trials", "seed"});
            read(m, "trials", c.trials);
            read(m, "seed", c.seed);
        }
        if (j.contains("tolerances"))
        {
            const json &t = j.at("tolerances");
            check_keys(t, "tolerances", {"mc_abs", "mc_sigma", "exact_vs_simplified", "lemma3_vs_mgf", "absorption_rel"});
            read(t, "mc_abs", c.tolerances.mc_abs);
            read(t, "mc_sigma", c.tolerances.mc_sigma);
            read(t, "exact_vs_simplified", c.tolerances.exact_vs_simplified);
            read(t, "lemma3_vs_mgf", c.tolerances.lemma3_vs_mgf);
            read(t, "absorption_rel", c.tolerances.absorption_rel);
        }
        c.validate();
        return c;
    }

    ScenarioConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            fail("cannot open " + path + ".");
        json j;
        try
        {
            j = json::parse(in, nullptr, true, true);
        }
        catch (const json::parse_error &e)
        {
            fail(path + ": " + e.what());
        }
        return parse_config(j);
    }

    json to_json(const ScenarioConfig &c)
    {
        json j;
        j["name"] = c.name;
        j["radius_m"] = c.R;
        j["users"] = c.users;
        j["truncate_enhanced_near"] = c.truncate_enhanced_near;
        j["schemes"] = json::array();
        for (auto s : c.schemes)
            j["schemes"].push_back(std::string(pairing::to_string(s)));
        j["link"] = {{"power_w", c.budget.P},
                     {"gain_tx_db", 10.0 * std::log10(c.budget.G_t)},
                     {"gain_rx_db", 10.0 * std::log10(c.budget.G_r)},
                     {"noise_w", c.budget.N0},
                     {"carrier_hz", c.budget.f},
                     {"k", c.budget.k}};
        j["a1"] = c.a1;
        j["fading"] = {{"m", c.fading.m},
                       {"theta", c.fading.theta},
                       {"parameterization", c.fading.parameterization == channel::FadingParameterization::shape_scale
                                                ? "shape_scale"
                                                : "mean_power"}};
        if (c.plan)
        {
            j["subcarriers"] = json::array();
            for (const auto &s : c.plan->carriers)
                j["subcarriers"].push_back({{"f_hz", s.f}, {"k", s.k}});
        }
        j["tau1"] = c.tau1;
        j["tau2"] = c.tau2;
        j["users_evaluated"] = json::array();
        for (auto u : c.eval_users)
            j["users_evaluated"].push_back(std::string(channel::to_string(u)));
        j["modes"] = json::array();
        for (auto m : c.modes)
            j["modes"].push_back(std::string(channel::to_string(m)));
        j["methods"] = json::array();
        for (auto m : c.methods)
            j["methods"].push_back(std::string(outage::to_string(m)));
        if (c.sweep)
            j["sweep"] = {{"variable", c.sweep->variable}, {"grid", c.sweep->grid}};
        j["montecarlo"] = {{"trials", c.trials}, {"seed", c.seed}};
        j["threads"] = c.threads;
        j["output"] = c.output;
        if (c.catalog)
            j["catalog"] = *c.catalog;
        j["tolerances"] = {{"mc_abs", c.tolerances.mc_abs},
                           {"mc_sigma", c.tolerances.mc_sigma},
                           {"exact_vs_simplified", c.tolerances.exact_vs_simplified},
                           {"lemma3_vs_mgf", c.tolerances.lemma3_vs_mgf},
                           {"absorption_rel", c.tolerances.absorption_rel}};
        return j;
    }

    std::vector<std::string> preset_names()
    {
        return {"fig2", "fig3", "fig4"};
    }

    json preset_json(const std::string &name)
    {
        // Kept in sync with configs/<name>.json by the test suite
        static const char *fig2 = R"({
  "name": "fig2",
  "radius_m": 60,
  "users": 300,
  "schemes": ["random", "nearest_farthest", "proposed", "enhanced"],
  "link": {"power_w": 1, "gain_tx_db": 20, "gain_rx_db": 20, "noise_w": 1e-21, "carrier_hz": 1e12, "k": 0.05},
  "a1": 0.33,
  "fading": {"m": 2, "theta": 1, "parameterization": "shape_scale"},
  "tau1": 3,
  "tau2": 0.5,
  "methods": ["exact", "simplified", "montecarlo"],
  "sweep": {"variable": "k", "grid": [0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.1]},
  "montecarlo": {"trials": 100000, "seed": 20260101},
  "output": "fig2.csv"
})";
        static const char *fig3 = R"({
  "name": "fig3",
  "radius_m": 60,
  "users": 300,
  "schemes": ["random", "nearest_farthest", "proposed", "enhanced"],
  "link": {"power_w": 1, "gain_tx_db": 20, "gain_rx_db": 20, "noise_w": 1e-21, "carrier_hz": 1e12, "k": 0.03},
  "a1": 0.33,
  "fading": {"m": 2, "theta": 1, "parameterization": "shape_scale"},
  "tau1": 3,
  "tau2": 0.5,
  "methods": ["exact", "simplified", "montecarlo"],
  "sweep": {"variable": "a1", "grid": [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45]},
  "montecarlo": {"trials": 100000, "seed": 20260102},
  "output": "fig3.csv"
})";
        static const char *fig4 = R"({
  "name": "fig4",
  "radius_m": 60,
  "users": 300,
  "schemes": ["random", "nearest_farthest", "proposed", "enhanced"],
  "link": {"power_w": 1, "gain_tx_db": 20, "gain_rx_db": 20, "noise_w": 1e-21, "carrier_hz": 1e12, "k": 0.05},
  "a1": 0.33,
  "fading": {"m": 2, "theta": 1, "parameterization": "shape_scale"},
  "subcarriers": [
    {"f_hz": 0.85e12, "k": 0.0357}, {"f_hz": 0.90e12, "k": 0.0400}, {"f_hz": 0.95e12, "k": 0.0446},
    {"f_hz": 1.00e12, "k": 0.0494}, {"f_hz": 1.05e12, "k": 0.0545}, {"f_hz": 1.10e12, "k": 0.0598}
  ],
  "tau1": 8,
  "tau2": 0.5,
  "methods": ["lemma3", "mgf", "montecarlo"],
  "sweep": {"variable": "N_subcarriers", "grid": [1, 2, 3, 4, 5, 6]},
  "montecarlo": {"trials": 100000, "seed": 20260103},
  "output": "fig4.csv"
})";
        if (name == "fig2")
            return json::parse(fig2);
        if (name == "fig3")
            return json::parse(fig3);
        if (name == "fig4")
            return json::parse(fig4);
        fail("unknown preset '" + name + "'.");
    }

    ScenarioConfig preset(const std::string &name)
    {
        return parse_config(preset_json(name));
    }

    ScenarioConfig at_point(const ScenarioConfig &config, double value)
    {
        ScenarioConfig c = config;
        c.sweep.reset();
        if (!config.sweep)
            return c;
        const std::string &v = config.sweep->variable;
        if (v == "k")
            c.budget.k = value;
        else if (v == "a1")
            c.a1 = value;
        else if (v == "tau1")
            c.tau1 = value;
        else if (v == "tau2")
            c.tau2 = value;
        else if (v == "R")
            c.R = value;
        else if (v == "N_subcarriers")
            c.plan->carriers.resize(std::size_t(value));
        if (!(c.budget.k >= 0.0) || !(c.tau1 > 0.0) || !(c.tau2 > 0.0) || !(c.R > 0.0))
            fail("sweep value " + fmt(value) + " is out of range for " + v + ".");
        try
        {
            channel::PowerSplit{c.a1};
        }
        catch (const std::invalid_argument &e)
        {
            fail(e.what());
        }
        return c;
    }

    namespace
    {
        struct Task
        {
            std::size_t point;
            std::size_t scheme;
        };

        void add_status(std::string &status, const std::string &s)
        {
            if (status == "ok")
                status = s;
            else
                status += "|" + s;
        }

        std::vector<SweepRow> evaluate(const ScenarioConfig &c, pairing::SchemeKind kind, unsigned mc_threads,
                                       const std::string &var, std::optional<double> value)
        {
            const channel::PowerSplit split(c.a1);
            const channel::SubcarrierPlan plan =
                c.plan ? *c.plan : channel::SubcarrierPlan{{{c.budget.f, c.budget.k}}};
            const bool single = plan.size() == 1;
            channel::LinkBudget budget = c.budget.at(plan.carriers[0].f, plan.carriers[0].k);
            const pairing::PairingScheme scheme{kind, c.R, c.users, c.truncate_enhanced_near};

            std::vector<SweepRow> rows;
            auto emit = [&](User u, Mode m, Method meth, double est, std::optional<double> se, std::string status)
            { rows.push_back({var, value, kind, u, m, meth, est, se, std::move(status)}); };
            auto emit_error = [&](const std::string &msg)
            {
                for (auto u : c.eval_users)
                    for (auto m : c.modes)
                        for (auto meth : c.methods)
                            if (single || (meth != Method::exact_integral && meth != Method::simplified))
                                emit(u, m, meth, NAN, std::nullopt, "error:" + msg);
            };

            std::optional<pairing::Thresholds> thr;
            std::optional<pairing::LawPair> laws;
            try
            {
                if (scheme.needs_thresholds())
                {
                    auto k = plan.absorption();
                    thr = pairing::multicarrier_thresholds(c.a1, k);
                }
                laws = pairing::distance_laws(scheme, thr);
            }
            catch (const std::exception &e)
            {
                emit_error(e.what());
                return rows;
            }

            std::optional<montecarlo::TrialSummary> mc;
            std::string mc_error;
            if (std::find(c.methods.begin(), c.methods.end(), Method::montecarlo) != c.methods.end())
            {
                montecarlo::TrialConfig tc;
                tc.trials = c.trials;
                tc.seed = c.seed;
                tc.scheme = scheme;
                tc.thresholds = thr;
                tc.budget = budget;
                tc.split = split;
                tc.fading = c.fading;
                if (!single || c.plan)
                    tc.plan = plan;
                tc.tau1 = c.tau1;
                tc.tau2 = c.tau2;
                tc.threads = mc_threads;
                try
                {
                    mc = montecarlo::run_trials(tc);
                }
                catch (const std::exception &e)
                {
                    mc_error = e.what();
                }
            }

            for (auto u : c.eval_users)
            {
                const auto &law = u == User::near ? laws->near : laws->far;
                const bool clipped = u == User::near && !laws->warnings.empty();
                for (auto m : c.modes)
                {
                    outage::OutageQuery q{u, m, u == User::near ? c.tau1 : c.tau2};
                    for (auto meth : c.methods)
                    {
                        std::string status = "ok";
                        if (clipped)
                            status = "clipped";
                        if (meth == Method::montecarlo)
                        {
                            if (!mc)
                            {
                                emit(u, m, meth, NAN, std::nullopt, "error:" + mc_error);
                                continue;
                            }
                            const auto &e = mc->get(u, m);
                            emit(u, m, meth, e.mean, e.stderr_value, status);
                            continue;
                        }
                        if (!single && (meth == Method::exact_integral || meth == Method::simplified))
                            continue;
                        try
                        {
                            outage::OutageEstimate est;
                            switch (meth)
                            {
                            case Method::exact_integral:
                                est = outage::outage_exact_single(q, budget, split, c.fading, law);
                                break;
                            case Method::simplified:
                                est = outage::outage_simplified_single(q, split, budget.k, law);
                                break;
                            case Method::lemma3:
                                est = outage::multicarrier_outage_lemma3(q, split, plan, law);
                                break;
                            default:
                                est = outage::multicarrier_outage_mgf(q, split, plan, law, budget, c.fading);
                                break;
                            }
                            if (!est.converged)
                                add_status(status, "nonconverged");
                            emit(u, m, meth, est.probability, std::nullopt, status);
                        }
                        catch (const std::exception &e)
                        {
                            emit(u, m, meth, NAN, std::nullopt, std::string("error:") + e.what());
                        }
                    }
                }
            }
            return rows;
        }
    }

    std::vector<SweepRow> run_sweep(const ScenarioConfig &config)
    {
        config.validate();
        std::vector<std::optional<double>> values;
        if (config.sweep)
            values.assign(config.sweep->grid.begin(), config.sweep->grid.end());
        else
            values.push_back(std::nullopt);
        const std::string var = config.sweep ? config.sweep->variable : "none";

        std::vector<Task> tasks;
        for (std::size_t p = 0; p < values.size(); ++p)
            for (std::size_t s = 0; s < config.schemes.size(); ++s)
                tasks.push_back({p, s});

        // Outer parallelism over (point, scheme); Monte Carlo inside each task then runs on one thread
        std::vector<std::vector<SweepRow>> out(tasks.size());
        const bool outer = tasks.size() > 1 && config.threads != 1;
        montecarlo::parallel_for(tasks.size(), outer ? config.threads : 1,
                                 [&](std::size_t i)
                                 {
                                     const Task &t = tasks[i];
                                     ScenarioConfig c = values[t.point] ? at_point(config, *values[t.point]) : config;
                                     out[i] = evaluate(c, config.schemes[t.scheme], outer ? 1 : config.threads, var,
                                                       values[t.point]);
                                 });
        std::vector<SweepRow> rows;
        for (auto &r : out)
            rows.insert(rows.end(), r.begin(), r.end());
        return rows;
    }

    std::string csv_header()
    {
        return "sweep_var,sweep_value,scheme,user,mode,method,estimate,stderr,status\n";
    }

    std::string to_csv(const std::vector<SweepRow> &rows)
    {
        std::string s = csv_header();
        for (const auto &r : rows)
        {
            std::string status = r.status;
            std::replace(status.begin(), status.end(), ',', ';');
            std::replace(status.begin(), status.end(), '\n', ' ');
            s += r.sweep_var + "," + (r.sweep_value ? fmt(*r.sweep_value) : "") + "," +
                 std::string(pairing::to_string(r.scheme)) + "," + std::string(channel::to_string(r.user)) + "," +
                 std::string(channel::to_string(r.mode)) + "," + std::string(outage::to_string(r.method)) + "," +
                 fmt(r.estimate) + "," + (r.stderr_value ? fmt(*r.stderr_value) : "") + "," + status + "\n";
        }
        return s;
    }

    bool ValidationReport::pass() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.pass || c.warn_only; });
    }

    namespace
    {
        struct Summary
        {
            std::size_t count = 0, failures = 0;
            double max_dev = 0.0;
            bool warn_only = false;
        };

        std::vector<std::pair<std::string, Summary>> summarize(const std::vector<Check> &checks)
        {
            std::vector<std::pair<std::string, Summary>> out;
            for (const auto &c : checks)
            {
                auto it = std::find_if(out.begin(), out.end(), [&](const auto &p) { return p.first == c.name; });
                if (it == out.end())
                {
                    out.push_back({c.name, {}});
                    it = out.end() - 1;
                }
                it->second.count++;
                it->second.failures += !c.pass;
                it->second.warn_only = c.warn_only;
                if (std::isfinite(c.deviation))
                    it->second.max_dev = std::max(it->second.max_dev, c.deviation);
                else
                    it->second.max_dev = INFINITY;
            }
            return out;
        }
    }

    std::string ValidationReport::text() const
    {
        std::ostringstream s;
        for (const auto &[name, sum] : summarize(checks))
        {
            const char *tag = sum.failures == 0 ? "PASS" : (sum.warn_only ? "WARN" : "FAIL");
            char line[256];
            std::snprintf(line, sizeof line, "%-4s  %-32s max deviation %.3e  (%zu checks, %zu failed)\n", tag,
                          name.c_str(), sum.max_dev, sum.count, sum.failures);
            s << line;
        }
        for (const auto &c : checks)
            if (!c.pass)
                s << (c.warn_only ? "  warn: " : "  fail: ") << c.name << " [" << c.subject
                  << "] deviation " << fmt(c.deviation) << " > " << fmt(c.tolerance) << "\n";
        if (nonconverged)
            s << "note: some numeric results did not converge\n";
        s << "overall: " << (pass() ? "PASS" : "FAIL") << "\n";
        return s.str();
    }

    json ValidationReport::json() const
    {
        nlohmann::json j;
        j["pass"] = pass();
        j["nonconverged"] = nonconverged;
        j["summary"] = nlohmann::json::array();
        for (const auto &[name, sum] : summarize(checks))
            j["summary"].push_back({{"name", name},
                                    {"checks", sum.count},
                                    {"failures", sum.failures},
                                    {"max_deviation", std::isfinite(sum.max_dev) ? nlohmann::json(sum.max_dev)
                                                                                 : nlohmann::json(nullptr)},
                                    {"warn_only", sum.warn_only}});
        j["checks"] = nlohmann::json::array();
        for (const auto &c : checks)
            j["checks"].push_back({{"name", c.name},
                                   {"subject", c.subject},
                                   {"deviation", std::isfinite(c.deviation) ? nlohmann::json(c.deviation)
                                                                            : nlohmann::json(nullptr)},
                                   {"tolerance", c.tolerance},
                                   {"pass", c.pass},
                                   {"warn_only", c.warn_only}});
        return j;
    }

    ValidationReport validate_rows(const ScenarioConfig &config, const std::vector<SweepRow> &rows)
    {
        ValidationReport report;
        const Tolerances &tol = config.tolerances;

        // Group by (grid value, scheme, user, mode)
        using Key = std::tuple<double, int, int, int>;
        std::map<Key, std::map<Method, const SweepRow *>> groups;
        std::vector<Key> order;
        for (const auto &r : rows)
        {
            Key key{r.sweep_value.value_or(0.0), int(r.scheme), int(r.user), int(r.mode)};
            if (!groups.count(key))
                order.push_back(key);
            groups[key][r.method] = &r;
            if (r.status.find("nonconverged") != std::string::npos)
                report.nonconverged = true;
            if (r.status.rfind("error:", 0) == 0)
                report.checks.push_back({"evaluation errors", r.status, INFINITY, 0.0, false});
        }

        auto subject = [&](const SweepRow &r)
        {
            return (r.sweep_value ? r.sweep_var + "=" + fmt(*r.sweep_value) + " " : std::string()) +
                   std::string(pairing::to_string(r.scheme)) + " " + std::string(channel::to_string(r.user)) + " " +
                   std::string(channel::to_string(r.mode));
        };
        auto usable = [](const SweepRow *r) { return r && std::isfinite(r->estimate); };

        for (const auto &key : order)
        {
            const auto &g = groups[key];
            auto get = [&](Method m) -> const SweepRow *
            {
                auto it = g.find(m);
                return it == g.end() ? nullptr : it->second;
            };
            const SweepRow *mc = get(Method::montecarlo);
            for (auto m : {Method::exact_integral, Method::simplified, Method::lemma3, Method::mgf})
            {
                const SweepRow *a = get(m);
                if (!usable(a) || !usable(mc))
                    continue;
                double dev = std::abs(a->estimate - mc->estimate);
                double t = std::max(tol.mc_abs, tol.mc_sigma * mc->stderr_value.value_or(0.0));
                report.checks.push_back(
                    {std::string(outage::to_string(m)) + " vs montecarlo", subject(*a), dev, t, dev <= t});
            }
            const SweepRow *ex = get(Method::exact_integral), *si = get(Method::simplified);
            if (usable(ex) && usable(si))
            {
                double dev = std::abs(ex->estimate - si->estimate);
                double t = config.budget.N0 == 0.0 ? std::min(1e-6, tol.exact_vs_simplified) : tol.exact_vs_simplified;
                report.checks.push_back({"exact vs simplified", subject(*ex), dev, t, dev <= t});
            }
            const SweepRow *l3 = get(Method::lemma3), *mg = get(Method::mgf);
            if (usable(l3) && usable(mg))
            {
                double dev = std::abs(l3->estimate - mg->estimate);
                report.checks.push_back({"lemma3 vs mgf", subject(*l3), dev, tol.lemma3_vs_mgf, dev <= tol.lemma3_vs_mgf});
            }
        }

        // More carriers never hurt the near user
        if (config.sweep && config.sweep->variable == "N_subcarriers")
        {
            std::map<std::tuple<int, int, int>, std::vector<const SweepRow *>> series;
            for (const auto &r : rows)
                if (r.user == User::near && (r.method == Method::lemma3 || r.method == Method::mgf) &&
                    std::isfinite(r.estimate))
                    series[{int(r.scheme), int(r.mode), int(r.method)}].push_back(&r);
            for (const auto &[k, v] : series)
                for (std::size_t i = 1; i < v.size(); ++i)
                {
                    double slack = v[i]->method == Method::lemma3 ? 1e-12 : 1e-3;
                    double rise = v[i]->estimate - v[i - 1]->estimate;
                    report.checks.push_back(
                        {"near outage nonincreasing in N", subject(*v[i]), std::max(rise, 0.0), slack, rise <= slack});
                }
        }

        // Catalog k(f) against the plan (a warning, never a failure)
        if (config.plan)
        {
            absorption::Catalog cat = config.catalog ? absorption::load_catalog(*config.catalog)
                                                     : absorption::builtin_catalog();
            for (const auto &s : config.plan->carriers)
            {
                double k = absorption::absorption_coefficient(cat.lines, {}, s.f).per_m;
                double rel = std::abs(k - s.k) / s.k;
                report.checks.push_back({"absorption k(f) vs plan", "f=" + fmt(s.f) + " Hz", rel,
                                         tol.absorption_rel, rel <= tol.absorption_rel, true});
            }
        }
        return report;
    }

    ValidationReport run_validation(const ScenarioConfig &config)
    {
        return validate_rows(config, run_sweep(config));
    }
}
