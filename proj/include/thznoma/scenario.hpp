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

#ifndef THZNOMA_SCENARIO_HPP
#define THZNOMA_SCENARIO_HPP

#include "thznoma/channel.hpp"
#include "thznoma/outage.hpp"
#include "thznoma/pairing.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Scenario configs (JSON), figure presets, sweeps and validation reports behind the command-line tool.

namespace thznoma::scenario
{
    using channel::Mode;
    using channel::User;
    using outage::Method;

    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct Tolerances
    {
        double mc_abs = 0.015;             // analytic vs Monte Carlo: max(mc_abs, mc_sigma * stderr)
        double mc_sigma = 4.0;
        double exact_vs_simplified = 0.005; // tightened to 1e-6 when N0 = 0
        double lemma3_vs_mgf = 0.015;
        double absorption_rel = 0.15;      // catalog k(f) against the plan's k values (warning only)
    };

    struct SweepAxis
    {
        std::string variable; // k, a1, N_subcarriers, tau1, tau2, R
        std::vector<double> grid;
    };

    struct ScenarioConfig
    {
        std::string name = "scenario";
        double R = 60.0;
        int users = 300;
        bool truncate_enhanced_near = false;
        std::vector<pairing::SchemeKind> schemes{pairing::SchemeKind::random, pairing::SchemeKind::nearest_farthest,
                                                 pairing::SchemeKind::proposed, pairing::SchemeKind::enhanced};
        channel::LinkBudget budget = channel::LinkBudget{1.0, 100.0, 100.0, 1e-21, 1e12, 0.05};
        double a1 = 0.33;
        channel::FadingModel fading;
        std::optional<channel::SubcarrierPlan> plan; // multi-carrier when set
        double tau1 = 3.0;
        double tau2 = 0.5;
        std::vector<User> eval_users{User::near, User::far};
        std::vector<Mode> modes{Mode::noma, Mode::oma};
        std::vector<Method> methods{Method::exact_integral, Method::simplified, Method::montecarlo};
        std::optional<SweepAxis> sweep;
        std::size_t trials = 100000;
        std::uint64_t seed = 1;
        unsigned threads = 0;
        std::string output;
        std::optional<std::string> catalog; // absorption catalog for the validation report; built-in if empty
        Tolerances tolerances;

        // Throws ConfigError
        void validate() const;
    };

    ScenarioConfig parse_config(const nlohmann::json &j);
    ScenarioConfig load_config(const std::string &path);
    nlohmann::json to_json(const ScenarioConfig &config);

    // fig2, fig3, fig4. Throws ConfigError for unknown names.
    nlohmann::json preset_json(const std::string &name);
    ScenarioConfig preset(const std::string &name);
    std::vector<std::string> preset_names();

    // Config with the sweep variable set to value (and the sweep axis removed)
    ScenarioConfig at_point(const ScenarioConfig &config, double value);

    struct SweepRow
    {
        std::string sweep_var;
        std::optional<double> sweep_value;
        pairing::SchemeKind scheme;
        User user;
        Mode mode;
        Method method;
        double estimate;
        std::optional<double> stderr_value;
        std::string status; // ok, clipped, nonconverged, error:<message>; joined with '|'
    };

    // Every (grid value, scheme, user, mode, method); rows come back in grid order whatever the thread count
    std::vector<SweepRow> run_sweep(const ScenarioConfig &config);

    std::string csv_header();
    std::string to_csv(const std::vector<SweepRow> &rows);

    struct Check
    {
        std::string name;
        std::string subject;
        double deviation;
        double tolerance;
        bool pass;
        bool warn_only = false;
    };

    struct ValidationReport
    {
        std::vector<Check> checks;
        bool nonconverged = false;

        bool pass() const;
        std::string text() const;
        nlohmann::json json() const;
    };

    ValidationReport validate_rows(const ScenarioConfig &config, const std::vector<SweepRow> &rows);
    ValidationReport run_validation(const ScenarioConfig &config);
}

#endif
