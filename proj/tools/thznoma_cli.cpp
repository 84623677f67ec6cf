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

#include "thznoma/absorption.hpp"
#include "thznoma/pairing.hpp"
#include "thznoma/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace
{
    namespace sc = thznoma::scenario;

    enum Exit
    {
        exit_ok = 0,
        exit_generic = 1,
        exit_validation = 2,
        exit_config = 3,
        exit_numeric = 4
    };

    struct Common
    {
        std::string config;
        std::string preset;
        std::string out;
        std::uint64_t seed = 0;
        std::size_t trials = 0;
        unsigned threads = 0;
    };

    void add_common(CLI::App *cmd, Common &c)
    {
        cmd->add_option("--config", c.config, "Scenario JSON file");
        cmd->add_option("--preset", c.preset, "Built-in figure preset")->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
        cmd->add_option("--seed", c.seed, "Monte Carlo seed (overrides the config)");
        cmd->add_option("--trials", c.trials, "Monte Carlo trials (overrides the config)");
        cmd->add_option("--threads", c.threads, "Worker threads, 0 for all cores");
        cmd->add_option("--out", c.out, "Output path ('-' for stdout)");
    }

    sc::ScenarioConfig resolve(const Common &c, CLI::App *cmd)
    {
        if (!c.config.empty() && !c.preset.empty())
            throw sc::ConfigError("Config: give either --config or --preset, not both.");
        sc::ScenarioConfig cfg = c.config.empty() ? sc::preset(c.preset.empty() ? "fig2" : c.preset)
                                                  : sc::load_config(c.config);
        if (cmd->count("--seed"))
            cfg.seed = c.seed;
        if (cmd->count("--trials"))
            cfg.trials = c.trials;
        if (cmd->count("--threads"))
            cfg.threads = c.threads;
        cfg.validate();
        return cfg;
    }

    void write(const std::string &path, const std::string &content)
    {
        if (path.empty() || path == "-")
        {
            std::cout << content;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw sc::ConfigError("Config: cannot write " + path + ".");
        out << content;
    }

    int rows_exit(const std::vector<sc::SweepRow> &rows)
    {
        for (const auto &r : rows)
            if (r.status.find("nonconverged") != std::string::npos || r.status.rfind("error:", 0) == 0)
                return exit_numeric;
        return exit_ok;
    }

    std::string fmt(double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return buf;
    }

    int cmd_absorb(const std::string &catalog, const std::string &grid, const std::string &out)
    {
        auto cat = catalog.empty() ? thznoma::absorption::builtin_catalog() : thznoma::absorption::load_catalog(catalog);
        std::vector<double> freqs;
        std::stringstream ss(grid);
        std::string cell;
        while (std::getline(ss, cell, ','))
        {
            if (cell.find_first_not_of(" \t") == std::string::npos)
                continue;
            try
            {
                std::size_t used = 0;
                double f = std::stod(cell, &used);
                if (cell.find_first_not_of(" \t", used) != std::string::npos)
                    throw std::invalid_argument(cell);
                freqs.push_back(f);
            }
            catch (const std::exception &)
            {
                throw sc::ConfigError("Config: cannot parse frequency '" + cell + "'.");
            }
        }
        std::vector<double> unique;
        std::set<double> seen;
        for (double f : freqs)
        {
            if (!(f > 0.0))
                throw sc::ConfigError("Config: frequencies must be positive.");
            if (seen.insert(f).second)
                unique.push_back(f);
            else
                std::cerr << "warning: duplicate frequency " << fmt(f) << " Hz dropped\n";
        }
        if (cat.lines.empty())
            std::cerr << "warning: empty catalog, k(f) = 0\n";
        std::string csv = "f_hz,k_per_m\n";
        for (double f : unique)
            csv += fmt(f) + "," + fmt(thznoma::absorption::absorption_coefficient(cat.lines, {}, f).per_m) + "\n";
        write(out, csv);
        return exit_ok;
    }

    int cmd_thresholds(const sc::ScenarioConfig &cfg, const std::string &out)
    {
        std::ostringstream s;
        auto line = [&](const std::string &label, const thznoma::pairing::Thresholds &t)
        { s << label << "  R_th1 = " << fmt(t.near) << " m  R_th2 = " << fmt(t.far) << " m\n"; };
        s << "a1 = " << fmt(cfg.a1) << "\n";
        if (cfg.plan)
        {
            for (const auto &c : cfg.plan->carriers)
                line("f = " + fmt(c.f) + " Hz, k = " + fmt(c.k) + " 1/m:", thznoma::pairing::thresholds(cfg.a1, c.k));
            auto k = cfg.plan->absorption();
            line("all carriers (min R_th1, max R_th2):", thznoma::pairing::multicarrier_thresholds(cfg.a1, k));
        }
        else
            line("k = " + fmt(cfg.budget.k) + " 1/m:", thznoma::pairing::thresholds(cfg.a1, cfg.budget.k));
        write(out, s.str());
        return exit_ok;
    }

    sc::ScenarioConfig single_point(sc::ScenarioConfig cfg, const std::optional<double> &value)
    {
        if (cfg.sweep)
        {
            double v = value.value_or(cfg.sweep->grid.front());
            sc::at_point(cfg, v);
            cfg.sweep->grid = {v};
        }
        else if (value)
            throw sc::ConfigError("Config: --value needs a sweep axis in the config.");
        return cfg;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"THz-NOMA outage, pairing and Monte Carlo validation"};
    app.require_subcommand(1);

    std::string catalog, grid = "0.85e12,0.9e12,0.95e12,1.0e12,1.05e12,1.1e12", absorb_out;
    auto *absorb = app.add_subcommand("absorb", "Absorption coefficient k(f) from a line catalog");
    absorb->add_option("--catalog", catalog, "Catalog CSV (built-in water-vapour line if omitted)");
    absorb->add_option("--grid", grid, "Comma-separated frequencies in Hz");
    absorb->add_option("--out", absorb_out, "Output CSV path");

    Common th, ou, sw, va, mc;
    std::optional<double> point_value, mc_value;
    auto *thresholds = app.add_subcommand("thresholds", "Pairing threshold distances");
    add_common(thresholds, th);
    auto *outage = app.add_subcommand("outage", "Analytic and Monte Carlo outage at one point");
    add_common(outage, ou);
    outage->add_option("--value", point_value, "Sweep value to evaluate (first grid value by default)");
    auto *sweep = app.add_subcommand("sweep", "Run a sweep and write CSV");
    add_common(sweep, sw);
    auto *validate = app.add_subcommand("validate", "Cross-check every method; JSON report to --out");
    add_common(validate, va);
    auto *mcc = app.add_subcommand("mc", "Monte Carlo estimates at one point");
    add_common(mcc, mc);
    mcc->add_option("--value", mc_value, "Sweep value to evaluate (first grid value by default)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try
    {
        if (*absorb)
            return cmd_absorb(catalog, grid, absorb_out);
        if (*thresholds)
            return cmd_thresholds(resolve(th, thresholds), th.out);
        if (*outage)
        {
            auto cfg = single_point(resolve(ou, outage), point_value);
            auto rows = sc::run_sweep(cfg);
            write(ou.out, sc::to_csv(rows));
            return rows_exit(rows);
        }
        if (*mcc)
        {
            auto cfg = single_point(resolve(mc, mcc), mc_value);
            cfg.methods = {thznoma::outage::Method::montecarlo};
            auto rows = sc::run_sweep(cfg);
            write(mc.out, sc::to_csv(rows));
            return rows_exit(rows);
        }
        if (*sweep)
        {
            auto cfg = resolve(sw, sweep);
            auto rows = sc::run_sweep(cfg);
            write(sw.out.empty() ? cfg.output : sw.out, sc::to_csv(rows));
            return rows_exit(rows);
        }
        if (*validate)
        {
            auto cfg = resolve(va, validate);
            auto report = sc::run_validation(cfg);
            std::cout << report.text();
            if (!va.out.empty())
                write(va.out, report.json().dump(2) + "\n");
            if (!report.pass())
                return exit_validation;
            return report.nonconverged ? exit_numeric : exit_ok;
        }
    }
    catch (const sc::ConfigError &e)
    {
        std::cerr << e.what() << "\n";
        return exit_config;
    }
    catch (const thznoma::absorption::CatalogError &e)
    {
        std::cerr << e.what() << "\n";
        return exit_config;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << e.what() << "\n";
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_generic;
    }
    return exit_ok;
}
