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

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace thznoma::absorption
{
    void SpectralLine::validate() const
    {
        if (!(q >= 0.0 && q <= 1.0))
            throw std::invalid_argument("SpectralLine: mixing ratio q must lie in [0, 1].");
        if (!(S >= 0.0))
            throw std::invalid_argument("SpectralLine: line intensity S must be non-negative.");
        if (!(alpha_air > 0.0) || !(alpha_0 > 0.0))
            throw std::invalid_argument("SpectralLine: half-widths must be positive.");
        if (!(f_c0 > 0.0))
            throw std::invalid_argument("SpectralLine: resonance frequency must be positive.");
        if (!std::isfinite(delta) || !std::isfinite(gamma))
            throw std::invalid_argument("SpectralLine: delta and gamma must be finite.");
    }

    void MediumConditions::validate() const
    {
        if (!(p > 0.0 && p0 > 0.0 && T > 0.0 && T0 > 0.0 && T_sp > 0.0))
            throw std::invalid_argument("MediumConditions: pressures and temperatures must be positive.");
    }

    double lorentz_half_width(const SpectralLine &line, const MediumConditions &medium)
    {
        double mix = (1.0 - line.q) * line.alpha_air + line.q * line.alpha_0;
        return mix * (medium.p / medium.p0) * std::pow(medium.T0 / medium.T, line.gamma);
    }

    double shifted_resonance(const SpectralLine &line, const MediumConditions &medium)
    {
        return line.f_c0 + line.delta * (medium.p / medium.p0);
    }

    double vvw_line_shape(const SpectralLine &line, const MediumConditions &medium, double f)
    {
        if (!(f > 0.0))
            throw std::domain_error("vvw_line_shape: frequency must be positive.");
        using C = PhysicalConstants;
        double alpha = lorentz_half_width(line, medium);
        double fc = shifted_resonance(line, medium);
        double Y = f + fc, Z = f - fc, a2 = alpha * alpha;
        return 100.0 * C::c * alpha * f / (std::numbers::pi * fc) * (1.0 / (Y * Y + a2) + 1.0 / (Z * Z + a2));
    }

    AbsorptionResult absorption_coefficient(std::span<const SpectralLine> catalog, const MediumConditions &medium,
                                            double f)
    {
        if (!(f > 0.0))
            throw std::domain_error("absorption_coefficient: frequency must be positive.");
        AbsorptionResult out;
        if (catalog.empty())
        {
            out.empty_catalog = true;
            return out;
        }
        using C = PhysicalConstants;
        const double T = medium.T;
        const double x = C::h * C::c / (2.0 * C::k_b * T);
        for (const auto &line : catalog)
        {
            double fc = shifted_resonance(line, medium);
            double num = medium.p * medium.p * medium.T_sp * line.q * C::N_A * line.S * f * std::tanh(x * f);
            double den = medium.p0 * C::V * T * T * fc * std::tanh(x * fc);
            out.per_m += num / den * vvw_line_shape(line, medium, f);
        }
        return out;
    }

    CatalogError::CatalogError(const std::string &what, std::size_t row, std::string column)
        : std::runtime_error(what), row_(row), column_(std::move(column))
    {
    }

    namespace
    {
        constexpr const char *columns[] = {"q", "S", "f_c0", "delta", "alpha_air", "alpha_0", "gamma"};

        std::string trim(std::string s)
        {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        }

        bool parse_double(const std::string &s, double &v)
        {
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(v);
        }

        double *field(SpectralLine &l, std::size_t i)
        {
            double *f[] = {&l.q, &l.S, &l.f_c0, &l.delta, &l.alpha_air, &l.alpha_0, &l.gamma};
            return f[i];
        }

        double *field(Calibration &c, std::size_t i)
        {
            double *f[] = {&c.q, &c.S, &c.f_c0, &c.delta, &c.alpha_air, &c.alpha_0, &c.gamma};
            return f[i];
        }

        std::vector<std::string> split(const std::string &line)
        {
            std::vector<std::string> out;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ','))
                out.push_back(trim(cell));
            if (!line.empty() && line.back() == ',')
                out.emplace_back();
            return out;
        }

        void parse_calibration(const std::string &comment, std::size_t row, Calibration &cal)
        {
            std::string body = trim(comment.substr(1));
            if (body.rfind("cal.", 0) != 0)
                return;
            auto eq = body.find('=');
            if (eq == std::string::npos)
                throw CatalogError("Catalog row " + std::to_string(row) + ": calibration line lacks '='.", row, "");
            std::string name = trim(body.substr(4, eq - 4));
            std::string value = trim(body.substr(eq + 1));
            for (std::size_t i = 0; i < 7; ++i)
                if (name == columns[i])
                {
                    double v = 0.0;
                    if (!parse_double(value, v) || !(v > 0.0))
                        throw CatalogError("Catalog row " + std::to_string(row) + ": calibration factor for '" +
                                               name + "' must be a positive number, got '" + value + "'.",
                                           row, name);
                    *field(cal, i) = v;
                    return;
                }
            throw CatalogError("Catalog row " + std::to_string(row) + ": unknown calibration field '" + name + "'.",
                               row, name);
        }
    }

    Catalog parse_catalog(std::istream &in)
    {
        Catalog out;
        std::vector<std::pair<std::size_t, SpectralLine>> raw;
        std::string line;
        std::size_t row = 0;
        bool header = false;
        while (std::getline(in, line))
        {
            ++row;
            std::string t = trim(line);
            if (t.empty())
                continue;
            if (t[0] == '#')
            {
                parse_calibration(t, row, out.calibration);
                continue;
            }
            auto cells = split(t);
            if (!header)
            {
                bool ok = cells.size() == 7;
                for (std::size_t i = 0; ok && i < 7; ++i)
                    ok = cells[i] == columns[i];
                if (!ok)
                    throw CatalogError("Catalog row " + std::to_string(row) +
                                           ": expected header q,S,f_c0,delta,alpha_air,alpha_0,gamma.",
                                       row, "");
                header = true;
                continue;
            }
            if (cells.size() != 7)
                throw CatalogError("Catalog row " + std::to_string(row) + ": expected 7 fields, found " +
                                       std::to_string(cells.size()) + ".",
                                   row, "");
            SpectralLine l;
            for (std::size_t i = 0; i < 7; ++i)
                if (!parse_double(cells[i], *field(l, i)))
                    throw CatalogError("Catalog row " + std::to_string(row) + ", column '" + columns[i] +
                                           "': cannot parse '" + cells[i] + "' as a number.",
                                       row, columns[i]);
            raw.emplace_back(row, l);
        }
        if (!header)
            throw CatalogError("Catalog is missing its header row.", row, "");

        // Calibration comments may appear anywhere, so scale after the whole file is read
        for (auto &[r, l] : raw)
        {
            for (std::size_t i = 0; i < 7; ++i)
                *field(l, i) *= *field(out.calibration, i);
            try
            {
                l.validate();
            }
            catch (const std::invalid_argument &e)
            {
                throw std::invalid_argument("Catalog row " + std::to_string(r) + ": " + e.what());
            }
            out.lines.push_back(l);
        }
        return out;
    }

    Catalog load_catalog(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("Cannot open catalog file: " + path);
        return parse_catalog(in);
    }

    Catalog builtin_catalog()
    {
        std::istringstream in("# cal.f_c0=1e12\n# cal.delta=1e12\n# cal.alpha_air=1e12\n# cal.alpha_0=1e12\n"
                              "# cal.S=1.00387743912976e14\n"
                              "q,S,f_c0,delta,alpha_air,alpha_0,gamma\n"
                              "0.0005,2.66e-25,276,0.0251,0.1117,0.916,0.83\n");
        return parse_catalog(in);
    }
}
