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

#ifndef THZNOMA_ABSORPTION_HPP
#define THZNOMA_ABSORPTION_HPP

#include <cstddef>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Line-by-line molecular absorption coefficient k(f) with a Van Vleck-Weisskopf line shape.

namespace thznoma::absorption
{
    struct SpectralLine
    {
        double q = 0.0;         // mixing ratio
        double S = 0.0;         // line intensity [Hz m^2 / mol]
        double f_c0 = 0.0;      // zero-pressure resonance [Hz]
        double delta = 0.0;     // linear pressure shift [Hz]
        double alpha_air = 0.0; // air-broadened half-width [Hz]
        double alpha_0 = 0.0;   // self-broadened half-width [Hz]
        double gamma = 0.0;     // temperature exponent of the half-width

        // Throws std::invalid_argument unless S >= 0, half-widths > 0, 0 <= q <= 1, f_c0 > 0
        void validate() const;
    };

    struct MediumConditions
    {
        double p = 1.0;       // pressure [atm]
        double p0 = 1.0;      // reference pressure [atm]
        double T = 396.0;     // temperature [K]
        double T0 = 296.0;    // reference temperature [K]
        double T_sp = 273.15; // standard-pressure temperature [K]

        void validate() const;
    };

    struct PhysicalConstants
    {
        static constexpr double c = 2.9979e8;    // [m/s]
        static constexpr double h = 6.6262e-34;  // [J s]
        static constexpr double k_b = 1.3806e-23; // [J/K]
        static constexpr double N_A = 6.0221e23; // [1/mol]
        static constexpr double V = 8.2051e-5;   // [m^3 atm / K / mol]
    };

    // Per-field multipliers applied to catalog values on load
    struct Calibration
    {
        double q = 1.0;
        double S = 1.0;
        double f_c0 = 1.0;
        double delta = 1.0;
        double alpha_air = 1.0;
        double alpha_0 = 1.0;
        double gamma = 1.0;
    };

    // alpha = ((1-q) alpha_air + q alpha_0) (p/p0) (T0/T)^gamma
    double lorentz_half_width(const SpectralLine &line, const MediumConditions &medium);

    // f_c = f_c0 + delta p/p0
    double shifted_resonance(const SpectralLine &line, const MediumConditions &medium);

    // F(f) = 100 c alpha f / (pi f_c) [1/(Y^2 + alpha^2) + 1/(Z^2 + alpha^2)], Y = f + f_c, Z = f - f_c.
    // Throws std::domain_error for f <= 0.
    double vvw_line_shape(const SpectralLine &line, const MediumConditions &medium, double f);

    struct AbsorptionResult
    {
        double per_m = 0.0;         // k(f) [1/m]
        bool empty_catalog = false; // set when no lines were supplied
    };

    // Sum of the per-line terms over the catalog. Throws std::domain_error for f <= 0.
    AbsorptionResult absorption_coefficient(std::span<const SpectralLine> catalog, const MediumConditions &medium,
                                            double f);

    struct Catalog
    {
        std::vector<SpectralLine> lines; // calibrated values
        Calibration calibration;         // factors read from the header comments
    };

    // Malformed catalog input. row is the 1-based line number in the file, column the field name
    // (empty when the whole row is at fault).
    class CatalogError : public std::runtime_error
    {
    public:
        CatalogError(const std::string &what, std::size_t row, std::string column);
        std::size_t row() const { return row_; }
        const std::string &column() const { return column_; }

    private:
        std::size_t row_;
        std::string column_;
    };

    // CSV with mandatory header "q,S,f_c0,delta,alpha_air,alpha_0,gamma". Lines starting with '#' are
    // comments; "# cal.<field>=<float>" sets a calibration factor. Invariant violations after calibration
    // throw std::invalid_argument naming the row.
    Catalog parse_catalog(std::istream &in);
    Catalog load_catalog(const std::string &path);

    // Single water-vapour line with the shipped calibration (same content as data/h2o_line.csv)
    Catalog builtin_catalog();
}

#endif
