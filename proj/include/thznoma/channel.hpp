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

#ifndef THZNOMA_CHANNEL_HPP
#define THZNOMA_CHANNEL_HPP

#include "thznoma/kernels.hpp"

#include <span>
#include <string_view>
#include <vector>

// Beer-Lambert line-of-sight gain, NOMA/OMA SINR with molecular absorption noise, spectral efficiency.

namespace thznoma::channel
{
    inline constexpr double speed_of_light = 2.9979e8;

    enum class User
    {
        near,
        far
    };

    enum class Mode
    {
        noma,
        oma
    };

    std::string_view to_string(User user);
    std::string_view to_string(Mode mode);

    double db_to_linear(double db);

    struct LinkBudget
    {
        double P = 1.0;    // transmit power [W]
        double G_t = 1.0;  // linear
        double G_r = 1.0;  // linear
        double N0 = 0.0;   // thermal noise [W]
        double f = 1.0e12; // carrier [Hz]
        double k = 0.0;    // absorption coefficient [1/m]

        // Gains given in dB
        static LinkBudget from_db(double P, double G_t_db, double G_r_db, double N0, double f, double k);

        // Throws std::invalid_argument unless P, G_t, G_r, f > 0 and N0, k >= 0
        void validate() const;

        double zeta() const;                               // (c / (4 pi f))^2
        double gain() const { return G_t * G_r * P * zeta(); } // G_t G_r P zeta
        LinkBudget at(double f_n, double k_n) const;       // same budget on another carrier
    };

    class PowerSplit
    {
    public:
        // Throws std::invalid_argument unless 0 < a1 < 0.5
        explicit PowerSplit(double a1);
        double a1() const { return a1_; }
        double a2() const { return 1.0 - a1_; }

    private:
        double a1_;
    };

    enum class FadingParameterization
    {
        shape_scale, // chi ~ Gamma(m, Theta), mean m Theta
        mean_power   // chi ~ Gamma(m, Theta / m), mean Theta
    };

    struct FadingModel
    {
        double m = 2.0;
        double theta = 1.0;
        FadingParameterization parameterization = FadingParameterization::shape_scale;

        // Throws std::invalid_argument unless m >= 0.5 and theta > 0
        void validate() const;
        double scale() const; // Gamma scale under the chosen parameterization
    };

    struct Subcarrier
    {
        double f; // [Hz]
        double k; // [1/m]
    };

    struct SubcarrierPlan
    {
        std::vector<Subcarrier> carriers;

        // Throws std::invalid_argument unless nonempty, k > 0, frequencies strictly increasing
        void validate() const;
        std::size_t size() const { return carriers.size(); }
        std::vector<double> absorption() const;

        // First n carriers of the six-carrier water-vapour plan (0.85..1.1 THz)
        static SubcarrierPlan reference(std::size_t n = 6);
    };

    // zeta d^-2 exp(-k d). Throws std::domain_error for d <= 0.
    double path_gain(const LinkBudget &budget, double d);

    double sinr_noma_near(const LinkBudget &budget, const PowerSplit &split, double chi, double d);
    double sinr_noma_far(const LinkBudget &budget, const PowerSplit &split, double chi, double d);
    double sinr_oma(const LinkBudget &budget, double chi, double d);
    double sinr(const LinkBudget &budget, const PowerSplit &split, User user, Mode mode, double chi, double d);

    // Coefficients for the batched kernel matching sinr(budget, split, user, mode, ., .)
    kernels::SinrCoefficients sinr_coefficients(const LinkBudget &budget, const PowerSplit &split, User user,
                                                Mode mode);

    // log2(1 + sinr) for NOMA, 0.5 log2(1 + sinr) for OMA
    double spectral_efficiency(double sinr, Mode mode);

    // Sum over carriers of the per-carrier spectral efficiency; budget.f and budget.k are replaced by the
    // plan's values. Throws std::domain_error if fadings.size() != plan.size().
    double multicarrier_spectral_efficiency(const SubcarrierPlan &plan, User user, double d,
                                            std::span<const double> fadings, const LinkBudget &budget,
                                            const PowerSplit &split, Mode mode = Mode::noma);
}

#endif
