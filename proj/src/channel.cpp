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

#include "thznoma/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace thznoma::channel
{
    std::string_view to_string(User user)
    {
        return user == User::near ? "near" : "far";
    }

    std::string_view to_string(Mode mode)
    {
        return mode == Mode::noma ? "noma" : "oma";
    }

    double db_to_linear(double db)
    {
        return std::pow(10.0, db / 10.0);
    }

    LinkBudget LinkBudget::from_db(double P, double G_t_db, double G_r_db, double N0, double f, double k)
    {
        LinkBudget b{P, db_to_linear(G_t_db), db_to_linear(G_r_db), N0, f, k};
        b.validate();
        return b;
    }

    void LinkBudget::validate() const
    {
        if (!(P > 0.0) || !(G_t > 0.0) || !(G_r > 0.0))
            throw std::invalid_argument("LinkBudget: power and antenna gains must be positive.");
        if (!(N0 >= 0.0))
            throw std::invalid_argument("LinkBudget: thermal noise must be non-negative.");
        if (!(f > 0.0))
            throw std::invalid_argument("LinkBudget: carrier frequency must be positive.");
        if (!(k >= 0.0))
            throw std::invalid_argument("LinkBudget: absorption coefficient must be non-negative.");
    }

    double LinkBudget::zeta() const
    {
        double r = speed_of_light / (4.0 * std::numbers::pi * f);
        return r * r;
    }

    LinkBudget LinkBudget::at(double f_n, double k_n) const
    {
        LinkBudget b = *this;
        b.f = f_n;
        b.k = k_n;
        return b;
    }

    PowerSplit::PowerSplit(double a1) : a1_(a1)
    {
        if (!(a1 > 0.0 && a1 < 0.5))
            throw std::invalid_argument("PowerSplit: a1 must lie in (0, 0.5); thresholds diverge at 0.5.");
    }

    void FadingModel::validate() const
    {
        if (!(m >= 0.5) || !std::isfinite(m))
            throw std::invalid_argument("FadingModel: Nakagami m must be at least 0.5.");
        if (!(theta > 0.0) || !std::isfinite(theta))
            throw std::invalid_argument("FadingModel: fading power must be positive.");
    }

    double FadingModel::scale() const
    {
        return parameterization == FadingParameterization::shape_scale ? theta : theta / m;
    }

    void SubcarrierPlan::validate() const
    {
        if (carriers.empty())
            throw std::invalid_argument("SubcarrierPlan: needs at least one carrier.");
        for (std::size_t i = 0; i < carriers.size(); ++i)
        {
            if (!(carriers[i].k > 0.0) || !(carriers[i].f > 0.0))
                throw std::invalid_argument("SubcarrierPlan: frequencies and absorption must be positive.");
            if (i > 0 && !(carriers[i].f > carriers[i - 1].f))
                throw std::invalid_argument("SubcarrierPlan: frequencies must be strictly increasing.");
        }
    }

    std::vector<double> SubcarrierPlan::absorption() const
    {
        std::vector<double> k;
        for (const auto &c : carriers)
            k.push_back(c.k);
        return k;
    }

    SubcarrierPlan SubcarrierPlan::reference(std::size_t n)
    {
        static const Subcarrier table[] = {{0.85e12, 0.0357}, {0.90e12, 0.0400}, {0.95e12, 0.0446},
                                           {1.00e12, 0.0494}, {1.05e12, 0.0545}, {1.10e12, 0.0598}};
        if (n < 1 || n > 6)
            throw std::invalid_argument("SubcarrierPlan::reference: n must be in 1..6.");
        return SubcarrierPlan{std::vector<Subcarrier>(table, table + n)};
    }

    double path_gain(const LinkBudget &budget, double d)
    {
        if (!(d > 0.0))
            throw std::domain_error("path_gain: distance must be positive.");
        return budget.zeta() / (d * d) * std::exp(-budget.k * d);
    }

    namespace
    {
        void check(double chi, double d)
        {
            if (!(d > 0.0))
                throw std::domain_error("SINR: distance must be positive.");
            if (!(chi >= 0.0))
                throw std::domain_error("SINR: fading power must be non-negative.");
        }

        double evaluate(const kernels::SinrCoefficients &c, double chi, double d)
        {
            double e = std::exp(-c.absorption * d);
            double a = c.gain * chi / (d * d);
            double num = c.signal * a * e;
            double den = c.interference * a * e + c.noise + c.absorption_noise * a * (1.0 - e);
            return num > 0.0 ? num / den : 0.0;
        }
    }

    kernels::SinrCoefficients sinr_coefficients(const LinkBudget &budget, const PowerSplit &split, User user,
                                                Mode mode)
    {
        kernels::SinrCoefficients c;
        c.gain = budget.gain();
        c.absorption = budget.k;
        c.noise = budget.N0;
        if (mode == Mode::oma)
            return c;
        if (user == User::near)
        {
            // absorption noise at the near user scales with its own power share
            c.signal = split.a1();
            c.absorption_noise = split.a1();
        }
        else
        {
            c.signal = split.a2();
            c.interference = split.a1();
        }
        return c;
    }

    double sinr_noma_near(const LinkBudget &budget, const PowerSplit &split, double chi, double d)
    {
        check(chi, d);
        return evaluate(sinr_coefficients(budget, split, User::near, Mode::noma), chi, d);
    }

    double sinr_noma_far(const LinkBudget &budget, const PowerSplit &split, double chi, double d)
    {
        check(chi, d);
        return evaluate(sinr_coefficients(budget, split, User::far, Mode::noma), chi, d);
    }

    double sinr_oma(const LinkBudget &budget, double chi, double d)
    {
        check(chi, d);
        return evaluate(sinr_coefficients(budget, PowerSplit(0.25), User::near, Mode::oma), chi, d);
    }

    double sinr(const LinkBudget &budget, const PowerSplit &split, User user, Mode mode, double chi, double d)
    {
        check(chi, d);
        return evaluate(sinr_coefficients(budget, split, user, mode), chi, d);
    }

    double spectral_efficiency(double sinr, Mode mode)
    {
        if (!(sinr >= 0.0))
            throw std::domain_error("spectral_efficiency: SINR must be non-negative.");
        double c = std::log2(1.0 + sinr);
        return mode == Mode::noma ? c : 0.5 * c;
    }

    double multicarrier_spectral_efficiency(const SubcarrierPlan &plan, User user, double d,
                                            std::span<const double> fadings, const LinkBudget &budget,
                                            const PowerSplit &split, Mode mode)
    {
        if (fadings.size() != plan.size())
            throw std::domain_error("multicarrier_spectral_efficiency: need one fading value per carrier.");
        double total = 0.0;
        for (std::size_t n = 0; n < plan.size(); ++n)
        {
            LinkBudget b = budget.at(plan.carriers[n].f, plan.carriers[n].k);
            total += spectral_efficiency(sinr(b, split, user, mode, fadings[n], d), mode);
        }
        return total;
    }
}
