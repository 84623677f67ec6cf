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

#include "thznoma/outage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace thznoma::outage
{
    void OutageQuery::validate() const
    {
        if (!(tau > 0.0) || !std::isfinite(tau))
            throw std::invalid_argument("OutageQuery: target spectral efficiency must be positive.");
    }

    double OutageQuery::sinr_threshold() const
    {
        return mode == Mode::noma ? std::exp2(tau) - 1.0 : std::exp2(2.0 * tau) - 1.0;
    }

    double OutageQuery::rate_factor() const
    {
        return mode == Mode::noma ? 1.0 : 0.5;
    }

    std::string_view to_string(Method method)
    {
        switch (method)
        {
        case Method::exact_integral:
            return "exact";
        case Method::simplified:
            return "simplified";
        case Method::lemma3:
            return "lemma3";
        case Method::mgf:
            return "mgf";
        case Method::montecarlo:
            return "montecarlo";
        }
        return "unknown";
    }

    OutageEstimate OutageEstimate::make(double raw, Method method, bool converged)
    {
        OutageEstimate e;
        e.raw = raw;
        e.probability = std::isnan(raw) ? raw : std::clamp(raw, 0.0, 1.0);
        e.method = method;
        e.converged = converged;
        return e;
    }

    double threshold_distance(const kernels::SinrCoefficients &coef, double y)
    {
        double A = coef.signal - y * coef.interference + y * coef.absorption_noise;
        double B = y * coef.absorption_noise;
        if (!(A > 0.0))
            return -std::numeric_limits<double>::infinity();
        if (!(B > 0.0))
            return std::numeric_limits<double>::infinity();
        if (coef.absorption == 0.0)
            return A > B ? std::numeric_limits<double>::infinity() : 0.0;
        return std::log(A / B) / coef.absorption;
    }

    namespace
    {
        // factor * ln W at N0 = 0 for one carrier
        double log_w(const kernels::SinrCoefficients &c, double d)
        {
            double e = std::exp(-c.absorption * d);
            double ome = -std::expm1(-c.absorption * d);
            double den = c.interference * e + c.absorption_noise * ome;
            if (den <= 0.0)
                return std::numeric_limits<double>::infinity();
            return std::log1p(c.signal * e / den);
        }

        double simplified_raw(const kernels::SinrCoefficients &coef, double y, const pairing::DistanceLaw &law)
        {
            double dth = threshold_distance(coef, y);
            if (std::isinf(dth))
                return dth > 0.0 ? 0.0 : 1.0;
            if (dth <= 0.0)
                return 1.0;
            return 1.0 - law.cdf_unclamped(dth);
        }
    }

    OutageEstimate outage_simplified_single(const OutageQuery &query, const channel::PowerSplit &split, double k,
                                            const pairing::DistanceLaw &law)
    {
        query.validate();
        channel::LinkBudget unit;
        unit.k = k;
        unit.validate();
        auto coef = channel::sinr_coefficients(unit, split, query.user, query.mode);
        return OutageEstimate::make(simplified_raw(coef, query.sinr_threshold(), law), Method::simplified);
    }

    OutageEstimate outage_exact_single(const OutageQuery &query, const channel::LinkBudget &budget,
                                       const channel::PowerSplit &split, const channel::FadingModel &fading,
                                       const pairing::DistanceLaw &law, const numerics::QuadratureSpec &spec)
    {
        query.validate();
        budget.validate();
        fading.validate();
        const auto coef = channel::sinr_coefficients(budget, split, query.user, query.mode);
        const double y = query.sinr_threshold();
        const double g = coef.gain, k = coef.absorption, scale = fading.scale(), m = fading.m;
        const double A = coef.signal - y * coef.interference + y * coef.absorption_noise;
        const double B = y * coef.absorption_noise;

        const auto [lo, hi] = law.support();
        const double dth = threshold_distance(coef, y);
        if (dth <= lo)
            return OutageEstimate::make(1.0, Method::exact_integral);
        const double u_th = dth >= hi ? 1.0 : law.cdf(dth);

        // Outage is certain beyond d_th; below it integrate P(m, arg) over the law's quantile
        auto integrand = [&](double u)
        {
            double d = law.quantile(u);
            double D = std::exp(-k * d) * A - B;
            if (!(D > 0.0))
                return 1.0;
            double arg = y * budget.N0 * d * d / (scale * g * D);
            return numerics::reg_lower_inc_gamma(m, arg);
        };
        numerics::QuadratureResult r;
        if (budget.N0 > 0.0 && u_th > 0.0)
            r = numerics::integrate_finite(integrand, 0.0, u_th, spec);
        return OutageEstimate::make(r.value + (1.0 - u_th), Method::exact_integral, r.converged);
    }

    double deterministic_x(const OutageQuery &query, const channel::PowerSplit &split,
                           const channel::SubcarrierPlan &plan, double d)
    {
        double x = 0.0;
        channel::LinkBudget unit;
        for (const auto &c : plan.carriers)
            x += log_w(channel::sinr_coefficients(unit.at(c.f, c.k), split, query.user, query.mode), d);
        return query.rate_factor() * x;
    }

    OutageEstimate multicarrier_outage_lemma3(const OutageQuery &query, const channel::PowerSplit &split,
                                              const channel::SubcarrierPlan &plan, const pairing::DistanceLaw &law)
    {
        query.validate();
        plan.validate();
        const double t = query.tau * std::numbers::ln2;
        auto f = [&](double d) { return deterministic_x(query, split, plan, d) - t; };
        const auto [lo, hi] = law.support();
        if (f(lo) < 0.0)
            return OutageEstimate::make(1.0, Method::lemma3);
        if (f(hi) >= 0.0)
            return OutageEstimate::make(0.0, Method::lemma3);
        double d_star = numerics::find_root_monotone(f, lo, hi, 1e-12 * std::max(1.0, hi));
        return OutageEstimate::make(1.0 - law.cdf(d_star), Method::lemma3);
    }

    numerics::Complex conditional_mgf(User user, Mode mode, const channel::Subcarrier &carrier, double d,
                                      numerics::Complex s, const channel::LinkBudget &budget,
                                      const channel::PowerSplit &split, const channel::FadingModel &fading,
                                      const numerics::QuadratureSpec &spec, bool *converged)
    {
        if (converged)
            *converged = true;
        if (!(d > 0.0))
            throw std::domain_error("conditional_mgf: distance must be positive.");
        fading.validate();
        const channel::LinkBudget b = budget.at(carrier.f, carrier.k);
        b.validate();
        const double factor = mode == Mode::noma ? 1.0 : 0.5;
        const auto c = channel::sinr_coefficients(b, split, user, mode);
        const double e = std::exp(-c.absorption * d), ome = -std::expm1(-c.absorption * d);
        const double alpha = c.signal * c.gain * e / (d * d);
        const double beta = (c.interference * e + c.absorption_noise * ome) * c.gain / (d * d);

        if (s == numerics::Complex(0.0))
            return 1.0;
        if (b.N0 == 0.0)
            return std::exp(-s * factor * std::log1p(alpha / beta));

        auto y_of = [&](double u)
        {
            if (u >= 1.0) // nodes packed against the upper end round to 1: take the chi -> inf limit
                return factor * std::log1p(alpha / beta);
            double chi = fading.scale() * numerics::gamma_quantile(fading.m, u);
            return factor * std::log1p(alpha * chi / (b.N0 + beta * chi));
        };
        auto re = numerics::integrate_finite([&](double u) { return std::exp(-s * y_of(u)).real(); }, 0.0, 1.0, spec);
        auto im = numerics::integrate_finite([&](double u) { return std::exp(-s * y_of(u)).imag(); }, 0.0, 1.0, spec);
        if (converged)
            *converged = re.converged && im.converged;
        return {re.value, im.value};
    }
}
