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

#include "thznoma/pairing.hpp"

#include <algorithm>
#include <cmath>

namespace thznoma::pairing
{
    std::string_view to_string(SchemeKind kind)
    {
        switch (kind)
        {
        case SchemeKind::random:
            return "random";
        case SchemeKind::nearest_farthest:
            return "nearest_farthest";
        case SchemeKind::proposed:
            return "proposed";
        case SchemeKind::enhanced:
            return "enhanced";
        }
        return "unknown";
    }

    std::optional<SchemeKind> parse_scheme(std::string_view name)
    {
        for (auto k : {SchemeKind::random, SchemeKind::nearest_farthest, SchemeKind::proposed, SchemeKind::enhanced})
            if (name == to_string(k))
                return k;
        return std::nullopt;
    }

    void PairingScheme::validate() const
    {
        if (!(R > 0.0) || !std::isfinite(R))
            throw std::invalid_argument("PairingScheme: disc radius must be positive.");
        if (users < 2)
            throw std::invalid_argument("PairingScheme: need at least two users.");
    }

    namespace
    {
        void check_threshold_args(double a1, double k)
        {
            if (!(a1 > 0.0 && a1 < 0.5))
                throw std::domain_error("Threshold: a1 must lie in (0, 0.5).");
            if (!(k > 0.0))
                throw std::domain_error("Threshold: absorption coefficient must be positive.");
        }
    }

    double threshold_near(double a1, double k)
    {
        check_threshold_args(a1, k);
        return std::log((1.0 - a1) / (1.0 - 2.0 * a1)) / k;
    }

    double threshold_far(double a1, double k)
    {
        check_threshold_args(a1, k);
        return std::log1p(a1 * a1 / (1.0 - 2.0 * a1)) / k;
    }

    Thresholds thresholds(double a1, double k)
    {
        return {threshold_near(a1, k), threshold_far(a1, k)};
    }

    Thresholds multicarrier_thresholds(double a1, std::span<const double> k)
    {
        if (k.empty())
            throw std::domain_error("multicarrier_thresholds: needs at least one carrier.");
        Thresholds t = thresholds(a1, k[0]);
        for (std::size_t i = 1; i < k.size(); ++i)
        {
            t.near = std::min(t.near, threshold_near(a1, k[i]));
            t.far = std::max(t.far, threshold_far(a1, k[i]));
        }
        return t;
    }

    DistanceLaw::DistanceLaw(Family family, double lo, double hi, double R, int n)
        : family_(family), lo_(lo), hi_(hi), R_(R), n_(n)
    {
    }

    DistanceLaw DistanceLaw::min_of_n(double R, int n, double hi)
    {
        if (!(R > 0.0) || n < 1 || !(hi > 0.0))
            throw std::invalid_argument("DistanceLaw::min_of_n: invalid parameters.");
        DistanceLaw law(Family::min_of_n, 0.0, std::min(hi, R), R, n);
        law.norm_ = law.min_cdf_raw(law.hi_);
        return law;
    }

    DistanceLaw DistanceLaw::max_of_n(double R, int n)
    {
        if (!(R > 0.0) || n < 1)
            throw std::invalid_argument("DistanceLaw::max_of_n: invalid parameters.");
        return DistanceLaw(Family::max_of_n, 0.0, R, R, n);
    }

    DistanceLaw DistanceLaw::truncated_disc(double lo, double hi)
    {
        if (!(lo >= 0.0) || !(hi > lo))
            throw std::invalid_argument("DistanceLaw::truncated_disc: requires 0 <= lo < hi.");
        return DistanceLaw(Family::truncated_disc, lo, hi, hi, 1);
    }

    double DistanceLaw::min_cdf_raw(double d) const
    {
        if (d <= 0.0)
            return 0.0;
        if (d >= R_)
            return 1.0;
        double x = d * d / (R_ * R_);
        return -std::expm1(n_ * std::log1p(-x));
    }

    double DistanceLaw::cdf_unclamped(double d) const
    {
        switch (family_)
        {
        case Family::min_of_n:
            return min_cdf_raw(d) / norm_;
        case Family::max_of_n:
            return std::pow(d * d / (R_ * R_), n_);
        case Family::truncated_disc:
            return (d * d - lo_ * lo_) / (hi_ * hi_ - lo_ * lo_);
        }
        return 0.0;
    }

    double DistanceLaw::cdf(double d) const
    {
        if (d <= lo_)
            return 0.0;
        if (d >= hi_)
            return 1.0;
        return std::clamp(cdf_unclamped(d), 0.0, 1.0);
    }

    double DistanceLaw::pdf(double d) const
    {
        if (d < lo_ || d > hi_)
            return 0.0;
        double R2 = R_ * R_;
        switch (family_)
        {
        case Family::min_of_n:
            return n_ * std::pow(1.0 - d * d / R2, n_ - 1) * 2.0 * d / R2 / norm_;
        case Family::max_of_n:
            return n_ * std::pow(d * d / R2, n_ - 1) * 2.0 * d / R2;
        case Family::truncated_disc:
            return 2.0 * d / (hi_ * hi_ - lo_ * lo_);
        }
        return 0.0;
    }

    double DistanceLaw::quantile(double u) const
    {
        if (!(u >= 0.0 && u <= 1.0))
            throw std::domain_error("DistanceLaw::quantile: probability must lie in [0, 1].");
        double d = 0.0;
        switch (family_)
        {
        case Family::min_of_n:
        {
            double v = u * norm_;
            double x = v >= 1.0 ? 1.0 : -std::expm1(std::log1p(-v) / n_);
            d = R_ * std::sqrt(x);
            break;
        }
        case Family::max_of_n:
            d = R_ * std::pow(u, 0.5 / n_);
            break;
        case Family::truncated_disc:
            d = std::sqrt(lo_ * lo_ + u * (hi_ * hi_ - lo_ * lo_));
            break;
        }
        return std::clamp(d, lo_, hi_);
    }

    namespace
    {
        const Thresholds &require(const std::optional<Thresholds> &t, double R)
        {
            if (!t)
                throw std::invalid_argument("distance_laws: this scheme needs thresholds.");
            if (!(t->near > 0.0) || !(t->far > 0.0))
                throw std::domain_error("distance_laws: thresholds must be positive.");
            if (t->far >= R)
                throw std::domain_error("distance_laws: R_th2 >= R leaves no room for the far user.");
            return *t;
        }
    }

    LawPair distance_laws(const PairingScheme &scheme, const std::optional<Thresholds> &thresholds)
    {
        scheme.validate();
        const double R = scheme.R;
        switch (scheme.kind)
        {
        case SchemeKind::random:
            return {DistanceLaw::min_of_n(R, 2), DistanceLaw::max_of_n(R, 2), {}};
        case SchemeKind::nearest_farthest:
            return {DistanceLaw::min_of_n(R, scheme.users), DistanceLaw::max_of_n(R, scheme.users), {}};
        case SchemeKind::proposed:
        {
            const auto &t = require(thresholds, R);
            std::vector<std::string> warnings;
            if (t.near > R)
                warnings.push_back("R_th1 = " + std::to_string(t.near) + " m exceeds R; near support clipped to [0, R].");
            return {DistanceLaw::truncated_disc(0.0, std::min(t.near, R)), DistanceLaw::truncated_disc(t.far, R),
                    std::move(warnings)};
        }
        case SchemeKind::enhanced:
        {
            const auto &t = require(thresholds, R);
            double hi = scheme.truncate_enhanced_near ? std::min(t.near, R) : R;
            return {DistanceLaw::min_of_n(R, scheme.users, hi), DistanceLaw::truncated_disc(t.far, R), {}};
        }
        }
        throw std::invalid_argument("distance_laws: unknown scheme.");
    }

    namespace
    {
        // Squared normalized radius of the nearest (or farthest) of n uniform users
        double extreme_u(CounterRng &rng, int n, bool nearest)
        {
            double best = rng.uniform();
            for (int i = 1; i < n; ++i)
            {
                double u = rng.uniform();
                best = nearest ? std::min(best, u) : std::max(best, u);
            }
            return best;
        }

        double draw_in(CounterRng &rng, double R, double lo, double hi, long max_attempts)
        {
            for (long i = 0; i < max_attempts; ++i)
            {
                double r = R * std::sqrt(rng.uniform());
                if (r >= lo && r <= hi)
                    return r;
            }
            throw SamplingExhausted("sample_pair: no user found in [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "] m after " + std::to_string(max_attempts) + " draws.");
        }
    }

    Pair sample_pair(const PairingScheme &scheme, const std::optional<Thresholds> &thresholds, CounterRng &rng,
                     long max_attempts)
    {
        const double R = scheme.R;
        switch (scheme.kind)
        {
        case SchemeKind::random:
        {
            double r1 = R * std::sqrt(rng.uniform()), r2 = R * std::sqrt(rng.uniform());
            return {std::min(r1, r2), std::max(r1, r2)};
        }
        case SchemeKind::nearest_farthest:
        {
            double lo = rng.uniform(), hi = lo;
            for (int i = 1; i < scheme.users; ++i)
            {
                double u = rng.uniform();
                lo = std::min(lo, u);
                hi = std::max(hi, u);
            }
            return {R * std::sqrt(lo), R * std::sqrt(hi)};
        }
        case SchemeKind::proposed:
        {
            const auto &t = require(thresholds, R);
            double d1 = draw_in(rng, R, 0.0, std::min(t.near, R), max_attempts);
            double d2 = draw_in(rng, R, t.far, R, max_attempts);
            return {d1, d2};
        }
        case SchemeKind::enhanced:
        {
            const auto &t = require(thresholds, R);
            double cap = scheme.truncate_enhanced_near ? std::min(t.near, R) : R;
            for (long i = 0; i < max_attempts; ++i)
            {
                double d1 = R * std::sqrt(extreme_u(rng, scheme.users, true));
                if (d1 > cap)
                    continue;
                double d2 = draw_in(rng, R, t.far, R, max_attempts);
                if (d1 < d2)
                    return {d1, d2};
            }
            throw SamplingExhausted("sample_pair: enhanced scheme found no valid pair after " +
                                    std::to_string(max_attempts) + " attempts.");
        }
        }
        throw std::invalid_argument("sample_pair: unknown scheme.");
    }
}
