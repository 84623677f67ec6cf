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

#ifndef THZNOMA_PAIRING_HPP
#define THZNOMA_PAIRING_HPP

#include "thznoma/rng.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// User pairing: NOMA-over-OMA threshold distances, the distance laws of the near and far user under each
// scheme, and the operational selection procedure used by the Monte Carlo oracle.

namespace thznoma::pairing
{
    enum class SchemeKind
    {
        random,           // two users at random, d1 = min, d2 = max
        nearest_farthest, // nearest and farthest of `users`
        proposed,         // near user inside R_th1, far user beyond R_th2
        enhanced          // nearest of `users` as near user, far user beyond R_th2
    };

    std::string_view to_string(SchemeKind kind);
    std::optional<SchemeKind> parse_scheme(std::string_view name);

    struct PairingScheme
    {
        SchemeKind kind = SchemeKind::random;
        double R = 60.0;  // disc radius [m]
        int users = 300;  // population for nearest_farthest and enhanced
        bool truncate_enhanced_near = false; // condition the enhanced near user on d1 <= R_th1

        // Throws std::invalid_argument unless R > 0 and users >= 2
        void validate() const;
        bool needs_thresholds() const { return kind == SchemeKind::proposed || kind == SchemeKind::enhanced; }
    };

    struct Thresholds
    {
        double near = 0.0; // R_th1 [m]
        double far = 0.0;  // R_th2 [m]
    };

    // (1/k) ln((1 - a1) / (1 - 2 a1)); throws std::domain_error unless 0 < a1 < 0.5 and k > 0
    double threshold_near(double a1, double k);

    // (1/k) ln(a1^2 / (1 - 2 a1) + 1)
    double threshold_far(double a1, double k);

    Thresholds thresholds(double a1, double k);

    // R_th1 = min over carriers of threshold_near, R_th2 = max over carriers of threshold_far
    Thresholds multicarrier_thresholds(double a1, std::span<const double> k);

    // Distribution of a paired user's distance. Three families cover every scheme:
    //   min_of_n:       F = 1 - (1 - d^2/R^2)^n, optionally conditioned on d <= hi
    //   max_of_n:       F = (d^2/R^2)^n
    //   truncated_disc: F = (d^2 - lo^2) / (hi^2 - lo^2)
    class DistanceLaw
    {
    public:
        enum class Family
        {
            min_of_n,
            max_of_n,
            truncated_disc
        };

        static DistanceLaw min_of_n(double R, int n, double hi);
        static DistanceLaw min_of_n(double R, int n) { return min_of_n(R, n, R); }
        static DistanceLaw max_of_n(double R, int n);
        static DistanceLaw truncated_disc(double lo, double hi);

        double pdf(double d) const;
        double cdf(double d) const;           // clamped to [0, 1]
        double cdf_unclamped(double d) const; // closed form evaluated outside the support as well
        double quantile(double u) const;      // u in [0, 1]
        std::pair<double, double> support() const { return {lo_, hi_}; }
        Family family() const { return family_; }

    private:
        DistanceLaw(Family family, double lo, double hi, double R, int n);
        double min_cdf_raw(double d) const;

        Family family_;
        double lo_, hi_, R_;
        int n_;
        double norm_ = 1.0; // F_min(hi) for the conditioned min_of_n
    };

    struct LawPair
    {
        DistanceLaw near;
        DistanceLaw far;
        std::vector<std::string> warnings;
    };

    // Thresholds are required for proposed and enhanced. Throws std::domain_error if R_th2 >= R (empty far
    // region); R_th1 > R clips the near support to [0, R] and adds a warning.
    LawPair distance_laws(const PairingScheme &scheme, const std::optional<Thresholds> &thresholds);

    class SamplingExhausted : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct Pair
    {
        double d1;
        double d2;
    };

    // Operational selection on uniform-disc radii r = R sqrt(u):
    //   random / nearest_farthest: min and max of 2 / `users` radii
    //   proposed: near and far drawn independently by rejection into [0, R_th1] and [R_th2, R]
    //   enhanced: min of `users` radii (rejected above R_th1 only if truncate_enhanced_near), far by rejection
    //             into [R_th2, R], pairs with d1 >= d2 redrawn
    // Throws SamplingExhausted after max_attempts redraws of a single user.
    Pair sample_pair(const PairingScheme &scheme, const std::optional<Thresholds> &thresholds, CounterRng &rng,
                     long max_attempts = 1000000);
}

#endif
