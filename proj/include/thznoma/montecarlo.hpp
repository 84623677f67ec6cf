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

#ifndef THZNOMA_MONTECARLO_HPP
#define THZNOMA_MONTECARLO_HPP

#include "thznoma/channel.hpp"
#include "thznoma/pairing.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

// Simulation oracle: operational pairing, Gamma fading, full SINR with thermal noise.
// Trial i draws everything from CounterRng(seed, i), and results are reduced over fixed-size chunks in
// chunk order, so estimates do not depend on the thread count.

namespace thznoma::montecarlo
{
    using channel::Mode;
    using channel::User;

    struct TrialConfig
    {
        std::size_t trials = 100000;
        std::uint64_t seed = 1;
        pairing::PairingScheme scheme;
        std::optional<pairing::Thresholds> thresholds; // derived from a1 and k (or the plan) when empty
        channel::LinkBudget budget;
        channel::PowerSplit split{0.33};
        channel::FadingModel fading;
        std::optional<channel::SubcarrierPlan> plan; // multi-carrier when set
        double tau1 = 3.0;
        double tau2 = 0.5;
        unsigned threads = 0; // 0: hardware concurrency

        // Throws std::invalid_argument on invalid parameters
        void validate() const;
        pairing::Thresholds resolved_thresholds() const;
    };

    struct McEstimate
    {
        double mean = 0.0;
        double stderr_value = 0.0; // sqrt(p (1 - p) / n)
        std::size_t trials = 0;
        std::size_t successes = 0;
        double ci_low = 0.0; // 99% normal interval
        double ci_high = 0.0;

        static McEstimate from_counts(std::size_t successes, std::size_t trials);
    };

    struct BenefitEstimate
    {
        McEstimate near; // fraction of trials with C_noma > C_oma
        McEstimate far;
        double near_mean_gap = 0.0; // mean of C_noma - C_oma
        double far_mean_gap = 0.0;
    };

    // Everything one pass of trials produces
    struct TrialSummary
    {
        McEstimate outage[2][2]; // [user][mode]
        BenefitEstimate benefit;

        const McEstimate &get(User user, Mode mode) const { return outage[int(user)][int(mode)]; }
    };

    TrialSummary run_trials(const TrialConfig &config);

    McEstimate estimate_outage_mc(const TrialConfig &config, User user, Mode mode);
    BenefitEstimate estimate_pairing_benefit(const TrialConfig &config);

    // Sampled (d1, d2) for trials 0..config.trials-1
    struct DistanceSamples
    {
        std::vector<double> near;
        std::vector<double> far;
    };
    DistanceSamples sample_distances(const TrialConfig &config);

    std::vector<double> empirical_distance_cdf(const TrialConfig &config, User user, std::span<const double> grid);

    // sup |F_n - F| of the samples against the law
    double ks_statistic(std::vector<double> samples, const pairing::DistanceLaw &law);

    // Per-chunk worker pool used by the estimators and sweeps. Calls job(i) for i in [0, count) on up to
    // `threads` threads; exceptions are rethrown in index order.
    void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &job);
}

#endif
