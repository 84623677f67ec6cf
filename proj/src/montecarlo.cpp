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

#include "thznoma/montecarlo.hpp"

#include "thznoma/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <stdexcept>
#include <thread>

namespace thznoma::montecarlo
{
    namespace
    {
        constexpr std::size_t chunk_trials = 4096;
        constexpr std::size_t batch = 512;
        constexpr double z99 = 2.5758293035489004;

        std::size_t chunk_count(std::size_t trials)
        {
            return (trials + chunk_trials - 1) / chunk_trials;
        }

        unsigned resolve_threads(unsigned threads)
        {
            if (threads == 0)
                threads = std::max(1u, std::thread::hardware_concurrency());
            return threads;
        }
    }

    void TrialConfig::validate() const
    {
        if (trials < 1)
            throw std::invalid_argument("TrialConfig: need at least one trial.");
        scheme.validate();
        budget.validate();
        fading.validate();
        if (plan)
            plan->validate();
        if (!(tau1 > 0.0) || !(tau2 > 0.0))
            throw std::invalid_argument("TrialConfig: targets must be positive.");
        if (!plan && scheme.needs_thresholds() && !thresholds && !(budget.k > 0.0))
            throw std::invalid_argument("TrialConfig: thresholds need a positive absorption coefficient.");
    }

    pairing::Thresholds TrialConfig::resolved_thresholds() const
    {
        if (thresholds)
            return *thresholds;
        if (plan)
        {
            auto k = plan->absorption();
            return pairing::multicarrier_thresholds(split.a1(), k);
        }
        return pairing::thresholds(split.a1(), budget.k);
    }

    McEstimate McEstimate::from_counts(std::size_t successes, std::size_t trials)
    {
        McEstimate e;
        e.trials = trials;
        e.successes = successes;
        if (trials == 0)
            return e;
        double n = double(trials);
        e.mean = double(successes) / n;
        e.stderr_value = std::sqrt(e.mean * (1.0 - e.mean) / n);
        e.ci_low = std::max(0.0, e.mean - z99 * e.stderr_value);
        e.ci_high = std::min(1.0, e.mean + z99 * e.stderr_value);
        return e;
    }

    void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &job)
    {
        threads = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1));
        std::vector<std::exception_ptr> errors(count);
        std::atomic<std::size_t> next{0};
        auto worker = [&]
        {
            for (std::size_t i = next++; i < count; i = next++)
            {
                try
                {
                    job(i);
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            }
        };
        if (threads <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t)
                pool.emplace_back(worker);
            for (auto &th : pool)
                th.join();
        }
        for (auto &e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    namespace
    {
        struct ChunkTally
        {
            std::size_t outage[2][2] = {{0, 0}, {0, 0}};
            std::size_t benefit[2] = {0, 0};
            double gap[2] = {0.0, 0.0};
        };

        // Per-user, per-mode SINR coefficients for every carrier
        struct Coefficients
        {
            std::vector<kernels::SinrCoefficients> c[2][2];
        };

        Coefficients coefficients(const TrialConfig &cfg)
        {
            Coefficients out;
            std::vector<channel::LinkBudget> budgets;
            if (cfg.plan)
                for (const auto &s : cfg.plan->carriers)
                    budgets.push_back(cfg.budget.at(s.f, s.k));
            else
                budgets.push_back(cfg.budget);
            for (int u = 0; u < 2; ++u)
                for (int m = 0; m < 2; ++m)
                    for (const auto &b : budgets)
                        out.c[u][m].push_back(channel::sinr_coefficients(b, cfg.split, User(u), Mode(m)));
            return out;
        }

        // Only the threshold-based schemes need (or can always form) R_th1 and R_th2
        std::optional<pairing::Thresholds> pairing_thresholds(const TrialConfig &cfg)
        {
            if (!cfg.scheme.needs_thresholds())
                return std::nullopt;
            return cfg.resolved_thresholds();
        }

        ChunkTally run_chunk(const TrialConfig &cfg, const Coefficients &coef,
                             const std::optional<pairing::Thresholds> &thresholds, std::size_t first, std::size_t last)
        {
            const std::size_t carriers = coef.c[0][0].size();
            const double scale = cfg.fading.scale(), m = cfg.fading.m;
            const double tau[2] = {cfg.tau1, cfg.tau2};
            const auto &kern = kernels::active();

            std::vector<double> dist[2], chi[2], sinr(batch);
            std::vector<double> rate[2][2]; // sum over carriers of log2(1 + sinr) per trial
            for (int u = 0; u < 2; ++u)
            {
                dist[u].resize(batch);
                chi[u].resize(batch * carriers);
                for (int md = 0; md < 2; ++md)
                    rate[u][md].resize(batch);
            }

            ChunkTally tally;
            for (std::size_t b0 = first; b0 < last; b0 += batch)
            {
                const std::size_t nb = std::min(batch, last - b0);
                for (std::size_t i = 0; i < nb; ++i)
                {
                    CounterRng rng(cfg.seed, b0 + i);
                    auto pair = pairing::sample_pair(cfg.scheme, thresholds, rng);
                    dist[0][i] = pair.d1;
                    dist[1][i] = pair.d2;
                    std::gamma_distribution<double> gamma(m, scale);
                    for (int u = 0; u < 2; ++u)
                        for (std::size_t n = 0; n < carriers; ++n)
                            chi[u][n * batch + i] = gamma(rng);
                }
                for (int u = 0; u < 2; ++u)
                    for (int md = 0; md < 2; ++md)
                    {
                        std::fill_n(rate[u][md].begin(), nb, 0.0);
                        for (std::size_t n = 0; n < carriers; ++n)
                        {
                            kern.sinr(coef.c[u][md][n], dist[u].data(), chi[u].data() + n * batch, sinr.data(), nb);
                            for (std::size_t i = 0; i < nb; ++i)
                                rate[u][md][i] += std::log2(1.0 + sinr[i]);
                        }
                    }
                for (int u = 0; u < 2; ++u)
                    for (std::size_t i = 0; i < nb; ++i)
                    {
                        double noma = rate[u][0][i], oma = 0.5 * rate[u][1][i];
                        tally.outage[u][0] += noma < tau[u];
                        tally.outage[u][1] += oma < tau[u];
                        tally.benefit[u] += noma > oma;
                        tally.gap[u] += noma - oma;
                    }
            }
            return tally;
        }
    }

    TrialSummary run_trials(const TrialConfig &config)
    {
        config.validate();
        const auto thr = pairing_thresholds(config);
        const auto coef = coefficients(config);
        const std::size_t chunks = chunk_count(config.trials);
        std::vector<ChunkTally> tallies(chunks);
        parallel_for(chunks, config.threads,
                     [&](std::size_t c)
                     {
                         std::size_t first = c * chunk_trials, last = std::min(config.trials, first + chunk_trials);
                         tallies[c] = run_chunk(config, coef, thr, first, last);
                     });

        ChunkTally total;
        for (const auto &t : tallies)
            for (int u = 0; u < 2; ++u)
            {
                for (int md = 0; md < 2; ++md)
                    total.outage[u][md] += t.outage[u][md];
                total.benefit[u] += t.benefit[u];
                total.gap[u] += t.gap[u];
            }

        TrialSummary s;
        for (int u = 0; u < 2; ++u)
            for (int md = 0; md < 2; ++md)
                s.outage[u][md] = McEstimate::from_counts(total.outage[u][md], config.trials);
        s.benefit.near = McEstimate::from_counts(total.benefit[0], config.trials);
        s.benefit.far = McEstimate::from_counts(total.benefit[1], config.trials);
        s.benefit.near_mean_gap = total.gap[0] / double(config.trials);
        s.benefit.far_mean_gap = total.gap[1] / double(config.trials);
        return s;
    }

    McEstimate estimate_outage_mc(const TrialConfig &config, User user, Mode mode)
    {
        return run_trials(config).get(user, mode);
    }

    BenefitEstimate estimate_pairing_benefit(const TrialConfig &config)
    {
        return run_trials(config).benefit;
    }

    DistanceSamples sample_distances(const TrialConfig &config)
    {
        config.validate();
        const auto thr = pairing_thresholds(config);
        DistanceSamples out;
        out.near.resize(config.trials);
        out.far.resize(config.trials);
        parallel_for(chunk_count(config.trials), config.threads,
                     [&](std::size_t c)
                     {
                         std::size_t first = c * chunk_trials, last = std::min(config.trials, first + chunk_trials);
                         for (std::size_t i = first; i < last; ++i)
                         {
                             CounterRng rng(config.seed, i);
                             auto p = pairing::sample_pair(config.scheme, thr, rng);
                             out.near[i] = p.d1;
                             out.far[i] = p.d2;
                         }
                     });
        return out;
    }

    std::vector<double> empirical_distance_cdf(const TrialConfig &config, User user, std::span<const double> grid)
    {
        auto samples = sample_distances(config);
        auto &v = user == User::near ? samples.near : samples.far;
        std::sort(v.begin(), v.end());
        std::vector<double> out;
        for (double g : grid)
            out.push_back(double(std::upper_bound(v.begin(), v.end(), g) - v.begin()) / double(v.size()));
        return out;
    }

    double ks_statistic(std::vector<double> samples, const pairing::DistanceLaw &law)
    {
        if (samples.empty())
            throw std::invalid_argument("ks_statistic: no samples.");
        std::sort(samples.begin(), samples.end());
        const double n = double(samples.size());
        double d = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            double F = law.cdf(samples[i]);
            d = std::max({d, F - double(i) / n, double(i + 1) / n - F});
        }
        return d;
    }
}
