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

#include <catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace thznoma;
using namespace thznoma::montecarlo;
using pairing::SchemeKind;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    TrialConfig base(SchemeKind kind, double k = 0.05, double N0 = 0.0)
    {
        TrialConfig c;
        c.trials = 100000;
        c.seed = 42;
        c.scheme.kind = kind;
        c.budget = channel::LinkBudget::from_db(1.0, 20.0, 20.0, N0, 1e12, k);
        return c;
    }

    bool same(const McEstimate &a, const McEstimate &b)
    {
        return a.successes == b.successes && a.trials == b.trials && a.mean == b.mean && a.stderr_value == b.stderr_value;
    }
}

TEST_CASE("Bernoulli estimate from counts")
{
    auto e = McEstimate::from_counts(250, 1000);
    CHECK(e.mean == 0.25);
    CHECK_THAT(e.stderr_value, WithinRel(std::sqrt(0.25 * 0.75 / 1000.0), 1e-15));
    CHECK_THAT(e.ci_high - e.mean, WithinRel(2.5758293035489004 * e.stderr_value, 1e-12));
    CHECK(e.ci_low < e.mean);
    auto zero = McEstimate::from_counts(0, 10);
    CHECK(zero.stderr_value == 0.0);
    CHECK(zero.ci_low == 0.0);
}

TEST_CASE("config validation")
{
    TrialConfig c = base(SchemeKind::random);
    CHECK_NOTHROW(c.validate());
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = base(SchemeKind::proposed, 0.0);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = base(SchemeKind::proposed);
    c.tau1 = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = base(SchemeKind::proposed);
    c.plan = channel::SubcarrierPlan::reference(6);
    auto t = c.resolved_thresholds();
    CHECK_THAT(t.near, WithinAbs(11.344, 1e-3));
}

TEST_CASE("tiny target gives no outage")
{
    for (auto kind : {SchemeKind::random, SchemeKind::proposed})
    {
        TrialConfig c = base(kind, 0.05, 1e-21);
        c.tau1 = 1e-6;
        c.tau2 = 1e-6;
        auto s = run_trials(c);
        for (User u : {User::near, User::far})
            for (Mode m : {Mode::noma, Mode::oma})
                CHECK(s.get(u, m).mean <= 3.0 * s.get(u, m).stderr_value);
    }
}

TEST_CASE("infeasible far target is always in outage")
{
    TrialConfig c = base(SchemeKind::random);
    c.tau2 = std::log2(1.0 + 0.67 / 0.33) + 0.01;
    auto e = estimate_outage_mc(c, User::far, Mode::noma);
    CHECK(e.mean == 1.0);
    CHECK(e.successes == e.trials);
}

TEST_CASE("proposed near outage against its closed form")
{
    TrialConfig c = base(SchemeKind::proposed);
    c.trials = 1000000;
    auto e = estimate_outage_mc(c, User::near, Mode::noma);
    double dth = std::log(8.0 / 7.0) / 0.05, rth = pairing::threshold_near(0.33, 0.05);
    double expect = 1.0 - (dth / rth) * (dth / rth);
    CHECK_THAT(expect, WithinAbs(0.9613, 1e-4));
    CHECK(std::abs(e.mean - expect) <= 4.0 * e.stderr_value);
}

TEST_CASE("NOMA beats OMA in every trial under threshold-based pairing")
{
    for (auto kind : {SchemeKind::proposed, SchemeKind::enhanced})
        for (double a1 : {0.1, 0.3, 0.45})
        {
            TrialConfig c = base(kind, 0.03);
            c.trials = 20000;
            c.split = channel::PowerSplit(a1);
            auto b = estimate_pairing_benefit(c);
            CHECK(b.near.mean == 1.0);
            CHECK(b.far.mean == 1.0);
            CHECK(b.near.successes == c.trials);
        }
}

TEST_CASE("random pairing far benefit rate follows the far law at the threshold")
{
    TrialConfig c = base(SchemeKind::random, 0.05);
    c.trials = 200000;
    auto b = estimate_pairing_benefit(c);
    auto t = pairing::thresholds(0.33, 0.05);
    auto laws = pairing::distance_laws(c.scheme, std::nullopt);
    double expect = 1.0 - laws.far.cdf(t.far);
    CHECK(b.far.mean < 1.0);
    CHECK(std::abs(b.far.mean - expect) <= 4.0 * b.far.stderr_value);
}

TEST_CASE("spectral efficiency gap shrinks as a1 approaches one half")
{
    TrialConfig lo = base(SchemeKind::proposed, 0.03), hi = lo;
    lo.trials = hi.trials = 50000;
    lo.split = channel::PowerSplit(0.2);
    hi.split = channel::PowerSplit(0.45);
    auto bl = estimate_pairing_benefit(lo), bh = estimate_pairing_benefit(hi);
    CHECK(bh.near.mean == 1.0);
    CHECK(bh.far.mean == 1.0);
    CHECK(bh.far_mean_gap > 0.0);
    CHECK(bh.far_mean_gap < bl.far_mean_gap);
}

TEST_CASE("estimates do not depend on the thread count")
{
    TrialConfig c = base(SchemeKind::enhanced, 0.05, 1e-12);
    c.trials = 30011; // not a multiple of the chunk size
    c.threads = 1;
    auto one = run_trials(c);
    c.threads = 3;
    auto three = run_trials(c);
    c.threads = 8;
    auto eight = run_trials(c);
    for (User u : {User::near, User::far})
        for (Mode m : {Mode::noma, Mode::oma})
        {
            CHECK(same(one.get(u, m), three.get(u, m)));
            CHECK(same(one.get(u, m), eight.get(u, m)));
        }
    CHECK(one.benefit.near_mean_gap == eight.benefit.near_mean_gap);
    CHECK(one.benefit.far_mean_gap == three.benefit.far_mean_gap);

    c.plan = channel::SubcarrierPlan::reference(3);
    c.threads = 1;
    auto mc1 = run_trials(c);
    c.threads = 5;
    auto mc5 = run_trials(c);
    CHECK(same(mc1.get(User::near, Mode::noma), mc5.get(User::near, Mode::noma)));
    CHECK(same(mc1.get(User::far, Mode::oma), mc5.get(User::far, Mode::oma)));

    c.seed = 43;
    auto reseeded = sample_distances(c), base_draws = sample_distances([&] { auto d = c; d.seed = 42; return d; }());
    CHECK(reseeded.near != base_draws.near);
}

TEST_CASE("standard error falls as one over root n")
{
    TrialConfig c = base(SchemeKind::random, 0.05, 1e-21);
    c.trials = 50000;
    auto small = estimate_outage_mc(c, User::far, Mode::noma);
    c.trials = 200000;
    auto large = estimate_outage_mc(c, User::far, Mode::noma);
    CHECK_THAT(small.stderr_value / large.stderr_value, WithinRel(2.0, 0.2));
}

TEST_CASE("empirical distance CDF")
{
    TrialConfig c = base(SchemeKind::proposed);
    c.trials = 200000;
    auto t = c.resolved_thresholds();
    double mid = 0.5 * (t.far + 60.0);
    std::vector<double> grid{0.0, mid, 60.0};
    auto far = empirical_distance_cdf(c, User::far, grid);
    CHECK(far[0] == 0.0);
    CHECK(far[2] == 1.0);
    auto law = pairing::distance_laws(c.scheme, t).far;
    CHECK_THAT(far[1], WithinAbs(law.cdf(mid), 1.63 / std::sqrt(double(c.trials))));

    auto near = empirical_distance_cdf(c, User::near, std::vector<double>{0.0, t.near});
    CHECK(near[0] == 0.0);
    CHECK(near[1] == 1.0);
}

TEST_CASE("KS statistic")
{
    auto law = pairing::DistanceLaw::truncated_disc(0.0, 1.0);
    CHECK_THAT(ks_statistic({std::sqrt(0.5)}, law), WithinAbs(0.5, 1e-12));
    CHECK_THROWS_AS(ks_statistic({}, law), std::invalid_argument);

    TrialConfig c = base(SchemeKind::nearest_farthest);
    c.trials = 100000;
    auto s = sample_distances(c);
    auto laws = pairing::distance_laws(c.scheme, std::nullopt);
    CHECK(ks_statistic(s.near, laws.near) < 1.63 / std::sqrt(1e5));
    CHECK(ks_statistic(s.far, laws.far) < 1.63 / std::sqrt(1e5));
    // wrong law is rejected
    CHECK(ks_statistic(s.near, laws.far) > 0.5);
}

TEST_CASE("parallel_for covers every index and rethrows in order")
{
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
    for (auto &h : hits)
        CHECK(h.load() == 1);

    try
    {
        parallel_for(100, 4, [](std::size_t i) {
            if (i == 37 || i == 80)
                throw std::runtime_error("job " + std::to_string(i));
        });
        FAIL("expected an exception");
    }
    catch (const std::runtime_error &e)
    {
        CHECK(std::string(e.what()) == "job 37");
    }
}

TEST_CASE("sampling exhaustion propagates")
{
    TrialConfig c = base(SchemeKind::proposed);
    c.trials = 10;
    c.thresholds = pairing::Thresholds{1e-12, 5.0};
    CHECK_THROWS_AS(run_trials(c), pairing::SamplingExhausted);
}
