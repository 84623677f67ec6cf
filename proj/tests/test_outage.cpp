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
#include "thznoma/outage.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace thznoma;
using namespace thznoma::outage;
using channel::FadingModel;
using channel::LinkBudget;
using channel::PowerSplit;
using channel::SubcarrierPlan;
using pairing::SchemeKind;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    constexpr SchemeKind all_schemes[] = {SchemeKind::random, SchemeKind::nearest_farthest, SchemeKind::proposed,
                                          SchemeKind::enhanced};

    LinkBudget budget(double k, double N0)
    {
        return LinkBudget::from_db(1.0, 20.0, 20.0, N0, 1e12, k);
    }

    pairing::LawPair laws(SchemeKind kind, const pairing::Thresholds &t)
    {
        pairing::PairingScheme s;
        s.kind = kind;
        return pairing::distance_laws(s, t);
    }

    const pairing::DistanceLaw &pick(const pairing::LawPair &p, User u)
    {
        return u == User::near ? p.near : p.far;
    }

    montecarlo::McEstimate mc(SchemeKind kind, const LinkBudget &b, double a1, User user, Mode mode, double tau1,
                              double tau2, std::size_t trials, std::uint64_t seed,
                              std::optional<SubcarrierPlan> plan = std::nullopt, FadingModel fading = {})
    {
        montecarlo::TrialConfig cfg;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.scheme.kind = kind;
        cfg.budget = b;
        cfg.split = PowerSplit(a1);
        cfg.fading = fading;
        cfg.plan = std::move(plan);
        cfg.tau1 = tau1;
        cfg.tau2 = tau2;
        return montecarlo::estimate_outage_mc(cfg, user, mode);
    }

    bool inside(const montecarlo::McEstimate &e, double p)
    {
        return p >= e.ci_low && p <= e.ci_high;
    }
}

TEST_CASE("query thresholds")
{
    CHECK((OutageQuery{User::near, Mode::noma, 3.0}).sinr_threshold() == 7.0);
    CHECK((OutageQuery{User::near, Mode::oma, 3.0}).sinr_threshold() == 63.0);
    CHECK((OutageQuery{User::far, Mode::oma, 3.0}).rate_factor() == 0.5);
    CHECK_THROWS_AS((OutageQuery{User::near, Mode::noma, 0.0}).validate(), std::invalid_argument);
    CHECK(to_string(Method::exact_integral) == "exact");
    CHECK(to_string(Method::mgf) == "mgf");
}

TEST_CASE("estimates are clamped with the raw value kept")
{
    auto e = OutageEstimate::make(1.2, Method::simplified);
    CHECK(e.probability == 1.0);
    CHECK(e.raw == 1.2);
    CHECK(OutageEstimate::make(-0.1, Method::lemma3).probability == 0.0);
}

TEST_CASE("threshold distance of the noise-free ceiling")
{
    PowerSplit split(0.33);
    LinkBudget b = budget(0.05, 0.0);
    auto near = channel::sinr_coefficients(b, split, User::near, Mode::noma);
    CHECK_THAT(threshold_distance(near, 7.0), WithinRel(std::log(8.0 / 7.0) / 0.05, 1e-14));
    auto far = channel::sinr_coefficients(b, split, User::far, Mode::noma);
    CHECK_THAT(threshold_distance(far, 1.0), WithinRel(std::log(0.67 * 2.0) / 0.05, 1e-14));
    CHECK(threshold_distance(far, 0.67 / 0.33) <= 0.0);
    CHECK(threshold_distance(far, 5.0) <= 0.0);
}

TEST_CASE("simplified single-carrier examples")
{
    PowerSplit split(0.33);
    auto t = pairing::thresholds(0.33, 0.05);
    auto p = laws(SchemeKind::proposed, t);

    auto e = outage_simplified_single({User::near, Mode::noma, 3.0}, split, 0.05, p.near);
    double dth = std::log(8.0 / 7.0) / 0.05;
    CHECK_THAT(e.probability, WithinAbs(1.0 - (dth / t.near) * (dth / t.near), 1e-12));
    CHECK_THAT(e.probability, WithinAbs(0.9613, 1e-4));

    // y2 >= a2/a1 is infeasible at any distance
    double tau_infeasible = std::log2(1.0 + 0.67 / 0.33) + 0.01;
    for (auto kind : all_schemes)
    {
        auto l = laws(kind, t);
        CHECK(outage_simplified_single({User::far, Mode::noma, tau_infeasible}, split, 0.05, l.far).probability == 1.0);
        for (User u : {User::near, User::far})
            for (Mode m : {Mode::noma, Mode::oma})
                CHECK(outage_simplified_single({u, m, 1e-6}, split, 0.05, pick(l, u)).probability == 0.0);
    }
}

TEST_CASE("simplified OMA uses the single-user ceiling for both users")
{
    PowerSplit split(0.33);
    auto t = pairing::thresholds(0.33, 0.05);
    auto l = laws(SchemeKind::random, t);
    double x = std::exp2(1.0) - 1.0;
    double dth = std::log((1.0 + x) / x) / 0.05;
    CHECK_THAT(outage_simplified_single({User::far, Mode::oma, 0.5}, split, 0.05, l.far).probability,
               WithinAbs(1.0 - l.far.cdf(dth), 1e-14));
    CHECK_THAT(outage_simplified_single({User::near, Mode::oma, 0.5}, split, 0.05, l.near).probability,
               WithinAbs(1.0 - l.near.cdf(dth), 1e-14));
}

TEST_CASE("exact integral reduces to the simplified form without thermal noise")
{
    PowerSplit split(0.33);
    for (double k : {0.01, 0.05, 0.1})
    {
        auto t = pairing::thresholds(0.33, k);
        for (auto kind : all_schemes)
        {
            auto l = laws(kind, t);
            for (User u : {User::near, User::far})
                for (Mode m : {Mode::noma, Mode::oma})
                    for (double tau : {0.5, 3.0})
                    {
                        OutageQuery q{u, m, tau};
                        double exact = outage_exact_single(q, budget(k, 0.0), split, {}, pick(l, u)).probability;
                        double simple = outage_simplified_single(q, split, k, pick(l, u)).probability;
                        CHECK_THAT(exact, WithinAbs(simple, 1e-6));
                    }
        }
    }
}

TEST_CASE("exact and simplified stay within 0.005 at negligible thermal noise")
{
    PowerSplit split(0.33);
    for (double k : {0.01, 0.04, 0.07, 0.1})
    {
        auto t = pairing::thresholds(0.33, k);
        for (auto kind : all_schemes)
        {
            auto l = laws(kind, t);
            for (User u : {User::near, User::far})
                for (Mode m : {Mode::noma, Mode::oma})
                {
                    OutageQuery q{u, m, u == User::near ? 3.0 : 0.5};
                    auto exact = outage_exact_single(q, budget(k, 1e-21), split, {}, pick(l, u));
                    CHECK(exact.converged);
                    CHECK_THAT(exact.probability,
                               WithinAbs(outage_simplified_single(q, split, k, pick(l, u)).probability, 0.005));
                }
        }
    }
}

TEST_CASE("exact outage grows with the target and with absorption")
{
    PowerSplit split(0.33);
    for (auto kind : {SchemeKind::random, SchemeKind::proposed})
        for (User u : {User::near, User::far})
            for (Mode m : {Mode::noma, Mode::oma})
            {
                double prev = 0.0;
                auto l = laws(kind, pairing::thresholds(0.33, 0.05));
                for (double tau = 0.1; tau < 6.0; tau += 0.3)
                {
                    double p = outage_exact_single({u, m, tau}, budget(0.05, 1e-9), split, {}, pick(l, u)).probability;
                    CHECK(p >= prev - 1e-9);
                    CHECK(p >= 0.0);
                    CHECK(p <= 1.0);
                    prev = p;
                }
                prev = 0.0;
                for (double k = 0.01; k <= 0.1001; k += 0.01)
                {
                    auto lk = laws(kind, pairing::thresholds(0.33, k));
                    OutageQuery q{u, m, u == User::near ? 3.0 : 0.5};
                    double p = outage_simplified_single(q, split, k, pick(lk, u)).probability;
                    CHECK(p >= prev - 1e-12);
                    prev = p;
                }
            }
}

TEST_CASE("exact near outage under the random scheme matches simulation")
{
    PowerSplit split(0.33);
    auto l = laws(SchemeKind::random, pairing::thresholds(0.33, 0.05));
    LinkBudget b = budget(0.05, 1e-21);
    double p = outage_exact_single({User::near, Mode::noma, 3.0}, b, split, {}, l.near).probability;
    auto sim = mc(SchemeKind::random, b, 0.33, User::near, Mode::noma, 3.0, 0.5, 1000000, 11);
    CHECK(inside(sim, p));
}

TEST_CASE("fading parameterization pinned by simulation with strong thermal noise")
{
    // N0 comparable to the absorption noise so the fading scale matters
    PowerSplit split(0.33);
    LinkBudget b = budget(0.05, 3e-9);
    auto l = laws(SchemeKind::random, pairing::thresholds(0.33, 0.05));
    OutageQuery q{User::near, Mode::noma, 1.0};
    double analytic = outage_exact_single(q, b, split, FadingModel{2.0, 1.0}, l.near).probability;
    double noise_free = outage_simplified_single(q, split, 0.05, l.near).probability;
    REQUIRE(analytic - noise_free > 0.02);

    auto shape_scale = mc(SchemeKind::random, b, 0.33, User::near, Mode::noma, 1.0, 0.5, 400000, 3);
    FadingModel mean_power{2.0, 1.0, channel::FadingParameterization::mean_power};
    auto mean_pw = mc(SchemeKind::random, b, 0.33, User::near, Mode::noma, 1.0, 0.5, 400000, 3, std::nullopt,
                      mean_power);
    CHECK(std::abs(shape_scale.mean - analytic) <= 4.0 * shape_scale.stderr_value);
    CHECK(std::abs(mean_pw.mean - analytic) > 10.0 * mean_pw.stderr_value);

    // Each parameterization is consistent with itself
    double analytic_mp = outage_exact_single(q, b, split, mean_power, l.near).probability;
    CHECK(std::abs(mean_pw.mean - analytic_mp) <= 4.0 * mean_pw.stderr_value);
}

TEST_CASE("lemma3 method with one carrier equals the simplified closed form")
{
    PowerSplit split(0.33);
    for (double k : {0.01, 0.035, 0.05, 0.1})
    {
        SubcarrierPlan one{{{1e12, k}}};
        auto t = pairing::thresholds(0.33, k);
        for (auto kind : all_schemes)
        {
            auto l = laws(kind, t);
            for (User u : {User::near, User::far})
                for (Mode m : {Mode::noma, Mode::oma})
                    for (double tau : {0.2, 0.5, 1.5, 3.0, 6.0})
                    {
                        OutageQuery q{u, m, tau};
                        CHECK_THAT(multicarrier_outage_lemma3(q, split, one, pick(l, u)).probability,
                                   WithinAbs(outage_simplified_single(q, split, k, pick(l, u)).probability, 1e-9));
                    }
        }
    }
}

TEST_CASE("lemma3 method far-user ceiling")
{
    PowerSplit split(0.33);
    auto plan = SubcarrierPlan::reference(6);
    auto t = pairing::multicarrier_thresholds(0.33, plan.absorption());
    auto l = laws(SchemeKind::random, t);
    double ceiling_bits = 6.0 * std::log2(1.0 / 0.33);
    CHECK(multicarrier_outage_lemma3({User::far, Mode::noma, ceiling_bits + 0.1}, split, plan, l.far).probability == 1.0);
    CHECK(multicarrier_outage_lemma3({User::far, Mode::noma, ceiling_bits - 0.5}, split, plan, l.far).probability < 1.0);
}

TEST_CASE("six-carrier near outage by the lemma3 method matches simulation")
{
    PowerSplit split(0.33);
    auto plan = SubcarrierPlan::reference(6);
    auto t = pairing::multicarrier_thresholds(0.33, plan.absorption());
    auto l = laws(SchemeKind::proposed, t);
    double p = multicarrier_outage_lemma3({User::near, Mode::noma, 8.0}, split, plan, l.near).probability;
    auto sim = mc(SchemeKind::proposed, budget(0.05, 0.0), 0.33, User::near, Mode::noma, 8.0, 0.5, 1000000, 12, plan);
    CHECK(inside(sim, p));
}

TEST_CASE("conditional MGF")
{
    PowerSplit split(0.33);
    FadingModel fading;
    channel::Subcarrier c{0.85e12, 0.0357};

    SECTION("normalization and the noise-free point mass")
    {
        auto b = budget(0.0357, 1e-9);
        CHECK(conditional_mgf(User::near, Mode::noma, c, 5.0, 0.0, b, split, fading) == numerics::Complex(1.0));
        auto b0 = budget(0.0357, 0.0);
        double e = std::exp(-0.0357 * 5.0);
        double lnw = std::log1p(e / (1.0 - e));
        numerics::Complex s(0.3, 1.7);
        auto v = conditional_mgf(User::near, Mode::noma, c, 5.0, s, b0, split, fading);
        auto expect = std::exp(-s * lnw);
        CHECK_THAT(v.real(), WithinAbs(expect.real(), 1e-14));
        CHECK_THAT(v.imag(), WithinAbs(expect.imag(), 1e-14));
    }

    SECTION("modulus bound and simulation at s = j")
    {
        for (double N0 : {1e-21, 1e-8})
        {
            auto b = budget(0.0357, N0);
            bool ok = false;
            auto v = conditional_mgf(User::near, Mode::noma, c, 5.0, numerics::Complex(0.0, 1.0), b, split, fading, {}, &ok);
            CHECK(ok);
            CHECK(std::abs(v) <= 1.0 + 1e-12);

            std::mt19937_64 gen(17);
            std::gamma_distribution<double> g(2.0, 1.0);
            numerics::Complex sum = 0.0;
            const int n = 1000000;
            auto bc = b.at(c.f, c.k);
            for (int i = 0; i < n; ++i)
            {
                double lnw = std::log1p(channel::sinr_noma_near(bc, split, g(gen), 5.0));
                sum += std::polar(1.0, -lnw);
            }
            sum /= double(n);
            CHECK_THAT(v.real(), WithinAbs(sum.real(), 4e-3));
            CHECK_THAT(v.imag(), WithinAbs(sum.imag(), 4e-3));
        }
    }

    SECTION("segment law agrees with the reference quadrature")
    {
        for (User u : {User::near, User::far})
            for (Mode m : {Mode::noma, Mode::oma})
                for (double N0 : {1e-10, 1e-8})
                {
                    auto b = budget(0.0357, N0);
                    ConditionalLaw law(u, m, c, 12.0, b, split, fading);
                    MgfOptions dense;
                    dense.fading_nodes = 1024;
                    ConditionalLaw fine(u, m, c, 12.0, b, split, fading, dense);
                    for (double w : {0.1, 1.0, 4.0, 20.0})
                    {
                        auto ref = conditional_mgf(u, m, c, 12.0, numerics::Complex(0.0, w), b, split, fading,
                                                   {1e-10, 1e-10, 500});
                        // piecewise-uniform segments converge on the quadrature as nodes are added
                        CHECK(std::abs(law.mgf(w) - ref) <= 1e-3);
                        CHECK(std::abs(fine.mgf(w) - ref) <= 1e-4);
                    }
                    double mass = 0.0;
                    for (double x : law.weight())
                        mass += x;
                    CHECK_THAT(mass, WithinAbs(1.0, 1e-12));
                    for (std::size_t i = 0; i < law.lo().size(); ++i)
                    {
                        CHECK(law.lo()[i] <= law.hi()[i]);
                        CHECK(law.hi()[i] <= 0.0);
                    }
                }
        ConditionalLaw point(User::near, Mode::noma, c, 12.0, budget(0.0357, 0.0), split, fading);
        CHECK(point.degenerate());
    }
}

TEST_CASE("MGF inversion agrees with the lemma3 method without thermal noise")
{
    PowerSplit split(0.33);
    auto plan = SubcarrierPlan::reference(6);
    auto t = pairing::multicarrier_thresholds(0.33, plan.absorption());
    LinkBudget b = budget(0.05, 0.0);
    struct Case
    {
        SchemeKind kind;
        User user;
        double tau;
    };
    for (Case cs : {Case{SchemeKind::proposed, User::near, 8.0}, Case{SchemeKind::random, User::far, 0.5}})
    {
        auto l = laws(cs.kind, t);
        OutageQuery q{cs.user, Mode::noma, cs.tau};
        auto m = multicarrier_outage_mgf(q, split, plan, pick(l, cs.user), b, {});
        CHECK(m.converged);
        CHECK_THAT(m.probability, WithinAbs(multicarrier_outage_lemma3(q, split, plan, pick(l, cs.user)).probability, 1e-2));
    }
}

TEST_CASE("MGF inversion with one noisy carrier agrees with the exact integral")
{
    PowerSplit split(0.33);
    SubcarrierPlan one{{{1e12, 0.05}}};
    LinkBudget b = budget(0.05, 3e-9);
    auto l = laws(SchemeKind::random, pairing::thresholds(0.33, 0.05));
    for (User u : {User::near, User::far})
    {
        OutageQuery q{u, Mode::noma, u == User::near ? 1.0 : 0.5};
        double exact = outage_exact_single(q, b, split, {}, pick(l, u)).probability;
        auto m = multicarrier_outage_mgf(q, split, one, pick(l, u), b, {});
        CHECK_THAT(m.probability, WithinAbs(exact, 1e-2));
    }
}

TEST_CASE("six-carrier near outage by MGF inversion matches simulation")
{
    PowerSplit split(0.33);
    auto plan = SubcarrierPlan::reference(6);
    auto t = pairing::multicarrier_thresholds(0.33, plan.absorption());
    auto l = laws(SchemeKind::proposed, t);
    LinkBudget b = budget(0.05, 1e-21);
    auto m = multicarrier_outage_mgf({User::near, Mode::noma, 8.0}, split, plan, l.near, b, {});
    auto sim = mc(SchemeKind::proposed, b, 0.33, User::near, Mode::noma, 8.0, 0.5, 1000000, 13, plan);
    CHECK(m.converged);
    CHECK(inside(sim, m.probability));
}
