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

#ifndef THZNOMA_OUTAGE_HPP
#define THZNOMA_OUTAGE_HPP

#include "thznoma/channel.hpp"
#include "thznoma/numerics.hpp"
#include "thznoma/pairing.hpp"

#include <optional>
#include <string_view>
#include <vector>

// Analytic outage probabilities Pr(C < tau) for the near and far user, NOMA and OMA.

namespace thznoma::outage
{
    using channel::Mode;
    using channel::User;

    struct OutageQuery
    {
        User user = User::near;
        Mode mode = Mode::noma;
        double tau = 1.0; // target spectral efficiency [bps/Hz]

        void validate() const;        // tau > 0
        double sinr_threshold() const; // y = 2^tau - 1 (NOMA), x = 2^(2 tau) - 1 (OMA)
        double rate_factor() const;    // 1 (NOMA) or 0.5 (OMA): C = factor * sum log2(W)
    };

    enum class Method
    {
        exact_integral,
        simplified,
        lemma3,
        mgf,
        montecarlo
    };

    std::string_view to_string(Method method);

    struct OutageEstimate
    {
        double probability = 0.0; // clamped to [0, 1]
        Method method = Method::simplified;
        std::optional<double> stderr_value; // Monte Carlo only
        double raw = 0.0;      // value before clamping
        bool converged = true; // false when a quadrature or inversion hit its limits

        static OutageEstimate make(double raw, Method method, bool converged = true);
    };

    // Distance beyond which the N0 = 0 SINR ceiling drops below y:
    //   signal e / (interference e + absorption_noise (1 - e)) > y  <=>  d < d_th.
    // Returns +inf when the ceiling never drops below y and a value <= 0 when it is below y everywhere.
    double threshold_distance(const kernels::SinrCoefficients &coef, double y);

    // int P(m, arg(d)) f_d(d) dd with arg = y N0 d^2 / (scale (alpha - y beta)), alpha/beta the signal and
    // noise-plus-interference gains per unit fading; distances with alpha <= y beta contribute 1.
    // Integrated in quantile space of the law.
    OutageEstimate outage_exact_single(const OutageQuery &query, const channel::LinkBudget &budget,
                                       const channel::PowerSplit &split, const channel::FadingModel &fading,
                                       const pairing::DistanceLaw &law, const numerics::QuadratureSpec &spec = {});

    // N0 = 0 closed form 1 - F(d_th)
    OutageEstimate outage_simplified_single(const OutageQuery &query, const channel::PowerSplit &split, double k,
                                            const pairing::DistanceLaw &law);

    // N0 = 0, several carriers: X(d) = factor * sum_n ln W_n(d) is decreasing in d; outage = 1 - F(d*) with
    // X(d*) = tau ln 2.
    OutageEstimate multicarrier_outage_lemma3(const OutageQuery &query, const channel::PowerSplit &split,
                                              const channel::SubcarrierPlan &plan, const pairing::DistanceLaw &law);

    // E[W^(-s) | d] for one carrier, W = (1 + SINR)^factor, by adaptive quadrature over the Gamma quantile of
    // the fading power. Reference implementation; N0 = 0 returns the point mass exactly.
    // *converged, when given, is cleared if either quadrature missed its tolerance.
    numerics::Complex conditional_mgf(User user, Mode mode, const channel::Subcarrier &carrier, double d,
                                      numerics::Complex s, const channel::LinkBudget &budget,
                                      const channel::PowerSplit &split, const channel::FadingModel &fading,
                                      const numerics::QuadratureSpec &spec = {}, bool *converged = nullptr);

    struct MgfOptions
    {
        int cells = 256;           // uniform quantile cells of the distance law
        int tail_cells = 36;       // geometric refinements at each end of the quantile range
        int fading_nodes = 128;    // Gamma quantile nodes per conditional law
        int fading_tail_nodes = 24; // geometric refinements at each end of the fading quantile range
        int noise_octaves = 30;    // log-spaced nodes at N0/beta * 2^i, |i| <= noise_octaves
        double mass_floor = 1e-12; // conditional segments lighter than this are folded into the top atom
        double atom_width = 1e-9;  // segments narrower than this (in nats) collapse onto the top atom
        numerics::QuadratureSpec spec{1e-6, 1e-6, 200};
        numerics::GilPelaezOptions inversion{};
        bool auto_panel = true; // choose the panel width from the spread of X around the target
    };

    // Conditional law of factor * ln W on one carrier given d, as a mixture of uniform segments relative to its
    // N0 = 0 value. Segment masses are exact Gamma probabilities.
    class ConditionalLaw
    {
    public:
        ConditionalLaw(User user, Mode mode, const channel::Subcarrier &carrier, double d,
                       const channel::LinkBudget &budget, const channel::PowerSplit &split,
                       const channel::FadingModel &fading, const MgfOptions &options = {});

        double top() const { return top_; } // N0 = 0 value factor * ln W(infinity)
        // Segments [lo, hi] relative to top (both <= 0) with probabilities w
        const std::vector<double> &lo() const { return lo_; }
        const std::vector<double> &hi() const { return hi_; }
        const std::vector<double> &weight() const { return w_; }
        bool degenerate() const { return w_.size() == 1 && lo_[0] == 0.0 && hi_[0] == 0.0; }

        // E[exp(-j omega (Y - top))]
        numerics::Complex residual_cf(double omega) const;
        // E[exp(-j omega Y)]
        numerics::Complex mgf(double omega) const;

    private:
        double top_ = 0.0;
        std::vector<double> lo_, hi_, w_;
    };

    // Gil-Pelaez inversion of M_X(j omega) = E_d[prod_n M_n(j omega | d)]; the outer expectation over d is taken
    // on quantile cells of the law with X linear in the quantile within each cell.
    OutageEstimate multicarrier_outage_mgf(const OutageQuery &query, const channel::PowerSplit &split,
                                           const channel::SubcarrierPlan &plan, const pairing::DistanceLaw &law,
                                           const channel::LinkBudget &budget, const channel::FadingModel &fading,
                                           const MgfOptions &options = {});

    // The N0 = 0 value of X at distance d
    double deterministic_x(const OutageQuery &query, const channel::PowerSplit &split,
                           const channel::SubcarrierPlan &plan, double d);
}

#endif
