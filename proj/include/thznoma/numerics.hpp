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

#ifndef THZNOMA_NUMERICS_HPP
#define THZNOMA_NUMERICS_HPP

#include <complex>
#include <functional>
#include <stdexcept>

// Special functions, quadrature and root finding shared by the analytic evaluators.
// Everything here is a pure function of its arguments.

namespace thznoma::numerics
{
    using Complex = std::complex<double>;
    using RealFunction = std::function<double(double)>;

    struct QuadratureSpec
    {
        double abs_tol = 1.0e-6;
        double rel_tol = 1.0e-6;
        int max_subdivisions = 200;

        // Throws std::invalid_argument on non-positive tolerances or subdivisions < 1
        void validate() const;
    };

    // Result of a quadrature. When `converged` is false, `value` still carries the best estimate
    // and `error` the last error estimate.
    struct QuadratureResult
    {
        double value = 0.0;
        double error = 0.0;
        long evaluations = 0;
        bool converged = true;
    };

    // Regularized lower incomplete gamma P(m, x) = gamma(m, x) / Gamma(m).
    // Throws std::domain_error for m <= 0 or x < 0.
    double reg_lower_inc_gamma(double m, double x);

    // Complement Q(m, x) = 1 - P(m, x), accurate in the upper tail
    double reg_upper_inc_gamma(double m, double x);

    // Inverse of P(m, .) in x, p in [0, 1). Used to place Gamma quantile nodes.
    double gamma_quantile(double m, double p);

    // Inverse of Q(m, .) in x, q in (0, 1]. Accurate deep in the upper tail where 1 - q rounds to 1.
    double gamma_quantile_upper(double m, double q);

    // Adaptive Gauss-Kronrod (21 point) integration with global subdivision of the interval
    // with the largest error estimate. Requires a <= b.
    QuadratureResult integrate_finite(const RealFunction &f, double a, double b, const QuadratureSpec &spec = {});

    struct GilPelaezOptions
    {
        double omega_min = 1.0e-8; // lower end of the first panel; the integrand has a finite limit at 0
        double panel_width = 0.5;  // width of each panel in omega
        double omega_max = 2.0e4;  // hard cap on the truncation point
        int quiet_panels = 3;      // consecutive panels below abs_tol needed to stop
        double quiet_span = 0.25;  // ... and the quiet run must also cover this fraction of the current omega
        double tail_tol = 1.0e-4;  // agreement required of trailing Cesaro means when the cap is hit
    };

    // Semi-infinite integral int_0^inf g(w) dw of an oscillatory, decaying integrand, evaluated panel by
    // panel and truncated once at least `quiet_panels` consecutive panels, spanning at least quiet_span * omega,
    // each contribute less than spec.abs_tol. The span condition keeps a slow oscillation from passing a zero
    // crossing off as decay.
    // If omega_max is reached first, the Cesaro mean of the partial integrals over the trailing half of the
    // range is returned and the result is flagged unless that mean has settled to within tail_tol.
    QuadratureResult integrate_gil_pelaez(const RealFunction &imag_integrand, const QuadratureSpec &spec = {},
                                          const GilPelaezOptions &options = {});

    // CDF of X at t from M(jw) = E[exp(-j w X)]:
    //   Pr(X < t) = 1/2 + (1/pi) int_0^inf Im[M(jw) exp(j w t)] / w dw
    QuadratureResult gil_pelaez_cdf(const std::function<Complex(double)> &mgf_at_jw, double t,
                                    const QuadratureSpec &spec = {}, const GilPelaezOptions &options = {});

    // Thrown by find_root_monotone when f(lo) and f(hi) have the same strict sign.
    class BracketError : public std::runtime_error
    {
    public:
        BracketError(double f_lo, double f_hi);
        double f_lo() const { return f_lo_; }
        double f_hi() const { return f_hi_; }

    private:
        double f_lo_;
        double f_hi_;
    };

    // Bisection for a monotone f on [lo, hi] with f(lo) * f(hi) <= 0. Stops when the bracket is narrower
    // than tol and returns its midpoint (or an endpoint that is an exact zero).
    double find_root_monotone(const RealFunction &f, double lo, double hi, double tol = 1.0e-10);
}

#endif
