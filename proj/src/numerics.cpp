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

#include "thznoma/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

namespace thznoma::numerics
{
    void QuadratureSpec::validate() const
    {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw std::invalid_argument("Quadrature tolerances must be positive.");
        if (max_subdivisions < 1)
            throw std::invalid_argument("Quadrature needs at least one subdivision.");
    }

    double reg_lower_inc_gamma(double m, double x)
    {
        if (!(m > 0.0) || !std::isfinite(m))
            throw std::domain_error("Incomplete gamma: shape must be positive, got " + std::to_string(m));
        if (!(x >= 0.0))
            throw std::domain_error("Incomplete gamma: argument must be non-negative, got " + std::to_string(x));
        if (x == 0.0)
            return 0.0;
        if (std::isinf(x))
            return 1.0;
        return boost::math::gamma_p(m, x);
    }

    double reg_upper_inc_gamma(double m, double x)
    {
        if (!(m > 0.0) || !std::isfinite(m))
            throw std::domain_error("Incomplete gamma: shape must be positive, got " + std::to_string(m));
        if (!(x >= 0.0))
            throw std::domain_error("Incomplete gamma: argument must be non-negative, got " + std::to_string(x));
        if (x == 0.0)
            return 1.0;
        if (std::isinf(x))
            return 0.0;
        return boost::math::gamma_q(m, x);
    }

    double gamma_quantile(double m, double p)
    {
        if (!(m > 0.0))
            throw std::domain_error("Gamma quantile: shape must be positive.");
        if (!(p >= 0.0 && p < 1.0))
            throw std::domain_error("Gamma quantile: probability must lie in [0, 1).");
        if (p == 0.0)
            return 0.0;
        return boost::math::gamma_p_inv(m, p);
    }

    double gamma_quantile_upper(double m, double q)
    {
        if (!(m > 0.0))
            throw std::domain_error("Gamma upper quantile: shape must be positive.");
        if (!(q > 0.0 && q <= 1.0))
            throw std::domain_error("Gamma upper quantile: probability must lie in (0, 1].");
        if (q == 1.0)
            return 0.0;
        return boost::math::gamma_q_inv(m, q);
    }

    namespace
    {
        struct Segment
        {
            double a, b, value, error;
            bool operator<(const Segment &o) const { return error < o.error; }
        };

        Segment gk21(const RealFunction &f, double a, double b)
        {
            double err = 0.0;
            double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &err);
            return {a, b, v, err};
        }
    }

    QuadratureResult integrate_finite(const RealFunction &f, double a, double b, const QuadratureSpec &spec)
    {
        spec.validate();
        if (!(a <= b))
            throw std::invalid_argument("integrate_finite: requires a <= b.");

        QuadratureResult out;
        if (a == b)
            return out;

        std::priority_queue<Segment> work;
        Segment first = gk21(f, a, b);
        out.evaluations = 21;
        work.push(first);
        double total = first.value, total_err = first.error;

        int subdivisions = 1;
        while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)))
        {
            if (subdivisions >= spec.max_subdivisions)
            {
                out.converged = false;
                break;
            }
            Segment worst = work.top();
            work.pop();
            double mid = 0.5 * (worst.a + worst.b);
            if (!(mid > worst.a && mid < worst.b)) // interval exhausted at double precision
            {
                out.converged = false;
                work.push(worst);
                break;
            }
            Segment left = gk21(f, worst.a, mid), right = gk21(f, mid, worst.b);
            out.evaluations += 42;
            total += left.value + right.value - worst.value;
            total_err += left.error + right.error - worst.error;
            work.push(left);
            work.push(right);
            ++subdivisions;
        }

        // Re-sum to shed the drift from the running updates
        total = 0.0, total_err = 0.0;
        while (!work.empty())
        {
            total += work.top().value;
            total_err += work.top().error;
            work.pop();
        }
        out.value = total;
        out.error = total_err;
        return out;
    }

    QuadratureResult integrate_gil_pelaez(const RealFunction &imag_integrand, const QuadratureSpec &spec,
                                          const GilPelaezOptions &options)
    {
        spec.validate();
        if (!(options.panel_width > 0.0) || !(options.omega_max > options.omega_min) || options.quiet_panels < 1 ||
            !(options.quiet_span >= 0.0))
            throw std::invalid_argument("integrate_gil_pelaez: invalid panel options.");

        // Each panel is resolved more tightly than the truncation threshold
        QuadratureSpec panel_spec = spec;
        panel_spec.abs_tol = 0.1 * spec.abs_tol;

        QuadratureResult out;
        std::vector<double> partial; // partial integral at the end of each panel
        double sum = 0.0, err = 0.0;
        int quiet = 0;
        double lo = options.omega_min, quiet_from = lo;
        bool truncated = false;
        while (lo < options.omega_max)
        {
            double hi = std::min(lo + options.panel_width, options.omega_max);
            QuadratureResult panel = integrate_finite(imag_integrand, lo, hi, panel_spec);
            sum += panel.value;
            err += panel.error;
            out.evaluations += panel.evaluations;
            if (!panel.converged)
                out.converged = false;
            partial.push_back(sum);
            if (std::abs(panel.value) < spec.abs_tol)
            {
                if (quiet++ == 0)
                    quiet_from = lo;
            }
            else
                quiet = 0;
            lo = hi;
            if (quiet >= options.quiet_panels && hi - quiet_from >= options.quiet_span * hi)
            {
                truncated = true;
                break;
            }
        }

        if (truncated)
        {
            out.value = sum;
            out.error = err;
            return out;
        }

        // Cap reached: Cesaro mean over the trailing half of the panels
        std::size_t n = partial.size(), h = n / 2, q = n / 4;
        auto mean = [&](std::size_t from, std::size_t to)
        {
            double s = 0.0;
            for (std::size_t i = from; i < to; ++i)
                s += partial[i];
            return to > from ? s / double(to - from) : sum;
        };
        double tail = mean(h, n);
        double q3 = mean(h, h + q), q4 = mean(h + q, n);
        out.value = tail;
        out.error = err + std::abs(q4 - q3);
        if (std::abs(q4 - q3) > options.tail_tol)
            out.converged = false;
        return out;
    }

    QuadratureResult gil_pelaez_cdf(const std::function<Complex(double)> &mgf_at_jw, double t,
                                    const QuadratureSpec &spec, const GilPelaezOptions &options)
    {
        auto g = [&](double w)
        {
            Complex v = mgf_at_jw(w) * std::polar(1.0, w * t);
            return v.imag() / w;
        };
        QuadratureResult r = integrate_gil_pelaez(g, spec, options);
        r.value = 0.5 + r.value / std::numbers::pi;
        r.error /= std::numbers::pi;
        return r;
    }

    BracketError::BracketError(double f_lo, double f_hi)
        : std::runtime_error("find_root_monotone: no sign change on the bracket (f(lo)=" + std::to_string(f_lo) +
                             ", f(hi)=" + std::to_string(f_hi) + ")"),
          f_lo_(f_lo), f_hi_(f_hi)
    {
    }

    double find_root_monotone(const RealFunction &f, double lo, double hi, double tol)
    {
        if (!(lo <= hi))
            throw std::invalid_argument("find_root_monotone: requires lo <= hi.");
        if (!(tol > 0.0))
            throw std::invalid_argument("find_root_monotone: tolerance must be positive.");

        double f_lo = f(lo), f_hi = f(hi);
        if (f_lo == 0.0)
            return lo;
        if (f_hi == 0.0)
            return hi;
        if (std::signbit(f_lo) == std::signbit(f_hi) || std::isnan(f_lo) || std::isnan(f_hi))
            throw BracketError(f_lo, f_hi);

        while (hi - lo > tol)
        {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            double f_mid = f(mid);
            if (f_mid == 0.0)
                return mid;
            if (std::signbit(f_mid) == std::signbit(f_lo))
                lo = mid, f_lo = f_mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }
}
