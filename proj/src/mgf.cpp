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

#include "thznoma/kernels.hpp"
#include "thznoma/outage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace thznoma::outage
{
    namespace
    {
        struct QuantileNode
        {
            double chi, lower, upper; // Gamma(m, 1) quantile with P and Q at it
        };

        // Nodes at i / count plus geometric refinements toward both ends, cached per thread
        const std::vector<QuantileNode> &quantile_nodes(double m, int count, int tail)
        {
            thread_local double cached_m = -1.0;
            thread_local int cached_count = -1, cached_tail = -1;
            thread_local std::vector<QuantileNode> nodes;
            if (m != cached_m || count != cached_count || tail != cached_tail)
            {
                nodes.clear();
                for (int i = 1; i < count; ++i)
                {
                    double p = double(i) / count;
                    if (p <= 0.5)
                        nodes.push_back({numerics::gamma_quantile(m, p), p, 1.0 - p});
                    else
                        nodes.push_back({numerics::gamma_quantile_upper(m, 1.0 - p), p, 1.0 - p});
                }
                for (int j = 1; j <= tail; ++j)
                {
                    double p = std::ldexp(1.0 / count, -j);
                    nodes.push_back({numerics::gamma_quantile(m, p), p, 1.0 - p});
                    nodes.push_back({numerics::gamma_quantile_upper(m, p), 1.0 - p, p});
                }
                cached_m = m;
                cached_count = count;
                cached_tail = tail;
            }
            return nodes;
        }
    }

    ConditionalLaw::ConditionalLaw(User user, Mode mode, const channel::Subcarrier &carrier, double d,
                                   const channel::LinkBudget &budget, const channel::PowerSplit &split,
                                   const channel::FadingModel &fading, const MgfOptions &options)
    {
        if (!(d > 0.0))
            throw std::domain_error("ConditionalLaw: distance must be positive.");
        const channel::LinkBudget b = budget.at(carrier.f, carrier.k);
        const double factor = mode == Mode::noma ? 1.0 : 0.5;
        const auto c = channel::sinr_coefficients(b, split, user, mode);
        const double e = std::exp(-c.absorption * d), ome = -std::expm1(-c.absorption * d);
        const double alpha = c.signal * c.gain * e / (d * d);
        const double beta = (c.interference * e + c.absorption_noise * ome) * c.gain / (d * d);
        const double N0 = b.N0;
        top_ = factor * std::log1p(alpha / beta);

        if (N0 == 0.0)
        {
            lo_ = hi_ = {0.0};
            w_ = {1.0};
            return;
        }

        // Y(chi) - top, written to avoid cancellation for large chi
        auto rel = [&](double chi)
        {
            if (std::isinf(chi))
                return 0.0;
            return factor * std::log1p(-alpha * N0 / ((N0 + beta * chi) * (alpha + beta)));
        };

        const double scale = fading.scale(), m = fading.m;
        struct Node
        {
            double chi, lower, upper; // P(m, chi/scale) and Q(m, chi/scale)
        };
        std::vector<Node> nodes{{0.0, 0.0, 1.0}, {INFINITY, 1.0, 0.0}};
        for (const auto &q : quantile_nodes(m, options.fading_nodes, options.fading_tail_nodes))
            nodes.push_back({scale * q.chi, q.lower, q.upper});
        const double chi_t = N0 / beta; // noise and absorption noise are equal here
        for (int i = -options.noise_octaves; i <= options.noise_octaves; ++i)
        {
            double chi = std::ldexp(chi_t, i);
            nodes.push_back({chi, numerics::reg_lower_inc_gamma(m, chi / scale),
                             numerics::reg_upper_inc_gamma(m, chi / scale)});
        }
        std::sort(nodes.begin(), nodes.end(), [](const Node &a, const Node &b) { return a.chi < b.chi; });
        nodes.erase(std::unique(nodes.begin(), nodes.end(), [](const Node &a, const Node &b) { return a.chi == b.chi; }),
                    nodes.end());

        // Lower CDF below the median, upper CDF above it, so tiny masses stay accurate
        auto mass = [&](const Node &a, const Node &b)
        { return a.chi / scale >= m ? a.upper - b.upper : b.lower - a.lower; };

        double atom = 0.0;
        for (std::size_t j = 0; j + 1 < nodes.size(); ++j)
        {
            double w = mass(nodes[j], nodes[j + 1]);
            double a = rel(nodes[j].chi), h = rel(nodes[j + 1].chi);
            if (w < options.mass_floor || a >= -options.atom_width)
            {
                atom += w;
                continue;
            }
            lo_.push_back(a);
            hi_.push_back(h);
            w_.push_back(w);
        }
        if (w_.empty())
            atom = 1.0;
        lo_.push_back(0.0);
        hi_.push_back(0.0);
        w_.push_back(atom);
    }

    numerics::Complex ConditionalLaw::residual_cf(double omega) const
    {
        std::size_t n = w_.size();
        std::vector<double> re(n), im(n);
        kernels::active().segment_cf(omega, lo_.data(), hi_.data(), w_.data(), re.data(), im.data(), n);
        numerics::Complex s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += numerics::Complex(re[i], im[i]);
        return s;
    }

    numerics::Complex ConditionalLaw::mgf(double omega) const
    {
        return residual_cf(omega) * std::polar(1.0, -omega * top_);
    }

    OutageEstimate multicarrier_outage_mgf(const OutageQuery &query, const channel::PowerSplit &split,
                                           const channel::SubcarrierPlan &plan, const pairing::DistanceLaw &law,
                                           const channel::LinkBudget &budget, const channel::FadingModel &fading,
                                           const MgfOptions &options)
    {
        query.validate();
        plan.validate();
        budget.validate();
        fading.validate();
        if (options.cells < 2 || options.tail_cells < 0 || options.fading_nodes < 2 || options.fading_tail_nodes < 0)
            throw std::invalid_argument("multicarrier_outage_mgf: invalid discretization options.");
        const double t = query.tau * std::numbers::ln2;

        // Quantile nodes of the distance law, refined geometrically towards both ends
        const double base = 1.0 / options.cells;
        std::vector<double> u;
        for (int j = options.tail_cells; j >= 1; --j)
            u.push_back(std::ldexp(base, -j));
        for (int i = 1; i < options.cells; ++i)
            u.push_back(i * base);
        for (int j = 1; j <= options.tail_cells; ++j)
            u.push_back(1.0 - std::ldexp(base, -j));
        const std::size_t nodes = u.size(), carriers = plan.size();

        // Positions relative to the target so phases stay small
        std::vector<double> x(nodes);
        std::vector<ConditionalLaw> laws;
        bool noisy = budget.N0 > 0.0;
        double spread = 0.0;
        for (std::size_t i = 0; i < nodes; ++i)
        {
            double d = law.quantile(u[i]);
            if (!(d > 0.0))
                d = std::nextafter(0.0, 1.0);
            x[i] = deterministic_x(query, split, plan, d) - t;
            if (noisy)
                for (const auto &c : plan.carriers)
                {
                    laws.emplace_back(query.user, query.mode, c, d, budget, split, fading, options);
                    spread = std::max(spread, -laws.back().lo().front());
                }
        }

        // Flatten the non-degenerate conditional segments for one kernel call per omega
        std::vector<double> seg_lo, seg_hi, seg_w;
        std::vector<std::size_t> group_end; // one group per (node, carrier)
        bool all_degenerate = true;
        for (const auto &cl : laws)
        {
            if (!cl.degenerate())
            {
                all_degenerate = false;
                seg_lo.insert(seg_lo.end(), cl.lo().begin(), cl.lo().end());
                seg_hi.insert(seg_hi.end(), cl.hi().begin(), cl.hi().end());
                seg_w.insert(seg_w.end(), cl.weight().begin(), cl.weight().end());
            }
            group_end.push_back(seg_w.size());
        }
        if (all_degenerate)
            laws.clear();

        const std::size_t cells = nodes - 1;
        std::vector<double> cell_a(cells), cell_b(cells), ones(cells, 1.0), du(cells);
        for (std::size_t i = 0; i < cells; ++i)
        {
            cell_a[i] = std::min(x[i], x[i + 1]);
            cell_b[i] = std::max(x[i], x[i + 1]);
            du[i] = u[i + 1] - u[i];
        }
        const double lower_atom = u.front(), upper_atom = 1.0 - u.back();

        const auto &kern = kernels::active();
        std::vector<double> seg_re(seg_w.size()), seg_im(seg_w.size()), cell_re(cells), cell_im(cells);
        std::vector<numerics::Complex> residual(nodes, 1.0);

        // Im[M(j w) exp(j w t)] / w
        auto integrand = [&](double w)
        {
            if (!laws.empty())
            {
                kern.segment_cf(w, seg_lo.data(), seg_hi.data(), seg_w.data(), seg_re.data(), seg_im.data(),
                                seg_w.size());
                std::size_t start = 0;
                for (std::size_t i = 0; i < nodes; ++i)
                {
                    numerics::Complex r = 1.0;
                    for (std::size_t n = 0; n < carriers; ++n)
                    {
                        std::size_t g = i * carriers + n, end = group_end[g];
                        numerics::Complex s = 0.0;
                        if (end == start)
                            s = 1.0;
                        for (std::size_t k = start; k < end; ++k)
                            s += numerics::Complex(seg_re[k], seg_im[k]);
                        r *= s;
                        start = end;
                    }
                    residual[i] = r;
                }
            }
            kern.segment_cf(w, cell_a.data(), cell_b.data(), ones.data(), cell_re.data(), cell_im.data(), cells);
            numerics::Complex M = lower_atom * residual.front() * std::polar(1.0, -w * x.front()) +
                                  upper_atom * residual.back() * std::polar(1.0, -w * x.back());
            for (std::size_t i = 0; i < cells; ++i)
                M += du[i] * 0.5 * (residual[i] + residual[i + 1]) * numerics::Complex(cell_re[i], cell_im[i]);
            return M.imag() / w;
        };

        numerics::GilPelaezOptions inv = options.inversion;
        if (options.auto_panel)
        {
            // Fastest oscillation of the bulk: the farthest uniform node from the target
            double reach = spread;
            for (std::size_t i = options.tail_cells; i < nodes - options.tail_cells; ++i)
                reach = std::max(reach, std::abs(x[i]) + spread);
            inv.panel_width = std::clamp(4.0 * std::numbers::pi / std::max(reach, 1e-12), 0.25, 64.0);
        }
        auto r = numerics::integrate_gil_pelaez(integrand, options.spec, inv);
        return OutageEstimate::make(0.5 + r.value / std::numbers::pi, Method::mgf, r.converged);
    }
}
