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

#ifndef THZNOMA_KERNELS_HPP
#define THZNOMA_KERNELS_HPP

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops. Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA implementation. The table is chosen once at startup from cpuid; the scalar table is the
// reference that the vector versions are tested against.

namespace thznoma::kernels
{
    enum class Isa
    {
        scalar,
        avx2
    };

    std::string_view to_string(Isa isa);

    // SINR of a Beer-Lambert link with absorption noise, evaluated element-wise:
    //   A = gain * chi / d^2,  e = exp(-absorption * d)
    //   sinr = signal * A * e / (interference * A * e + noise + absorption_noise * A * (1 - e))
    // `gain` is Gt*Gr*P*zeta. Near NOMA: (a1, 0, a1); far NOMA: (a2, a1, 1); OMA: (1, 0, 1).
    struct SinrCoefficients
    {
        double gain = 1.0;
        double absorption = 0.0;
        double noise = 0.0;
        double signal = 1.0;
        double interference = 0.0;
        double absorption_noise = 1.0;
    };

    struct KernelTable
    {
        Isa isa;

        // out[i] = exp(x[i])
        void (*exp)(const double *x, double *out, std::size_t n);

        // s[i] = sin(x[i]), c[i] = cos(x[i])
        void (*sincos)(const double *x, double *s, double *c, std::size_t n);

        // out[i] = SINR(d[i], chi[i]) with the coefficients above
        void (*sinr)(const SinrCoefficients &coef, const double *d, const double *chi, double *out, std::size_t n);

        // Weighted characteristic contributions of uniform segments, E[exp(-j w U)] for U ~ U[a, b]:
        //   re[i] + j im[i] = w[i] * sinc(omega (b-a)/2) * exp(-j omega (a+b)/2)
        // A segment with a == b is a point mass.
        void (*segment_cf)(double omega, const double *a, const double *b, const double *w, double *re, double *im,
                           std::size_t n);
    };

    const KernelTable &scalar_table();
    const KernelTable *avx2_table(); // nullptr when not compiled in

    bool cpu_supports(Isa isa);

    // Active table. Defaults to the widest supported ISA; THZNOMA_ISA=scalar forces the reference path.
    const KernelTable &active();

    // Override the active table (tests, benchmarks). Throws std::runtime_error if unsupported.
    void select(Isa isa);

    inline void sinr(const SinrCoefficients &coef, std::span<const double> d, std::span<const double> chi,
                     std::span<double> out)
    {
        active().sinr(coef, d.data(), chi.data(), out.data(), out.size());
    }
}

#endif
