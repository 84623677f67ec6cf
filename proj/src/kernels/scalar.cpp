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

#include <cmath>

// Reference implementations. Plain loops over libm; the vector tables are tested against these.

namespace thznoma::kernels
{
    namespace
    {
        void exp_scalar(const double *x, double *out, std::size_t n)
        {
            for (std::size_t i = 0; i < n; ++i)
                out[i] = std::exp(x[i]);
        }

        void sincos_scalar(const double *x, double *s, double *c, std::size_t n)
        {
            for (std::size_t i = 0; i < n; ++i)
            {
                s[i] = std::sin(x[i]);
                c[i] = std::cos(x[i]);
            }
        }

        void sinr_scalar(const SinrCoefficients &coef, const double *d, const double *chi, double *out, std::size_t n)
        {
            for (std::size_t i = 0; i < n; ++i)
            {
                double e = std::exp(-coef.absorption * d[i]);
                double a = coef.gain * chi[i] / (d[i] * d[i]);
                double num = coef.signal * a * e;
                double den = coef.interference * a * e + coef.noise + coef.absorption_noise * a * (1.0 - e);
                out[i] = num > 0.0 ? num / den : 0.0;
            }
        }

        void segment_cf_scalar(double omega, const double *a, const double *b, const double *w, double *re, double *im,
                               std::size_t n)
        {
            for (std::size_t i = 0; i < n; ++i)
            {
                double z = 0.5 * omega * (b[i] - a[i]);
                double sinc = z == 0.0 ? 1.0 : std::sin(z) / z;
                double phase = 0.5 * omega * (a[i] + b[i]);
                double amp = w[i] * sinc;
                re[i] = amp * std::cos(phase);
                im[i] = -amp * std::sin(phase);
            }
        }
    }

    const KernelTable &scalar_table()
    {
        static const KernelTable table{Isa::scalar, exp_scalar, sincos_scalar, sinr_scalar, segment_cf_scalar};
        return table;
    }
}
