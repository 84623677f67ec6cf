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

// Compiled with -mavx2 -mfma; only reached after a cpuid check in dispatch.cpp.
// exp and sin/cos follow the Cephes double-precision reductions and minimax polynomials.

#include "thznoma/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace thznoma::kernels
{
    namespace
    {
        inline __m256d poly(__m256d x, const double *c, int degree)
        {
            __m256d r = _mm256_set1_pd(c[0]);
            for (int i = 1; i <= degree; ++i)
                r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(c[i]));
            return r;
        }

        // 2^n for integral-valued n in [-1022, 1023]
        inline __m256d pow2n(__m256d n)
        {
            __m128i n32 = _mm256_cvtpd_epi32(n);
            __m256i n64 = _mm256_cvtepi32_epi64(n32);
            n64 = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
            return _mm256_castsi256_pd(_mm256_slli_epi64(n64, 52));
        }

        inline __m256d exp_pd(__m256d x)
        {
            static constexpr double P[] = {1.26177193074810590878E-4, 3.02994407707441961300E-2,
                                           9.99999999999999999910E-1};
            static constexpr double Q[] = {3.00198505138664455042E-6, 2.52448340349684104192E-3,
                                           2.27265548208155028766E-1, 2.00000000000000000009E0};
            const __m256d max_log = _mm256_set1_pd(7.09782712893383996843E2);
            const __m256d min_log = _mm256_set1_pd(-7.08396418532264106224E2);

            __m256d too_big = _mm256_cmp_pd(x, max_log, _CMP_GT_OQ);
            __m256d too_small = _mm256_cmp_pd(x, min_log, _CMP_LT_OQ);
            __m256d xc = _mm256_min_pd(_mm256_max_pd(x, min_log), max_log);

            __m256d n = _mm256_floor_pd(_mm256_fmadd_pd(xc, _mm256_set1_pd(1.4426950408889634073599), _mm256_set1_pd(0.5)));
            __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125E-1), xc);
            r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212E-6), r);
            __m256d rr = _mm256_mul_pd(r, r);
            __m256d px = _mm256_mul_pd(r, poly(rr, P, 2));
            __m256d q = _mm256_sub_pd(poly(rr, Q, 3), px);
            __m256d e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), _mm256_div_pd(px, q), _mm256_set1_pd(1.0));

            // split the scaling so n = 1024 cannot overflow the exponent field
            __m256d half = _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)));
            e = _mm256_mul_pd(_mm256_mul_pd(e, pow2n(half)), pow2n(_mm256_sub_pd(n, half)));

            e = _mm256_blendv_pd(e, _mm256_set1_pd(HUGE_VAL), too_big);
            e = _mm256_blendv_pd(e, _mm256_setzero_pd(), too_small);
            // NaN passes through
            __m256d is_nan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
            return _mm256_blendv_pd(e, x, is_nan);
        }

        inline void sincos_pd(__m256d x, __m256d *s, __m256d *c)
        {
            static constexpr double sincof[] = {1.58962301576546568060E-10, -2.50507477628578072866E-8,
                                                2.75573136213857245213E-6,  -1.98412698295895385996E-4,
                                                8.33333333332211858878E-3,  -1.66666666666666307295E-1};
            static constexpr double coscof[] = {-1.13585365213876817300E-11, 2.08757008419747316778E-9,
                                                -2.75573141792967388112E-7,  2.48015872888517045348E-5,
                                                -1.38888888888730564116E-3,  4.16666666666665929218E-2};

            const __m256d sign_bit = _mm256_set1_pd(-0.0);
            __m256d ax = _mm256_andnot_pd(sign_bit, x);
            __m256d sign_x = _mm256_and_pd(sign_bit, x);

            __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(1.27323954473516268615))); // 4/pi
            // octant index j = y mod 16, rounded up to even
            __m256d y16 = _mm256_mul_pd(_mm256_floor_pd(_mm256_mul_pd(y, _mm256_set1_pd(1.0 / 16.0))), _mm256_set1_pd(16.0));
            __m128i j = _mm256_cvttpd_epi32(_mm256_sub_pd(y, y16));
            __m128i odd = _mm_and_si128(j, _mm_set1_epi32(1));
            j = _mm_add_epi32(j, odd);
            y = _mm256_add_pd(y, _mm256_cvtepi32_pd(odd));
            j = _mm_and_si128(j, _mm_set1_epi32(7));

            __m128i gt3 = _mm_cmpgt_epi32(j, _mm_set1_epi32(3));
            j = _mm_sub_epi32(j, _mm_and_si128(gt3, _mm_set1_epi32(4)));
            __m128i poly_swap = _mm_or_si128(_mm_cmpeq_epi32(j, _mm_set1_epi32(1)), _mm_cmpeq_epi32(j, _mm_set1_epi32(2)));
            __m128i gt1 = _mm_cmpgt_epi32(j, _mm_set1_epi32(1));

            auto widen = [](__m128i m) { return _mm256_castsi256_pd(_mm256_cvtepi32_epi64(m)); };
            __m256d m_gt3 = widen(gt3), m_swap = widen(poly_swap), m_gt1 = widen(gt1);

            __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(7.85398125648498535156E-1), ax);
            z = _mm256_fnmadd_pd(y, _mm256_set1_pd(3.77489470793079817668E-8), z);
            z = _mm256_fnmadd_pd(y, _mm256_set1_pd(2.69515142907905952645E-15), z);
            __m256d zz = _mm256_mul_pd(z, z);

            __m256d ps = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), poly(zz, sincof, 5), z);
            __m256d pc = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), poly(zz, coscof, 5),
                                         _mm256_fnmadd_pd(zz, _mm256_set1_pd(0.5), _mm256_set1_pd(1.0)));

            __m256d sv = _mm256_blendv_pd(ps, pc, m_swap);
            __m256d cv = _mm256_blendv_pd(pc, ps, m_swap);

            __m256d s_sign = _mm256_xor_pd(sign_x, _mm256_and_pd(m_gt3, sign_bit));
            __m256d c_sign = _mm256_xor_pd(_mm256_and_pd(m_gt3, sign_bit), _mm256_and_pd(m_gt1, sign_bit));
            *s = _mm256_xor_pd(sv, s_sign);
            *c = _mm256_xor_pd(cv, c_sign);
        }

        void exp_avx2(const double *x, double *out, std::size_t n)
        {
            std::size_t i = 0;
            for (; i + 4 <= n; i += 4)
                _mm256_storeu_pd(out + i, exp_pd(_mm256_loadu_pd(x + i)));
            for (; i < n; ++i)
                out[i] = std::exp(x[i]);
        }

        void sincos_avx2(const double *x, double *s, double *c, std::size_t n)
        {
            std::size_t i = 0;
            for (; i + 4 <= n; i += 4)
            {
                __m256d vs, vc;
                sincos_pd(_mm256_loadu_pd(x + i), &vs, &vc);
                _mm256_storeu_pd(s + i, vs);
                _mm256_storeu_pd(c + i, vc);
            }
            for (; i < n; ++i)
            {
                s[i] = std::sin(x[i]);
                c[i] = std::cos(x[i]);
            }
        }

        void sinr_avx2(const SinrCoefficients &coef, const double *d, const double *chi, double *out, std::size_t n)
        {
            const __m256d gain = _mm256_set1_pd(coef.gain), k = _mm256_set1_pd(-coef.absorption);
            const __m256d noise = _mm256_set1_pd(coef.noise), sig = _mm256_set1_pd(coef.signal);
            const __m256d itf = _mm256_set1_pd(coef.interference), abn = _mm256_set1_pd(coef.absorption_noise);
            const __m256d one = _mm256_set1_pd(1.0), zero = _mm256_setzero_pd();
            std::size_t i = 0;
            for (; i + 4 <= n; i += 4)
            {
                __m256d vd = _mm256_loadu_pd(d + i);
                __m256d e = exp_pd(_mm256_mul_pd(k, vd));
                __m256d a = _mm256_div_pd(_mm256_mul_pd(gain, _mm256_loadu_pd(chi + i)), _mm256_mul_pd(vd, vd));
                __m256d ae = _mm256_mul_pd(a, e);
                __m256d num = _mm256_mul_pd(sig, ae);
                __m256d den = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(itf, ae), noise),
                                            _mm256_mul_pd(abn, _mm256_mul_pd(a, _mm256_sub_pd(one, e))));
                __m256d r = _mm256_div_pd(num, den);
                r = _mm256_blendv_pd(zero, r, _mm256_cmp_pd(num, zero, _CMP_GT_OQ));
                _mm256_storeu_pd(out + i, r);
            }
            if (i < n)
                scalar_table().sinr(coef, d + i, chi + i, out + i, n - i);
        }

        void segment_cf_avx2(double omega, const double *a, const double *b, const double *w, double *re, double *im,
                             std::size_t n)
        {
            const __m256d half_w = _mm256_set1_pd(0.5 * omega), zero = _mm256_setzero_pd(), one = _mm256_set1_pd(1.0);
            std::size_t i = 0;
            for (; i + 4 <= n; i += 4)
            {
                __m256d va = _mm256_loadu_pd(a + i), vb = _mm256_loadu_pd(b + i);
                __m256d z = _mm256_mul_pd(half_w, _mm256_sub_pd(vb, va));
                __m256d phase = _mm256_mul_pd(half_w, _mm256_add_pd(va, vb));
                __m256d sz, cz, sp, cp;
                sincos_pd(z, &sz, &cz);
                sincos_pd(phase, &sp, &cp);
                __m256d is_zero = _mm256_cmp_pd(z, zero, _CMP_EQ_OQ);
                __m256d sinc = _mm256_blendv_pd(_mm256_div_pd(sz, _mm256_blendv_pd(z, one, is_zero)), one, is_zero);
                __m256d amp = _mm256_mul_pd(_mm256_loadu_pd(w + i), sinc);
                _mm256_storeu_pd(re + i, _mm256_mul_pd(amp, cp));
                _mm256_storeu_pd(im + i, _mm256_sub_pd(zero, _mm256_mul_pd(amp, sp)));
            }
            if (i < n)
                scalar_table().segment_cf(omega, a + i, b + i, w + i, re + i, im + i, n - i);
        }
    }

    const KernelTable *avx2_table()
    {
        static const KernelTable table{Isa::avx2, exp_avx2, sincos_avx2, sinr_avx2, segment_cf_avx2};
        return &table;
    }
}
