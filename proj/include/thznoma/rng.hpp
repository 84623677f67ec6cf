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

#ifndef THZNOMA_RNG_HPP
#define THZNOMA_RNG_HPP

#include <cstdint>
#include <limits>

namespace thznoma
{
    // SplitMix64 stream keyed by (seed, stream). Each Monte Carlo trial gets its own stream, so results
    // do not depend on how trials are distributed over threads.
    // Satisfies UniformRandomBitGenerator.
    class CounterRng
    {
    public:
        using result_type = std::uint64_t;

        CounterRng(std::uint64_t seed, std::uint64_t stream);

        result_type operator()()
        {
            state_ += 0x9E3779B97F4A7C15ULL;
            return mix(state_);
        }

        // Uniform on [0, 1) with 53 random bits
        double uniform() { return double((*this)() >> 11) * 0x1.0p-53; }

        static constexpr result_type min() { return 0; }
        static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

        static std::uint64_t mix(std::uint64_t z)
        {
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            return z ^ (z >> 31);
        }

    private:
        std::uint64_t state_;
    };
}

#endif
