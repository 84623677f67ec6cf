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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace thznoma::kernels
{
#if !THZNOMA_HAVE_AVX2
    const KernelTable *avx2_table() { return nullptr; }
#endif

    std::string_view to_string(Isa isa)
    {
        return isa == Isa::avx2 ? "avx2" : "scalar";
    }

    bool cpu_supports(Isa isa)
    {
        if (isa == Isa::scalar)
            return true;
#if THZNOMA_HAVE_AVX2 && (defined(__x86_64__) || defined(__i386__))
        return avx2_table() != nullptr && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }

    namespace
    {
        const KernelTable *detect()
        {
            const char *forced = std::getenv("THZNOMA_ISA");
            if (forced && std::string(forced) == "scalar")
                return &scalar_table();
            if (cpu_supports(Isa::avx2))
                return avx2_table();
            return &scalar_table();
        }

        std::atomic<const KernelTable *> &current()
        {
            static std::atomic<const KernelTable *> table{detect()};
            return table;
        }
    }

    const KernelTable &active()
    {
        return *current().load(std::memory_order_acquire);
    }

    void select(Isa isa)
    {
        if (!cpu_supports(isa))
            throw std::runtime_error("Kernel ISA not supported on this machine: " + std::string(to_string(isa)));
        current().store(isa == Isa::avx2 ? avx2_table() : &scalar_table(), std::memory_order_release);
    }
}
