/*
 * Copyright 2026 The coded-shuffle Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Six servers, four finish first, half of A per server. Compares the
// uncoded triple-replication placement with the K/q MDS baseline.

#include <iostream>

#include "cdc/cdc.hpp"

int main() {
    const cdc::SystemParams p{6, 4, cdc::Rational(1, 2), 20, 8, 12, 16};
    const auto model = cdc::StragglerModel::fixed_set({1, 2, 3, 4});

    for (const cdc::RatePair r : {cdc::RatePair{4, 3}, cdc::baseline_rates(p)}) {
        const auto lb = cdc::load_breakdown(p, r);
        const auto rep = cdc::run(p, r, model, 2024);
        std::cout << "r1=" << cdc::exact_string(r.r1(p.q)) << " r2=" << r.r2 << "  s_q=" << lb.s_q << " s_max=" << lb.s_max
                  << "  analytic L=" << cdc::exact_string(lb.total) << "  counted L=" << cdc::exact_string(rep.counted_load)
                  << "  messages=" << rep.message_count << "  verified=" << std::boolalpha << rep.verified << '\n';
    }

    const auto best = cdc::optimize_rates(p);
    std::cout << "load-optimal pair: l=" << best->rates.l << " r2=" << best->rates.r2 << '\n';
    return 0;
}
