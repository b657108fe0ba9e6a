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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cdc/combinatorics.hpp"
#include "cdc/error.hpp"
#include "cdc/rational.hpp"
#include "cdc/scheme.hpp"

namespace cdc {

/// Result of the size preflight. When !ok, scaling m by m_multiplier and N by
/// n_multiplier makes every split exact.
struct DivisibilityVerdict {
    bool ok = true;
    std::vector<std::string> failures;
    BigInt m_multiplier = 1;
    BigInt n_multiplier = 1;

    std::string describe() const {
        if (ok) return "ok";
        std::string s;
        for (const auto& f : failures) s += (s.empty() ? "" : "; ") + f;
        return s + " (scale m by " + m_multiplier.str() + ", N by " + n_multiplier.str() + ")";
    }
};

namespace detail {

// Least c >= 1 with c * x an integer multiple of d.
inline BigInt least_multiplier(const BigInt& d, const Rational& x) {
    const BigInt a = abs(numerator_of(x));
    if (a == 0) return 1;
    const BigInt db = d * denominator_of(x);
    return db / gcd(db, a);
}

inline bool divides(const BigInt& d, const Rational& x) {
    if (!is_integer(x)) return false;
    return numerator_of(x) % d == 0;
}

inline BigInt lcm_of(const BigInt& a, const BigInt& b) { return a / gcd(a, b) * b; }

}  // namespace detail

/// Checks that every size the placement and shuffle depend on is integral:
/// (i) r1 m, (ii) r1 m / C(K,r2), (iii) N / q, (iv) the per-sender share of
/// each regular phase, (v) the per-group share of the residual phase.
inline DivisibilityVerdict divisibility_check(const SystemParams& p, const RatePair& r) {
    const LoadBreakdown lb = load_breakdown(p, r);
    DivisibilityVerdict v;
    BigInt c = 1;
    const BigInt d = BigInt(p.q) / gcd(BigInt(p.q), BigInt(p.N));
    v.n_multiplier = d;

    auto require = [&](bool holds, const std::string& what, const BigInt& divisor, const Rational& per_unit_m) {
        if (!holds) {
            v.ok = false;
            v.failures.push_back(what);
        }
        c = detail::lcm_of(c, detail::least_multiplier(divisor, per_unit_m));
    };

    const Rational coded = r.r1(p.q) * p.m;
    const BigInt blocks = binomial(p.K, r.r2);
    require(is_integer(coded), "(i) r1*m = " + exact_string(coded) + " is not an integer", 1, coded);
    require(detail::divides(blocks, coded), "(ii) C(K,r2) = " + blocks.str() + " does not divide r1*m = " + exact_string(coded), blocks, coded);

    if (p.N % p.q != 0) {
        v.ok = false;
        v.failures.push_back("(iii) q = " + std::to_string(p.q) + " does not divide N = " + std::to_string(p.N));
    }

    const Rational block_size = coded / blocks;
    const Rational cols_scaled = Rational(BigInt(p.N) * d, p.q);  // N'/q after the N adjustment
    const Rational cols_now(p.N, p.q);
    for (int i = lb.s_q; i <= lb.s_max; ++i) {
        const BigInt classes = binomial(p.K - p.q, r.r2 - i);
        const Rational per_receiver_now = block_size * classes * cols_now;
        require(detail::divides(i, per_receiver_now),
                "(iv) gain " + std::to_string(i) + ": " + exact_string(per_receiver_now) + " IVs per receiver do not split over " + std::to_string(i) + " senders",
                i, block_size * classes * cols_scaled);
    }

    if (lb.has_residual() && lb.residual_gain() >= 2) {
        const int i = lb.residual_gain();
        const BigInt groups = binomial(p.q - 1, i);
        const Rational rows_per_column = (lb.needed_fraction - lb.delivered_fraction()) * p.m;
        require(detail::divides(groups, rows_per_column),
                "(v) residual: " + exact_string(rows_per_column) + " rows per column do not split over " + groups.str() + " groups",
                groups, rows_per_column);
        const Rational per_group_now = rows_per_column / groups * cols_now;
        require(detail::divides(i, per_group_now),
                "(v) residual gain " + std::to_string(i) + ": " + exact_string(per_group_now) + " IVs per group do not split over " + std::to_string(i) + " senders",
                i, rows_per_column / groups * cols_scaled);
    }
    v.m_multiplier = c;
    return v;
}

struct PlacementBlock {
    SubsetMask subset = 0;
    std::size_t row_start = 0;  // inclusive
    std::size_t row_end = 0;    // exclusive
};

/// Coded row ranges per r2-subset of servers, blocks in colex order.
struct PlacementMap {
    SystemParams params;
    RatePair rates;
    std::size_t block_size = 0;
    std::vector<PlacementBlock> blocks;

    std::size_t coded_rows() const { return block_size * blocks.size(); }

    std::size_t block_of_row(std::size_t row) const { return row / block_size; }

    bool stores(int server, std::size_t row) const { return contains(blocks[block_of_row(row)].subset, server); }

    /// |C_k| = block_size * C(K-1, r2-1).
    std::size_t rows_per_server() const {
        return block_size * static_cast<std::size_t>(binomial_i64(params.K - 1, rates.r2 - 1));
    }
};

inline PlacementMap partition_rows(const SystemParams& p, const RatePair& r) {
    p.validate();
    if (auto f = check_feasible(p, r); !f.ok()) throw InfeasibleError("infeasible rate pair: " + f.describe(), f.labels());
    if (auto v = divisibility_check(p, r); !v.ok) throw DivisibilityError(v.describe(), v.m_multiplier.str(), v.n_multiplier.str());

    PlacementMap pm;
    pm.params = p;
    pm.rates = r;
    const auto subsets = colex_subsets(p.K, r.r2);
    const std::int64_t coded = to_int64(numerator_of(r.r1(p.q) * p.m));
    pm.block_size = static_cast<std::size_t>(coded / static_cast<std::int64_t>(subsets.size()));
    pm.blocks.reserve(subsets.size());
    std::size_t start = 0;
    for (SubsetMask s : subsets) {
        pm.blocks.push_back({s, start, start + pm.block_size});
        start += pm.block_size;
    }
    return pm;
}

/// C_k: rows of every block whose subset contains server k, ascending.
inline std::vector<std::size_t> server_rows(const PlacementMap& pm, int server) {
    if (server < 1 || server > pm.params.K) throw InvalidArgument("server id " + std::to_string(server) + " outside [1, K]");
    std::vector<std::size_t> rows;
    rows.reserve(pm.rows_per_server());
    for (const auto& b : pm.blocks) {
        if (!contains(b.subset, server)) continue;
        for (std::size_t row = b.row_start; row < b.row_end; ++row) rows.push_back(row);
    }
    return rows;
}

/// Brute-force check that servers in Q jointly hold at least m distinct coded rows.
inline bool reconstructible(const PlacementMap& pm, const std::vector<int>& servers) {
    std::vector<bool> seen(pm.coded_rows(), false);
    std::size_t distinct = 0;
    for (int k : servers) {
        for (std::size_t row : server_rows(pm, k)) {
            if (!seen[row]) {
                seen[row] = true;
                ++distinct;
            }
        }
    }
    return distinct >= static_cast<std::size_t>(pm.params.m);
}

}  // namespace cdc
