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

#include <bit>
#include <cstdint>
#include <vector>

#include "cdc/error.hpp"
#include "cdc/rational.hpp"

namespace cdc {

namespace detail {

inline constexpr int kPascalRows = 257;

// Rows 0..kPascalRows-1 of Pascal's triangle, built once.
inline const std::vector<std::vector<BigInt>>& pascal_table() {
    static const std::vector<std::vector<BigInt>> table = [] {
        std::vector<std::vector<BigInt>> t(kPascalRows);
        for (int a = 0; a < kPascalRows; ++a) {
            t[a].resize(a + 1);
            t[a][0] = t[a][a] = 1;
            for (int b = 1; b < a; ++b) t[a][b] = t[a - 1][b - 1] + t[a - 1][b];
        }
        return t;
    }();
    return table;
}

}  // namespace detail

/// Binomial coefficient with the zero conventions used throughout the load
/// formulas: C(a, b) = 0 when b < 0 or a < b, C(a, 0) = 1.
inline BigInt binomial(std::int64_t a, std::int64_t b) {
    if (b < 0 || a < b || a < 0) return 0;
    if (b == 0) return 1;
    if (a < detail::kPascalRows) return detail::pascal_table()[a][b];
    if (b > a - b) b = a - b;
    BigInt result = 1;
    for (std::int64_t i = 1; i <= b; ++i) {
        result *= a - b + i;
        result /= i;
    }
    return result;
}

inline std::int64_t binomial_i64(std::int64_t a, std::int64_t b) { return to_int64(binomial(a, b)); }

/// Server subset as a bitmask: bit k-1 set <=> server k is a member.
using SubsetMask = std::uint64_t;

inline constexpr int kMaxServers = 63;

inline constexpr SubsetMask server_bit(int server) { return SubsetMask{1} << (server - 1); }

inline constexpr bool contains(SubsetMask set, int server) { return (set & server_bit(server)) != 0; }

inline int subset_size(SubsetMask set) { return std::popcount(set); }

/// Sorted 1-based member ids.
inline std::vector<int> members_of(SubsetMask set) {
    std::vector<int> out;
    out.reserve(std::popcount(set));
    while (set) {
        out.push_back(std::countr_zero(set) + 1);
        set &= set - 1;
    }
    return out;
}

inline SubsetMask mask_of(const std::vector<int>& servers) {
    SubsetMask m = 0;
    for (int s : servers) m |= server_bit(s);
    return m;
}

/// Next subset of the same size in colexicographic order (Gosper's hack).
/// Colex order on subsets coincides with numeric order on their bitmasks.
inline SubsetMask next_colex(SubsetMask set) {
    SubsetMask lowest = set & (~set + 1);
    SubsetMask ripple = set + lowest;
    return ripple | (((set ^ ripple) >> 2) / lowest);
}

/// All size-`k` subsets of {1..n} in colex order.
inline std::vector<SubsetMask> colex_subsets(int n, int k) {
    if (n < 0 || n > kMaxServers) throw InvalidArgument("subset universe size out of range");
    std::vector<SubsetMask> out;
    if (k < 0 || k > n) return out;
    if (k == 0) return {SubsetMask{0}};
    const SubsetMask limit = SubsetMask{1} << n;
    for (SubsetMask s = (SubsetMask{1} << k) - 1; s < limit; s = next_colex(s)) {
        out.push_back(s);
        if (s == ((SubsetMask{1} << k) - 1) << (n - k)) break;
    }
    return out;
}

/// Colex rank: sum over sorted 0-based members e_1 < ... < e_k of C(e_i, i).
inline std::int64_t colex_rank(SubsetMask set) {
    std::int64_t rank = 0;
    int i = 1;
    while (set) {
        int e = std::countr_zero(set);
        rank += binomial_i64(e, i++);
        set &= set - 1;
    }
    return rank;
}

inline SubsetMask colex_unrank(std::int64_t rank, int k) {
    SubsetMask set = 0;
    for (int i = k; i >= 1; --i) {
        int e = i - 1;
        while (binomial_i64(e + 1, i) <= rank) ++e;
        rank -= binomial_i64(e, i);
        set |= SubsetMask{1} << e;
    }
    return set;
}

/// Size-`k` subsets of the given member set, colex order relative to it.
inline std::vector<SubsetMask> colex_subsets_of(SubsetMask universe, int k) {
    const std::vector<int> ids = members_of(universe);
    std::vector<SubsetMask> out;
    for (SubsetMask local : colex_subsets(static_cast<int>(ids.size()), k)) {
        SubsetMask s = 0;
        for (int bit : members_of(local)) s |= server_bit(ids[bit - 1]);
        out.push_back(s);
    }
    return out;
}

}  // namespace cdc
