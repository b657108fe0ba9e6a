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

#include <algorithm>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "cdc/placement.hpp"

namespace {

using cdc::BigInt;
using cdc::PlacementMap;
using cdc::RatePair;
using cdc::Rational;
using cdc::SubsetMask;
using cdc::SystemParams;

SystemParams example() { return SystemParams{6, 4, Rational(1, 2), 20, 8, 12, 16}; }

TEST(Colex, OrderAndRank) {
    const auto subsets = cdc::colex_subsets(5, 3);
    ASSERT_EQ(subsets.size(), 10u);
    EXPECT_EQ(cdc::members_of(subsets[0]), (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(cdc::members_of(subsets[1]), (std::vector<int>{1, 2, 4}));
    EXPECT_EQ(cdc::members_of(subsets[2]), (std::vector<int>{1, 3, 4}));
    EXPECT_EQ(cdc::members_of(subsets[3]), (std::vector<int>{2, 3, 4}));
    EXPECT_EQ(cdc::members_of(subsets[4]), (std::vector<int>{1, 2, 5}));
    EXPECT_EQ(cdc::members_of(subsets[9]), (std::vector<int>{3, 4, 5}));
    for (int n = 1; n <= 10; ++n)
        for (int k = 0; k <= n; ++k) {
            const auto all = cdc::colex_subsets(n, k);
            ASSERT_EQ(static_cast<std::int64_t>(all.size()), cdc::binomial_i64(n, k));
            for (std::size_t i = 0; i < all.size(); ++i) {
                ASSERT_EQ(cdc::subset_size(all[i]), k);
                ASSERT_EQ(cdc::colex_rank(all[i]), static_cast<std::int64_t>(i));
                ASSERT_EQ(cdc::colex_unrank(static_cast<std::int64_t>(i), k), all[i]);
                if (i > 0) ASSERT_LT(all[i - 1], all[i]);  // colex = increasing as bitmasks
            }
        }
}

TEST(Colex, SubsetsOfUniverse) {
    const SubsetMask u = cdc::mask_of({2, 4, 7});
    const auto pairs = cdc::colex_subsets_of(u, 2);
    ASSERT_EQ(pairs.size(), 3u);
    EXPECT_EQ(cdc::members_of(pairs[0]), (std::vector<int>{2, 4}));
    EXPECT_EQ(cdc::members_of(pairs[1]), (std::vector<int>{2, 7}));
    EXPECT_EQ(cdc::members_of(pairs[2]), (std::vector<int>{4, 7}));
}

TEST(Partition, WorkedExampleProposed) {
    const auto pm = cdc::partition_rows(example(), {4, 3});
    EXPECT_EQ(pm.block_size, 1u);
    EXPECT_EQ(pm.blocks.size(), 20u);
    EXPECT_EQ(pm.coded_rows(), 20u);
    EXPECT_EQ(pm.rows_per_server(), 10u);
    EXPECT_EQ(cdc::members_of(pm.blocks[0].subset), (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(cdc::members_of(pm.blocks[19].subset), (std::vector<int>{4, 5, 6}));
    for (int k = 1; k <= 6; ++k) EXPECT_EQ(cdc::server_rows(pm, k).size(), 10u);
    // server 1 sits in the colex subsets {1,2,3},{1,2,4},{1,3,4},{1,2,5},...
    const auto c1 = cdc::server_rows(pm, 1);
    EXPECT_EQ(std::vector<std::size_t>(c1.begin(), c1.begin() + 4), (std::vector<std::size_t>{0, 1, 2, 4}));
}

TEST(Partition, WorkedExampleBaseline) {
    const auto pm = cdc::partition_rows(example(), {6, 2});
    EXPECT_EQ(pm.block_size, 2u);
    EXPECT_EQ(pm.blocks.size(), 15u);
    EXPECT_EQ(pm.coded_rows(), 30u);
    for (int k = 1; k <= 6; ++k) EXPECT_EQ(cdc::server_rows(pm, k).size(), 10u);
    EXPECT_EQ(pm.blocks[1].row_start, 2u);
    EXPECT_EQ(pm.blocks[1].row_end, 4u);
    EXPECT_TRUE(pm.stores(1, 0));
    EXPECT_TRUE(pm.stores(2, 1));
    EXPECT_FALSE(pm.stores(3, 1));
}

TEST(Partition, FullRepetitionIsOneBlock) {
    SystemParams p{5, 5, Rational(1), 7, 2, 5, 8};
    const auto pm = cdc::partition_rows(p, {5, 5});
    ASSERT_EQ(pm.blocks.size(), 1u);
    EXPECT_EQ(pm.block_size, 7u);
    for (int k = 1; k <= 5; ++k) EXPECT_EQ(cdc::server_rows(pm, k).size(), 7u);
}

TEST(Partition, ErrorsCarryDiagnostics) {
    try {
        cdc::partition_rows(example(), {6, 3});
        FAIL() << "expected InfeasibleError";
    } catch (const cdc::InfeasibleError& e) {
        EXPECT_EQ(e.violated(), std::vector<std::string>{"12b"});
    }
    auto p = example();
    p.m = 10;
    try {
        cdc::partition_rows(p, {4, 3});
        FAIL() << "expected DivisibilityError";
    } catch (const cdc::DivisibilityError& e) {
        EXPECT_EQ(e.m_multiplier(), "2");
        EXPECT_EQ(e.n_multiplier(), "1");
    }
    EXPECT_THROW(cdc::server_rows(cdc::partition_rows(example(), {4, 3}), 7), cdc::InvalidArgument);
}

TEST(Divisibility, Examples) {
    auto p = example();
    EXPECT_TRUE(cdc::divisibility_check(p, {4, 3}).ok);
    EXPECT_TRUE(cdc::divisibility_check(p, {6, 2}).ok);
    p.m = 1;
    const auto v = cdc::divisibility_check(p, {4, 3});
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.m_multiplier, 20);
    p.m = 10;
    EXPECT_EQ(cdc::divisibility_check(p, {4, 3}).m_multiplier, 2);
    p.m = 20;
    p.N = 10;  // q = 4 does not divide N
    const auto vn = cdc::divisibility_check(p, {4, 3});
    EXPECT_FALSE(vn.ok);
    EXPECT_EQ(vn.n_multiplier, 2);
    EXPECT_NE(vn.describe().find("(iii)"), std::string::npos);
}

TEST(Divisibility, SuggestedMultiplierAlwaysWorks) {
    for (int K = 2; K <= 9; ++K)
        for (int a = 1; a <= K; ++a) {
            const Rational mu(a, K);
            SystemParams base{K, K, mu, 1, 1, 1, 16};
            for (int q = base.min_q(); q <= K; ++q) {
                for (const auto& r : cdc::enumerate_feasible(base.with_q(q))) {
                    for (std::int64_t m0 : {1, 3, 10}) {
                        for (std::int64_t n0 : {1, 5}) {
                            SystemParams p = base.with_q(q);
                            p.m = m0;
                            p.N = n0;
                            const auto v = cdc::divisibility_check(p, r);
                            p.m = m0 * cdc::to_int64(v.m_multiplier);
                            p.N = n0 * cdc::to_int64(v.n_multiplier);
                            const auto fixed = cdc::divisibility_check(p, r);
                            ASSERT_TRUE(fixed.ok) << "K=" << K << " q=" << q << " l=" << r.l << " r2=" << r.r2 << ": " << fixed.describe();
                            ASSERT_EQ(fixed.m_multiplier, 1);
                            ASSERT_EQ(fixed.n_multiplier, 1);
                        }
                    }
                }
            }
        }
}

// Placement built directly, without the feasibility gate, so pairs that fail
// the reconstruction condition can be examined too.
PlacementMap raw_placement(int K, int q, int l, int r2) {
    PlacementMap pm;
    const std::int64_t blocks = cdc::binomial_i64(K, r2);
    pm.params = SystemParams{K, q, Rational(1), q * blocks, 1, q, 16};
    pm.rates = {l, r2};
    pm.block_size = static_cast<std::size_t>(l);
    std::size_t start = 0;
    for (SubsetMask s : cdc::colex_subsets(K, r2)) {
        pm.blocks.push_back({s, start, start + pm.block_size});
        start += pm.block_size;
    }
    return pm;
}

TEST(Reconstructible, MatchesConditionForEveryServerSet) {
    int agree_yes = 0, agree_no = 0;
    for (int K = 2; K <= 8; ++K)
        for (int q = 1; q <= K; ++q)
            for (int l = q; l <= K; ++l)
                for (int r2 = 1; r2 <= K; ++r2) {
                    const auto pm = raw_placement(K, q, l, r2);
                    const bool condition =
                        BigInt(l) * (cdc::binomial(K, r2) - cdc::binomial(K - q, r2)) >= BigInt(q) * cdc::binomial(K, r2);
                    for (SubsetMask Q : cdc::colex_subsets(K, q)) {
                        ASSERT_EQ(cdc::reconstructible(pm, cdc::members_of(Q)), condition)
                            << "K=" << K << " q=" << q << " l=" << l << " r2=" << r2;
                    }
                    (condition ? agree_yes : agree_no)++;
                }
    EXPECT_GT(agree_yes, 0);
    EXPECT_GT(agree_no, 0);
}

TEST(Census, EveryRowHeldByExactlyR2Servers) {
    for (int K = 2; K <= 8; ++K)
        for (int a = 1; a <= K; ++a) {
            SystemParams p{K, K, Rational(a, K), 1, 1, K, 16};
            for (const auto& r : cdc::enumerate_feasible(p)) {
                p.m = 1;
                p.m = cdc::to_int64(cdc::divisibility_check(p, r).m_multiplier);
                const auto pm = cdc::partition_rows(p, r);
                std::vector<int> holders(pm.coded_rows(), 0);
                std::set<SubsetMask> distinct;
                for (const auto& b : pm.blocks) distinct.insert(b.subset);
                ASSERT_EQ(distinct.size(), pm.blocks.size());
                for (int k = 1; k <= K; ++k) {
                    const auto rows = cdc::server_rows(pm, k);
                    ASSERT_EQ(rows.size(), pm.rows_per_server());
                    ASSERT_LE(Rational(static_cast<std::int64_t>(rows.size())), p.mu * p.m);  // storage budget
                    for (auto row : rows) ++holders[row];
                }
                for (int h : holders) ASSERT_EQ(h, r.r2);
            }
        }
}

}  // namespace
