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

// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any criterion fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cdc/cdc.hpp"

namespace {

using cdc::BigInt;
using cdc::RatePair;
using cdc::Rational;
using cdc::SystemParams;

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, const std::function<Verdict()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = check();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failures;
    std::printf("[%s] %s %s (%.2f s): %s\n", v.pass ? "PASS" : "FAIL", id, title, secs, v.detail.c_str());
    std::fflush(stdout);
}

SystemParams example() { return SystemParams{6, 4, Rational(1, 2), 20, 8, 12, 16}; }

// Runs every (K, mu, q, feasible pair, Q) of the end-to-end sweep once and
// keeps the tallies used by two criteria.
struct SweepTally {
    long instances = 0, runs = 0, skipped = 0, wrong = 0, load_mismatch = 0;
    std::string first_wrong, first_mismatch;
    double seconds = 0;
};

const SweepTally& sweep() {
    static const SweepTally tally = [] {
        SweepTally t;
        const auto t0 = std::chrono::steady_clock::now();
        for (int K = 4; K <= 8; ++K)
            for (int a = 1; a <= K; ++a) {
                SystemParams base{K, K, Rational(a, K), 1, 4, 1, 16};
                for (int q = base.min_q(); q <= K; ++q) {
                    SystemParams p = base.with_q(q);
                    p.N = 3 * q;
                    for (const auto& r : cdc::enumerate_feasible(p)) {
                        p.m = 1;
                        const BigInt m = cdc::divisibility_check(p, r).m_multiplier;
                        if (m > 240) {
                            ++t.skipped;
                            continue;
                        }
                        p.m = cdc::to_int64(m);
                        const auto wl = cdc::prepare_workload(p, r, static_cast<std::uint64_t>(K * 1000 + q));
                        ++t.instances;
                        for (auto Q : cdc::colex_subsets(K, q)) {
                            const auto rep = cdc::execute(wl, cdc::members_of(Q));
                            ++t.runs;
                            std::ostringstream where;
                            where << "K=" << K << " mu=" << a << "/" << K << " q=" << q << " l=" << r.l << " r2=" << r.r2;
                            if (!rep.verified && t.wrong++ == 0) t.first_wrong = where.str();
                            if (rep.counted_load != rep.analytic_load && t.load_mismatch++ == 0) t.first_mismatch = where.str();
                        }
                    }
                }
            }
        t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return t;
    }();
    return tally;
}

Verdict ac1() {
    const auto p = example();
    const auto model = cdc::StragglerModel::fixed_set({1, 2, 3, 4});
    const auto prop = cdc::run(p, {4, 3}, model, 1);
    const auto base = cdc::run(p, {6, 2}, model, 1);
    std::vector<std::size_t> counts;
    for (const auto& ph : prop.phases) counts.push_back(ph.messages);
    std::ostringstream os;
    os << "proposed " << cdc::exact_string(prop.analytic_load) << " analytic, " << cdc::exact_string(prop.counted_load) << " counted, "
       << prop.message_count << " messages; baseline " << cdc::exact_string(base.analytic_load) << " / " << cdc::exact_string(base.counted_load);
    const bool ok = prop.analytic_load == Rational(19, 5) && prop.counted_load == Rational(19, 5) &&
                    counts == std::vector<std::size_t>{4, 36, 36} && base.analytic_load == Rational(21, 5) &&
                    base.counted_load == Rational(21, 5) && prop.verified && base.verified;
    return {ok, os.str()};
}

Verdict ac2() {
    const auto& t = sweep();
    std::ostringstream os;
    os << t.instances << " instances, " << t.runs << " server sets, " << t.wrong << " wrong (" << t.skipped << " pairs need m > 240), sweep "
       << cdc::format_decimal(t.seconds, 3) << " s";
    if (t.wrong) os << "; first: " << t.first_wrong;
    return {t.wrong == 0 && t.runs > 0 && t.seconds < 120, os.str()};
}

Verdict ac3() {
    const auto& t = sweep();
    std::ostringstream os;
    os << t.load_mismatch << " of " << t.runs << " runs differ";
    if (t.load_mismatch) os << "; first: " << t.first_mismatch;
    return {t.load_mismatch == 0 && t.runs > 0, os.str()};
}

Verdict ac4() {
    long instances = 0, dominated = 0, endpoints = 0, integral_misses = 0;
    std::vector<std::string> endpoint_misses;
    for (int K = 4; K <= 8; ++K)
        for (int a = 1; a <= K; ++a) {
            SystemParams base{K, K, Rational(a, K), 1, 4, 1, 16};
            for (int q = base.min_q(); q <= K; ++q) {
                SystemParams p = base.with_q(q);
                p.N = 3 * q;
                const auto best = cdc::optimize_rates(p);
                const auto b = cdc::baseline_rates(p);
                if (!best || !cdc::check_feasible(p, b).ok()) {
                    ++dominated;  // counted as a failure below
                    continue;
                }
                ++instances;
                const Rational lo = best->load.total, hi = cdc::load_breakdown(p, b).total;
                if (lo > hi) ++dominated;
                if (q == base.min_q() || q == K) {
                    ++endpoints;
                    if (lo != hi) {
                        if (cdc::is_integer(p.mu * q)) ++integral_misses;
                        std::ostringstream os;
                        os << "K=" << K << " mu=" << cdc::exact_string(p.mu) << " q=" << q << " (" << cdc::exact_string(lo) << " vs " << cdc::exact_string(hi) << ")";
                        endpoint_misses.push_back(os.str());
                    }
                }
            }
        }
    std::ostringstream os;
    os << instances << " instances, " << dominated << " dominance violations, " << endpoint_misses.size() << " of " << endpoints
       << " endpoints unequal (" << integral_misses << " with integral q*mu)";
    for (std::size_t i = 0; i < endpoint_misses.size(); ++i) os << (i ? ", " : ": ") << endpoint_misses[i];
    return {dominated == 0 && endpoint_misses.empty(), os.str()};
}

Verdict ac5() {
    const auto rows = cdc::tradeoff_curve(SystemParams{100, 100, Rational(1, 2), 1, 1, 840, 16});
    auto nearest = [&](double target) -> const cdc::TradeoffRow& {
        const cdc::TradeoffRow* best = nullptr;
        for (const auto& r : rows)
            if (!best || std::abs(r.latency - target) < std::abs(best->latency - target)) best = &r;
        return *best;
    };
    std::ostringstream os;
    bool ok = true;
    for (auto [target, lo, hi] : {std::tuple{600.0, 1.6, 2.4}, std::tuple{500.0, 2.0, 3.0}}) {
        const auto& r = nearest(target);
        if (!r.optimized || !r.baseline) return {false, "no feasible pair near D=" + cdc::format_decimal(target)};
        const double ratio = cdc::to_double(r.baseline->load.total / r.optimized->load.total);
        ok = ok && ratio >= lo && ratio <= hi;
        os << "D~" << target << ": q=" << r.q << " D=" << cdc::format_decimal(r.latency, 5) << " ratio " << cdc::format_decimal(ratio, 4) << " in ["
           << lo << ", " << hi << "]; ";
    }
    os << rows.size() << " rows";
    return {ok, os.str()};
}

Verdict ac6() {
    long checked = 0, bad = 0;
    std::string first;
    for (int K = 1; K <= 30; ++K)
        for (int a = 1; a <= K; ++a) {
            SystemParams base{K, K, Rational(a, K), 1, 1, 1, 16};
            for (int q = base.min_q(); q <= K; ++q) {
                const auto p = base.with_q(q);
                ++checked;
                if (!cdc::check_feasible(p, cdc::baseline_rates(p)).ok() && bad++ == 0)
                    first = "K=" + std::to_string(K) + " mu=" + std::to_string(a) + "/" + std::to_string(K) + " q=" + std::to_string(q);
            }
        }
    return {bad == 0, std::to_string(checked) + " instances, " + std::to_string(bad) + " infeasible" + (bad ? "; first: " + first : "")};
}

Verdict ac7() {
    const SystemParams p{6, 6, Rational(1, 2), 1, 1, 12, 16};
    std::ostringstream os;
    bool ok = std::abs(cdc::latency(p, 4) - 11.7) < 1e-12;
    os << "D(4)=" << cdc::format_decimal(cdc::latency(p, 4)) << "; max rel err ";
    double worst = 0;
    for (int q = 1; q <= 6; ++q) {
        const auto est = cdc::monte_carlo_latency(p, q, 100000, 2024 + q);
        worst = std::max(worst, est.relative_error);
    }
    ok = ok && worst < 0.02;
    os << cdc::format_decimal(worst, 3) << " (limit 0.02)";
    return {ok, os.str()};
}

// For a fixed Q and k in Q: rows not at k whose holders meet Q in exactly j
// servers, enumerated subset by subset.
Verdict ac8() {
    long compared = 0, bad = 0;
    std::string first;
    for (int K = 2; K <= 8; ++K)
        for (int a = 1; a <= K; ++a) {
            SystemParams base{K, K, Rational(a, K), 1, 1, 1, 16};
            for (int q = base.min_q(); q <= K; ++q) {
                for (const auto& r : cdc::enumerate_feasible(base.with_q(q))) {
                    SystemParams p = base.with_q(q);
                    p.N = 2 * q;
                    p.m = q * cdc::binomial_i64(K, r.r2);
                    const auto lb = cdc::load_breakdown(p, r);
                    const std::int64_t block = r.l;  // r1 m / C(K, r2)
                    for (int mask = 0; mask < (1 << K); ++mask) {
                        if (std::popcount(static_cast<unsigned>(mask)) != q) continue;
                        for (int k = 0; k < K; ++k) {
                            if (!(mask >> k & 1)) continue;
                            std::vector<std::int64_t> need(K + 1, 0);
                            for (int s = 0; s < (1 << K); ++s) {
                                if (std::popcount(static_cast<unsigned>(s)) != r.r2 || (s >> k & 1)) continue;
                                need[std::popcount(static_cast<unsigned>(s & mask))] += block * (p.N / q);
                            }
                            for (int j = 1; j <= q - 1; ++j) {
                                const Rational bj = lb.b.count(j) ? lb.b.at(j) : Rational(0);
                                ++compared;
                                if (bj * p.m * p.N / q != need[j] && bad++ == 0)
                                    first = "K=" + std::to_string(K) + " q=" + std::to_string(q) + " l=" + std::to_string(r.l) + " r2=" +
                                            std::to_string(r.r2) + " j=" + std::to_string(j);
                            }
                        }
                    }
                }
            }
        }
    return {bad == 0 && compared > 0, std::to_string(compared) + " class counts compared, " + std::to_string(bad) + " differ" + (bad ? "; first: " + first : "")};
}

}  // namespace

int main() {
    report("AC1", "worked example loads and message counts", ac1);
    report("AC2", "end-to-end Y = AX sweep, K = 4..8", ac2);
    report("AC3", "counted load equals analytic load on the sweep", ac3);
    report("AC4", "dominance and endpoint equality", ac4);
    report("AC5", "K = 100 load gap near D = 600 and D = 500", ac5);
    report("AC6", "baseline pair always feasible, K <= 30", ac6);
    report("AC7", "Monte Carlo latency within 2%, K = 6", ac7);
    report("AC8", "redundancy terms against subset enumeration, K <= 8", ac8);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
