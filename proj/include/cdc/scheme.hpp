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

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdc/combinatorics.hpp"
#include "cdc/error.hpp"
#include "cdc/rational.hpp"

namespace cdc {

/// One problem instance: K servers of which q finish the map phase, each
/// storing a fraction mu of A (m x n), computing Y = A X with X n x N over
/// GF(2^w).
struct SystemParams {
    int K = 0;
    int q = 0;
    Rational mu;
    std::int64_t m = 1;
    std::int64_t n = 1;
    std::int64_t N = 1;
    int w = 16;

    /// Smallest admissible q, ceil(1/mu).
    int min_q() const { return static_cast<int>(to_int64(ceil_of(Rational(1) / mu))); }

    SystemParams with_q(int new_q) const {
        SystemParams p = *this;
        p.q = new_q;
        return p;
    }

    void validate() const {
        if (K < 1 || K > kMaxServers) throw InvalidArgument("K must be in [1, " + std::to_string(kMaxServers) + "]");
        if (mu * K < 1 || mu > 1) throw InvalidArgument("mu must lie in [1/K, 1], got " + exact_string(mu));
        if (q < min_q() || q > K)
            throw InvalidArgument("q must lie in [ceil(1/mu), K] = [" + std::to_string(min_q()) + ", " + std::to_string(K) + "], got " + std::to_string(q));
        if (m < 1 || n < 1 || N < 1) throw InvalidArgument("m, n and N must be positive");
        if (w != 8 && w != 16) throw InvalidArgument("field width must be 8 or 16");
    }
};

/// MDS rate r1 = l / q and repetition rate r2.
struct RatePair {
    int l = 0;
    int r2 = 0;

    Rational r1(int q) const { return Rational(l, q); }

    bool operator==(const RatePair&) const = default;
};

enum class Condition { Domain, Storage, Reconstruction };

/// Short labels "12a", "12b", "12c" are the identifiers used in diagnostics.
inline const char* condition_label(Condition c) {
    switch (c) {
        case Condition::Domain: return "12a";
        case Condition::Storage: return "12b";
        case Condition::Reconstruction: return "12c";
    }
    return "?";
}

inline const char* condition_description(Condition c) {
    switch (c) {
        case Condition::Domain: return "rate domain: q <= l <= K and floor(q mu) <= r2 <= floor(K mu)";
        case Condition::Storage: return "storage: r1 r2 <= K mu";
        case Condition::Reconstruction: return "reconstruction: C(K,r2) - C(K-q,r2) >= C(K,r2) / r1";
    }
    return "?";
}

struct Feasibility {
    std::vector<Condition> violated;

    bool ok() const noexcept { return violated.empty(); }

    bool violates(Condition c) const { return std::find(violated.begin(), violated.end(), c) != violated.end(); }

    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        for (auto c : violated) out.emplace_back(condition_label(c));
        return out;
    }

    std::string describe() const {
        if (ok()) return "ok";
        std::string s;
        for (auto c : violated) {
            if (!s.empty()) s += "; ";
            s += std::string("violates ") + condition_label(c) + " (" + condition_description(c) + ")";
        }
        return s;
    }
};

inline Feasibility check_feasible(const SystemParams& p, const RatePair& r) {
    Feasibility f;
    const BigInt floor_q_mu = floor_of(p.mu * p.q);
    const BigInt floor_k_mu = floor_of(p.mu * p.K);
    if (r.l < p.q || r.l > p.K || r.r2 < floor_q_mu || r.r2 > floor_k_mu) f.violated.push_back(Condition::Domain);
    // r1 r2 <= K mu  <=>  l r2 <= q K mu
    if (Rational(r.l) * r.r2 > p.mu * p.q * p.K) f.violated.push_back(Condition::Storage);
    // C(K,r2) - C(K-q,r2) >= (q/l) C(K,r2)
    if (r.l <= 0 || BigInt(r.l) * (binomial(p.K, r.r2) - binomial(p.K - p.q, r.r2)) < BigInt(p.q) * binomial(p.K, r.r2))
        f.violated.push_back(Condition::Reconstruction);
    return f;
}

/// r1 = K/q and r2 = floor(q mu).
inline RatePair baseline_rates(const SystemParams& p) {
    return RatePair{p.K, static_cast<int>(to_int64(floor_of(p.mu * p.q)))};
}

inline std::vector<RatePair> enumerate_feasible(const SystemParams& p) {
    const int r2_lo = static_cast<int>(to_int64(floor_of(p.mu * p.q)));
    const int r2_hi = static_cast<int>(to_int64(floor_of(p.mu * p.K)));
    std::vector<RatePair> out;
    for (int l = p.q; l <= p.K; ++l) {
        for (int r2 = r2_lo; r2 <= r2_hi; ++r2) {
            if (check_feasible(p, {l, r2}).ok()) out.push_back({l, r2});
        }
    }
    return out;
}

/// Per-redundancy terms of the achievable load for one rate pair.
struct LoadBreakdown {
    int s_max = 0;
    int s_min = 0;
    int s_q = 0;
    Rational needed_fraction;           // 1 - r1 r2 / K
    std::map<int, Rational> b;          // B_j, j in [s_min, s_max]
    std::map<int, Rational> phase_loads;  // gain j -> N B_j / j, j in [s_q, s_max]
    Rational residual_load;             // carried by gain s_q - 1
    Rational total;

    /// Sum of B_j over the regular phases [s_q, s_max].
    Rational delivered_fraction() const {
        Rational s = 0;
        for (const auto& [j, v] : b)
            if (j >= s_q) s += v;
        return s;
    }

    bool has_residual() const { return residual_load != 0; }
    int residual_gain() const { return s_q - 1; }
};

inline LoadBreakdown load_breakdown(const SystemParams& p, const RatePair& r) {
    if (auto f = check_feasible(p, r); !f.ok()) throw InfeasibleError("infeasible rate pair: " + f.describe(), f.labels());

    LoadBreakdown lb;
    lb.s_max = std::min(p.q - 1, r.r2);
    lb.s_min = std::max(r.r2 - (p.K - p.q), 1);

    // B_j = l C(q-1,j) C(K-q,r2-j) / (q C(K,r2)); numerators share one denominator.
    const BigInt den = BigInt(p.q) * binomial(p.K, r.r2);
    std::map<int, BigInt> num;
    for (int j = lb.s_min; j <= lb.s_max; ++j) num[j] = BigInt(r.l) * binomial(p.q - 1, j) * binomial(p.K - p.q, r.r2 - j);

    // sum/den <= 1 - l r2/(q K)  <=>  q K sum <= (q K - l r2) den
    const BigInt qk = BigInt(p.q) * p.K;
    const BigInt rhs = (qk - BigInt(r.l) * r.r2) * den;
    lb.s_q = lb.s_max + 1;
    BigInt running = 0;
    for (int s = lb.s_max; s >= lb.s_min; --s) {
        running += num[s];
        if (qk * running > rhs) break;
        lb.s_q = s;
    }

    lb.needed_fraction = Rational(1) - Rational(BigInt(r.l) * r.r2, qk);
    Rational delivered = 0;
    for (int j = lb.s_min; j <= lb.s_max; ++j) {
        Rational bj(num[j], den);
        lb.b[j] = bj;
        if (j >= lb.s_q) {
            delivered += bj;
            lb.phase_loads[j] = bj * p.N / j;
            lb.total += lb.phase_loads[j];
        }
    }
    const Rational remainder = lb.needed_fraction - delivered;
    if (lb.s_q == lb.s_min) {
        // Every IV reachable inside Q is consumed by the regular phases.
        if (remainder != 0) throw std::logic_error("nonzero residual with s_q = s_min; feasibility check is inconsistent");
        lb.residual_load = 0;
    } else {
        lb.residual_load = remainder * p.N / (lb.s_q - 1);
    }
    lb.total += lb.residual_load;
    return lb;
}

struct RateChoice {
    RatePair rates;
    LoadBreakdown load;
};

/// Minimum-load feasible pair; ties go to smaller l, then larger r2.
inline std::optional<RateChoice> optimize_rates(const SystemParams& p) {
    std::optional<RateChoice> best;
    for (const auto& r : enumerate_feasible(p)) {
        LoadBreakdown lb = load_breakdown(p, r);
        if (!best || lb.total < best->load.total ||
            (lb.total == best->load.total && (r.l < best->rates.l || (r.l == best->rates.l && r.r2 > best->rates.r2)))) {
            best = RateChoice{r, std::move(lb)};
        }
    }
    return best;
}

/// Expected time until q of K servers finish under shifted-exponential map
/// times with shift mu N and mean 2 mu N.
inline double latency(const SystemParams& p, int q) {
    if (q < 1 || q > p.K) throw InvalidArgument("latency: q must lie in [1, K]");
    double harmonic = 0.0;
    for (int j = p.K - q + 1; j <= p.K; ++j) harmonic += 1.0 / j;
    return to_double(p.mu * p.N) * (1.0 + harmonic);
}

struct TradeoffRow {
    int q = 0;
    double latency = 0.0;
    std::optional<RateChoice> optimized;  // empty when no pair is feasible
    std::optional<RateChoice> baseline;
};

/// One row per q in [ceil(1/mu), K].
inline std::vector<TradeoffRow> tradeoff_curve(const SystemParams& p) {
    std::vector<TradeoffRow> rows;
    for (int q = p.min_q(); q <= p.K; ++q) {
        const SystemParams pq = p.with_q(q);
        TradeoffRow row;
        row.q = q;
        row.latency = latency(pq, q);
        row.optimized = optimize_rates(pq);
        const RatePair base = baseline_rates(pq);
        if (check_feasible(pq, base).ok()) row.baseline = RateChoice{base, load_breakdown(pq, base)};
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace cdc
