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
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cdc/error.hpp"
#include "cdc/field.hpp"
#include "cdc/placement.hpp"
#include "cdc/random.hpp"
#include "cdc/rational.hpp"
#include "cdc/scheme.hpp"
#include "cdc/shuffle.hpp"

namespace cdc {

/// How the non-straggling set is chosen: i.i.d. shifted-exponential map
/// times (shift mu N, mean 2 mu N), or a fixed set.
struct StragglerModel {
    enum class Kind { ShiftedExponential, FixedSet };

    Kind kind = Kind::ShiftedExponential;
    std::uint64_t seed = 0;
    ServerSet fixed;

    static StragglerModel shifted_exponential(std::uint64_t seed) { return {Kind::ShiftedExponential, seed, {}}; }
    static StragglerModel fixed_set(ServerSet servers) { return {Kind::FixedSet, 0, std::move(servers)}; }

    static double shift(const SystemParams& p) { return to_double(p.mu * p.N); }
    static double mean(const SystemParams& p) { return 2.0 * shift(p); }
};

/// Inverse CDF of F(t) = 1 - exp(-(t/shift - 1)).
inline double draw_finish_time(Xoshiro256& rng, double shift) { return shift * (1.0 - std::log(rng.uniform_open_closed())); }

struct StragglerSample {
    ServerSet non_stragglers;
    std::vector<double> finish_times;      // by server id - 1; empty for a fixed set
    std::optional<double> qth_finish_time;  // when the q-th server completed
};

inline StragglerSample sample_stragglers(const SystemParams& p, const StragglerModel& model) {
    StragglerSample out;
    if (model.kind == StragglerModel::Kind::FixedSet) {
        out.non_stragglers = model.fixed;
        std::sort(out.non_stragglers.begin(), out.non_stragglers.end());
        check_server_set(p, out.non_stragglers);
        return out;
    }
    Xoshiro256 rng(model.seed);
    const double shift = StragglerModel::shift(p);
    out.finish_times.resize(p.K);
    for (auto& t : out.finish_times) t = draw_finish_time(rng, shift);
    std::vector<int> order(p.K);
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return out.finish_times[a - 1] < out.finish_times[b - 1]; });
    out.non_stragglers.assign(order.begin(), order.begin() + p.q);
    out.qth_finish_time = out.finish_times[order[p.q - 1] - 1];
    std::sort(out.non_stragglers.begin(), out.non_stragglers.end());
    return out;
}

/// Every server's IVs c_row . x_col, for rows it stores and all N columns.
/// Indexed by server id - 1.
inline std::vector<IvStore> map_phase(const PlacementMap& pm, const FieldMatrix& coded, const FieldMatrix& x) {
    if (coded.rows != pm.coded_rows()) throw InvalidArgument("map phase: coded matrix has " + std::to_string(coded.rows) + " rows, placement expects " + std::to_string(pm.coded_rows()));
    if (coded.cols != x.rows) throw InvalidArgument("map phase: coded rows and X do not conform");
    const auto& f = GaloisField::get(pm.params.w);
    std::vector<IvStore> stores;
    stores.reserve(pm.params.K);
    for (int k = 1; k <= pm.params.K; ++k) {
        IvStore store(k, pm.coded_rows(), server_rows(pm, k), x.cols);
        for (std::size_t slot = 0; slot < store.rows().size(); ++slot) {
            auto dst = store.row_values(slot);
            const auto c = coded.row(store.rows()[slot]);
            for (std::size_t j = 0; j < c.size(); ++j) f.mul_add_row(dst, x.row(j), c[j]);
        }
        stores.push_back(std::move(store));
    }
    return stores;
}

/// Everything about an instance that does not depend on which servers straggle.
struct Workload {
    SystemParams params;
    RatePair rates;
    GeneratorMatrix generator;
    FieldMatrix a;
    FieldMatrix x;
    FieldMatrix y;  // A X, ground truth
    FieldMatrix coded;
    PlacementMap placement;
    std::vector<IvStore> stores;
    LoadBreakdown analytic;
};

inline FieldMatrix random_matrix(Xoshiro256& rng, std::size_t rows, std::size_t cols, int width) {
    FieldMatrix out(rows, cols);
    for (auto& e : out.entries) e = static_cast<FieldElement>(rng.bits(width));
    return out;
}

/// Draws A then X (row-major, uniform over the field) from `seed`, encodes,
/// places and maps.
inline Workload prepare_workload(const SystemParams& p, const RatePair& r, std::uint64_t seed) {
    p.validate();
    PlacementMap pm = partition_rows(p, r);
    GeneratorMatrix g = make_generator(static_cast<std::size_t>(p.m), r.r1(p.q), p.w);
    Xoshiro256 rng(seed);
    FieldMatrix a = random_matrix(rng, p.m, p.n, p.w);
    FieldMatrix x = random_matrix(rng, p.n, p.N, p.w);
    const auto& f = GaloisField::get(p.w);
    FieldMatrix y = multiply(f, a, x);
    FieldMatrix coded = encode(g, a);
    std::vector<IvStore> stores = map_phase(pm, coded, x);
    LoadBreakdown lb = load_breakdown(p, r);
    return Workload{p, r, std::move(g), std::move(a), std::move(x), std::move(y), std::move(coded), std::move(pm), std::move(stores), std::move(lb)};
}

struct PhaseCount {
    int gain = 0;
    bool residual = false;
    std::size_t messages = 0;
};

struct RunReport {
    SystemParams params;
    RatePair rates;
    ServerSet non_stragglers;
    std::size_t message_count = 0;
    std::vector<PhaseCount> phases;
    Rational counted_load;
    Rational analytic_load;
    bool verified = false;
    std::optional<double> empirical_latency;
    std::vector<FieldElement> payloads;
};

/// Shuffle and reduce for one non-straggler set; verifies Y = A X entrywise.
inline RunReport execute(const Workload& wl, const ServerSet& servers, std::vector<TranscriptEntry>* transcript = nullptr) {
    const SystemParams& p = wl.params;
    const ReduceAssignment ra = assign_reduce(p, servers);
    const ShufflePlan plan = build_plan(p, wl.rates, wl.placement, servers, ra);
    ShuffleOutcome outcome = execute_plan(plan, wl.stores, ra, transcript);

    RunReport rep;
    rep.params = p;
    rep.rates = wl.rates;
    rep.non_stragglers = servers;
    rep.message_count = plan.message_count();
    for (const auto& ph : plan.phases) rep.phases.push_back({ph.gain, ph.residual, ph.message_count()});
    rep.counted_load = plan_load(plan, p.m);
    rep.analytic_load = wl.analytic.total;
    rep.payloads = std::move(outcome.payloads);

    const auto m = static_cast<std::size_t>(p.m);
    bool all_equal = true;
    for (std::size_t a = 0; a < servers.size(); ++a) {
        const int k = servers[a];
        const IvStore& local = wl.stores[k - 1];
        const std::size_t base = ra.first_column(k);
        // (row, value) per assigned column: local IVs first, then received.
        std::vector<std::vector<std::pair<std::size_t, FieldElement>>> gathered(ra.per_server);
        for (std::size_t t = 0; t < ra.per_server; ++t)
            for (std::size_t row : local.rows()) gathered[t].emplace_back(row, local.value(row, base + t));
        for (const auto& iv : outcome.received[a]) {
            if (iv.column < base || iv.column >= base + ra.per_server)
                throw DecodeError("reduce phase: server " + std::to_string(k) + " received column " + std::to_string(iv.column) + " it does not reduce");
            gathered[iv.column - base].emplace_back(iv.row, iv.value);
        }

        std::map<std::vector<std::size_t>, std::vector<std::size_t>> by_rows;  // row set -> column offsets
        for (std::size_t t = 0; t < ra.per_server; ++t) {
            auto& g = gathered[t];
            std::sort(g.begin(), g.end());
            for (std::size_t i = 1; i < g.size(); ++i)
                if (g[i].first == g[i - 1].first)
                    throw DecodeError("reduce phase: server " + std::to_string(k) + " got row " + std::to_string(g[i].first) + " twice for column " + std::to_string(base + t));
            if (g.size() != m)
                throw DecodeError("reduce phase: server " + std::to_string(k) + " holds " + std::to_string(g.size()) + " coded IVs for column " +
                                  std::to_string(base + t) + ", expected " + std::to_string(m));
            std::vector<std::size_t> rows(g.size());
            std::transform(g.begin(), g.end(), rows.begin(), [](const auto& e) { return e.first; });
            by_rows[std::move(rows)].push_back(t);
        }
        for (const auto& [rows, offsets] : by_rows) {
            FieldMatrix values(rows.size(), offsets.size());
            for (std::size_t c = 0; c < offsets.size(); ++c)
                for (std::size_t i = 0; i < rows.size(); ++i) values.at(i, c) = gathered[offsets[c]][i].second;
            FieldMatrix decoded;
            try {
                decoded = decode_rows(wl.generator, rows, values);
            } catch (const Error& e) {
                throw DecodeError("reduce phase: server " + std::to_string(k) + ": " + e.what());
            }
            for (std::size_t c = 0; c < offsets.size(); ++c)
                for (std::size_t i = 0; i < m; ++i)
                    if (decoded.at(i, c) != wl.y.at(i, base + offsets[c])) all_equal = false;
        }
    }
    rep.verified = all_equal;
    return rep;
}

inline RunReport run(const SystemParams& p, const RatePair& r, const StragglerModel& model, std::uint64_t seed,
                     std::vector<TranscriptEntry>* transcript = nullptr) {
    const Workload wl = prepare_workload(p, r, seed);
    const StragglerSample sample = sample_stragglers(p, model);
    RunReport rep = execute(wl, sample.non_stragglers, transcript);
    rep.empirical_latency = sample.qth_finish_time;
    return rep;
}

struct LatencyEstimate {
    double empirical = 0.0;
    double analytic = 0.0;
    double relative_error = 0.0;
};

/// Mean of the q-th smallest of K shifted-exponential finish times.
inline LatencyEstimate monte_carlo_latency(const SystemParams& p, int q, std::int64_t trials, std::uint64_t seed) {
    if (trials < 1) throw InvalidArgument("trials must be at least 1");
    if (q < 1 || q > p.K) throw InvalidArgument("q must lie in [1, K]");
    Xoshiro256 rng(seed);
    const double shift = StragglerModel::shift(p);
    std::vector<double> times(p.K);
    double sum = 0.0;
    for (std::int64_t t = 0; t < trials; ++t) {
        for (auto& v : times) v = draw_finish_time(rng, shift);
        std::nth_element(times.begin(), times.begin() + (q - 1), times.end());
        sum += times[q - 1];
    }
    LatencyEstimate est;
    est.empirical = sum / static_cast<double>(trials);
    est.analytic = latency(p, q);
    est.relative_error = std::abs(est.empirical - est.analytic) / est.analytic;
    return est;
}

}  // namespace cdc
