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

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cdc/engine.hpp"
#include "cdc/field.hpp"
#include "cdc/placement.hpp"
#include "cdc/rational.hpp"
#include "cdc/scheme.hpp"
#include "cdc/shuffle.hpp"

namespace cdc {

using Json = nlohmann::ordered_json;

/// obj[key] = 12-significant-digit decimal, plus exact key_num / key_den strings.
inline void put_rational(Json& obj, const std::string& key, const Rational& r) {
    obj[key] = round_significant(to_double(r));
    obj[key + "_num"] = numerator_of(r).str();
    obj[key + "_den"] = denominator_of(r).str();
}

inline Json to_json(const SystemParams& p) {
    return Json{{"K", p.K}, {"q", p.q}, {"mu", exact_string(p.mu)}, {"m", p.m}, {"n", p.n}, {"N", p.N}, {"w", p.w}};
}

inline Json to_json(const RatePair& r, int q) { return Json{{"l", r.l}, {"r1", exact_string(r.r1(q))}, {"r2", r.r2}}; }

inline Json to_json(const LoadBreakdown& lb) {
    Json j{{"s_max", lb.s_max}, {"s_min", lb.s_min}, {"s_q", lb.s_q}};
    Json b = Json::object();
    for (const auto& [k, v] : lb.b) b[std::to_string(k)] = exact_string(v);
    j["B"] = std::move(b);
    Json phases = Json::object();
    for (const auto& [k, v] : lb.phase_loads) phases[std::to_string(k)] = exact_string(v);
    j["phase_loads"] = std::move(phases);
    put_rational(j, "residual_load", lb.residual_load);
    put_rational(j, "total", lb.total);
    return j;
}

inline Json to_json(const PlacementMap& pm) {
    Json blocks = Json::array();
    for (const auto& b : pm.blocks) blocks.push_back(Json{{"subset", members_of(b.subset)}, {"row_start", b.row_start}, {"row_end", b.row_end}});
    return Json{{"params", to_json(pm.params)}, {"rates", to_json(pm.rates, pm.params.q)}, {"block_size", pm.block_size}, {"blocks", std::move(blocks)}};
}

/// Components as [row, column, target]; rows and columns 0-based, servers 1-based.
inline Json components_json(const std::vector<Component>& comps) {
    Json out = Json::array();
    for (const auto& c : comps) out.push_back(Json::array({c.row, c.column, c.target}));
    return out;
}

inline Json to_json(const ShufflePlan& plan) {
    Json phases = Json::array();
    for (const auto& ph : plan.phases) {
        Json groups = Json::array();
        for (const auto& g : ph.groups) {
            Json msgs = Json::array();
            for (const auto& msg : g.messages) msgs.push_back(Json{{"sender", msg.sender}, {"components", components_json(msg.components)}});
            groups.push_back(Json{{"members", members_of(g.members)}, {"messages", std::move(msgs)}});
        }
        phases.push_back(Json{{"gain", ph.gain}, {"residual", ph.residual}, {"message_count", ph.message_count()}, {"groups", std::move(groups)}});
    }
    return Json{{"message_count", plan.message_count()}, {"phases", std::move(phases)}};
}

inline Json to_json(const TranscriptEntry& e) {
    return Json{{"phase", e.gain}, {"residual", e.residual}, {"group", members_of(e.group)}, {"sender", e.sender},
                {"components", components_json(e.components)}, {"payload", e.payload}};
}

/// One JSON object per line.
inline void write_transcript(std::ostream& os, const std::vector<TranscriptEntry>& entries) {
    for (const auto& e : entries) os << to_json(e).dump() << '\n';
}

inline Json to_json(const RunReport& rep) {
    Json j{{"params", to_json(rep.params)}, {"rates", to_json(rep.rates, rep.params.q)}, {"Q", rep.non_stragglers}, {"message_count", rep.message_count}};
    Json phases = Json::array();
    for (const auto& ph : rep.phases) phases.push_back(Json{{"gain", ph.gain}, {"residual", ph.residual}, {"messages", ph.messages}});
    j["phases"] = std::move(phases);
    put_rational(j, "counted_load", rep.counted_load);
    put_rational(j, "analytic_load", rep.analytic_load);
    j["verified"] = rep.verified;
    j["empirical_latency"] = rep.empirical_latency ? Json(round_significant(*rep.empirical_latency)) : Json(nullptr);
    return j;
}

inline constexpr const char* kTradeoffCsvHeader = "q,D,L_opt,L_base,l_opt,r2_opt";

inline void write_tradeoff_csv(std::ostream& os, const std::vector<TradeoffRow>& rows) {
    os << kTradeoffCsvHeader << '\n';
    for (const auto& r : rows) {
        if (!r.optimized || !r.baseline) {
            os << "# q=" << r.q << ": no feasible rate pair, skipped\n";
            continue;
        }
        os << r.q << ',' << format_decimal(r.latency) << ',' << format_decimal(r.optimized->load.total) << ','
           << format_decimal(r.baseline->load.total) << ',' << r.optimized->rates.l << ',' << r.optimized->rates.r2 << '\n';
    }
}

inline Json tradeoff_json(const std::vector<TradeoffRow>& rows) {
    Json out = Json::array();
    for (const auto& r : rows) {
        if (!r.optimized || !r.baseline) continue;
        Json j{{"q", r.q}, {"D", round_significant(r.latency)}};
        put_rational(j, "L_opt", r.optimized->load.total);
        put_rational(j, "L_base", r.baseline->load.total);
        j["l_opt"] = r.optimized->rates.l;
        j["r2_opt"] = r.optimized->rates.r2;
        out.push_back(std::move(j));
    }
    return out;
}

/// Row-major, each element as a w-bit little-endian unsigned integer.
inline std::vector<std::uint8_t> serialize_matrix(const FieldMatrix& mat, int width) {
    check_width(width);
    std::vector<std::uint8_t> out;
    out.reserve(mat.entries.size() * (width / 8));
    for (FieldElement e : mat.entries) {
        out.push_back(static_cast<std::uint8_t>(e & 0xFF));
        if (width == 16) out.push_back(static_cast<std::uint8_t>(e >> 8));
    }
    return out;
}

inline FieldMatrix deserialize_matrix(const std::vector<std::uint8_t>& bytes, std::size_t rows, std::size_t cols, int width) {
    check_width(width);
    const std::size_t step = width / 8;
    if (bytes.size() != rows * cols * step) throw InvalidArgument("matrix byte length does not match its shape");
    FieldMatrix mat(rows, cols);
    for (std::size_t i = 0; i < mat.entries.size(); ++i) {
        FieldElement e = bytes[i * step];
        if (width == 16) e = static_cast<FieldElement>(e | (bytes[i * step + 1] << 8));
        mat.entries[i] = e;
    }
    return mat;
}

}  // namespace cdc
