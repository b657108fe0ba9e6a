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
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cdc/combinatorics.hpp"
#include "cdc/error.hpp"
#include "cdc/field.hpp"
#include "cdc/placement.hpp"
#include "cdc/scheme.hpp"

namespace cdc {

/// Non-straggling servers, ascending 1-based ids.
using ServerSet = std::vector<int>;

inline void check_server_set(const SystemParams& p, const ServerSet& servers) {
    if (static_cast<int>(servers.size()) != p.q)
        throw InvalidArgument("expected " + std::to_string(p.q) + " non-straggling servers, got " + std::to_string(servers.size()));
    for (std::size_t i = 0; i < servers.size(); ++i) {
        if (servers[i] < 1 || servers[i] > p.K) throw InvalidArgument("server id " + std::to_string(servers[i]) + " outside [1, K]");
        if (i > 0 && servers[i] <= servers[i - 1]) throw InvalidArgument("server set must be strictly ascending");
    }
}

/// The a-th server of Q reduces columns [a N/q, (a+1) N/q).
struct ReduceAssignment {
    ServerSet servers;
    std::size_t per_server = 0;

    std::size_t index_of(int server) const {
        auto it = std::lower_bound(servers.begin(), servers.end(), server);
        if (it == servers.end() || *it != server) throw InvalidArgument("server " + std::to_string(server) + " reduces no columns");
        return static_cast<std::size_t>(it - servers.begin());
    }

    std::size_t first_column(int server) const { return index_of(server) * per_server; }

    std::vector<std::size_t> columns_of(int server) const {
        std::vector<std::size_t> cols(per_server);
        const std::size_t base = first_column(server);
        for (std::size_t t = 0; t < per_server; ++t) cols[t] = base + t;
        return cols;
    }

    int owner_of(std::size_t column) const { return servers.at(column / per_server); }
};

inline ReduceAssignment assign_reduce(const SystemParams& p, const ServerSet& servers) {
    check_server_set(p, servers);
    if (p.N % p.q != 0) throw DivisibilityError("q = " + std::to_string(p.q) + " does not divide N = " + std::to_string(p.N), "1",
                                                std::to_string(std::int64_t{p.q} / std::gcd(std::int64_t{p.q}, p.N)));
    return ReduceAssignment{servers, static_cast<std::size_t>(p.N / p.q)};
}

/// IVs computed by one server: c_row . x_col for each stored row and every column.
class IvStore {
public:
    IvStore() = default;
    IvStore(int server, std::size_t coded_rows, std::vector<std::size_t> rows, std::size_t columns)
        : server_(server), columns_(columns), slot_of_row_(coded_rows, -1), rows_(std::move(rows)), values_(rows_.size() * columns, 0) {
        for (std::size_t s = 0; s < rows_.size(); ++s) slot_of_row_[rows_[s]] = static_cast<std::int64_t>(s);
    }

    int server() const noexcept { return server_; }
    std::size_t columns() const noexcept { return columns_; }
    const std::vector<std::size_t>& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool has(std::size_t row) const { return row < slot_of_row_.size() && slot_of_row_[row] >= 0; }

    FieldElement value(std::size_t row, std::size_t column) const {
        if (!has(row) || column >= columns_)
            throw PlanError("server " + std::to_string(server_) + " has no IV for row " + std::to_string(row) + ", column " + std::to_string(column));
        return values_[static_cast<std::size_t>(slot_of_row_[row]) * columns_ + column];
    }

    void set(std::size_t row, std::size_t column, FieldElement v) {
        values_[static_cast<std::size_t>(slot_of_row_[row]) * columns_ + column] = v;
    }

    std::span<FieldElement> row_values(std::size_t slot) { return {values_.data() + slot * columns_, columns_}; }

private:
    int server_ = 0;
    std::size_t columns_ = 0;
    std::vector<std::int64_t> slot_of_row_;
    std::vector<std::size_t> rows_;
    std::vector<FieldElement> values_;
};

struct Component {
    std::size_t row = 0;
    std::size_t column = 0;
    int target = 0;

    bool operator==(const Component&) const = default;
};

/// XOR of one IV per receiver in group \ {sender}.
struct MulticastMessage {
    int sender = 0;
    SubsetMask group = 0;
    std::vector<Component> components;
};

struct ShuffleGroup {
    SubsetMask members = 0;
    std::vector<MulticastMessage> messages;
};

struct ShufflePhase {
    int gain = 0;
    bool residual = false;
    std::vector<ShuffleGroup> groups;

    std::size_t message_count() const {
        std::size_t n = 0;
        for (const auto& g : groups) n += g.messages.size();
        return n;
    }
};

struct ShufflePlan {
    std::vector<ShufflePhase> phases;

    std::size_t message_count() const {
        std::size_t n = 0;
        for (const auto& ph : phases) n += ph.message_count();
        return n;
    }
};

namespace detail {

struct IvRef {
    std::size_t row;
    std::size_t column;
};

// Emits the messages of one group given each receiver's queue. The queue of
// receiver r is split into `gain` contiguous parts, part t going to the t-th
// sender of group \ {r}. Sender s then pairs the j-th entry of its part for
// every receiver into message j.
inline void emit_group(ShuffleGroup& group, int gain, const std::unordered_map<int, std::vector<IvRef>>& queues) {
    const std::vector<int> members = members_of(group.members);
    // part[s][r] = slice of r's queue delivered by s
    std::unordered_map<int, std::unordered_map<int, std::span<const IvRef>>> part;
    for (int r : members) {
        const auto& q = queues.at(r);
        if (q.size() % gain != 0)
            throw PlanError("group queue of " + std::to_string(q.size()) + " IVs for server " + std::to_string(r) + " does not split over " +
                            std::to_string(gain) + " senders");
        const std::size_t share = q.size() / gain;
        std::size_t t = 0;
        for (int s : members) {
            if (s == r) continue;
            part[s][r] = std::span<const IvRef>(q).subspan(t * share, share);
            ++t;
        }
    }
    for (int s : members) {
        std::size_t count = 0;
        bool first = true;
        for (int r : members) {
            if (r == s) continue;
            const std::size_t len = part[s][r].size();
            if (first) count = len;
            else if (len != count)
                throw PlanError("sender " + std::to_string(s) + " has unequal queues within group; multicast pairing impossible");
            first = false;
        }
        for (std::size_t j = 0; j < count; ++j) {
            MulticastMessage msg;
            msg.sender = s;
            msg.group = group.members;
            msg.components.reserve(gain);
            for (int r : members) {
                if (r == s) continue;
                const IvRef iv = part[s][r][j];
                msg.components.push_back({iv.row, iv.column, r});
            }
            group.messages.push_back(std::move(msg));
        }
    }
}

}  // namespace detail

/// Builds the phased coded-multicast plan. Regular phases run gains
/// s_max down to s_q and move every IV of that redundancy; an optional
/// residual phase with gain s_q - 1 moves the remainder.
inline ShufflePlan build_plan(const SystemParams& p, const RatePair& r, const PlacementMap& pm, const ServerSet& servers,
                              const ReduceAssignment& ra) {
    check_server_set(p, servers);
    if (ra.servers != servers) throw InvalidArgument("reduce assignment does not match the non-straggler set");
    if (auto v = divisibility_check(p, r); !v.ok) throw DivisibilityError(v.describe(), v.m_multiplier.str(), v.n_multiplier.str());
    if (!reconstructible(pm, servers)) throw PlanError("non-stragglers do not hold m distinct coded rows");

    const LoadBreakdown lb = load_breakdown(p, r);
    const SubsetMask q_mask = mask_of(servers);

    // Blocks keyed by which non-stragglers store them; vectors stay in colex order.
    std::unordered_map<SubsetMask, std::vector<std::size_t>> blocks_by_holders;
    for (std::size_t b = 0; b < pm.blocks.size(); ++b) blocks_by_holders[pm.blocks[b].subset & q_mask].push_back(b);

    auto class_rows = [&](SubsetMask holders, std::size_t limit) {
        std::vector<std::size_t> rows;
        auto it = blocks_by_holders.find(holders);
        if (it == blocks_by_holders.end()) return rows;
        for (std::size_t b : it->second) {
            for (std::size_t row = pm.blocks[b].row_start; row < pm.blocks[b].row_end && rows.size() < limit; ++row) rows.push_back(row);
        }
        return rows;
    };

    auto make_queue = [&](const std::vector<std::size_t>& rows, int receiver) {
        std::vector<detail::IvRef> q;
        q.reserve(rows.size() * ra.per_server);
        const std::size_t base = ra.first_column(receiver);
        for (std::size_t row : rows)
            for (std::size_t t = 0; t < ra.per_server; ++t) q.push_back({row, base + t});
        return q;
    };

    ShufflePlan plan;
    for (int gain = lb.s_max; gain >= lb.s_q; --gain) {
        ShufflePhase phase{gain, false, {}};
        for (SubsetMask s : colex_subsets_of(q_mask, gain + 1)) {
            std::unordered_map<int, std::vector<detail::IvRef>> queues;
            bool any = false;
            for (int recv : members_of(s)) {
                queues[recv] = make_queue(class_rows(s & ~server_bit(recv), SIZE_MAX), recv);
                any = any || !queues[recv].empty();
            }
            if (!any) continue;
            ShuffleGroup group{s, {}};
            detail::emit_group(group, gain, queues);
            phase.groups.push_back(std::move(group));
        }
        plan.phases.push_back(std::move(phase));
    }

    if (lb.has_residual()) {
        const int gain = lb.residual_gain();
        const Rational rows_needed = (lb.needed_fraction - lb.delivered_fraction()) * p.m;
        if (!is_integer(rows_needed)) throw PlanError("residual rows per column " + exact_string(rows_needed) + " not integral");
        const auto per_column = static_cast<std::size_t>(to_int64(numerator_of(rows_needed)));
        const auto groups = colex_subsets_of(q_mask, gain + 1);

        // Receiver r spreads its need over the groups containing it, round robin
        // in group order: the g-th such group supplies floor(need/G) rows, plus
        // one for the first need mod G groups.
        std::unordered_map<int, std::size_t> seen_groups;
        const std::size_t groups_per_receiver = static_cast<std::size_t>(binomial_i64(p.q - 1, gain));
        ShufflePhase phase{gain, true, {}};
        for (SubsetMask s : groups) {
            std::unordered_map<int, std::vector<detail::IvRef>> queues;
            bool any = false;
            for (int recv : members_of(s)) {
                const std::size_t g = seen_groups[recv]++;
                const std::size_t take = per_column / groups_per_receiver + (g < per_column % groups_per_receiver ? 1 : 0);
                auto rows = class_rows(s & ~server_bit(recv), take);
                if (rows.size() < take)
                    throw PlanError("residual phase: server " + std::to_string(recv) + " needs " + std::to_string(take) + " rows from a class holding " +
                                    std::to_string(rows.size()));
                queues[recv] = make_queue(rows, recv);
                any = any || !queues[recv].empty();
            }
            if (!any) continue;
            ShuffleGroup group{s, {}};
            detail::emit_group(group, gain, queues);
            phase.groups.push_back(std::move(group));
        }
        plan.phases.push_back(std::move(phase));
    }
    return plan;
}

/// XOR of the component IVs, read from the sender's store.
inline FieldElement encode_message(const MulticastMessage& msg, const IvStore& sender_store) {
    if (sender_store.server() != msg.sender)
        throw PlanError("store of server " + std::to_string(sender_store.server()) + " used to encode a message of server " + std::to_string(msg.sender));
    FieldElement payload = 0;
    for (const auto& c : msg.components) {
        if (!sender_store.has(c.row))
            throw PlanError("sender " + std::to_string(msg.sender) + " lacks row " + std::to_string(c.row) + " for its message");
        payload ^= sender_store.value(c.row, c.column);
    }
    return payload;
}

struct DecodedIv {
    std::size_t row = 0;
    std::size_t column = 0;
    FieldElement value = 0;

    bool operator==(const DecodedIv&) const = default;
};

/// Cancels every non-target component using the receiver's own IVs.
inline DecodedIv decode_message(const MulticastMessage& msg, FieldElement payload, int receiver, const IvStore& receiver_store) {
    if (receiver == msg.sender || !contains(msg.group, receiver))
        throw DecodeError("server " + std::to_string(receiver) + " is not a receiver of this message");
    const Component* mine = nullptr;
    FieldElement value = payload;
    for (const auto& c : msg.components) {
        if (c.target == receiver) {
            if (mine) throw DecodeError("message carries two components for server " + std::to_string(receiver));
            mine = &c;
            continue;
        }
        if (!receiver_store.has(c.row))
            throw DecodeError("server " + std::to_string(receiver) + " lacks side information for row " + std::to_string(c.row) + " (message from server " +
                              std::to_string(msg.sender) + ")");
        value ^= receiver_store.value(c.row, c.column);
    }
    if (!mine) throw DecodeError("message carries no component for server " + std::to_string(receiver));
    return {mine->row, mine->column, value};
}

/// Messages / m: each message is one w-bit field element.
inline Rational plan_load(const ShufflePlan& plan, std::int64_t m) {
    if (m <= 0) throw InvalidArgument("m must be positive");
    return Rational(static_cast<std::int64_t>(plan.message_count()), m);
}

/// true iff every component is missing at its target and present at every
/// other group member.
inline bool plan_decodable(const ShufflePlan& plan, const PlacementMap& pm) {
    for (const auto& ph : plan.phases)
        for (const auto& g : ph.groups)
            for (const auto& msg : g.messages)
                for (const auto& c : msg.components) {
                    for (int member : members_of(msg.group)) {
                        const bool has = pm.stores(member, c.row);
                        if (member == c.target ? has : !has) return false;
                    }
                }
    return true;
}

struct TranscriptEntry {
    int gain = 0;
    bool residual = false;
    SubsetMask group = 0;
    int sender = 0;
    std::vector<Component> components;
    FieldElement payload = 0;
};

struct ShuffleOutcome {
    /// received[a]: IVs decoded by the a-th server of Q, in arrival order.
    std::vector<std::vector<DecodedIv>> received;
    std::vector<FieldElement> payloads;  // one per message, plan order
};

/// Runs the plan as one ordered broadcast transcript. `stores` is indexed by
/// server id - 1.
inline ShuffleOutcome execute_plan(const ShufflePlan& plan, std::span<const IvStore> stores, const ReduceAssignment& ra,
                                   std::vector<TranscriptEntry>* transcript = nullptr) {
    ShuffleOutcome out;
    out.received.resize(ra.servers.size());
    out.payloads.reserve(plan.message_count());
    for (const auto& ph : plan.phases) {
        for (const auto& g : ph.groups) {
            for (const auto& msg : g.messages) {
                const FieldElement payload = encode_message(msg, stores[msg.sender - 1]);
                out.payloads.push_back(payload);
                if (transcript) transcript->push_back({ph.gain, ph.residual, msg.group, msg.sender, msg.components, payload});
                for (const auto& c : msg.components) {
                    try {
                        out.received[ra.index_of(c.target)].push_back(decode_message(msg, payload, c.target, stores[c.target - 1]));
                    } catch (const Error& e) {
                        throw DecodeError(std::string("shuffle phase gain ") + std::to_string(ph.gain) + (ph.residual ? " (residual)" : "") + ": " + e.what());
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace cdc
