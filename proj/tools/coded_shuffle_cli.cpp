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

// coded-shuffle: analytic trade-off curves and end-to-end simulation of the
// concatenated MDS + repetition scheme.
//
// Exit codes: 0 success, 2 invalid arguments, 3 infeasible configuration,
// 4 verification failure.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cdc/cdc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitUnverified = 4;

struct CliConfig {
    int K = 0;
    int q = 0;
    std::string mu;
    std::int64_t m = 0;
    std::int64_t n = 8;
    std::int64_t N = 0;
    int w = 16;
    std::optional<int> l;
    std::optional<int> r2;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> straggler_seed;
    std::int64_t trials = 0;
    std::string fixed_q;
    std::string out;
    std::string format = "csv";
    std::string transcript;
    std::string plan_out;
    std::string placement_out;
};

cdc::SystemParams params_from(const CliConfig& c) {
    cdc::SystemParams p;
    p.K = c.K;
    p.q = c.q;
    p.mu = cdc::parse_rational(c.mu);
    p.m = c.m;
    p.n = c.n;
    p.N = c.N;
    p.w = c.w;
    p.validate();
    return p;
}

cdc::ServerSet parse_server_list(const std::string& text) {
    cdc::ServerSet out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw cdc::InvalidArgument("bad server id '" + item + "' in --fixed-Q");
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Writes to --out when given, stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw cdc::InvalidArgument("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void check_format(const std::string& f) {
    if (f != "csv" && f != "json") throw cdc::InvalidArgument("--format must be csv or json");
}

int cmd_tradeoff(const CliConfig& c) {
    check_format(c.format);
    CliConfig cc = c;
    cc.q = c.K;  // ignored: every admissible q is swept
    cc.m = 1;
    const cdc::SystemParams p = params_from(cc);
    const auto rows = cdc::tradeoff_curve(p);
    Output out(c.out);
    if (c.format == "json") out.stream() << cdc::tradeoff_json(rows).dump(2) << '\n';
    else cdc::write_tradeoff_csv(out.stream(), rows);
    return kExitOk;
}

int cmd_feasible(const CliConfig& c) {
    check_format(c.format);
    CliConfig cc = c;
    cc.m = 1;
    const cdc::SystemParams p = params_from(cc);
    struct Row {
        cdc::RatePair rates;
        cdc::Rational load;
    };
    std::vector<Row> rows;
    for (const auto& r : cdc::enumerate_feasible(p)) rows.push_back({r, cdc::load_breakdown(p, r).total});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.load != b.load) return a.load < b.load;
        if (a.rates.l != b.rates.l) return a.rates.l < b.rates.l;
        return a.rates.r2 < b.rates.r2;
    });
    const auto best = cdc::optimize_rates(p);
    Output out(c.out);
    if (c.format == "json") {
        cdc::Json arr = cdc::Json::array();
        for (const auto& row : rows) {
            cdc::Json j{{"l", row.rates.l}, {"r1", cdc::exact_string(row.rates.r1(p.q))}, {"r2", row.rates.r2}};
            cdc::put_rational(j, "L", row.load);
            j["optimal"] = best && best->rates == row.rates;
            arr.push_back(std::move(j));
        }
        out.stream() << arr.dump(2) << '\n';
    } else {
        out.stream() << "l,r1,r2,L,L_exact,optimal\n";
        for (const auto& row : rows) {
            out.stream() << row.rates.l << ',' << cdc::exact_string(row.rates.r1(p.q)) << ',' << row.rates.r2 << ',' << cdc::format_decimal(row.load) << ','
                         << cdc::exact_string(row.load) << ',' << ((best && best->rates == row.rates) ? 1 : 0) << '\n';
        }
    }
    return kExitOk;
}

int cmd_simulate(const CliConfig& c) {
    const cdc::SystemParams p = params_from(c);
    if (c.l.has_value() != c.r2.has_value()) throw cdc::InvalidArgument("--l and --r2 must be given together");
    cdc::RatePair rates;
    if (c.l) {
        rates = {*c.l, *c.r2};
    } else {
        auto best = cdc::optimize_rates(p);
        if (!best) throw cdc::InfeasibleError("no feasible rate pair for these parameters", {});
        rates = best->rates;
    }
    if (auto f = cdc::check_feasible(p, rates); !f.ok()) throw cdc::InfeasibleError("infeasible rate pair (l=" + std::to_string(rates.l) + ", r2=" + std::to_string(rates.r2) + "): " + f.describe(), f.labels());
    if (auto v = cdc::divisibility_check(p, rates); !v.ok)
        throw cdc::DivisibilityError("divisibility: " + v.describe(), v.m_multiplier.str(), v.n_multiplier.str());

    const cdc::StragglerModel model = c.fixed_q.empty() ? cdc::StragglerModel::shifted_exponential(c.straggler_seed.value_or(c.seed))
                                                        : cdc::StragglerModel::fixed_set(parse_server_list(c.fixed_q));
    const cdc::Workload wl = cdc::prepare_workload(p, rates, c.seed);
    const cdc::StragglerSample sample = cdc::sample_stragglers(p, model);

    std::vector<cdc::TranscriptEntry> transcript;
    cdc::RunReport rep = cdc::execute(wl, sample.non_stragglers, c.transcript.empty() ? nullptr : &transcript);
    rep.empirical_latency = sample.qth_finish_time;

    if (!c.transcript.empty()) {
        std::ofstream t(c.transcript);
        if (!t) throw cdc::InvalidArgument("cannot open transcript file '" + c.transcript + "'");
        cdc::write_transcript(t, transcript);
    }
    if (!c.plan_out.empty() || !c.placement_out.empty()) {
        const auto ra = cdc::assign_reduce(p, sample.non_stragglers);
        if (!c.plan_out.empty()) {
            Output po(c.plan_out);
            po.stream() << cdc::to_json(cdc::build_plan(p, rates, wl.placement, sample.non_stragglers, ra)).dump() << '\n';
        }
        if (!c.placement_out.empty()) {
            Output pl(c.placement_out);
            pl.stream() << cdc::to_json(wl.placement).dump(2) << '\n';
        }
    }
    Output out(c.out);
    out.stream() << cdc::to_json(rep).dump(2) << '\n';
    if (!rep.verified) {
        std::cerr << "verification failed: reconstructed Y differs from A X\n";
        return kExitUnverified;
    }
    return kExitOk;
}

int cmd_verify_example(const CliConfig& c) {
    const cdc::SystemParams p{6, 4, cdc::Rational(1, 2), 20, 8, 12, 16};
    const cdc::StragglerModel model = cdc::StragglerModel::fixed_set({1, 2, 3, 4});
    std::ostream& os = std::cout;

    auto phase_list = [](const cdc::RunReport& rep) {
        std::string s;
        for (const auto& ph : rep.phases) s += (s.empty() ? "" : " + ") + std::to_string(ph.messages);
        return s;
    };
    auto fail = [&](const std::string& what) {
        os << "FAIL: " << what << '\n';
        return kExitUnverified;
    };

    const cdc::RunReport proposed = cdc::run(p, {4, 3}, model, c.seed);
    os << "proposed r1=1 r2=3: " << proposed.message_count << " messages (" << phase_list(proposed) << "), load "
       << cdc::exact_string(proposed.counted_load) << " = " << cdc::format_decimal(proposed.counted_load) << ", Y = AX "
       << (proposed.verified ? "verified" : "MISMATCH") << '\n';
    const cdc::RunReport baseline = cdc::run(p, {6, 2}, model, c.seed);
    os << "baseline r1=3/2 r2=2: " << baseline.message_count << " messages (" << phase_list(baseline) << "), load "
       << cdc::exact_string(baseline.counted_load) << " = " << cdc::format_decimal(baseline.counted_load) << ", Y = AX "
       << (baseline.verified ? "verified" : "MISMATCH") << '\n';
    os << "D(4) = " << cdc::format_decimal(cdc::latency(p, 4)) << '\n';

    const std::vector<std::size_t> expected_phases{4, 36, 36};
    std::vector<std::size_t> got_phases;
    for (const auto& ph : proposed.phases) got_phases.push_back(ph.messages);
    if (!proposed.verified) return fail("proposed scheme did not reconstruct Y");
    if (proposed.message_count != 76) return fail("proposed scheme sent " + std::to_string(proposed.message_count) + " messages, expected 76");
    if (got_phases != expected_phases) return fail("proposed phase counts " + phase_list(proposed) + ", expected 4 + 36 + 36");
    if (proposed.counted_load != cdc::Rational(19, 5) || proposed.analytic_load != cdc::Rational(19, 5)) return fail("proposed load is not 19/5");
    if (!baseline.verified) return fail("baseline scheme did not reconstruct Y");
    if (baseline.message_count != 84) return fail("baseline sent " + std::to_string(baseline.message_count) + " messages, expected 84");
    if (baseline.counted_load != cdc::Rational(21, 5) || baseline.analytic_load != cdc::Rational(21, 5)) return fail("baseline load is not 21/5");
    os << "PASS\n";
    return kExitOk;
}

int cmd_latency(const CliConfig& c) {
    check_format(c.format);
    CliConfig cc = c;
    cc.q = c.K;
    cc.m = 1;
    const cdc::SystemParams p = params_from(cc);
    if (c.trials < 0) throw cdc::InvalidArgument("--trials must be non-negative");
    Output out(c.out);
    cdc::Json arr = cdc::Json::array();
    if (c.format == "csv") out.stream() << (c.trials > 0 ? "q,D,D_mc,rel_err\n" : "q,D\n");
    for (int q = 1; q <= p.K; ++q) {
        const double d = cdc::latency(p, q);
        if (c.trials > 0) {
            // Each q gets its own stream so rows are independent of the table range.
            const auto est = cdc::monte_carlo_latency(p, q, c.trials, c.seed + static_cast<std::uint64_t>(q));
            if (c.format == "csv")
                out.stream() << q << ',' << cdc::format_decimal(d) << ',' << cdc::format_decimal(est.empirical) << ',' << cdc::format_decimal(est.relative_error) << '\n';
            else
                arr.push_back(cdc::Json{{"q", q}, {"D", cdc::round_significant(d)}, {"D_mc", cdc::round_significant(est.empirical)}, {"rel_err", cdc::round_significant(est.relative_error)}});
        } else {
            if (c.format == "csv") out.stream() << q << ',' << cdc::format_decimal(d) << '\n';
            else arr.push_back(cdc::Json{{"q", q}, {"D", cdc::round_significant(d)}});
        }
    }
    if (c.format == "json") out.stream() << arr.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coded map-shuffle-reduce with stragglers: load/latency trade-off and simulation"};
    app.require_subcommand(1);
    CliConfig cfg;

    auto add_system = [&](CLI::App* sub, bool need_q, bool need_m) {
        sub->add_option("--K", cfg.K, "number of servers")->required();
        auto* q = sub->add_option("--q", cfg.q, "number of non-straggling servers");
        if (need_q) q->required();
        sub->add_option("--mu", cfg.mu, "storage fraction as p/q, e.g. 1/2")->required();
        auto* m = sub->add_option("--m", cfg.m, "rows of A");
        if (need_m) m->required();
        sub->add_option("--N", cfg.N, "columns of X")->required();
    };

    auto* tradeoff = app.add_subcommand("tradeoff", "latency/load curve over all admissible q");
    add_system(tradeoff, false, false);
    tradeoff->add_option("--format", cfg.format, "csv or json");
    tradeoff->add_option("--out,-o", cfg.out, "output file (default stdout)");

    auto* simulate = app.add_subcommand("simulate", "end-to-end map/shuffle/reduce over GF(2^w)");
    add_system(simulate, true, true);
    simulate->add_option("--n", cfg.n, "columns of A / rows of X");
    simulate->add_option("--w", cfg.w, "field width, 8 or 16");
    simulate->add_option("--l", cfg.l, "MDS numerator (r1 = l/q); default: load-optimal pair");
    simulate->add_option("--r2", cfg.r2, "repetition rate");
    simulate->add_option("--seed", cfg.seed, "seed for A and X");
    simulate->add_option("--straggler-seed", cfg.straggler_seed, "seed for sampled finish times (default: --seed)");
    simulate->add_option("--fixed-Q", cfg.fixed_q, "comma-separated non-straggler ids instead of sampling");
    simulate->add_option("--out,-o", cfg.out, "RunReport JSON file (default stdout)");
    simulate->add_option("--transcript", cfg.transcript, "JSON-lines message transcript");
    simulate->add_option("--plan", cfg.plan_out, "shuffle plan JSON");
    simulate->add_option("--placement", cfg.placement_out, "placement JSON");

    auto* feasible = app.add_subcommand("feasible", "feasible rate pairs with their loads");
    add_system(feasible, true, false);
    feasible->add_option("--format", cfg.format, "csv or json");
    feasible->add_option("--out,-o", cfg.out, "output file (default stdout)");

    auto* verify = app.add_subcommand("verify-example", "fixed six-server example, both rate pairs");
    verify->add_option("--seed", cfg.seed, "seed for A and X");

    auto* lat = app.add_subcommand("latency", "expected map latency per q, optionally by Monte Carlo");
    lat->add_option("--K", cfg.K, "number of servers")->required();
    lat->add_option("--mu", cfg.mu, "storage fraction as p/q")->required();
    lat->add_option("--N", cfg.N, "columns of X")->required();
    lat->add_option("--trials", cfg.trials, "Monte Carlo trials per q (0: analytic only)");
    lat->add_option("--seed", cfg.seed, "Monte Carlo seed");
    lat->add_option("--format", cfg.format, "csv or json");
    lat->add_option("--out,-o", cfg.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return kExitInvalid;
    }

    try {
        if (*tradeoff) return cmd_tradeoff(cfg);
        if (*simulate) return cmd_simulate(cfg);
        if (*feasible) return cmd_feasible(cfg);
        if (*verify) return cmd_verify_example(cfg);
        if (*lat) return cmd_latency(cfg);
    } catch (const cdc::InvalidArgument& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const cdc::InfeasibleError& e) {
        std::cerr << e.what() << '\n';
        return kExitInfeasible;
    } catch (const cdc::DivisibilityError& e) {
        std::cerr << e.what() << '\n';
        return kExitInfeasible;
    } catch (const cdc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnverified;
    }
    return kExitInvalid;
}
