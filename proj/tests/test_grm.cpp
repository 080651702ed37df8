#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "slicesim/agents/agent.hpp"
#include "slicesim/core/errors.hpp"
#include "slicesim/experiments/experiments.hpp"
#include "slicesim/grm/admission.hpp"
#include "slicesim/grm/framework.hpp"

using namespace slicesim;
using namespace slicesim::grm;

namespace {

AdmissionModel table_model(double reward_b) {
    return AdmissionModel{{10.0, 12.0}, {6.0, 6.0}, {2.0, reward_b}, 5};
}

oracle::TwoClassModel reference_model(double reward_b) {
    return oracle::TwoClassModel{{10.0, 12.0}, {6.0, 6.0}, {2.0, reward_b}, 5};
}

ScenarioConfig admission_scenario(double reward_b) {
    ScenarioConfig sc;
    sc.tenants[1].immediate_reward = reward_b;
    sc.simulate_flows = false;
    return sc;
}

} // namespace

TEST(Encoding, IndexRoundTripAndFeatures) {
    AdmissionEncoding enc(2, 5);
    EXPECT_EQ(enc.num_states(), 72u);
    for (std::size_t i = 0; i < enc.num_states(); ++i) EXPECT_EQ(enc.index(enc.decode(i)), i);
    EXPECT_EQ(enc.index({{2, 3}, 1}), (1 * 6 + 3) * 6 + 2);
    EXPECT_EQ(enc.features({{2, 3}, 1}), (std::vector<double>{0.4, 0.6, 0.0, 1.0}));

    AdmissionEncoding hot(2, 5, true);
    EXPECT_EQ(hot.feature_dim(), 16u);
    auto f = hot.features({{2, 3}, 0});
    ASSERT_EQ(f.size(), 16u);
    EXPECT_EQ(f[2 + 2], 1.0);
    EXPECT_EQ(f[2 + 6 + 3], 1.0);
    EXPECT_EQ(f[14], 1.0);
    EXPECT_EQ(std::accumulate(f.begin() + 2, f.end(), 0.0), 3.0);
    EXPECT_THROW(AdmissionEncoding(2, 1000, true), InvalidParams);
    EXPECT_THROW(enc.index({{1}, 0}), InvalidParams);
}

TEST(Step, AcceptRejectAndCoerce) {
    sim::RngStream s(1, "topology");
    auto topo = infra::generate_ba_topology(infra::BaParams{}, s);
    const auto demand = infra::uniform_demand(topo, 60);
    EXPECT_EQ(concurrency_cap(topo, demand), 5u);
    auto out = admission_step({{0, 0}, 0}, AdmissionAction::Accept, 2.0, 1, demand, topo);
    EXPECT_TRUE(out.admitted);
    EXPECT_EQ(out.reward, 2.0);
    EXPECT_EQ(out.next.counts, (std::vector<std::size_t>{1, 0}));
    auto rej = admission_step(out.next, AdmissionAction::Reject, 1.0, 2, demand, topo);
    EXPECT_EQ(rej.reward, 0.0);
    EXPECT_EQ(rej.next.counts, out.next.counts);
    for (SliceId id = 2; id <= 5; ++id) infra::allocate(topo, id, demand);
    auto full = admission_step({{3, 2}, 1}, AdmissionAction::Accept, 6.0, 9, demand, topo);
    EXPECT_TRUE(full.coerced);
    EXPECT_FALSE(full.admitted);
    EXPECT_EQ(full.reward, 0.0);
    EXPECT_EQ(full.next.counts, (std::vector<std::size_t>{3, 2}));
    for (const auto& d : topo.dcs()) EXPECT_EQ(d.allocated, 300);
}

TEST(Step, DecisionCsv) {
    std::ostringstream out;
    write_decision_csv_header(out);
    write_decision_csv({12.5, 1, AdmissionAction::Accept, false, 3.0, {2, 1}, 0.0}, "B", out);
    EXPECT_EQ(out.str(),
              "sim_time_s,tenant,action,coerced,reward,nA,nB,wallclock_us\n"
              "12.500000,B,accept,0,3.000000,2,1,0.000\n");
}

TEST(Oracle, MatchesThresholdEnumeration) {
    AdmissionEncoding enc(2, 5);
    for (int rb = 1; rb <= 6; ++rb) {
        AdmissionMdp mdp(table_model(rb), 0.99);
        auto sol = solve_admission_oracle(mdp, enc);
        const auto [best, arg] = oracle::best_threshold_policy(reference_model(rb));
        EXPECT_NEAR(sol.revenue_per_hour, best, 1e-6) << "r_B=" << rb;
        // The oracle's own policy, evaluated by the independent CTMC, earns what it claims.
        const double own = oracle::policy_revenue(reference_model(rb), [&](int k, int a, int b) {
            AdmissionState st{{static_cast<std::size_t>(a), static_cast<std::size_t>(b)},
                              static_cast<TenantIndex>(k)};
            return sol.agent_policy[enc.index(st)] == 1;
        });
        EXPECT_NEAR(own, sol.revenue_per_hour, 1e-6) << "r_B=" << rb;
    }
}

TEST(Oracle, AcceptAllIsOptimalForSmallTenantBRewards) {
    const double accept_all = oracle::policy_revenue(reference_model(1.0),
                                                     [](int, int, int) { return true; });
    AdmissionEncoding enc(2, 5);
    for (int rb : {1, 2, 3, 4}) {
        AdmissionMdp mdp(table_model(rb), 0.99);
        auto sol = solve_admission_oracle(mdp, enc);
        const double all = oracle::policy_revenue(reference_model(rb), [](int, int, int) { return true; });
        EXPECT_NEAR(sol.revenue_per_hour, all, 1e-6);
    }
    EXPECT_GT(accept_all, 0.0);
}

TEST(Oracle, RevenueIncreasesWithTenantBReward) {
    AdmissionEncoding enc(2, 5);
    double prev = 0;
    for (int rb = 1; rb <= 6; ++rb) {
        auto sol = solve_admission_oracle(AdmissionMdp(table_model(rb), 0.99), enc);
        EXPECT_GT(sol.revenue_per_hour, prev);
        prev = sol.revenue_per_hour;
    }
}

TEST(Episode, RejectAllEarnsNothing) {
    agents::ConstantAgent reject("reject", 2, 0);
    auto r = run_admission_episode(admission_scenario(3), 2, reject, {});
    EXPECT_EQ(r.revenue_total, 0.0);
    EXPECT_EQ(std::accumulate(r.accepted.begin(), r.accepted.end(), std::size_t{0}), 0u);
    EXPECT_GT(std::accumulate(r.arrived.begin(), r.arrived.end(), std::size_t{0}), 0u);
}

TEST(Episode, GreedyTraceIgnoresRewards) {
    agents::GreedyAgent greedy(2, 1, 0);
    for (std::uint64_t seed : {1, 2, 3}) {
        auto base = run_admission_episode(admission_scenario(1), seed, greedy, {});
        for (int rb = 2; rb <= 6; ++rb) {
            auto r = run_admission_episode(admission_scenario(rb), seed, greedy, {});
            ASSERT_EQ(r.decisions.size(), base.decisions.size());
            for (std::size_t i = 0; i < r.decisions.size(); ++i) {
                EXPECT_EQ(r.decisions[i].time, base.decisions[i].time);
                EXPECT_EQ(r.decisions[i].action, base.decisions[i].action);
                EXPECT_EQ(r.decisions[i].counts, base.decisions[i].counts);
            }
            EXPECT_EQ(r.accepted, base.accepted);
        }
    }
}

TEST(Episode, AccountingIdentity) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        agents::GreedyAgent greedy(2, 1, 0);
        auto sc = admission_scenario(4.5);
        auto r = run_admission_episode(sc, seed, greedy, {});
        double sum = 0, by_count = 0;
        for (const auto& d : r.decisions) sum += d.reward;
        by_count = 2.0 * static_cast<double>(r.accepted[0]) + 4.5 * static_cast<double>(r.accepted[1]);
        EXPECT_EQ(r.revenue_total, r.admitted_reward_total);
        EXPECT_DOUBLE_EQ(r.revenue_total, sum);
        EXPECT_DOUBLE_EQ(r.revenue_total, by_count);
        EXPECT_DOUBLE_EQ(r.revenue_per_hour, r.revenue_total / 48.0);
        EXPECT_LE(r.max_concurrent, 5u);
        for (std::size_t k = 0; k < 2; ++k) EXPECT_LE(r.accepted[k], r.arrived[k]);
    }
}

TEST(Episode, InvariantsHoldUnderRandomDecisions) {
    // Random admission plus flows and measurements: well over 10^4 events.
    auto sc = admission_scenario(2);
    sc.simulate_flows = true;
    sc.initial_slices = true;
    sc.check_invariants = true;
    sc.horizon_s = 3 * 3600.0;
    agents::DqnConfig cfg;
    cfg.hidden = {8};
    agents::DqnAgent random_agent(sc.grm_feature_dim(), 2, cfg, 4);
    random_agent.set_exploration(1.0);
    for (std::uint64_t seed : {1, 2}) {
        auto r = run_episode(sc, seed, random_agent, {}, {});
        EXPECT_EQ(r.invariant_violation, "");
        EXPECT_GE(r.events_dispatched, 10000u);
        EXPECT_LE(r.max_concurrent, 5u);
        for (const auto& d : r.decisions) {
            EXPECT_LE(d.counts[0] + d.counts[1], 5u);
            if (d.counts[0] + d.counts[1] == 5) EXPECT_EQ(d.action, AdmissionAction::Reject);
        }
    }
}

TEST(Episode, SeedDeterminism) {
    agents::GreedyAgent greedy(2, 1, 0);
    auto sc = admission_scenario(2);
    sc.simulate_flows = true;
    sc.horizon_s = 1800;
    auto a = run_episode(sc, 3, greedy, {}, {});
    auto b = run_episode(sc, 3, greedy, {}, {});
    EXPECT_EQ(a.events_dispatched, b.events_dispatched);
    EXPECT_EQ(a.traffic_checksum, b.traffic_checksum);
    ASSERT_EQ(a.status.size(), b.status.size());
    for (std::size_t i = 0; i < a.status.size(); ++i)
        EXPECT_EQ(a.status[i].satisfaction, b.status[i].satisfaction);
}

TEST(Learning, DqlAcceptsEverythingWithoutScarcity) {
    auto sc = admission_scenario(2.0);
    sc.network.dc_capacity = 1'000'000;
    sc.onehot_counts = false;
    experiments::LearnerParams p;
    auto agent = experiments::make_grm_agent("dqn", sc, p, 21);
    experiments::train_grm_agent(*agent, sc, p, 20, 99);
    std::size_t arrived = 0, accepted = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto r = run_admission_episode(sc, seed, *agent, {});
        arrived += r.arrived[0] + r.arrived[1];
        accepted += r.accepted[0] + r.accepted[1];
    }
    EXPECT_GE(static_cast<double>(accepted) / static_cast<double>(arrived), 0.95);
}
