#include "slicesim/experiments/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "slicesim/agents/checkpoint.hpp"
#include "slicesim/core/errors.hpp"
#include "slicesim/lrm/adaptation.hpp"
#include "slicesim/sim/rng.hpp"
#include "slicesim/slicing/slice.hpp"

namespace slicesim::experiments {

namespace {

std::string fmt_reward(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", r);
    return buf;
}

double scale_for(const LearnerParams& params, double max_reward) {
    if (params.reward_scale > 0) return params.reward_scale;
    return max_reward > 0 ? 1.0 / max_reward : 1.0;
}

agents::DqnConfig dqn_config(const std::string& name, const LearnerParams& p, double scale) {
    agents::DqnConfig c;
    c.hidden = p.hidden;
    c.gamma = p.gamma;
    c.learning_rate = p.learning_rate;
    c.momentum = p.momentum;
    c.replay_capacity = p.replay_capacity;
    c.batch_size = p.batch_size;
    c.target_sync = p.target_sync;
    c.reward_scale = scale;
    c.reward_centering = p.reward_centering;
    c.variant = name == "ddqn" ? agents::DqnVariant::Double : agents::DqnVariant::Dqn;
    return c;
}

double learning_rate_at(const LearnerParams& p, double progress) {
    progress = std::clamp(progress, 0.0, 1.0);
    return p.learning_rate + (p.learning_rate_final - p.learning_rate) * progress;
}

agents::StepSchedule step_schedule(const LearnerParams& p) {
    return agents::StepSchedule{p.alpha, p.alpha_decay_visits, p.alpha_exponent};
}

std::string decision_log(const grm::EpisodeResult& res, const grm::ScenarioConfig& sc) {
    std::ostringstream out;
    grm::write_decision_csv_header(out);
    for (const auto& d : res.decisions) grm::write_decision_csv(d, sc.tenants[d.tenant].id, out);
    return out.str();
}

std::string status_log(const grm::EpisodeResult& res, const grm::ScenarioConfig& sc) {
    std::ostringstream out;
    slicing::write_status_csv_header(out);
    for (const auto& r : res.status) slicing::write_status_csv(r, sc.tenants[r.tenant].id, out);
    return out.str();
}

std::string adaptation_log(const std::vector<lrm::LocalManager*>& lrms,
                           const grm::ScenarioConfig& sc) {
    std::vector<lrm::AdaptationRecord> rows;
    const lrm::AdaptActionSet* actions = nullptr;
    for (auto* m : lrms) {
        if (!m) continue;
        actions = &m->options().actions;
        rows.insert(rows.end(), m->records().begin(), m->records().end());
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.time != b.time ? a.time < b.time : a.slice < b.slice;
    });
    std::ostringstream out;
    lrm::write_adaptation_csv_header(out);
    for (const auto& r : rows) {
        lrm::AdaptationRecord copy = r;
        if (!sc.log_wallclock) copy.wallclock_us = 0.0;
        lrm::write_adaptation_csv(copy, sc.tenants[r.tenant].id, *actions, out);
    }
    return out.str();
}

void summarize_satisfaction(const std::string& mode, std::uint64_t seed,
                            const grm::EpisodeResult& res, std::size_t adapt_events,
                            MetricsReport& report) {
    double sum = 0.0;
    for (const auto& r : res.status) sum += r.satisfaction;
    SatisfactionSummary s;
    s.mode = mode;
    s.seed = seed;
    s.records = res.status.size();
    s.mean_satisfaction = s.records ? sum / static_cast<double>(s.records) : 1.0;
    s.adapt_events = adapt_events;
    report.satisfaction.push_back(s);

    std::size_t i = 0;
    while (i < res.status.size()) {
        const double t = res.status[i].time;
        double tick_sum = 0.0;
        std::size_t n = 0;
        for (; i < res.status.size() && res.status[i].time == t; ++i, ++n)
            tick_sum += res.status[i].satisfaction;
        report.satisfaction_series.push_back(
            SatisfactionPoint{mode, seed, t, tick_sum / static_cast<double>(n), n});
    }
}

} // namespace

double AcceptanceRow::fraction(std::size_t tenant) const {
    const auto a = arrived.at(tenant);
    return a ? static_cast<double>(accepted.at(tenant)) / static_cast<double>(a) : 0.0;
}

double mean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (xs[hi] - xs[lo]) * (pos - static_cast<double>(lo));
}

grm::AdmissionMdp admission_mdp(const grm::ScenarioConfig& sc, double discount) {
    grm::AdmissionModel model;
    for (const auto& t : sc.tenants) {
        model.arrival_rates.push_back(t.request_rate);
        model.completion_rates.push_back(t.completion_rate);
        model.rewards.push_back(t.immediate_reward);
    }
    model.cap = sc.admission_cap();
    return grm::AdmissionMdp(model, discount);
}

std::unique_ptr<agents::Agent> make_grm_agent(const std::string& name,
                                              const grm::ScenarioConfig& sc,
                                              const LearnerParams& params, std::uint64_t seed) {
    const auto accept = static_cast<std::size_t>(grm::AdmissionAction::Accept);
    const auto reject = static_cast<std::size_t>(grm::AdmissionAction::Reject);
    if (name == "greedy")
        return std::make_unique<agents::GreedyAgent>(grm::kAdmissionActions, accept, reject);
    const grm::AdmissionEncoding encoding(sc.tenants.size(), sc.admission_cap());
    if (name == "oracle") {
        const auto mdp = admission_mdp(sc, params.gamma);
        const auto sol = grm::solve_admission_oracle(mdp, encoding);
        return std::make_unique<agents::TablePolicyAgent>("oracle", grm::kAdmissionActions,
                                                          sol.agent_policy);
    }
    if (name == "qlearn") {
        agents::TabularConfig tc{encoding.num_states(), grm::kAdmissionActions,
                                 step_schedule(params), params.gamma};
        return std::make_unique<agents::TabularQAgent>(tc, seed);
    }
    if (name == "dqn" || name == "ddqn") {
        double max_reward = 0.0;
        for (const auto& t : sc.tenants) max_reward = std::max(max_reward, t.immediate_reward);
        return std::make_unique<agents::DqnAgent>(
            sc.grm_feature_dim(), grm::kAdmissionActions,
            dqn_config(name, params, scale_for(params, max_reward)), seed);
    }
    throw ConfigError("unknown agent '" + name + "'");
}

std::unique_ptr<agents::Agent> make_lrm_agent(const std::string& name, std::size_t num_vnfs,
                                              const ExperimentConfig& config, std::uint64_t seed) {
    const auto actions = config.action_set();
    if (name == "greedy") {
        // Grow by the smallest positive step whenever the hosts can supply it.
        std::size_t preferred = 0;
        Units best = 0;
        for (std::size_t i = 1; i < actions.size(); ++i) {
            const Units d = actions.at(i).delta;
            if (d > 0 && (best == 0 || d < best)) {
                best = d;
                preferred = i;
            }
        }
        return std::make_unique<agents::GreedyAgent>(actions.size(), preferred, 0);
    }
    if (name == "qlearn") {
        agents::TabularConfig tc{config.satisfaction_bins * 2, actions.size(),
                                 step_schedule(config.lrm), config.lrm.gamma};
        return std::make_unique<agents::TabularQAgent>(tc, seed);
    }
    if (name == "dqn" || name == "ddqn") {
        const double max_rate = std::max(config.revenue_rate_type1, config.revenue_rate_type2);
        return std::make_unique<agents::DqnAgent>(
            lrm::lrm_feature_dim(num_vnfs), actions.size(),
            dqn_config(name, config.lrm, scale_for(config.lrm, max_rate)), seed);
    }
    throw ConfigError("agent '" + name + "' cannot adapt slices");
}

void train_grm_agent(agents::Agent& agent, const grm::ScenarioConfig& sc,
                     const LearnerParams& params, std::size_t episodes, std::uint64_t train_seed) {
    if (!agent.learns() || episodes == 0) return;
    auto* dqn = dynamic_cast<agents::DqnAgent*>(&agent);
    const double n = static_cast<double>(episodes);
    for (std::size_t e = 0; e < episodes; ++e) {
        grm::EpisodeControl control;
        control.train_grm = true;
        control.progress_begin = static_cast<double>(e) / n;
        control.progress_end = static_cast<double>(e + 1) / n;
        control.epsilon_start = params.epsilon_start;
        control.epsilon_end = params.epsilon_end;
        control.epsilon_fraction = params.epsilon_fraction;
        control.keep_decisions = false;
        if (dqn) dqn->set_learning_rate(learning_rate_at(params, control.progress_begin));
        grm::run_episode(sc, sim::derive_seed(train_seed, "grm-train", e), agent, {}, control);
    }
    agent.set_exploration(0.0);
}

void train_lrm_agents(const std::vector<agents::Agent*>& lrm_agents, agents::Agent& grm_agent,
                      const grm::ScenarioConfig& sc, const ExperimentConfig& config,
                      std::size_t episodes) {
    grm_agent.set_exploration(0.0);
    const double n = static_cast<double>(episodes);
    for (std::size_t e = 0; e < episodes; ++e) {
        std::vector<std::unique_ptr<lrm::LocalManager>> owned;
        std::vector<lrm::LocalManager*> lrms;
        const double progress = static_cast<double>(e) / n;
        for (std::size_t k = 0; k < lrm_agents.size(); ++k) {
            if (!lrm_agents[k]) {
                lrms.push_back(nullptr);
                continue;
            }
            if (auto* dqn = dynamic_cast<agents::DqnAgent*>(lrm_agents[k]))
                dqn->set_learning_rate(learning_rate_at(config.lrm, progress));
            auto opts = config.lrm_options();
            opts.training = true;
            opts.keep_log = false;
            owned.push_back(std::make_unique<lrm::LocalManager>(k, *lrm_agents[k], opts));
            lrms.push_back(owned.back().get());
        }
        grm::EpisodeControl control;
        control.train_lrm = true;
        control.progress_begin = progress;
        control.progress_end = static_cast<double>(e + 1) / n;
        control.epsilon_start = config.lrm.epsilon_start;
        control.epsilon_end = config.lrm.epsilon_end;
        control.epsilon_fraction = config.lrm.epsilon_fraction;
        control.keep_decisions = false;
        auto scenario = sc;
        scenario.slicing.keep_records = false;
        grm::run_episode(scenario, sim::derive_seed(config.train_seed, "lrm-train", e), grm_agent,
                         lrms, control);
    }
    for (auto* a : lrm_agents)
        if (a) a->set_exploration(0.0);
}

void run_admission_study(const ExperimentConfig& config, MetricsReport& report) {
    for (std::size_t ri = 0; ri < config.reward_b.size(); ++ri) {
        const double rb = config.reward_b[ri];
        grm::ScenarioConfig sc = config.scenario(rb);
        // Admission decisions never look at flows unless slice feedback is on.
        sc.simulate_flows = sc.satisfaction_feedback;

        {
            const auto mdp = admission_mdp(sc, config.grm.gamma);
            const grm::AdmissionEncoding encoding(sc.tenants.size(), sc.admission_cap());
            const auto sol = grm::solve_admission_oracle(mdp, encoding);
            std::string policy;
            for (std::size_t i = 0; i < sol.agent_policy.size(); ++i) {
                const auto st = encoding.decode(i);
                if (std::accumulate(st.counts.begin(), st.counts.end(), std::size_t{0}) >=
                    sc.admission_cap())
                    continue;
                policy += sol.agent_policy[i] ? 'A' : 'R';
            }
            report.oracle.push_back(OracleRow{rb, sol.revenue_per_hour, policy});
        }

        for (const auto& name : config.agents) {
            // Keyed by the reward value, not its position in the sweep.
            const auto key = static_cast<std::uint64_t>(std::llround(rb * 1000.0));
            auto agent = make_grm_agent(name, sc, config.grm,
                                        sim::derive_seed(config.train_seed, "agent:" + name, key));
            const std::size_t episodes =
                name == "qlearn" ? config.tabular_train_episodes : config.train_episodes;
            train_grm_agent(*agent, sc, config.grm, episodes, config.train_seed);
            const std::string tag = name + "_rb" + fmt_reward(rb);
            if (auto* dqn = dynamic_cast<agents::DqnAgent*>(agent.get())) {
                std::ostringstream out;
                agents::write_checkpoint(dqn->network(), out);
                report.attachments.push_back({"models/" + tag + ".qnet", out.str()});
            } else if (auto* tab = dynamic_cast<agents::TabularQAgent*>(agent.get())) {
                std::ostringstream out;
                tab->table().write_csv(out);
                report.attachments.push_back({"models/" + tag + ".qtable.csv", out.str()});
            }
            agent->set_exploration(0.0);
            for (std::uint64_t seed : config.seeds) {
                grm::EpisodeControl control;
                control.keep_decisions = config.detail_logs && seed == config.seeds.front();
                const auto res = grm::run_episode(sc, seed, *agent, {}, control);
                report.revenue.push_back(
                    RevenueRow{name, rb, seed, res.revenue_total, res.revenue_per_hour});
                report.acceptance.push_back(AcceptanceRow{name, rb, seed, res.arrived, res.accepted});
                report.traffic.push_back(TrafficCheck{name, rb, seed, res.traffic_checksum});
                if (control.keep_decisions) {
                    report.attachments.push_back(
                        {"logs/decisions_" + tag + "_seed" + std::to_string(seed) + ".csv",
                         decision_log(res, sc)});
                }
                if (ri == 0 && &name == &config.agents.front() && seed == config.seeds.front()) {
                    std::ostringstream out;
                    infra::write_edge_list(res.topology, out);
                    report.attachments.push_back(
                        {"topology_seed" + std::to_string(seed) + ".txt", out.str()});
                }
            }
        }
    }
}

void run_satisfaction_study(const ExperimentConfig& config, MetricsReport& report) {
    grm::ScenarioConfig sc = config.scenario();
    sc.horizon_s = config.satisfaction_horizon_s;
    sc.initial_slices = true;
    sc.simulate_flows = true;

    const std::string& name = config.satisfaction_agent;

    // Admission learner first, trained on the admission problem alone.
    grm::ScenarioConfig admission = config.scenario();
    admission.simulate_flows = admission.satisfaction_feedback;
    if (admission.satisfaction_feedback) {
        admission.horizon_s = config.satisfaction_horizon_s;
        admission.initial_slices = true;
    }
    auto grm_agent =
        make_grm_agent(name, admission, config.grm, sim::derive_seed(config.train_seed, "sat-grm"));
    train_grm_agent(*grm_agent, admission, config.grm, config.satisfaction_grm_episodes,
                    config.train_seed);

    std::vector<std::unique_ptr<agents::Agent>> lrm_owned;
    std::vector<agents::Agent*> lrm_agents;
    for (std::size_t k = 0; k < sc.tenants.size(); ++k) {
        lrm_owned.push_back(make_lrm_agent(name, sc.tenants[k].slice_type.num_vnfs, config,
                                           sim::derive_seed(config.train_seed, "sat-lrm", k)));
        lrm_agents.push_back(lrm_owned.back().get());
    }
    train_lrm_agents(lrm_agents, *grm_agent, sc, config, config.lrm_train_episodes);

    auto baseline = make_grm_agent("greedy", sc, config.grm, 0);
    for (std::uint64_t seed : config.seeds) {
        const bool detail = config.detail_logs && seed == config.seeds.front();
        grm::EpisodeControl control;
        control.keep_decisions = detail;

        const auto plain = grm::run_episode(sc, seed, *baseline, {}, control);
        summarize_satisfaction("non_intelligent", seed, plain, 0, report);

        std::vector<std::unique_ptr<lrm::LocalManager>> owned;
        std::vector<lrm::LocalManager*> lrms;
        for (std::size_t k = 0; k < sc.tenants.size(); ++k) {
            auto opts = config.lrm_options();
            opts.keep_log = detail;
            owned.push_back(std::make_unique<lrm::LocalManager>(k, *lrm_agents[k], opts));
            lrms.push_back(owned.back().get());
        }
        const auto smart = grm::run_episode(sc, seed, *grm_agent, lrms, control);
        std::size_t adapts = 0;
        for (auto* m : lrms) adapts += m->adapt_events();
        summarize_satisfaction("intelligent", seed, smart, adapts, report);

        report.traffic.push_back(TrafficCheck{"non_intelligent", 0, seed, plain.traffic_checksum});
        report.traffic.push_back(TrafficCheck{"intelligent", 0, seed, smart.traffic_checksum});
        if (detail) {
            const std::string s = "_seed" + std::to_string(seed) + ".csv";
            report.attachments.push_back({"logs/status_non_intelligent" + s, status_log(plain, sc)});
            report.attachments.push_back({"logs/status_intelligent" + s, status_log(smart, sc)});
            report.attachments.push_back({"logs/adaptation_intelligent" + s, adaptation_log(lrms, sc)});
            report.attachments.push_back({"logs/decisions_intelligent" + s, decision_log(smart, sc)});
        }
    }
}

void run_delay_study(const ExperimentConfig& config, MetricsReport& report) {
    for (std::size_t n : config.delay_num_vnfs) {
        ExperimentConfig local = config;
        local.type1.num_vnfs = n;
        local.type2.num_vnfs = n;
        grm::ScenarioConfig sc = local.scenario();
        sc.horizon_s = config.delay_horizon_s;
        sc.initial_slices = true;
        sc.simulate_flows = true;
        sc.slicing.keep_records = false;

        for (const auto& name : config.delay_agents) {
            auto grm_agent = make_grm_agent("greedy", sc, config.grm, 0);
            std::vector<std::unique_ptr<agents::Agent>> lrm_owned;
            std::vector<std::unique_ptr<lrm::LocalManager>> owned;
            std::vector<lrm::LocalManager*> lrms;
            for (std::size_t k = 0; k < sc.tenants.size(); ++k) {
                lrm_owned.push_back(make_lrm_agent(
                    name, n, local, sim::derive_seed(config.train_seed, "delay-lrm", k)));
                auto opts = local.lrm_options();
                opts.training = true;
                opts.keep_log = false;
                owned.push_back(std::make_unique<lrm::LocalManager>(k, *lrm_owned.back(), opts));
                lrms.push_back(owned.back().get());
            }
            grm::EpisodeControl control;
            control.train_lrm = true;
            control.epsilon_start = config.lrm.epsilon_start;
            control.epsilon_end = config.lrm.epsilon_end;
            control.epsilon_fraction = config.lrm.epsilon_fraction;
            control.keep_decisions = false;
            grm::run_episode(sc, config.seeds.front(), *grm_agent, lrms, control);

            std::vector<double> decision, with_update;
            for (auto* m : lrms) {
                for (const auto& d : m->delays()) {
                    decision.push_back(d.decision_us);
                    with_update.push_back(d.decision_us + d.update_us);
                }
            }
            report.delay.push_back(DelayRow{name, n, "decision", quantile(decision, 0.5),
                                            quantile(decision, 0.95), decision.size()});
            report.delay.push_back(DelayRow{name, n, "decision_update", quantile(with_update, 0.5),
                                            quantile(with_update, 0.95), with_update.size()});
        }
    }
}

MetricsReport run_experiment(const ExperimentConfig& config, const std::string& experiment) {
    config.validate();
    MetricsReport report;
    const bool all = experiment == "all";
    if (!all && experiment != "revenue" && experiment != "acceptance" &&
        experiment != "satisfaction" && experiment != "delay")
        throw ConfigError("unknown experiment '" + experiment + "'");
    if (all || experiment == "revenue" || experiment == "acceptance") {
        run_admission_study(config, report);
        report.has_revenue = all || experiment == "revenue";
        report.has_acceptance = all || experiment == "acceptance";
    }
    if (all || experiment == "satisfaction") {
        run_satisfaction_study(config, report);
        report.has_satisfaction = true;
    }
    if (all || experiment == "delay") {
        run_delay_study(config, report);
        report.has_delay = true;
    }
    return report;
}

} // namespace slicesim::experiments
